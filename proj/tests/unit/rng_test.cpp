#include "bkgtfk/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bkgtfk;

// Known-answer vectors for Philox4x32-10.
TEST(Philox, ZeroCounterZeroKey) {
    const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, AllOnes) {
    const auto out = Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                       {0xffffffff, 0xffffffff});
    EXPECT_EQ(out, (Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, PiDigits) {
    const auto out = Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                       {0xa4093822, 0x299f31d0});
    EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NormalStream, Reproducible) {
    NormalStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    for (int i = 0; i < 100; ++i) {
        const double x = a.next();
        EXPECT_EQ(x, b.next());
        EXPECT_NE(x, c.next());
        EXPECT_NE(x, d.next());
    }
}

TEST(NormalStream, UniformsInOpenInterval) {
    NormalStream s(1, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.next_uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(NormalStream, FirstFourMoments) {
    NormalStream s(5, 3);
    const int n = 400000;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = s.next();
        m1 += z;
        m2 += z * z;
        m3 += z * z * z;
        m4 += z * z * z * z;
    }
    m1 /= n; m2 /= n; m3 /= n; m4 /= n;
    const double se = 1.0 / std::sqrt(static_cast<double>(n));
    EXPECT_NEAR(m1, 0.0, 5 * se);
    EXPECT_NEAR(m2, 1.0, 5 * std::sqrt(2.0) * se);
    EXPECT_NEAR(m3, 0.0, 5 * std::sqrt(15.0) * se);
    EXPECT_NEAR(m4, 3.0, 5 * std::sqrt(96.0) * se);
}
