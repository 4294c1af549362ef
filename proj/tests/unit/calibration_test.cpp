#include "bkgtfk/calibration.hpp"
#include "bkgtfk/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace bkgtfk;

TEST(LogTarget, UnitRateIsZero) { EXPECT_EQ(log_target(1.0), 0.0); }

TEST(LogTarget, ReferenceTheta) { EXPECT_NEAR(log_target(0.0469), -3.0597, 5e-5); }

TEST(LogTarget, RejectsNonPositive) {
    EXPECT_THROW(log_target(-0.01), DomainError);
    EXPECT_THROW(log_target(0.0), DomainError);
    EXPECT_THROW(log_target(std::nan("")), DomainError);
}

TEST(ModelCalibration, DerivedLogs) {
    ModelCalibration c(0.1, 0.04, 0.3, 0.05);
    EXPECT_EQ(c.log_target(), std::log(0.04));
    EXPECT_EQ(c.log_r0(), std::log(0.05));
}

TEST(ModelCalibration, Validation) {
    EXPECT_THROW(ModelCalibration(0.0, 0.04, 0.3, 0.04), DomainError);
    EXPECT_THROW(ModelCalibration(0.1, 0.04, -0.1, 0.04), DomainError);
    EXPECT_THROW(ModelCalibration(0.1, 0.04, 0.3, 0.0), DomainError);
    EXPECT_THROW(ModelCalibration(0.1, INFINITY, 0.3, 0.04), DomainError);
    EXPECT_NO_THROW(ModelCalibration(0.1, 0.04, 0.0, 0.04));
}

TEST(Normalize, MeanMapsToZero) {
    const auto stats = NormalizationStats::reference();
    const FeatureVector raw{0.2199, 0.6415, 0.0469, 0.0401, 5.9707};
    for (double z : normalize(raw, stats)) EXPECT_EQ(z, 0.0);
}

TEST(Normalize, TenorOneStdevAboveMean) {
    const auto z = normalize({0.2199, 0.6415, 0.0469, 0.0401, 12.6443}, NormalizationStats::reference());
    EXPECT_NEAR(z[4], 1.0, 1e-12);
}

TEST(Normalize, RoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const auto stats = NormalizationStats::reference();
    for (int k = 0; k < 200; ++k) {
        FeatureVector raw{u(rng), u(rng), u(rng), u(rng), u(rng)};
        const auto back = denormalize(normalize(raw, stats), stats);
        for (std::size_t i = 0; i < kFeatureCount; ++i) EXPECT_NEAR(back[i], raw[i], 1e-12);
    }
}

TEST(NormalizationStats, FromSamplesPopulationStdev) {
    std::vector<FeatureVector> s{{1, 2, 0.04, 0.04, 1}, {3, 4, 0.04, 0.04, 5}};
    const auto st = NormalizationStats::from_samples(s);
    EXPECT_DOUBLE_EQ(st[0].mean, 2.0);
    EXPECT_DOUBLE_EQ(st[0].stdev, 1.0);
    EXPECT_DOUBLE_EQ(st[4].stdev, 2.0);
    // constant features normalize to zero
    EXPECT_EQ(st[2].stdev, 1.0);
    EXPECT_EQ(normalize(s[0], st)[2], 0.0);
}

TEST(NormalizationStats, RejectsBadInput) {
    EXPECT_THROW(NormalizationStats::from_samples({}), ConfigError);
    EXPECT_THROW(NormalizationStats({{{0, 1}, {0, 0}, {0, 1}, {0, 1}, {0, 1}}}), ConfigError);
}

TEST(Features, FixedOrder) {
    const auto f = features(ModelCalibration(0.1, 0.04, 0.3, 0.05), 7.0);
    EXPECT_EQ(f, (FeatureVector{0.1, 0.3, 0.04, 0.05, 7.0}));
}
