#include "bkgtfk/errors.hpp"
#include "bkgtfk/nn.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bkgtfk;

namespace {

const ModelCalibration kMean(0.2199, 0.0469, 0.6415, 0.0401);
constexpr double kMeanTenor = 5.9707;

}  // namespace

TEST(Forward, ReferenceNetAtMeanPointIsTanhOfBias) {
    const auto net = reference_network();
    const auto A = forward(net, kMean, kMeanTenor);
    ASSERT_EQ(A.size(), 5u);
    const double bias[] = {-0.2613, 0.8864, -8.5120, 8.6874, -0.5019};
    for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(A[i], std::tanh(bias[i]));
    EXPECT_NEAR(A[0], -0.2555, 5e-5);
}

TEST(Forward, ZeroNetGivesZero) {
    const auto net = zero_network(NormalizationStats::reference(), {});
    for (double a : forward(net, kMean, 3.0)) EXPECT_EQ(a, 0.0);
}

TEST(Forward, BoundedByScale) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 3.0);
    auto net = make_network(NormalizationStats::reference(), {{6, 4}, 4, 0.05, true}, 1);
    auto p = get_parameters(net);
    for (auto& x : p) x = n(rng);
    set_parameters(net, p);
    for (int k = 0; k < 200; ++k) {
        FeatureVector z{n(rng), n(rng), n(rng), n(rng), n(rng)};
        for (double a : forward_normalized(net, z)) EXPECT_LT(std::abs(a), 0.05);
    }
}

TEST(CorrectXbar, Examples) {
    const std::vector<double> zero(5, 0.0);
    EXPECT_EQ(correct_xbar(-3.0, zero, true), -3.0);
    const std::vector<double> c0{0.01, 0, 0, 0, 0};
    EXPECT_DOUBLE_EQ(correct_xbar(-3.0, c0, false), -2.99);
    EXPECT_DOUBLE_EQ(correct_xbar(-3.0, c0, true), -2.99);
    const std::vector<double> c2{0, 0, 0.02, 0, 0};
    EXPECT_DOUBLE_EQ(correct_xbar(-3.0, c2, false), -2.82);
    EXPECT_DOUBLE_EQ(correct_xbar(-3.0, c2, true), -2.91);
    const std::vector<double> c4{0, 0, 0, 0, 0.24};
    EXPECT_DOUBLE_EQ(correct_xbar(2.0, c4, true), 2.16);
}

TEST(Network, Validation) {
    auto net = reference_network();
    net.output_scale = 0.0;
    EXPECT_THROW(net.validate(), ConfigError);
    net = reference_network();
    net.degree = 3;
    EXPECT_THROW(net.validate(), ConfigError);
    net = reference_network();
    net.layers[0].weights[3] = NAN;
    EXPECT_THROW(net.validate(), ConfigError);
    net = reference_network();
    net.layers[0].in = 4;
    EXPECT_THROW(net.validate(), ConfigError);
}

TEST(Network, Parameters) {
    auto net = make_network(NormalizationStats::reference(), {{8}, 4, 0.01, true}, 3);
    EXPECT_EQ(net.parameter_count(), 5u * 8 + 8 + 8u * 5 + 5);
    auto p = get_parameters(net);
    const auto mask = bias_mask(net);
    EXPECT_EQ(std::count(mask.begin(), mask.end(), true), 13);
    EXPECT_TRUE(mask[40]);
    EXPECT_FALSE(mask[39]);
    p[0] = 0.123;
    set_parameters(net, p);
    EXPECT_EQ(get_parameters(net), p);
    EXPECT_THROW(set_parameters(net, std::vector<double>(3)), UsageError);
}

TEST(Network, InitializationIsSeededAndOutputIsZero) {
    const NetworkShape shape{{8}, 4, 0.01, true};
    const auto a = make_network(NormalizationStats::reference(), shape, 11);
    EXPECT_EQ(a, make_network(NormalizationStats::reference(), shape, 11));
    EXPECT_NE(a, make_network(NormalizationStats::reference(), shape, 12));
    for (double w : a.layers[0].weights) EXPECT_LE(std::abs(w), 1.0 / std::sqrt(5.0));
    for (double w : a.layers.back().weights) EXPECT_EQ(w, 0.0);
    for (double v : forward(a, kMean, 2.0)) EXPECT_EQ(v, 0.0);
}

TEST(Network, SerializationRoundTrip) {
    auto net = make_network(NormalizationStats::reference(), {{7, 3}, 4, 0.02, false}, 5);
    auto p = get_parameters(net);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto& x : p) x = u(rng) / 3.0;
    set_parameters(net, p);
    const auto text = serialize_network(net);
    const auto back = parse_network(text);
    EXPECT_EQ(back, net);
    EXPECT_EQ(serialize_network(back), text);
    EXPECT_EQ(parse_network(serialize_network(reference_network())), reference_network());
}

TEST(Network, ParseErrors) {
    EXPECT_THROW(parse_network("not a weight file\n"), ConfigError);
    auto text = serialize_network(reference_network());
    EXPECT_THROW(parse_network(text.substr(0, text.size() / 2)), ConfigError);
    EXPECT_THROW(parse_network(text + "extra\n"), ConfigError);
}

TEST(CorrectedPrice, ZeroNetIsBitIdentical) {
    const auto net = zero_network(NormalizationStats::reference(), {});
    for (double T : {1.0, 5.9707, 10.0}) {
        EXPECT_EQ(corrected_price(kMean, T, net), gtfk_price(kMean, T));
        EXPECT_EQ(corrected_price(kMean, T, net, {}, PricingMode::accumulation),
                  gtfk_price(kMean, T, {}, PricingMode::accumulation));
    }
}

TEST(CorrectedPrice, ContinuousInOutputScale) {
    auto net = make_network(NormalizationStats::reference(), {{8}, 4, 0.1, true}, 3);
    auto p = get_parameters(net);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto& x : p) x = u(rng);
    set_parameters(net, p);
    const double base = gtfk_price(kMean, 5.0);
    double k_max = 0.0;
    std::vector<double> deltas;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        net.output_scale = eps;
        const double d = std::abs(corrected_price(kMean, 5.0, net) - base);
        deltas.push_back(d);
        k_max = std::max(k_max, d / eps);
    }
    EXPECT_GT(deltas[0], 0.0);
    EXPECT_LT(k_max, 1.0);
    // first order in eps once small
    EXPECT_NEAR(deltas[3] / deltas[2], 0.1, 0.01);
}

// Reference network on the reference mean point, computed once and frozen.
TEST(CorrectedPrice, ReferenceNetGolden) {
    EXPECT_EQ(corrected_price(kMean, kMeanTenor, reference_network()), 0.99995707077880758);
}
