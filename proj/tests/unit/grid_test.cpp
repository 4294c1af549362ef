#include "bkgtfk/errors.hpp"
#include "bkgtfk/grid.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace bkgtfk;

namespace {

GridSpec two_point_spec() {
    GridSpec s;
    s.a = {0.1, 0.1, 1};
    s.sigma = {0.3, 0.3, 1};
    s.tenors = {1.0, 5.0};
    return s;
}

}  // namespace

TEST(Linspace, Endpoints) {
    const auto v = linspace(0.05, 0.5, 4);
    ASSERT_EQ(v.size(), 4u);
    EXPECT_EQ(v.front(), 0.05);
    EXPECT_EQ(v.back(), 0.5);
    EXPECT_NEAR(v[1], 0.2, 1e-15);
    EXPECT_EQ(linspace(2.0, 2.0, 1), std::vector<double>{2.0});
}

TEST(Grid, ProductCardinality) {
    const auto g = build_grid(two_point_spec(), {});
    EXPECT_EQ(g.training.size(), 2u);
    EXPECT_EQ(g.training.points()[0].tenor, 1.0);
    EXPECT_EQ(g.training.points()[1].tenor, 5.0);
}

TEST(Grid, DefaultIsFourByFourByThree) {
    const auto g = build_full_grid(GridSpec{});
    EXPECT_EQ(g.size(), 48u);
    // a outermost, tenor innermost
    EXPECT_EQ(g.points()[0].calib.a(), 0.05);
    EXPECT_EQ(g.points()[1].calib.a(), 0.05);
    EXPECT_EQ(g.points()[1].tenor, 5.0);
    EXPECT_EQ(g.points().back().calib.a(), 0.5);
}

TEST(Grid, ZeroHoldoutIsEmpty) {
    const auto g = build_grid(GridSpec{}, {0.0, 1});
    EXPECT_TRUE(g.holdout.empty());
    EXPECT_EQ(g.holdout.split(), GridSplit::holdout);
}

TEST(Grid, HoldoutPartitionsProduct) {
    const auto g = build_grid(GridSpec{}, {0.25, 5});
    EXPECT_EQ(g.holdout.size(), 12u);
    EXPECT_EQ(g.training.size(), 36u);
    std::set<std::size_t> seen;
    for (const auto& p : g.training.points()) seen.insert(p.index);
    for (const auto& p : g.holdout.points()) EXPECT_TRUE(seen.insert(p.index).second);
    EXPECT_EQ(seen.size(), 48u);
    for (std::size_t i = 1; i < g.holdout.size(); ++i)
        EXPECT_LT(g.holdout.points()[i - 1].index, g.holdout.points()[i].index);
}

TEST(Grid, Deterministic) {
    const auto a = build_grid(GridSpec{}, {0.3, 9});
    const auto b = build_grid(GridSpec{}, {0.3, 9});
    EXPECT_EQ(a.training.serialize(), b.training.serialize());
    EXPECT_EQ(a.holdout.serialize(), b.holdout.serialize());
    const auto c = build_grid(GridSpec{}, {0.3, 10});
    EXPECT_NE(a.holdout.serialize(), c.holdout.serialize());
}

TEST(Grid, ThetaClamp) {
    GridSpec s = two_point_spec();
    s.theta = {0.01, 0.1, 3};
    const auto g = build_full_grid(s);
    for (const auto& p : g.points()) {
        EXPECT_GE(p.calib.theta(), 0.02);
        EXPECT_LE(p.calib.theta(), 0.06);
    }
}

TEST(Grid, InvalidSpecs) {
    GridSpec s = two_point_spec();
    s.a = {0.5, 0.1, 3};
    EXPECT_THROW(build_full_grid(s), ConfigError);
    s = two_point_spec();
    s.tenors = {1.0, 0.0};
    EXPECT_ANY_THROW(build_full_grid(s));
    s = two_point_spec();
    s.sigma = {0.1, 0.1, 2};
    EXPECT_ANY_THROW(build_full_grid(s));
    s = two_point_spec();
    s.a = {-0.1, -0.1, 1};
    EXPECT_ANY_THROW(build_full_grid(s));
    EXPECT_ANY_THROW(build_grid(two_point_spec(), {1.5, 1}));
}

TEST(Grid, ConfigRoundTrip) {
    GridSpec s;
    s.a = {0.1, 0.3, 3};
    s.tenors = {2.0, 4.0};
    s.clamp_theta = false;
    HoldoutSpec h{0.2, 99};
    KeyValueConfig cfg;
    write_grid_spec(cfg, s);
    write_holdout_spec(cfg, h);
    EXPECT_EQ(grid_spec_from_config(cfg), s);
    EXPECT_EQ(holdout_spec_from_config(cfg), h);
}

TEST(Grid, ConfigErrors) {
    EXPECT_THROW(grid_spec_from_config(KeyValueConfig::parse("a.steps = many\n")), ConfigError);
    EXPECT_THROW(grid_spec_from_config(KeyValueConfig::parse("tenors = 1,,5\n")), ConfigError);
}
