#include "bkgtfk/errors.hpp"
#include "bkgtfk/gtfk.hpp"
#include "bkgtfk/surface.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace bkgtfk;

namespace {

McConfig small() {
    McConfig c;
    c.n_paths = 2048;
    c.steps_per_year = 24;
    return c;
}

GridSpec small_grid() {
    GridSpec g;
    g.a = {0.1, 0.4, 2};
    g.sigma = {0.2, 0.8, 2};
    g.tenors = {1.0, 5.0};
    return g;
}

}  // namespace

TEST(ErrorSurface, SelfComparisonIsZero) {
    const auto grid = build_full_grid(small_grid());
    const auto oracle = small();
    SurfacePricers p;
    p.model = [&](const GridPoint& g) { return mc_zcb_price(g.calib, g.tenor, oracle).value; };
    const auto s = error_surface(grid, p, oracle);
    ASSERT_EQ(s.rows.size(), grid.size());
    for (const auto& r : s.rows) {
        EXPECT_EQ(r.rel_err_gtfk, 0.0);
        EXPECT_TRUE(r.failure.empty());
    }
}

TEST(ErrorSurface, DeterministicRowsAgree) {
    GridSpec g = small_grid();
    g.sigma = {1e-8, 1e-8, 1};
    const auto grid = build_full_grid(g);
    SurfacePricers p;
    p.model = [](const GridPoint& pt) { return gtfk_price(pt.calib, pt.tenor); };
    for (const auto& r : error_surface(grid, p, small()).rows) EXPECT_LE(std::abs(r.rel_err_gtfk), 1e-4);
}

TEST(ErrorSurface, ThreadInvariantAndOrdered) {
    const auto grid = build_full_grid(small_grid());
    SurfacePricers p;
    p.model = [](const GridPoint& pt) { return gtfk_price(pt.calib, pt.tenor); };
    const auto a = error_surface(grid, p, small(), 1);
    const auto b = error_surface(grid, p, small(), 4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_EQ(a.rows[i].point.index, i);
        EXPECT_EQ(a.rows[i].mc_price, b.rows[i].mc_price);
        EXPECT_EQ(a.rows[i].rel_err_gtfk, b.rows[i].rel_err_gtfk);
    }
}

TEST(ErrorSurface, FailingPointIsRecorded) {
    const auto grid = build_full_grid(small_grid());
    SurfacePricers p;
    p.model = [](const GridPoint& pt) -> double {
        if (pt.index == 0) throw NumericError("boom, here");
        return 0.5;
    };
    const auto s = error_surface(grid, p, small());
    EXPECT_EQ(s.failures(), 1u);
    EXPECT_NE(s.rows[0].failure.find("boom; here"), std::string::npos);
    EXPECT_TRUE(std::isnan(s.rows[0].rel_err_gtfk));
    EXPECT_EQ(marginal(s, MarginalAxes::a_sigma).front().count, 1u);
}

TEST(Marginal, MeansPerCell) {
    const auto grid = build_full_grid(small_grid());
    SurfacePricers p;
    p.model = [](const GridPoint& pt) { return gtfk_price(pt.calib, pt.tenor); };
    const auto s = error_surface(grid, p, small());
    const auto cells = marginal(s, MarginalAxes::a_sigma);
    ASSERT_EQ(cells.size(), 4u);
    const double expect = 0.5 * (std::abs(s.rows[0].rel_err_gtfk) + std::abs(s.rows[1].rel_err_gtfk));
    EXPECT_DOUBLE_EQ(cells[0].mean_abs_gtfk, expect);
    EXPECT_EQ(cells[0].count, 2u);
    EXPECT_EQ(marginal(s, MarginalAxes::sigma_tenor).size(), 4u);
}

TEST(Quadrants, MedianSplit) {
    QuadrantClassifier q({0.05, 0.2, 0.35, 0.5}, {0.2, 0.4667, 0.7333, 1.0});
    EXPECT_EQ(q.classify(0.5, 1.0), Quadrant::upper_right);
    EXPECT_EQ(q.classify(0.35, 0.7333), Quadrant::upper_right);
    EXPECT_EQ(q.classify(0.05, 0.4667), Quadrant::lower_left);
    EXPECT_EQ(q.classify(0.05, 1.0), Quadrant::mixed);
}

TEST(ErrorSurface, AccumulationOverflowKeepsRow) {
    GridSpec g;
    g.a = {0.05, 0.05, 1};
    g.sigma = {1.0, 1.0, 1};
    g.tenors = {10.0};
    const auto grid = build_full_grid(g);
    SurfacePricers p;
    p.model = [](const GridPoint& pt) { return gtfk_price(pt.calib, pt.tenor); };
    p.inverse_accumulation = [](const GridPoint&) -> double { throw NumericError("overflow"); };
    const auto s = error_surface(grid, p, small());
    EXPECT_EQ(s.failures(), 0u);
    EXPECT_TRUE(std::isnan(*s.rows[0].gtfk_inv_accumulation));
    EXPECT_TRUE(std::isfinite(s.rows[0].rel_err_gtfk));
}

TEST(ErrorSurface, GtfkErrorGrowsWithTenor) {
    GridSpec g;
    g.a = {0.1, 0.4, 2};
    g.sigma = {0.4, 0.8, 2};
    g.tenors = {1.0, 5.0, 10.0, 20.0};
    const auto grid = build_full_grid(g);
    McConfig mc;
    mc.n_paths = 8192;
    mc.steps_per_year = 52;
    SurfacePricers p;
    p.model = [](const GridPoint& pt) { return gtfk_price(pt.calib, pt.tenor); };
    const auto cells = marginal(error_surface(grid, p, mc), MarginalAxes::a_tenor);
    std::map<double, double> by_tenor;
    for (const auto& c : cells) by_tenor[c.y] += c.mean_abs_gtfk;
    double prev = 0.0;
    for (const auto& [tenor, err] : by_tenor) {
        EXPECT_GE(err, prev) << "tenor " << tenor;
        prev = err;
    }
}
