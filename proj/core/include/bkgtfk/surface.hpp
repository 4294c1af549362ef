#pragma once

#include "bkgtfk/grid.hpp"
#include "bkgtfk/mc.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bkgtfk {

using PointPricer = std::function<double(const GridPoint&)>;

/// Pricers compared against the Monte Carlo oracle. Only `model` is required.
struct SurfacePricers {
    PointPricer model;
    /// 1 / accumulation-mode price, reported for comparison. Its failures leave NaN in the
    /// column and do not mark the row as failed.
    PointPricer inverse_accumulation;
    PointPricer corrected;
};

struct SurfaceRow {
    explicit SurfaceRow(GridPoint p) : point(std::move(p)) {}

    GridPoint point;
    double mc_price = 0.0;
    double mc_stderr = 0.0;
    double gtfk_price = 0.0;
    std::optional<double> gtfk_inv_accumulation;
    std::optional<double> corrected_price;
    double rel_err_gtfk = 0.0;
    std::optional<double> rel_err_corrected;
    std::uint64_t seed = 0;
    /// Empty when the point priced cleanly.
    std::string failure;
};

/// Signed relative pricing errors against the simulation oracle, one row per grid point in
/// grid order.
struct ErrorSurface {
    std::vector<SurfaceRow> rows;
    bool has_corrected = false;
    bool has_inverse_accumulation = false;

    std::size_t failures() const;
};

/// (model - mc) / mc per point. A failing point is recorded in its row and the sweep
/// continues. Points are evaluated in parallel; output order and values do not depend
/// on `threads`.
ErrorSurface error_surface(const CalibrationGrid& grid, const SurfacePricers& pricers,
                           const McConfig& oracle, unsigned threads = 1);

enum class MarginalAxes { a_sigma, a_tenor, sigma_tenor };

std::string to_string(MarginalAxes axes);

struct MarginalCell {
    double x = 0.0;
    double y = 0.0;
    std::size_t count = 0;
    double mean_abs_gtfk = 0.0;
    std::optional<double> mean_abs_corrected;
};

/// Mean |relative error| per distinct (x, y) pair, sorted by x then y. Failed rows are skipped.
std::vector<MarginalCell> marginal(const ErrorSurface& surface, MarginalAxes axes);

enum class Quadrant { lower_left, upper_right, mixed };

/// Places (a, sigma) relative to the medians of the distinct grid values of each axis:
/// upper_right when both lie strictly above, lower_left when both lie strictly below.
class QuadrantClassifier {
public:
    QuadrantClassifier(std::vector<double> a_values, std::vector<double> sigma_values);

    static QuadrantClassifier from_points(const std::vector<GridPoint>& points);

    Quadrant classify(double a, double sigma) const;

private:
    double a_median_;
    double sigma_median_;
};

}  // namespace bkgtfk
