#pragma once

#include "bkgtfk/calibration.hpp"
#include "bkgtfk/config.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bkgtfk {

/// `steps` evenly spaced values from min to max inclusive; a single step yields {min}.
std::vector<double> linspace(double min, double max, std::size_t steps);

struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t steps = 1;

    std::vector<double> values() const { return linspace(min, max, steps); }
    friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

struct GridSpec {
    AxisSpec a{0.05, 0.5, 4};
    AxisSpec sigma{0.2, 1.0, 4};
    AxisSpec theta{0.04, 0.04, 1};
    AxisSpec r0{0.04, 0.04, 1};
    std::vector<double> tenors{1.0, 5.0, 10.0};
    /// Clamp theta to [0.02, 0.06], the range the reference calibrations cover.
    bool clamp_theta = true;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct HoldoutSpec {
    double fraction = 0.0;
    std::uint64_t seed = 7;

    friend bool operator==(const HoldoutSpec&, const HoldoutSpec&) = default;
};

enum class GridSplit { training, holdout };

std::string to_string(GridSplit split);

struct GridPoint {
    ModelCalibration calib;
    double tenor;
    /// Position in the full Cartesian product before splitting.
    std::size_t index;

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Ordered calibration x tenor points with a provenance tag; points are unique, tenors > 0.
class CalibrationGrid {
public:
    CalibrationGrid(std::vector<GridPoint> points, GridSplit split);

    const std::vector<GridPoint>& points() const noexcept { return points_; }
    GridSplit split() const noexcept { return split_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    /// One line per point, shortest round-trip decimals; stable for byte comparison.
    std::string serialize() const;

private:
    std::vector<GridPoint> points_;
    GridSplit split_;
};

struct GridPair {
    CalibrationGrid training;
    CalibrationGrid holdout;
};

/// Cartesian product (a outermost, tenor innermost) with a seeded holdout split.
/// Both halves keep the product order.
GridPair build_grid(const GridSpec& spec, const HoldoutSpec& split);

/// Full product without splitting, tagged as training.
CalibrationGrid build_full_grid(const GridSpec& spec);

/// Reads `a.min/max/steps`, `sigma.*`, `theta.*`, `r0.*`, `tenors`, `theta.clamp`.
/// Missing keys keep the defaults of `base`.
GridSpec grid_spec_from_config(const KeyValueConfig& cfg, const GridSpec& base = {});
HoldoutSpec holdout_spec_from_config(const KeyValueConfig& cfg, const HoldoutSpec& base = {});

void write_grid_spec(KeyValueConfig& cfg, const GridSpec& spec);
void write_holdout_spec(KeyValueConfig& cfg, const HoldoutSpec& spec);

std::vector<std::string> grid_config_keys();

}  // namespace bkgtfk
