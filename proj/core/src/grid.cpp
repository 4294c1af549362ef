#include "bkgtfk/grid.hpp"

#include "bkgtfk/errors.hpp"
#include "bkgtfk/format.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace bkgtfk {

namespace {

constexpr double kThetaFloor = 0.02;
constexpr double kThetaCap = 0.06;

void check_axis(const AxisSpec& axis, const char* name, bool allow_zero) {
    if (axis.steps == 0) throw ConfigError(std::string(name) + ".steps must be >= 1");
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max) || axis.max < axis.min) {
        throw ConfigError(std::string(name) + ": empty range [" + format_double(axis.min) + ", " +
                          format_double(axis.max) + "]");
    }
    if (axis.steps > 1 && axis.max == axis.min) {
        throw ConfigError(std::string(name) + ": degenerate range with steps > 1 gives duplicates");
    }
    const bool ok = allow_zero ? axis.min >= 0.0 : axis.min > 0.0;
    if (!ok) throw ConfigError(std::string(name) + ".min violates the positivity constraint");
}

}  // namespace

std::vector<double> linspace(double min, double max, std::size_t steps) {
    if (steps == 0) throw ConfigError("linspace needs at least one step");
    if (steps == 1) return {min};
    std::vector<double> out(steps);
    const double span = max - min;
    const double denom = static_cast<double>(steps - 1);
    for (std::size_t i = 0; i < steps; ++i) {
        out[i] = min + span * (static_cast<double>(i) / denom);
    }
    out.back() = max;
    return out;
}

std::string to_string(GridSplit split) {
    return split == GridSplit::training ? "training" : "holdout";
}

CalibrationGrid::CalibrationGrid(std::vector<GridPoint> points, GridSplit split)
    : points_(std::move(points)), split_(split) {
    std::set<std::tuple<double, double, double, double, double>> seen;
    for (const auto& p : points_) {
        if (!(p.tenor > 0.0) || !std::isfinite(p.tenor)) {
            throw ConfigError("grid tenor must be positive, got " + format_double(p.tenor));
        }
        const auto key = std::make_tuple(p.calib.a(), p.calib.sigma(), p.calib.theta(),
                                         p.calib.r0(), p.tenor);
        if (!seen.insert(key).second) throw ConfigError("duplicate grid point");
    }
}

std::string CalibrationGrid::serialize() const {
    std::string out = "# split=" + to_string(split_) + "\nindex,a,sigma,theta,r0,tenor\n";
    for (const auto& p : points_) {
        out += std::to_string(p.index);
        for (double v : features(p.calib, p.tenor)) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

CalibrationGrid build_full_grid(const GridSpec& spec) {
    AxisSpec theta = spec.theta;
    if (spec.clamp_theta) {
        theta.min = std::clamp(theta.min, kThetaFloor, kThetaCap);
        theta.max = std::clamp(theta.max, kThetaFloor, kThetaCap);
    }
    check_axis(spec.a, "a", false);
    check_axis(spec.sigma, "sigma", true);
    check_axis(theta, "theta", false);
    check_axis(spec.r0, "r0", false);
    if (spec.tenors.empty()) throw ConfigError("tenors list is empty");

    std::vector<GridPoint> points;
    std::size_t index = 0;
    for (double a : spec.a.values())
        for (double sigma : spec.sigma.values())
            for (double th : theta.values())
                for (double r0 : spec.r0.values())
                    for (double tenor : spec.tenors) {
                        points.push_back({ModelCalibration(a, th, sigma, r0), tenor, index++});
                    }
    return CalibrationGrid(std::move(points), GridSplit::training);
}

GridPair build_grid(const GridSpec& spec, const HoldoutSpec& split) {
    if (!(split.fraction >= 0.0 && split.fraction <= 1.0)) {
        throw ConfigError("holdout.fraction must lie in [0, 1]");
    }
    const auto full = build_full_grid(spec);
    const std::size_t n = full.size();
    const auto n_hold = static_cast<std::size_t>(std::llround(split.fraction * static_cast<double>(n)));

    // Fisher-Yates with explicit modulo mapping: mt19937_64 output is fixed by the
    // standard, distributions are not.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(split.seed);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
    std::vector<bool> is_holdout(n, false);
    for (std::size_t k = 0; k < n_hold; ++k) is_holdout[order[k]] = true;

    std::vector<GridPoint> train, hold;
    for (std::size_t i = 0; i < n; ++i) {
        (is_holdout[i] ? hold : train).push_back(full.points()[i]);
    }
    return {CalibrationGrid(std::move(train), GridSplit::training),
            CalibrationGrid(std::move(hold), GridSplit::holdout)};
}

namespace {

AxisSpec axis_from_config(const KeyValueConfig& cfg, const std::string& name, const AxisSpec& base) {
    AxisSpec axis = base;
    axis.min = cfg.get_double(name + ".min", base.min);
    axis.max = cfg.get_double(name + ".max", base.max);
    const auto steps = cfg.get_int(name + ".steps", static_cast<std::int64_t>(base.steps));
    if (steps < 1) throw ConfigError(name + ".steps must be >= 1");
    axis.steps = static_cast<std::size_t>(steps);
    return axis;
}

void write_axis(KeyValueConfig& cfg, const std::string& name, const AxisSpec& axis) {
    cfg.set(name + ".min", format_double(axis.min));
    cfg.set(name + ".max", format_double(axis.max));
    cfg.set(name + ".steps", std::to_string(axis.steps));
}

}  // namespace

GridSpec grid_spec_from_config(const KeyValueConfig& cfg, const GridSpec& base) {
    GridSpec spec = base;
    spec.a = axis_from_config(cfg, "a", base.a);
    spec.sigma = axis_from_config(cfg, "sigma", base.sigma);
    spec.theta = axis_from_config(cfg, "theta", base.theta);
    spec.r0 = axis_from_config(cfg, "r0", base.r0);
    spec.tenors = cfg.get_doubles("tenors", base.tenors);
    spec.clamp_theta = cfg.get_bool("theta.clamp", base.clamp_theta);
    return spec;
}

HoldoutSpec holdout_spec_from_config(const KeyValueConfig& cfg, const HoldoutSpec& base) {
    HoldoutSpec spec = base;
    spec.fraction = cfg.get_double("holdout.fraction", base.fraction);
    spec.seed = cfg.get_uint64("holdout.seed", base.seed);
    return spec;
}

void write_grid_spec(KeyValueConfig& cfg, const GridSpec& spec) {
    write_axis(cfg, "a", spec.a);
    write_axis(cfg, "sigma", spec.sigma);
    write_axis(cfg, "theta", spec.theta);
    write_axis(cfg, "r0", spec.r0);
    cfg.set("tenors", join_doubles(spec.tenors));
    cfg.set("theta.clamp", spec.clamp_theta ? "true" : "false");
}

void write_holdout_spec(KeyValueConfig& cfg, const HoldoutSpec& spec) {
    cfg.set("holdout.fraction", format_double(spec.fraction));
    cfg.set("holdout.seed", std::to_string(spec.seed));
}

std::vector<std::string> grid_config_keys() {
    std::vector<std::string> keys;
    for (const char* axis : {"a", "sigma", "theta", "r0"}) {
        for (const char* field : {".min", ".max", ".steps"}) keys.push_back(std::string(axis) + field);
    }
    keys.insert(keys.end(), {"tenors", "theta.clamp", "holdout.fraction", "holdout.seed"});
    return keys;
}

}  // namespace bkgtfk
