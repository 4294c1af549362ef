#pragma once

#include "bkgtfk/calibration.hpp"
#include "bkgtfk/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bkgtfk {

struct McConfig {
    std::size_t n_paths = std::size_t{1} << 17;
    std::size_t steps_per_year = 252;
    std::uint64_t seed = 42;
    bool antithetic = true;

    /// Throws ConfigError unless n_paths >= 2 (even under antithetic) and steps_per_year >= 1.
    void validate() const;

    friend bool operator==(const McConfig&, const McConfig&) = default;
};

struct PriceEstimate {
    double value = 0.0;
    /// Sample standard deviation over all paths divided by sqrt(n_paths).
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Number of time steps used for a tenor: ceil(tenor * steps_per_year), at least 1.
std::size_t time_steps(double tenor, std::size_t steps_per_year);

/// Log-rate path at the `steps + 1` equally spaced grid times on [0, tenor], sampled with
/// the exact Ornstein-Uhlenbeck transition. x[0] = ln(r0).
std::vector<double> simulate_log_rate_path(const ModelCalibration& calib, double tenor,
                                           std::size_t steps, NormalStream& stream);

/// Trapezoid integral of r = exp(x) along each simulated path, in path-index order.
/// Antithetic pairs (2k, 2k+1) share stream k with normals Z and -Z.
/// Throws NumericError naming the first path whose integral overflows.
std::vector<double> mc_path_integrals(const ModelCalibration& calib, double tenor,
                                      const McConfig& cfg, unsigned threads = 1);

/// E[exp(-int r dt)], the zero-coupon bond price.
PriceEstimate mc_zcb_price(const ModelCalibration& calib, double tenor, const McConfig& cfg,
                           unsigned threads = 1);

/// E[exp(+int r dt)], the accumulation factor of one unit.
PriceEstimate mc_accumulation(const ModelCalibration& calib, double tenor, const McConfig& cfg,
                              unsigned threads = 1);

/// Mean and standard error of exp(sign * I) over given path integrals.
PriceEstimate estimate_from_integrals(const std::vector<double>& integrals, double sign,
                                      std::uint64_t seed);

}  // namespace bkgtfk
