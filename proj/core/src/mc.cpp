#include "bkgtfk/mc.hpp"

#include "bkgtfk/errors.hpp"
#include "bkgtfk/format.hpp"
#include "bkgtfk/parallel.hpp"

#include <cmath>
#include <string>

namespace bkgtfk {

namespace {

struct OuStep {
    double level;  // b
    double decay;  // exp(-a dt)
    double shock;  // sigma * sqrt((1 - exp(-2 a dt)) / (2 a))
    double dt;
};

OuStep make_step(const ModelCalibration& calib, double tenor, std::size_t steps) {
    const double dt = tenor / static_cast<double>(steps);
    const double a = calib.a();
    return {calib.log_target(), std::exp(-a * dt),
            calib.sigma() * std::sqrt(-std::expm1(-2.0 * a * dt) / (2.0 * a)), dt};
}

void require_tenor(double tenor) {
    if (!(tenor > 0.0) || !std::isfinite(tenor)) {
        throw DomainError("tenor must be positive, got " + format_double(tenor));
    }
}

}  // namespace

void McConfig::validate() const {
    if (n_paths < 2) throw ConfigError("mc.paths must be >= 2");
    if (antithetic && n_paths % 2 != 0) throw ConfigError("mc.paths must be even with antithetic sampling");
    if (steps_per_year < 1) throw ConfigError("mc.steps_per_year must be >= 1");
}

std::size_t time_steps(double tenor, std::size_t steps_per_year) {
    const double raw = std::ceil(tenor * static_cast<double>(steps_per_year) - 1e-9);
    return raw < 1.0 ? 1 : static_cast<std::size_t>(raw);
}

std::vector<double> simulate_log_rate_path(const ModelCalibration& calib, double tenor,
                                           std::size_t steps, NormalStream& stream) {
    require_tenor(tenor);
    if (steps < 1) throw UsageError("simulate_log_rate_path needs at least one step");
    const auto step = make_step(calib, tenor, steps);
    std::vector<double> x(steps + 1);
    x[0] = calib.log_r0();
    for (std::size_t k = 1; k <= steps; ++k) {
        x[k] = step.level + (x[k - 1] - step.level) * step.decay + step.shock * stream.next();
    }
    return x;
}

std::vector<double> mc_path_integrals(const ModelCalibration& calib, double tenor,
                                      const McConfig& cfg, unsigned threads) {
    require_tenor(tenor);
    cfg.validate();
    const std::size_t steps = time_steps(tenor, cfg.steps_per_year);
    const auto step = make_step(calib, tenor, steps);
    const double x0 = calib.log_r0();
    const double r0 = calib.r0();

    std::vector<double> integrals(cfg.n_paths);
    const std::size_t group = cfg.antithetic ? 2 : 1;
    const std::size_t n_streams = cfg.n_paths / group;

    // Groups of streams per task keep the per-task overhead small.
    constexpr std::size_t kBlock = 256;
    const std::size_t n_blocks = (n_streams + kBlock - 1) / kBlock;

    parallel_for(n_blocks, threads, [&](std::size_t blk) {
        const std::size_t end = std::min(n_streams, (blk + 1) * kBlock);
        for (std::size_t s = blk * kBlock; s < end; ++s) {
            NormalStream stream(cfg.seed, s);
            double xp = x0, xm = x0;
            double sum_p = 0.5 * r0, sum_m = 0.5 * r0;
            for (std::size_t k = 1; k <= steps; ++k) {
                const double z = step.shock * stream.next();
                const double mean_p = step.level + (xp - step.level) * step.decay;
                xp = mean_p + z;
                const double w = (k == steps) ? 0.5 : 1.0;
                sum_p += w * std::exp(xp);
                if (group == 2) {
                    xm = step.level + (xm - step.level) * step.decay - z;
                    sum_m += w * std::exp(xm);
                }
            }
            integrals[group * s] = sum_p * step.dt;
            if (group == 2) integrals[group * s + 1] = sum_m * step.dt;
        }
    });

    for (std::size_t i = 0; i < integrals.size(); ++i) {
        if (!std::isfinite(integrals[i])) {
            throw NumericError("short rate overflowed on path " + std::to_string(i) +
                               "; calibration lies outside the supported range");
        }
    }
    return integrals;
}

PriceEstimate estimate_from_integrals(const std::vector<double>& integrals, double sign,
                                      std::uint64_t seed) {
    const std::size_t n = integrals.size();
    if (n < 2) throw UsageError("need at least two paths for an estimate");
    std::vector<double> payoff(n);
    for (std::size_t i = 0; i < n; ++i) {
        payoff[i] = std::exp(sign * integrals[i]);
        if (!std::isfinite(payoff[i])) {
            throw NumericError("payoff overflowed on path " + std::to_string(i));
        }
    }
    // Shift by the first payoff so a degenerate (sigma = 0) population has exactly zero spread.
    const double shift = payoff[0];
    for (auto& p : payoff) p -= shift;
    const double mean_dev = pairwise_sum(payoff) / static_cast<double>(n);
    const double mean = shift + mean_dev;
    for (auto& p : payoff) p = (p - mean_dev) * (p - mean_dev);
    const double var = pairwise_sum(payoff) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n, seed};
}

PriceEstimate mc_zcb_price(const ModelCalibration& calib, double tenor, const McConfig& cfg,
                           unsigned threads) {
    return estimate_from_integrals(mc_path_integrals(calib, tenor, cfg, threads), -1.0, cfg.seed);
}

PriceEstimate mc_accumulation(const ModelCalibration& calib, double tenor, const McConfig& cfg,
                              unsigned threads) {
    return estimate_from_integrals(mc_path_integrals(calib, tenor, cfg, threads), +1.0, cfg.seed);
}

}  // namespace bkgtfk
