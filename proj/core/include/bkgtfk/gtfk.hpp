#pragma once

#include "bkgtfk/calibration.hpp"
#include "bkgtfk/errors.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>

namespace bkgtfk {

/// Which expectation is priced: E[exp(+int r)] or E[exp(-int r)].
enum class PricingMode { accumulation, discount };

std::string to_string(PricingMode mode);

/// Black-Karasinski drift potential
///   V(x) = a^2 (b - x)^2 / (2 sigma^2) - a/2 - s e^x,
/// s = +1 for accumulation, s = -1 for discount. Requires sigma > 0.
double bk_potential(double x_bar, const ModelCalibration& calib, PricingMode mode);

/// e^{x + alpha/2}: the average of e^x under a Gaussian of variance alpha centred on x.
double smeared_exponential(double x_bar, double alpha);

/// Residual of the frequency equation f(omega) = omega^2 - a^2 - lambda sigma^2 e^{alpha/2} e^{x}.
double omega_equation(double omega, double alpha, double x_bar, const ModelCalibration& calib,
                      double lambda);

/// Feynman-Kleinert smearing width in diffusion units,
///   alpha = sigma^2 / (omega^2 T) [ (omega T / 2) coth(omega T / 2) - 1 ],
/// with the series limit sigma^2 T / 12 for small omega T.
double smearing_width(double omega, double tenor, double sigma);

struct GtfkState {
    double x_bar = 0.0;
    double alpha = 0.0;
    double omega_sq = 0.0;
    double lambda = 1.0;
    std::size_t iterations = 0;
};

struct SolverOptions {
    double tol = 1e-10;
    std::size_t max_iter = 200;
};

/// Self-consistency did not settle within max_iter; carries the last iterate.
class SolverError : public Error {
public:
    SolverError(const std::string& what, const GtfkState& last, double residual)
        : Error(what), last_(last), residual_(residual) {}

    const GtfkState& last_state() const noexcept { return last_; }
    double residual() const noexcept { return residual_; }

private:
    GtfkState last_;
    double residual_;
};

/// Fixed point of
///   omega^2 <- a^2 + lambda sigma^2 e^{alpha/2} e^{x}   (closed-form root of f),
///   alpha   <- smearing_width(omega, T, sigma),
/// started from `initial_alpha` and stopped once |delta alpha| <= tol. Switches to 0.5
/// damping when successive updates change sign. The returned omega_sq is recomputed from
/// the returned alpha, so |f(omega)| sits at rounding level.
GtfkState solve_self_consistent(double x_bar, const ModelCalibration& calib, double tenor,
                                double lambda, const SolverOptions& options = {},
                                double initial_alpha = 0.0);

/// Composite trapezoid rule over strictly increasing nodes.
double trapezoid(std::span<const double> nodes, std::span<const double> values);

struct QuadratureSpec {
    /// Odd, at least 3.
    std::size_t nodes = 401;
    /// Half-width of the x-bar domain in standard deviations of the path-average law.
    double half_width = 8.0;
    /// Time nodes for the deterministic drift-dispersion integral.
    std::size_t time_nodes = 2001;

    void validate() const;
    friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

struct EngineSettings {
    QuadratureSpec quad;
    double lambda = 1.0;
    SolverOptions solver;

    void validate() const;
};

/// Law of the path average x-bar = (1/T) int_0^T x_t dt for the log rate started at ln r0.
struct HorizonMoments {
    double mean = 0.0;
    double variance = 0.0;
    /// (1/T) int_0^T exp(m_t - mean) dt for the deterministic mean path m_t; 1 when r0 = theta.
    double drift_dispersion = 1.0;
};

HorizonMoments horizon_moments(const ModelCalibration& calib, double tenor,
                               std::size_t time_nodes = 2001);

/// Finite-horizon form of the drift potential used by the pricer:
///   (x_bar - mean)^2 / (2 variance T) - a/2 - s D e^{x_exp + alpha/2}.
/// For r0 = theta and T -> infinity with alpha = 0 it tends to bk_potential.
double horizon_potential(double x_bar, double x_exp, double alpha, const HorizonMoments& moments,
                         const ModelCalibration& calib, double tenor, PricingMode mode);

/// Maps a quadrature node x-bar to the value used inside the exponential terms.
using XbarMap = std::function<double(double)>;

struct GtfkResult {
    double price = 0.0;
    /// Self-consistent state at the centre node (diagnostics).
    GtfkState centre;
    HorizonMoments moments;
};

/// GTFK price: trapezoid integral over the path average x-bar of
///   exp(-T [horizon_potential]) / exp(-T [quadratic part only]),
/// with (alpha, omega) solved self-consistently at every node. The smearing width uses the
/// reflected period 2T, since a path with a free end point is half of a closed loop.
/// `exp_map`, when set, replaces x-bar inside the exponential terms only.
GtfkResult gtfk_evaluate(const ModelCalibration& calib, double tenor, const EngineSettings& settings,
                         PricingMode mode, const XbarMap& exp_map = {});

double gtfk_price(const ModelCalibration& calib, double tenor, const EngineSettings& settings = {},
                  PricingMode mode = PricingMode::discount);

}  // namespace bkgtfk
