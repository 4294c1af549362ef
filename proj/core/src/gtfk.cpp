#include "bkgtfk/gtfk.hpp"

#include "bkgtfk/format.hpp"
#include "bkgtfk/grid.hpp"

#include <cmath>
#include <vector>

namespace bkgtfk {

std::string to_string(PricingMode mode) {
    return mode == PricingMode::accumulation ? "accumulation" : "discount";
}

namespace {

double potential_sign(PricingMode mode) { return mode == PricingMode::accumulation ? 1.0 : -1.0; }

void require_tenor(double tenor) {
    if (!(tenor > 0.0) || !std::isfinite(tenor)) {
        throw DomainError("tenor must be positive, got " + format_double(tenor));
    }
}

// u + 2 expm1(-u) - expm1(-2u)/2, which behaves like u^3/3 near zero.
double path_average_bracket(double u) {
    if (u >= 1.0) return u + 2.0 * std::expm1(-u) - 0.5 * std::expm1(-2.0 * u);
    // sum_{k>=3} (2 - 2^{k-1}) (-u)^k / k!
    double sum = 0.0;
    double term = u * u / 2.0;  // u^k / k! at k = 2
    double pow2 = 2.0;          // 2^{k-1} at k = 2
    for (int k = 3; k <= 40; ++k) {
        term *= u / k;
        pow2 *= 2.0;
        const double c = (2.0 - pow2) * ((k % 2) ? -1.0 : 1.0);
        sum += c * term;
        if (std::abs(c * term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

double bk_potential(double x_bar, const ModelCalibration& calib, PricingMode mode) {
    const double a = calib.a();
    const double sigma = calib.sigma();
    if (!(sigma > 0.0)) throw DomainError("bk_potential needs sigma > 0");
    const double d = calib.log_target() - x_bar;
    return a * a * d * d / (2.0 * sigma * sigma) - a / 2.0 - potential_sign(mode) * std::exp(x_bar);
}

double smeared_exponential(double x_bar, double alpha) {
    if (!(alpha >= 0.0)) throw DomainError("smearing variance must be non-negative");
    return std::exp(x_bar + alpha / 2.0);
}

double omega_equation(double omega, double alpha, double x_bar, const ModelCalibration& calib,
                      double lambda) {
    if (!(omega >= 0.0)) throw DomainError("omega must be non-negative");
    const double a = calib.a();
    const double sigma = calib.sigma();
    return omega * omega - a * a - lambda * sigma * sigma * std::exp(alpha / 2.0) * std::exp(x_bar);
}

double smearing_width(double omega, double tenor, double sigma) {
    if (!(omega >= 0.0)) throw DomainError("omega must be non-negative");
    require_tenor(tenor);
    const double s2 = sigma * sigma;
    const double y = 0.5 * omega * tenor;
    if (y < 0.05) {
        // y coth y - 1 = y^2/3 - y^4/45 + 2y^6/945 - y^8/4725
        const double y2 = y * y;
        const double bracket = 1.0 - y2 / 15.0 + 2.0 * y2 * y2 / 315.0 - y2 * y2 * y2 / 1575.0;
        return s2 * tenor / 12.0 * bracket;
    }
    const double coth = 1.0 / std::tanh(y);
    return s2 / (omega * omega * tenor) * (y * coth - 1.0);
}

GtfkState solve_self_consistent(double x_bar, const ModelCalibration& calib, double tenor,
                                double lambda, const SolverOptions& options, double initial_alpha) {
    require_tenor(tenor);
    if (!(options.tol > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (options.max_iter < 1) throw ConfigError("solver max_iter must be >= 1");
    if (!(initial_alpha >= 0.0)) throw DomainError("initial alpha must be non-negative");

    const double a2 = calib.a() * calib.a();
    const double coupling = lambda * calib.sigma() * calib.sigma() * std::exp(x_bar);
    const auto omega_sq_of = [&](double alpha) { return a2 + coupling * std::exp(alpha / 2.0); };

    GtfkState state{x_bar, initial_alpha, omega_sq_of(initial_alpha), lambda, 0};
    double prev_delta = 0.0;
    bool damped = false;
    double delta = 0.0;
    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        const double omega_sq = omega_sq_of(state.alpha);
        if (!(omega_sq > 0.0) || !std::isfinite(omega_sq)) {
            state.omega_sq = omega_sq;
            throw SolverError("self-consistency left the region omega^2 > 0", state, omega_sq);
        }
        const double next = smearing_width(std::sqrt(omega_sq), tenor, calib.sigma());
        delta = next - state.alpha;
        state.iterations = it;
        if (std::abs(delta) <= options.tol) {
            state.alpha = next;
            state.omega_sq = omega_sq_of(next);
            return state;
        }
        if (prev_delta * delta < 0.0) damped = true;
        state.alpha = damped ? state.alpha + 0.5 * delta : next;
        state.omega_sq = omega_sq_of(state.alpha);
        prev_delta = delta;
    }
    throw SolverError("self-consistency did not converge in " + std::to_string(options.max_iter) +
                          " iterations (|delta alpha| = " + format_double(std::abs(delta)) + ")",
                      state, std::abs(delta));
}

double trapezoid(std::span<const double> nodes, std::span<const double> values) {
    if (nodes.size() != values.size()) {
        throw UsageError("trapezoid: " + std::to_string(nodes.size()) + " nodes but " +
                         std::to_string(values.size()) + " values");
    }
    if (nodes.size() < 2) throw UsageError("trapezoid needs at least two nodes");
    double sum = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double h = nodes[i] - nodes[i - 1];
        if (!(h > 0.0)) throw UsageError("trapezoid nodes must be strictly increasing");
        sum += 0.5 * h * (values[i - 1] + values[i]);
    }
    return sum;
}

void QuadratureSpec::validate() const {
    if (nodes < 3 || nodes % 2 == 0) throw ConfigError("quadrature node count must be odd and >= 3");
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw ConfigError("quadrature half-width must be positive");
    }
    if (time_nodes < 2) throw ConfigError("quadrature time node count must be >= 2");
}

void EngineSettings::validate() const {
    quad.validate();
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
    if (!(solver.tol > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (solver.max_iter < 1) throw ConfigError("solver max_iter must be >= 1");
}

HorizonMoments horizon_moments(const ModelCalibration& calib, double tenor, std::size_t time_nodes) {
    require_tenor(tenor);
    if (time_nodes < 2) throw ConfigError("need at least two time nodes");
    const double a = calib.a();
    const double b = calib.log_target();
    const double gap = calib.log_r0() - b;
    const double u = a * tenor;
    const double shrink = -std::expm1(-u) / u;  // (1 - e^{-aT}) / (aT)

    HorizonMoments m;
    m.mean = b + gap * shrink;
    const double sigma = calib.sigma();
    m.variance = sigma * sigma * path_average_bracket(u) / (a * a * a * tenor * tenor);
    if (gap != 0.0) {
        const auto t = linspace(0.0, tenor, time_nodes);
        std::vector<double> f(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            f[i] = std::exp(gap * (std::exp(-a * t[i]) - shrink));
        }
        m.drift_dispersion = trapezoid(t, f) / tenor;
    }
    return m;
}

double horizon_potential(double x_bar, double x_exp, double alpha, const HorizonMoments& moments,
                         const ModelCalibration& calib, double tenor, PricingMode mode) {
    const double d = x_bar - moments.mean;
    return d * d / (2.0 * moments.variance * tenor) - calib.a() / 2.0 -
           potential_sign(mode) * moments.drift_dispersion * smeared_exponential(x_exp, alpha);
}

GtfkResult gtfk_evaluate(const ModelCalibration& calib, double tenor, const EngineSettings& settings,
                         PricingMode mode, const XbarMap& exp_map) {
    require_tenor(tenor);
    settings.validate();
    const auto& quad = settings.quad;
    const double sign = potential_sign(mode);
    // Fluctuations about the path average of a free-ended path of length T behave like
    // those of a closed loop of period 2T.
    const double loop_period = 2.0 * tenor;

    GtfkResult result;
    result.moments = horizon_moments(calib, tenor, quad.time_nodes);
    const auto& mom = result.moments;
    const auto map = [&](double x) { return exp_map ? exp_map(x) : x; };

    if (!(mom.variance > 0.0)) {
        // Degenerate law: x-bar is deterministic.
        const double x_exp = map(mom.mean);
        result.centre = solve_self_consistent(x_exp, calib, loop_period, settings.lambda, settings.solver);
        const double exponent =
            sign * tenor * mom.drift_dispersion * smeared_exponential(x_exp, result.centre.alpha);
        result.price = std::exp(exponent);
        if (!std::isfinite(result.price)) throw NumericError("non-finite GTFK price at the mean node");
        return result;
    }

    const double sd = std::sqrt(mom.variance);
    const auto nodes = linspace(mom.mean - quad.half_width * sd, mom.mean + quad.half_width * sd, quad.nodes);
    std::vector<double> weighted(nodes.size());
    std::vector<double> gaussian(nodes.size());
    const std::size_t centre = nodes.size() / 2;

    double alpha_guess = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double z = (nodes[j] - mom.mean) / sd;
        gaussian[j] = std::exp(-0.5 * z * z);
        const double x_exp = map(nodes[j]);
        const auto state = solve_self_consistent(x_exp, calib, loop_period, settings.lambda,
                                                 settings.solver, alpha_guess);
        alpha_guess = state.alpha;
        if (j == centre) result.centre = state;
        // The constant -a/2 cancels against the normalizer.
        const double potential =
            horizon_potential(nodes[j], x_exp, state.alpha, mom, calib, tenor, mode) + calib.a() / 2.0;
        weighted[j] = std::exp(-tenor * potential);
        if (!std::isfinite(weighted[j])) {
            throw NumericError("non-finite GTFK integrand at node " + std::to_string(j) + " (x_bar = " +
                               format_double(nodes[j]) + ")");
        }
    }
    result.price = trapezoid(nodes, weighted) / trapezoid(nodes, gaussian);
    return result;
}

double gtfk_price(const ModelCalibration& calib, double tenor, const EngineSettings& settings,
                  PricingMode mode) {
    return gtfk_evaluate(calib, tenor, settings, mode).price;
}

}  // namespace bkgtfk
