#pragma once

#include "bkgtfk/calibration.hpp"
#include "bkgtfk/gtfk.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bkgtfk {

/// y = tanh(W v + bias) with W stored row-major (out x in).
struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Maps normalized (a, sigma, theta, r0, tenor) to correction coefficients A_0..A_n.
///
/// Every layer, the output layer included, applies tanh; the output is then multiplied by
/// `output_scale`, so each coefficient lies strictly inside (-output_scale, output_scale).
struct CoefficientNet {
    NormalizationStats stats = NormalizationStats::reference();
    std::vector<DenseLayer> layers;
    /// Highest power of x-bar in the correction polynomial.
    std::size_t degree = 4;
    double output_scale = 0.01;
    /// Divide A_i by i! before use.
    bool taylor_weighting = true;

    /// Throws ConfigError when shapes do not chain 5 -> ... -> degree + 1, a weight is
    /// non-finite, or output_scale is outside (0, 1].
    void validate() const;
    std::size_t parameter_count() const;

    friend bool operator==(const CoefficientNet&, const CoefficientNet&) = default;
};

std::vector<double> forward_normalized(const CoefficientNet& net, const FeatureVector& z);
std::vector<double> forward(const CoefficientNet& net, const ModelCalibration& calib, double tenor);

/// x' = x + sum_i c_i x^i with c_i = A_i, or A_i / i! under Taylor weighting.
double correct_xbar(double x_bar, std::span<const double> coeffs, bool taylor_weighting);

/// Flattened parameters, layer by layer: weights row-major, then bias.
std::vector<double> get_parameters(const CoefficientNet& net);
void set_parameters(CoefficientNet& net, std::span<const double> params);
/// true where the flattened parameter is a bias entry.
std::vector<bool> bias_mask(const CoefficientNet& net);

struct NetworkShape {
    std::vector<std::size_t> hidden{8};
    std::size_t degree = 4;
    double output_scale = 0.01;
    bool taylor_weighting = true;
};

/// Hidden layers drawn uniformly in +-1/sqrt(fan_in) from a seeded counter-based stream;
/// the output layer starts at zero so the untrained net leaves x-bar unchanged.
CoefficientNet make_network(const NormalizationStats& stats, const NetworkShape& shape,
                            std::uint64_t seed);

/// All-zero weights and biases.
CoefficientNet zero_network(const NormalizationStats& stats, const NetworkShape& shape);

/// Fixed single-layer 5 -> 5 reference table with reference normalization, output_scale 1,
/// no Taylor weighting.
CoefficientNet reference_network();

/// Versioned plain-text weight file; shortest round-trip decimals, so it reloads bit-exactly.
std::string serialize_network(const CoefficientNet& net);
CoefficientNet parse_network(std::string_view text);

/// GTFK price with x-bar inside the exponential terms replaced by correct_xbar(x-bar, A),
/// A = forward(net, calib, tenor). The quadratic drift term keeps the raw x-bar.
double corrected_price(const ModelCalibration& calib, double tenor, const CoefficientNet& net,
                       const EngineSettings& settings = {}, PricingMode mode = PricingMode::discount);

GtfkResult corrected_evaluate(const ModelCalibration& calib, double tenor, const CoefficientNet& net,
                              const EngineSettings& settings, PricingMode mode);

}  // namespace bkgtfk
