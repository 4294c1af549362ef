#include "bkgtfk/nn.hpp"

#include "bkgtfk/errors.hpp"
#include "bkgtfk/format.hpp"
#include "bkgtfk/rng.hpp"

#include <cmath>
#include <sstream>

namespace bkgtfk {

namespace {

constexpr std::string_view kMagic = "bkgtfk-coefficient-net v1";

}  // namespace

void CoefficientNet::validate() const {
    if (layers.empty()) throw ConfigError("network has no layers");
    if (!(output_scale > 0.0 && output_scale <= 1.0)) throw ConfigError("output_scale must lie in (0, 1]");
    std::size_t width = kFeatureCount;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        if (layer.in != width) {
            throw ConfigError("layer " + std::to_string(l) + " expects " + std::to_string(layer.in) +
                              " inputs but receives " + std::to_string(width));
        }
        if (layer.out == 0 || layer.weights.size() != layer.in * layer.out || layer.bias.size() != layer.out) {
            throw ConfigError("layer " + std::to_string(l) + " has inconsistent shapes");
        }
        for (double w : layer.weights)
            if (!std::isfinite(w)) throw ConfigError("non-finite weight in layer " + std::to_string(l));
        for (double b : layer.bias)
            if (!std::isfinite(b)) throw ConfigError("non-finite bias in layer " + std::to_string(l));
        width = layer.out;
    }
    if (width != degree + 1) {
        throw ConfigError("output width " + std::to_string(width) + " does not match degree " +
                          std::to_string(degree));
    }
}

std::size_t CoefficientNet::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.bias.size();
    return n;
}

std::vector<double> forward_normalized(const CoefficientNet& net, const FeatureVector& z) {
    std::vector<double> v(z.begin(), z.end());
    std::vector<double> next;
    for (const auto& layer : net.layers) {
        next.assign(layer.out, 0.0);
        for (std::size_t r = 0; r < layer.out; ++r) {
            double acc = 0.0;
            const double* row = layer.weights.data() + r * layer.in;
            for (std::size_t c = 0; c < layer.in; ++c) acc += row[c] * v[c];
            next[r] = std::tanh(acc + layer.bias[r]);
        }
        v.swap(next);
    }
    for (auto& x : v) x *= net.output_scale;
    return v;
}

std::vector<double> forward(const CoefficientNet& net, const ModelCalibration& calib, double tenor) {
    return forward_normalized(net, normalize(features(calib, tenor), net.stats));
}

double correct_xbar(double x_bar, std::span<const double> coeffs, bool taylor_weighting) {
    double shift = 0.0;
    double power = 1.0;
    double factorial = 1.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (i > 0) {
            power *= x_bar;
            factorial *= static_cast<double>(i);
        }
        const double c = taylor_weighting ? coeffs[i] / factorial : coeffs[i];
        shift += c * power;
    }
    return x_bar + shift;
}

std::vector<double> get_parameters(const CoefficientNet& net) {
    std::vector<double> p;
    p.reserve(net.parameter_count());
    for (const auto& l : net.layers) {
        p.insert(p.end(), l.weights.begin(), l.weights.end());
        p.insert(p.end(), l.bias.begin(), l.bias.end());
    }
    return p;
}

void set_parameters(CoefficientNet& net, std::span<const double> params) {
    if (params.size() != net.parameter_count()) {
        throw UsageError("expected " + std::to_string(net.parameter_count()) + " parameters, got " +
                         std::to_string(params.size()));
    }
    std::size_t k = 0;
    for (auto& l : net.layers) {
        for (auto& w : l.weights) w = params[k++];
        for (auto& b : l.bias) b = params[k++];
    }
}

std::vector<bool> bias_mask(const CoefficientNet& net) {
    std::vector<bool> mask;
    mask.reserve(net.parameter_count());
    for (const auto& l : net.layers) {
        mask.insert(mask.end(), l.weights.size(), false);
        mask.insert(mask.end(), l.bias.size(), true);
    }
    return mask;
}

namespace {

CoefficientNet shaped(const NormalizationStats& stats, const NetworkShape& shape) {
    CoefficientNet net{stats, {}, shape.degree, shape.output_scale, shape.taylor_weighting};
    std::size_t width = kFeatureCount;
    auto widths = shape.hidden;
    widths.push_back(shape.degree + 1);
    for (std::size_t out : widths) {
        if (out == 0) throw ConfigError("layer width must be positive");
        net.layers.push_back({width, out, std::vector<double>(width * out, 0.0), std::vector<double>(out, 0.0)});
        width = out;
    }
    return net;
}

}  // namespace

CoefficientNet zero_network(const NormalizationStats& stats, const NetworkShape& shape) {
    auto net = shaped(stats, shape);
    net.validate();
    return net;
}

CoefficientNet make_network(const NormalizationStats& stats, const NetworkShape& shape, std::uint64_t seed) {
    auto net = shaped(stats, shape);
    NormalStream stream(seed, 0);
    for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
        auto& layer = net.layers[l];
        const double range = 1.0 / std::sqrt(static_cast<double>(layer.in));
        for (auto& w : layer.weights) w = range * (2.0 * stream.next_uniform() - 1.0);
        for (auto& b : layer.bias) b = range * (2.0 * stream.next_uniform() - 1.0);
    }
    net.validate();
    return net;
}

CoefficientNet reference_network() {
    // Rows A0..A4, columns (a, sigma, theta, r0, tenor); exact zeros loaded as given.
    DenseLayer layer{kFeatureCount, 5,
                     {
                         2.47e-2, -1.189e-1, 1.3e-3, 3.99e-2, -9.94e-2,
                         -5.528e-1, 1.771e-1, -3.44e-2, 2.028e-1, -2.822e-1,
                         0.0, -6.9e-3, 0.0, 1.81e-2, 5.6e-3,
                         2.82e-2, -7.620e-2, 0.0, 1.50e-3, 0.0,
                         6.719e-1, -3.589e-1, 4.072e-1, -1.073e-1, -1.532,
                     },
                     {-0.2613, 0.8864, -8.5120, 8.6874, -0.5019}};
    CoefficientNet net{NormalizationStats::reference(), {layer}, 4, 1.0, false};
    net.validate();
    return net;
}

std::string serialize_network(const CoefficientNet& net) {
    net.validate();
    std::string out(kMagic);
    out += "\nstats\n";
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        out += std::string(kFeatureNames[i]) + ' ' + format_double(net.stats[i].mean) + ' ' +
               format_double(net.stats[i].stdev) + '\n';
    }
    out += "layers " + std::to_string(net.layers.size()) + '\n';
    for (const auto& l : net.layers) {
        out += "layer " + std::to_string(l.out) + ' ' + std::to_string(l.in) + '\n';
        for (std::size_t r = 0; r < l.out; ++r) {
            for (std::size_t c = 0; c < l.in; ++c) {
                if (c) out += ' ';
                out += format_double(l.weights[r * l.in + c]);
            }
            out += '\n';
        }
        out += "bias";
        for (double b : l.bias) out += ' ' + format_double(b);
        out += '\n';
    }
    out += "output_scale " + format_double(net.output_scale) + '\n';
    out += "degree " + std::to_string(net.degree) + '\n';
    out += std::string("taylor_weighting ") + (net.taylor_weighting ? "1" : "0") + '\n';
    return out;
}

namespace {

class TokenReader {
public:
    explicit TokenReader(std::string_view text) : in_(std::string(text)) {}

    std::string word() {
        std::string w;
        if (!(in_ >> w)) throw ConfigError("weight file truncated");
        return w;
    }
    void expect(std::string_view keyword) {
        const auto w = word();
        if (w != keyword) {
            throw ConfigError("weight file: expected '" + std::string(keyword) + "', found '" + w + "'");
        }
    }
    double number(std::string_view what) { return parse_double(word(), what); }
    std::size_t count(std::string_view what) {
        const double v = number(what);
        if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) {
            throw ConfigError("weight file: bad count for " + std::string(what));
        }
        return static_cast<std::size_t>(v);
    }
    bool at_end() {
        std::string w;
        return !(in_ >> w);
    }

private:
    std::istringstream in_;
};

}  // namespace

CoefficientNet parse_network(std::string_view text) {
    const auto eol = text.find('\n');
    if (text.substr(0, eol) != kMagic) throw ConfigError("not a coefficient-net weight file (bad header)");
    TokenReader rd(eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1));

    rd.expect("stats");
    std::array<Moments, kFeatureCount> moments{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        rd.expect(kFeatureNames[i]);
        moments[i].mean = rd.number("stats mean");
        moments[i].stdev = rd.number("stats stdev");
    }
    CoefficientNet net{NormalizationStats(moments), {}, 0, 1.0, false};

    rd.expect("layers");
    const std::size_t n_layers = rd.count("layers");
    for (std::size_t l = 0; l < n_layers; ++l) {
        rd.expect("layer");
        DenseLayer layer;
        layer.out = rd.count("layer rows");
        layer.in = rd.count("layer columns");
        layer.weights.resize(layer.out * layer.in);
        for (auto& w : layer.weights) w = rd.number("weight");
        rd.expect("bias");
        layer.bias.resize(layer.out);
        for (auto& b : layer.bias) b = rd.number("bias");
        net.layers.push_back(std::move(layer));
    }
    rd.expect("output_scale");
    net.output_scale = rd.number("output_scale");
    rd.expect("degree");
    net.degree = rd.count("degree");
    rd.expect("taylor_weighting");
    const auto flag = rd.word();
    if (flag != "0" && flag != "1") throw ConfigError("taylor_weighting must be 0 or 1");
    net.taylor_weighting = flag == "1";
    if (!rd.at_end()) throw ConfigError("trailing content in weight file");
    net.validate();
    return net;
}

GtfkResult corrected_evaluate(const ModelCalibration& calib, double tenor, const CoefficientNet& net,
                              const EngineSettings& settings, PricingMode mode) {
    const auto coeffs = forward(net, calib, tenor);
    const bool taylor = net.taylor_weighting;
    return gtfk_evaluate(calib, tenor, settings, mode,
                         [&coeffs, taylor](double x) { return correct_xbar(x, coeffs, taylor); });
}

double corrected_price(const ModelCalibration& calib, double tenor, const CoefficientNet& net,
                       const EngineSettings& settings, PricingMode mode) {
    return corrected_evaluate(calib, tenor, net, settings, mode).price;
}

}  // namespace bkgtfk
