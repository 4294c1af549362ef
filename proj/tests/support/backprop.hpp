#pragma once

// Reverse-mode gradient of L = sum_k w_k A_k for a CoefficientNet, written independently of
// the library's forward pass. Parameter order matches get_parameters.

#include "bkgtfk/nn.hpp"

#include <cmath>
#include <vector>

namespace bkgtfk::test_support {

inline std::vector<double> backprop_gradient(const CoefficientNet& net, const FeatureVector& z,
                                             const std::vector<double>& w) {
    std::vector<std::vector<double>> acts;
    acts.emplace_back(z.begin(), z.end());
    for (const auto& l : net.layers) {
        const auto& v = acts.back();
        std::vector<double> h(l.out);
        for (std::size_t r = 0; r < l.out; ++r) {
            double s = l.bias[r];
            for (std::size_t c = 0; c < l.in; ++c) s += l.weights[r * l.in + c] * v[c];
            h[r] = std::tanh(s);
        }
        acts.push_back(std::move(h));
    }

    std::vector<double> upstream(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) upstream[k] = net.output_scale * w[k];

    std::vector<std::vector<double>> grads(net.layers.size());
    for (std::size_t li = net.layers.size(); li-- > 0;) {
        const auto& l = net.layers[li];
        const auto& in = acts[li];
        const auto& out = acts[li + 1];
        std::vector<double> delta(l.out);
        for (std::size_t r = 0; r < l.out; ++r) delta[r] = upstream[r] * (1.0 - out[r] * out[r]);
        auto& g = grads[li];
        g.assign(l.out * l.in + l.out, 0.0);
        for (std::size_t r = 0; r < l.out; ++r) {
            for (std::size_t c = 0; c < l.in; ++c) g[r * l.in + c] = delta[r] * in[c];
            g[l.out * l.in + r] = delta[r];
        }
        std::vector<double> next(l.in, 0.0);
        for (std::size_t c = 0; c < l.in; ++c)
            for (std::size_t r = 0; r < l.out; ++r) next[c] += l.weights[r * l.in + c] * delta[r];
        upstream = std::move(next);
    }

    std::vector<double> flat;
    for (const auto& g : grads) flat.insert(flat.end(), g.begin(), g.end());
    return flat;
}

}  // namespace bkgtfk::test_support
