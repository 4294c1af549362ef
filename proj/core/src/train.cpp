#include "bkgtfk/train.hpp"

#include "bkgtfk/errors.hpp"
#include "bkgtfk/format.hpp"
#include "bkgtfk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bkgtfk {

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("train.learning_rate must be finite and >= 0");
    }
    if (!(value_cap > 0.0) || !(norm_cap > 0.0)) throw ConfigError("gradient caps must be positive");
    if (!(fd_step > 0.0)) throw ConfigError("train.fd_step must be positive");
}

double l1_loss(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) {
        throw UsageError("l1_loss: " + std::to_string(predictions.size()) + " predictions vs " +
                         std::to_string(targets.size()) + " targets");
    }
    if (predictions.empty()) throw UsageError("l1_loss needs at least one element");
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) sum += std::abs(predictions[i] - targets[i]);
    return sum / static_cast<double>(predictions.size());
}

std::vector<double> clip_gradient(std::span<const double> gradient, double value_cap, double norm_cap) {
    if (!(value_cap > 0.0) || !(norm_cap > 0.0)) throw UsageError("clip caps must be positive");
    std::vector<double> g(gradient.begin(), gradient.end());
    double sq = 0.0;
    for (auto& x : g) {
        x = std::clamp(x, -value_cap, value_cap);
        sq += x * x;
    }
    const double norm = std::sqrt(sq);
    if (norm > norm_cap) {
        const double scale = norm_cap / norm;
        for (auto& x : g) x *= scale;
    }
    return g;
}

std::vector<double> fd_gradient(const Objective& objective, std::span<const double> params, double h,
                                unsigned threads) {
    if (!(h > 0.0)) throw UsageError("finite-difference step must be positive");
    std::vector<double> grad(params.size());
    parallel_for(params.size(), threads, [&](std::size_t i) {
        std::vector<double> probe(params.begin(), params.end());
        probe[i] = params[i] + h;
        const double up = objective(probe);
        probe[i] = params[i] - h;
        const double down = objective(probe);
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw NumericError("non-finite objective when probing parameter " + std::to_string(i));
        }
        grad[i] = (up - down) / (2.0 * h);
    });
    return grad;
}

double training_loss(const CoefficientNet& net, const CalibrationGrid& grid, std::span<const double> targets,
                     const EngineSettings& settings) {
    if (targets.size() != grid.size()) throw UsageError("one target per training point is required");
    std::vector<double> prices(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& p = grid.points()[i];
        prices[i] = corrected_price(p.calib, p.tenor, net, settings);
        if (!std::isfinite(prices[i])) {
            throw NumericError("non-finite corrected price at training point " + std::to_string(p.index));
        }
    }
    return l1_loss(prices, targets);
}

TrainResult train(CoefficientNet net, const CalibrationGrid& grid, std::span<const double> targets,
                  const EngineSettings& settings, const TrainConfig& cfg, unsigned threads,
                  const std::function<void(std::size_t, double)>& on_epoch) {
    cfg.validate();
    net.validate();
    if (grid.empty()) throw UsageError("training grid is empty");

    TrainResult result{net, 0.0, {}};
    auto params = get_parameters(net);
    const auto mask = bias_mask(net);

    const Objective objective = [&](std::span<const double> p) {
        CoefficientNet trial = net;
        set_parameters(trial, p);
        try {
            return training_loss(trial, grid, targets, settings);
        } catch (const SolverError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    result.initial_loss = training_loss(net, grid, targets, settings);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<double> grad;
        try {
            grad = fd_gradient(objective, params, cfg.fd_step, threads);
        } catch (const NumericError& e) {
            throw TrainingDiverged("epoch " + std::to_string(epoch) + ": " + e.what(), result.history);
        }
        if (cfg.bias_only) {
            for (std::size_t i = 0; i < grad.size(); ++i)
                if (!mask[i]) grad[i] = 0.0;
        }
        grad = clip_gradient(grad, cfg.value_cap, cfg.norm_cap);
        for (std::size_t i = 0; i < params.size(); ++i) params[i] -= cfg.learning_rate * grad[i];

        double loss = 0.0;
        try {
            CoefficientNet trial = net;
            set_parameters(trial, params);
            loss = training_loss(trial, grid, targets, settings);
        } catch (const Error& e) {
            throw TrainingDiverged("epoch " + std::to_string(epoch) + ": " + e.what(), result.history);
        }
        if (!std::isfinite(loss)) {
            throw TrainingDiverged("epoch " + std::to_string(epoch) + ": non-finite training loss",
                                   result.history);
        }
        result.history.push_back(loss);
        if (on_epoch) on_epoch(epoch, loss);
    }
    set_parameters(result.net, params);
    return result;
}

}  // namespace bkgtfk
