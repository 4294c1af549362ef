#pragma once

#include "bkgtfk/grid.hpp"
#include "bkgtfk/gtfk.hpp"
#include "bkgtfk/nn.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bkgtfk {

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t epochs = 200;
    /// Per-component clamp of the gradient.
    double value_cap = 1.0;
    /// Euclidean norm cap applied after the clamp.
    double norm_cap = 5.0;
    /// Central finite-difference step.
    double fd_step = 1e-5;
    /// Seeds network initialization.
    std::uint64_t seed = 11;
    /// Ablation: update biases only.
    bool bias_only = false;

    void validate() const;
    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Mean absolute difference. Throws UsageError on empty input or length mismatch.
double l1_loss(std::span<const double> predictions, std::span<const double> targets);

/// Clamp each component to +-value_cap, then rescale so the Euclidean norm is <= norm_cap.
std::vector<double> clip_gradient(std::span<const double> gradient, double value_cap, double norm_cap);

using Objective = std::function<double(std::span<const double>)>;

/// Central differences (f(p + h e_i) - f(p - h e_i)) / 2h, components evaluated in parallel.
/// Throws NumericError naming the parameter whose probe is non-finite.
std::vector<double> fd_gradient(const Objective& objective, std::span<const double> params, double h,
                                unsigned threads = 1);

/// Training loss diverged; carries the history recorded up to that point.
class TrainingDiverged : public NumericError {
public:
    TrainingDiverged(const std::string& what, std::vector<double> history)
        : NumericError(what), history_(std::move(history)) {}
    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

struct TrainResult {
    CoefficientNet net;
    double initial_loss = 0.0;
    /// Training loss after each epoch's update.
    std::vector<double> history;
};

/// Mean L1 distance between corrected prices and targets over the grid.
double training_loss(const CoefficientNet& net, const CalibrationGrid& grid, std::span<const double> targets,
                     const EngineSettings& settings);

/// Plain gradient descent on training_loss with finite-difference, clipped gradients.
TrainResult train(CoefficientNet net, const CalibrationGrid& grid, std::span<const double> targets,
                  const EngineSettings& settings, const TrainConfig& cfg, unsigned threads = 1,
                  const std::function<void(std::size_t, double)>& on_epoch = {});

}  // namespace bkgtfk
