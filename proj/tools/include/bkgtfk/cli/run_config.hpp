#pragma once

#include "bkgtfk/config.hpp"
#include "bkgtfk/grid.hpp"
#include "bkgtfk/gtfk.hpp"
#include "bkgtfk/mc.hpp"
#include "bkgtfk/nn.hpp"
#include "bkgtfk/train.hpp"

#include <string>

namespace bkgtfk::cli {

enum class StatsMode { frozen, recomputed };
enum class SweepSubset { all, training, holdout };

/// Everything a sweep or training run depends on. The output directory is deliberately
/// not part of it: relocating a run does not change its results.
struct RunConfig {
    GridSpec grid;
    HoldoutSpec holdout;
    McConfig mc;
    EngineSettings engine;
    TrainConfig train;
    NetworkShape network;
    StatsMode stats = StatsMode::recomputed;
    SweepSubset subset = SweepSubset::all;
    bool report_accumulation = true;
    /// Weight file used by `sweep` for the corrected columns; empty for none.
    std::string weights;

    /// Fills from `key = value` text; unknown keys are a ConfigError.
    static RunConfig from_config(const KeyValueConfig& cfg);
    static RunConfig load(const std::string& path);

    KeyValueConfig to_config() const;
    /// Every key, sorted, one `key = value` per line.
    std::string echo() const;

    void validate() const;
};

std::string to_string(StatsMode mode);
std::string to_string(SweepSubset subset);

}  // namespace bkgtfk::cli
