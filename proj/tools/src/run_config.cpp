#include "bkgtfk/cli/run_config.hpp"

#include "bkgtfk/errors.hpp"
#include "bkgtfk/format.hpp"

namespace bkgtfk::cli {

namespace {

const std::vector<std::string>& own_keys() {
    static const std::vector<std::string> keys = {
        "mc.paths", "mc.steps_per_year", "mc.seed", "mc.antithetic",
        "quad.nodes", "quad.half_width", "quad.time_nodes",
        "engine.lambda", "solver.tol", "solver.max_iter",
        "train.learning_rate", "train.epochs", "train.value_cap", "train.norm_cap",
        "train.fd_step", "train.seed", "train.bias_only",
        "net.hidden", "net.degree", "net.output_scale", "net.taylor_weighting", "net.stats",
        "sweep.subset", "sweep.accumulation", "weights",
    };
    return keys;
}

std::size_t get_count(const KeyValueConfig& cfg, const std::string& key, std::size_t fallback) {
    const auto v = cfg.get_int(key, static_cast<std::int64_t>(fallback));
    if (v < 0) throw ConfigError("config key '" + key + "' must be non-negative");
    return static_cast<std::size_t>(v);
}

std::vector<std::size_t> parse_widths(const std::string& text) {
    std::vector<std::size_t> out;
    if (text == "none" || text.empty()) return out;
    KeyValueConfig tmp;
    tmp.set("net.hidden", text);
    for (double w : tmp.get_doubles("net.hidden")) {
        if (!(w >= 1.0) || w != static_cast<double>(static_cast<std::size_t>(w))) {
            throw ConfigError("net.hidden widths must be positive integers");
        }
        out.push_back(static_cast<std::size_t>(w));
    }
    return out;
}

}  // namespace

std::string to_string(StatsMode mode) { return mode == StatsMode::frozen ? "frozen" : "recomputed"; }

std::string to_string(SweepSubset subset) {
    switch (subset) {
        case SweepSubset::all: return "all";
        case SweepSubset::training: return "training";
        case SweepSubset::holdout: return "holdout";
    }
    return "all";
}

RunConfig RunConfig::from_config(const KeyValueConfig& cfg) {
    auto known = grid_config_keys();
    known.insert(known.end(), own_keys().begin(), own_keys().end());
    if (const auto unknown = cfg.unknown_keys(known); !unknown.empty()) {
        throw ConfigError("unknown config key '" + unknown.front() + "'");
    }

    RunConfig rc;
    rc.grid = grid_spec_from_config(cfg, rc.grid);
    rc.holdout = holdout_spec_from_config(cfg, rc.holdout);

    rc.mc.n_paths = get_count(cfg, "mc.paths", rc.mc.n_paths);
    rc.mc.steps_per_year = get_count(cfg, "mc.steps_per_year", rc.mc.steps_per_year);
    rc.mc.seed = cfg.get_uint64("mc.seed", rc.mc.seed);
    rc.mc.antithetic = cfg.get_bool("mc.antithetic", rc.mc.antithetic);

    rc.engine.quad.nodes = get_count(cfg, "quad.nodes", rc.engine.quad.nodes);
    rc.engine.quad.half_width = cfg.get_double("quad.half_width", rc.engine.quad.half_width);
    rc.engine.quad.time_nodes = get_count(cfg, "quad.time_nodes", rc.engine.quad.time_nodes);
    rc.engine.lambda = cfg.get_double("engine.lambda", rc.engine.lambda);
    rc.engine.solver.tol = cfg.get_double("solver.tol", rc.engine.solver.tol);
    rc.engine.solver.max_iter = get_count(cfg, "solver.max_iter", rc.engine.solver.max_iter);

    rc.train.learning_rate = cfg.get_double("train.learning_rate", rc.train.learning_rate);
    rc.train.epochs = get_count(cfg, "train.epochs", rc.train.epochs);
    rc.train.value_cap = cfg.get_double("train.value_cap", rc.train.value_cap);
    rc.train.norm_cap = cfg.get_double("train.norm_cap", rc.train.norm_cap);
    rc.train.fd_step = cfg.get_double("train.fd_step", rc.train.fd_step);
    rc.train.seed = cfg.get_uint64("train.seed", rc.train.seed);
    rc.train.bias_only = cfg.get_bool("train.bias_only", rc.train.bias_only);

    if (cfg.contains("net.hidden")) rc.network.hidden = parse_widths(cfg.get_string("net.hidden"));
    rc.network.degree = get_count(cfg, "net.degree", rc.network.degree);
    rc.network.output_scale = cfg.get_double("net.output_scale", rc.network.output_scale);
    rc.network.taylor_weighting = cfg.get_bool("net.taylor_weighting", rc.network.taylor_weighting);

    const auto stats = cfg.get_string("net.stats", to_string(rc.stats));
    if (stats == "frozen") rc.stats = StatsMode::frozen;
    else if (stats == "recomputed") rc.stats = StatsMode::recomputed;
    else throw ConfigError("net.stats must be 'frozen' or 'recomputed'");

    const auto subset = cfg.get_string("sweep.subset", to_string(rc.subset));
    if (subset == "all") rc.subset = SweepSubset::all;
    else if (subset == "training") rc.subset = SweepSubset::training;
    else if (subset == "holdout") rc.subset = SweepSubset::holdout;
    else throw ConfigError("sweep.subset must be all, training or holdout");

    rc.report_accumulation = cfg.get_bool("sweep.accumulation", rc.report_accumulation);
    rc.weights = cfg.get_string("weights", rc.weights);
    rc.validate();
    return rc;
}

RunConfig RunConfig::load(const std::string& path) { return from_config(KeyValueConfig::load(path)); }

KeyValueConfig RunConfig::to_config() const {
    KeyValueConfig cfg;
    write_grid_spec(cfg, grid);
    write_holdout_spec(cfg, holdout);
    cfg.set("mc.paths", std::to_string(mc.n_paths));
    cfg.set("mc.steps_per_year", std::to_string(mc.steps_per_year));
    cfg.set("mc.seed", std::to_string(mc.seed));
    cfg.set("mc.antithetic", mc.antithetic ? "true" : "false");
    cfg.set("quad.nodes", std::to_string(engine.quad.nodes));
    cfg.set("quad.half_width", format_double(engine.quad.half_width));
    cfg.set("quad.time_nodes", std::to_string(engine.quad.time_nodes));
    cfg.set("engine.lambda", format_double(engine.lambda));
    cfg.set("solver.tol", format_double(engine.solver.tol));
    cfg.set("solver.max_iter", std::to_string(engine.solver.max_iter));
    cfg.set("train.learning_rate", format_double(train.learning_rate));
    cfg.set("train.epochs", std::to_string(train.epochs));
    cfg.set("train.value_cap", format_double(train.value_cap));
    cfg.set("train.norm_cap", format_double(train.norm_cap));
    cfg.set("train.fd_step", format_double(train.fd_step));
    cfg.set("train.seed", std::to_string(train.seed));
    cfg.set("train.bias_only", train.bias_only ? "true" : "false");
    std::string hidden;
    for (std::size_t i = 0; i < network.hidden.size(); ++i) {
        if (i) hidden += ',';
        hidden += std::to_string(network.hidden[i]);
    }
    cfg.set("net.hidden", hidden.empty() ? "none" : hidden);
    cfg.set("net.degree", std::to_string(network.degree));
    cfg.set("net.output_scale", format_double(network.output_scale));
    cfg.set("net.taylor_weighting", network.taylor_weighting ? "true" : "false");
    cfg.set("net.stats", to_string(stats));
    cfg.set("sweep.subset", to_string(subset));
    cfg.set("sweep.accumulation", report_accumulation ? "true" : "false");
    cfg.set("weights", weights);
    return cfg;
}

std::string RunConfig::echo() const {
    const auto cfg = to_config();
    std::string out;
    for (const auto& [key, value] : cfg.entries()) out += key + " = " + value + '\n';
    return out;
}

void RunConfig::validate() const {
    mc.validate();
    engine.validate();
    train.validate();
    if (!(network.output_scale > 0.0 && network.output_scale <= 1.0)) {
        throw ConfigError("net.output_scale must lie in (0, 1]");
    }
    if (!(holdout.fraction >= 0.0 && holdout.fraction <= 1.0)) {
        throw ConfigError("holdout.fraction must lie in [0, 1]");
    }
}

}  // namespace bkgtfk::cli
