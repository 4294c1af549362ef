#include "bkgtfk/cli/commands.hpp"

#include "bkgtfk/cli/results_csv.hpp"
#include "bkgtfk/cli/run_config.hpp"
#include "bkgtfk/errors.hpp"
#include "bkgtfk/format.hpp"
#include "bkgtfk/gtfk.hpp"
#include "bkgtfk/mc.hpp"
#include "bkgtfk/nn.hpp"
#include "bkgtfk/surface.hpp"
#include "bkgtfk/train.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

namespace bkgtfk::cli {

namespace fs = std::filesystem;

unsigned resolve_threads(int flag_value) {
    const unsigned all = std::max(1u, std::thread::hardware_concurrency());
    if (flag_value > 0) return static_cast<unsigned>(flag_value);
    if (flag_value == 0) return all;
    if (const char* env = std::getenv("BKGTFK_THREADS"); env && *env) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return all;
}

namespace {

struct CommonOptions {
    std::string config;
    std::string weights;
    std::string out = "bkgtfk-out";
    std::int64_t seed = -1;
    int threads = -1;
};

RunConfig load_run_config(const CommonOptions& opts) {
    RunConfig rc = opts.config.empty() ? RunConfig{} : RunConfig::load(opts.config);
    if (opts.seed >= 0) {
        rc.mc.seed = static_cast<std::uint64_t>(opts.seed);
        rc.train.seed = static_cast<std::uint64_t>(opts.seed);
    }
    if (!opts.weights.empty()) rc.weights = opts.weights;
    rc.validate();
    return rc;
}

CoefficientNet load_weights(const std::string& path) { return parse_network(read_file(path)); }

// ---------------------------------------------------------------- price

struct PriceOptions {
    double a = 0.0, sigma = 0.0, theta = 0.0, r0 = 0.0, tenor = 0.0;
    std::string method = "gtfk";
    std::string mode = "discount";
    std::int64_t paths = -1;
    std::int64_t steps_per_year = -1;
    double lambda = -1.0;
};

int cmd_price(const CommonOptions& common, const PriceOptions& po, std::ostream& out) {
    RunConfig rc = load_run_config(common);
    if (po.paths > 0) rc.mc.n_paths = static_cast<std::size_t>(po.paths);
    if (po.steps_per_year > 0) rc.mc.steps_per_year = static_cast<std::size_t>(po.steps_per_year);
    if (po.lambda >= 0.0) rc.engine.lambda = po.lambda;
    rc.validate();
    const unsigned threads = resolve_threads(common.threads);

    const ModelCalibration calib(po.a, po.theta, po.sigma, po.r0);
    const PricingMode mode = po.mode == "accumulation" ? PricingMode::accumulation : PricingMode::discount;

    nlohmann::ordered_json record;
    record["method"] = po.method;
    record["mode"] = to_string(mode);
    record["a"] = po.a;
    record["sigma"] = po.sigma;
    record["theta"] = po.theta;
    record["r0"] = po.r0;
    record["tenor"] = po.tenor;

    if (po.method == "mc") {
        const auto est = mode == PricingMode::discount ? mc_zcb_price(calib, po.tenor, rc.mc, threads)
                                                       : mc_accumulation(calib, po.tenor, rc.mc, threads);
        record["price"] = est.value;
        record["stderr"] = est.std_error;
        record["n_paths"] = est.n_paths;
        record["seed"] = est.seed;
    } else {
        GtfkResult res;
        if (po.method == "corrected") {
            if (rc.weights.empty()) throw UsageError("method 'corrected' needs --weights");
            res = corrected_evaluate(calib, po.tenor, load_weights(rc.weights), rc.engine, mode);
        } else {
            res = gtfk_evaluate(calib, po.tenor, rc.engine, mode);
        }
        record["price"] = res.price;
        record["x_bar"] = res.centre.x_bar;
        record["alpha"] = res.centre.alpha;
        record["omega_sq"] = res.centre.omega_sq;
        record["lambda"] = res.centre.lambda;
        record["iterations"] = res.centre.iterations;
        record["xbar_mean"] = res.moments.mean;
        record["xbar_variance"] = res.moments.variance;
        record["drift_dispersion"] = res.moments.drift_dispersion;
    }
    out << record.dump() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SelectedGrid {
    CalibrationGrid grid;
    std::vector<GridSplit> splits;
};

SelectedGrid select_points(const RunConfig& rc) {
    const auto pair = build_grid(rc.grid, rc.holdout);
    std::vector<std::pair<GridPoint, GridSplit>> tagged;
    if (rc.subset != SweepSubset::holdout)
        for (const auto& p : pair.training.points()) tagged.emplace_back(p, GridSplit::training);
    if (rc.subset != SweepSubset::training)
        for (const auto& p : pair.holdout.points()) tagged.emplace_back(p, GridSplit::holdout);
    std::sort(tagged.begin(), tagged.end(), [](const auto& l, const auto& r) { return l.first.index < r.first.index; });

    std::vector<GridPoint> points;
    std::vector<GridSplit> splits;
    for (auto& [p, s] : tagged) {
        points.push_back(p);
        splits.push_back(s);
    }
    if (points.empty()) throw ConfigError("the selected sweep subset is empty");
    const auto tag = rc.subset == SweepSubset::holdout ? GridSplit::holdout : GridSplit::training;
    return {CalibrationGrid(std::move(points), tag), std::move(splits)};
}

int cmd_sweep(const CommonOptions& common, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load_run_config(common);
    const unsigned threads = resolve_threads(common.threads);
    const auto selected = select_points(rc);

    SurfacePricers pricers;
    const auto engine = rc.engine;
    pricers.model = [engine](const GridPoint& p) { return gtfk_price(p.calib, p.tenor, engine); };
    if (rc.report_accumulation) {
        pricers.inverse_accumulation = [engine](const GridPoint& p) {
            return 1.0 / gtfk_price(p.calib, p.tenor, engine, PricingMode::accumulation);
        };
    }
    if (!rc.weights.empty()) {
        const auto net = load_weights(rc.weights);
        pricers.corrected = [engine, net](const GridPoint& p) {
            return corrected_price(p.calib, p.tenor, net, engine);
        };
    }

    const auto surface = error_surface(selected.grid, pricers, rc.mc, threads);
    const auto echo = rc.echo();
    const fs::path dir(common.out);
    write_file_atomic(dir / "results.csv", results_csv(surface, selected.splits, echo));
    for (auto axes : {MarginalAxes::a_sigma, MarginalAxes::a_tenor, MarginalAxes::sigma_tenor}) {
        write_file_atomic(dir / ("marginal_" + to_string(axes) + ".csv"),
                          marginal_csv(marginal(surface, axes), axes, surface.has_corrected, echo));
    }

    double sum = 0.0, sum_corr = 0.0;
    std::size_t ok = 0;
    for (const auto& r : surface.rows) {
        if (!r.failure.empty()) continue;
        ++ok;
        sum += std::abs(r.rel_err_gtfk);
        if (r.rel_err_corrected) sum_corr += std::abs(*r.rel_err_corrected);
    }
    out << "points " << surface.rows.size() << ", failures " << surface.failures();
    if (ok) {
        out << ", mean |rel_err_gtfk| " << format_double(sum / static_cast<double>(ok));
        if (surface.has_corrected) out << ", mean |rel_err_corrected| " << format_double(sum_corr / static_cast<double>(ok));
    }
    out << "\nwrote " << (dir / "results.csv").string() << '\n';
    if (surface.failures()) err << "warning: " << surface.failures() << " grid point(s) failed; see the failure column\n";
    return kExitOk;
}

// ---------------------------------------------------------------- train

std::string history_csv(const std::string& echo, double initial_loss, const std::vector<double>& history) {
    std::string csv;
    for (std::size_t pos = 0; pos < echo.size();) {
        const auto eol = echo.find('\n', pos);
        csv += "# " + echo.substr(pos, eol - pos) + '\n';
        pos = eol == std::string::npos ? echo.size() : eol + 1;
    }
    csv += "# initial_loss = " + format_double(initial_loss) + "\nepoch,loss\n";
    for (std::size_t e = 0; e < history.size(); ++e) {
        csv += std::to_string(e + 1) + ',' + format_double(history[e]) + '\n';
    }
    return csv;
}

int cmd_train(const CommonOptions& common, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load_run_config(common);
    const unsigned threads = resolve_threads(common.threads);
    const auto pair = build_grid(rc.grid, rc.holdout);
    const auto& training = pair.training;
    if (training.empty()) throw ConfigError("training grid is empty");

    std::vector<double> targets;
    std::vector<FeatureVector> samples;
    for (const auto& p : training.points()) {
        targets.push_back(mc_zcb_price(p.calib, p.tenor, rc.mc, threads).value);
        samples.push_back(features(p.calib, p.tenor));
    }
    const auto stats = rc.stats == StatsMode::frozen ? NormalizationStats::reference()
                                                     : NormalizationStats::from_samples(samples);
    const auto initial = make_network(stats, rc.network, rc.train.seed);

    const auto echo = rc.echo();
    const fs::path dir(common.out);
    write_file_atomic(dir / "config.txt", echo);
    out << echo;

    try {
        const auto result = train(initial, training, targets, rc.engine, rc.train, threads,
                                  [&err](std::size_t epoch, double loss) {
                                      if ((epoch + 1) % 10 == 0) {
                                          err << "epoch " << epoch + 1 << " loss " << format_double(loss) << '\n';
                                      }
                                  });
        write_file_atomic(dir / "weights.txt", serialize_network(result.net));
        write_file_atomic(dir / "loss_history.csv", history_csv(echo, result.initial_loss, result.history));
        out << "initial_loss = " << format_double(result.initial_loss) << '\n';
        out << "final_loss = "
            << format_double(result.history.empty() ? result.initial_loss : result.history.back()) << '\n';
    } catch (const TrainingDiverged& e) {
        write_file_atomic(dir / "loss_history.csv", history_csv(echo, std::nan(""), e.history()));
        throw;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- density

int cmd_density(const std::string& pre_path, const std::string& post_path, const std::string& out_dir,
                std::ostream& out) {
    const auto pre = parse_results_csv(read_file(pre_path));
    const auto post = parse_results_csv(read_file(post_path));
    std::vector<DensityCell> cells;
    try {
        cells = improvement_density(pre, post);
    } catch (const UsageError& e) {
        throw NumericError(e.what());  // data mismatch, not a command-line problem
    }
    const fs::path path = fs::path(out_dir) / "density.csv";
    write_file_atomic(path, density_csv(cells));
    out << "cells " << cells.size() << "\nwrote " << path.string() << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Black-Karasinski zero-coupon bond pricing: Monte Carlo, GTFK and network-corrected GTFK"};
    app.require_subcommand(1);

    CommonOptions common;
    const auto add_common = [&common](CLI::App* sub, bool with_weights) {
        sub->add_option("--config", common.config, "Run configuration file (key = value)");
        sub->add_option("--out", common.out, "Output directory");
        sub->add_option("--seed", common.seed, "Override mc.seed and train.seed")->check(CLI::NonNegativeNumber);
        sub->add_option("--threads", common.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
        if (with_weights) sub->add_option("--weights", common.weights, "Coefficient-net weight file");
    };

    PriceOptions po;
    auto* price = app.add_subcommand("price", "Price one zero-coupon bond");
    add_common(price, true);
    price->add_option("--a", po.a, "Mean-reversion speed")->required();
    price->add_option("--sigma", po.sigma, "Log-rate volatility")->required();
    price->add_option("--theta", po.theta, "Long-term target rate")->required();
    price->add_option("--r0", po.r0, "Initial short rate")->required();
    price->add_option("--tenor", po.tenor, "Maturity in years")->required();
    price->add_option("--method", po.method, "mc | gtfk | corrected")
        ->check(CLI::IsMember({"mc", "gtfk", "corrected"}));
    price->add_option("--mode", po.mode, "discount | accumulation")->check(CLI::IsMember({"discount", "accumulation"}));
    price->add_option("--paths", po.paths, "Monte Carlo paths");
    price->add_option("--steps-per-year", po.steps_per_year, "Monte Carlo time steps per year");
    price->add_option("--lambda", po.lambda, "Weight of the smeared term in the frequency equation");

    auto* sweep = app.add_subcommand("sweep", "Error surface of GTFK (and corrected) prices against Monte Carlo");
    add_common(sweep, true);
    auto* train_cmd = app.add_subcommand("train", "Train the coefficient network on the training grid");
    add_common(train_cmd, false);

    std::string pre_path, post_path;
    auto* density = app.add_subcommand("density", "Improvement density over (a, sigma) between two sweeps");
    density->add_option("--pre", pre_path, "Results CSV before correction")->required();
    density->add_option("--post", post_path, "Results CSV after correction")->required();
    density->add_option("--out", common.out, "Output directory");

    std::vector<std::string> argv_store{"bkgtfk"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (price->parsed()) return cmd_price(common, po, out);
        if (sweep->parsed()) return cmd_sweep(common, out, err);
        if (train_cmd->parsed()) return cmd_train(common, out, err);
        if (density->parsed()) return cmd_density(pre_path, post_path, common.out, out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace bkgtfk::cli
