#pragma once

#include "bkgtfk/surface.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bkgtfk::cli {

/// Results CSV: `# key = value` config echo lines, a header row, one row per grid point.
///
/// Columns: index, split, a, sigma, theta, r0, tenor, mc_price, mc_stderr, gtfk_price,
/// [gtfk_inv_accumulation], [corrected_price], rel_err_gtfk, [rel_err_corrected], seed, failure.
/// Bracketed columns are present only when the sweep produced them.
std::string results_csv(const ErrorSurface& surface, const std::vector<GridSplit>& splits,
                        std::string_view config_echo);

std::string marginal_csv(const std::vector<MarginalCell>& cells, MarginalAxes axes, bool has_corrected,
                         std::string_view config_echo);

/// Columns of a results CSV needed downstream.
struct ResultRecord {
    double a = 0.0;
    double sigma = 0.0;
    double theta = 0.0;
    double r0 = 0.0;
    double tenor = 0.0;
    double mc_price = 0.0;
    double rel_err_gtfk = 0.0;
    std::optional<double> rel_err_corrected;
    bool failed = false;
};

struct ResultsTable {
    std::string echo;
    std::vector<ResultRecord> rows;
    bool has_corrected = false;
};

ResultsTable parse_results_csv(std::string_view text);

struct DensityCell {
    double a = 0.0;
    double sigma = 0.0;
    std::size_t count = 0;
    std::size_t improved = 0;
    double density = 0.0;
};

/// Per (a, sigma) cell, the fraction of points where the post run's error magnitude is
/// strictly below the pre run's GTFK error magnitude. The post run's error is its
/// corrected column when present, otherwise its GTFK column. Throws UsageError when the two
/// tables do not cover the same grid.
std::vector<DensityCell> improvement_density(const ResultsTable& pre, const ResultsTable& post);

std::string density_csv(const std::vector<DensityCell>& cells);

}  // namespace bkgtfk::cli
