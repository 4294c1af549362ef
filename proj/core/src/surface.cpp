#include "bkgtfk/surface.hpp"

#include "bkgtfk/errors.hpp"
#include "bkgtfk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace bkgtfk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string one_line(std::string s) {
    for (auto& c : s) {
        if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
    }
    return s;
}

double median_of_distinct(std::vector<double> values) {
    if (values.empty()) throw UsageError("quadrant classification needs at least one value");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::size_t ErrorSurface::failures() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const SurfaceRow& r) { return !r.failure.empty(); }));
}

ErrorSurface error_surface(const CalibrationGrid& grid, const SurfacePricers& pricers,
                           const McConfig& oracle, unsigned threads) {
    if (grid.empty()) throw UsageError("error_surface needs a non-empty grid");
    if (!pricers.model) throw UsageError("error_surface needs a model pricer");
    oracle.validate();

    ErrorSurface surface;
    surface.has_corrected = static_cast<bool>(pricers.corrected);
    surface.has_inverse_accumulation = static_cast<bool>(pricers.inverse_accumulation);
    surface.rows.reserve(grid.size());
    for (const auto& p : grid.points()) surface.rows.push_back(SurfaceRow{p});

    const auto& points = grid.points();
    const unsigned outer = points.size() >= std::max(threads, 1u) ? threads : 1u;
    const unsigned inner = outer == 1u ? threads : 1u;

    parallel_for(points.size(), outer, [&](std::size_t i) {
        auto& row = surface.rows[i];
        row.seed = oracle.seed;
        row.mc_price = row.mc_stderr = row.gtfk_price = row.rel_err_gtfk = kNaN;
        if (surface.has_corrected) row.corrected_price = row.rel_err_corrected = kNaN;
        if (surface.has_inverse_accumulation) row.gtfk_inv_accumulation = kNaN;
        std::string stage = "mc";
        try {
            const auto mc = mc_zcb_price(row.point.calib, row.point.tenor, oracle, inner);
            row.mc_price = mc.value;
            row.mc_stderr = mc.std_error;
            stage = "gtfk";
            row.gtfk_price = pricers.model(row.point);
            row.rel_err_gtfk = (row.gtfk_price - row.mc_price) / row.mc_price;
            if (surface.has_corrected) {
                stage = "corrected";
                row.corrected_price = pricers.corrected(row.point);
                row.rel_err_corrected = (*row.corrected_price - row.mc_price) / row.mc_price;
            }
        } catch (const std::exception& e) {
            row.failure = one_line(stage + ": " + e.what());
            return;
        }
        if (surface.has_inverse_accumulation) {
            // Informational column: an overflowing accumulation leaves NaN without failing the row.
            try {
                row.gtfk_inv_accumulation = pricers.inverse_accumulation(row.point);
            } catch (const Error&) {
            }
        }
    });
    return surface;
}

std::string to_string(MarginalAxes axes) {
    switch (axes) {
        case MarginalAxes::a_sigma: return "a_sigma";
        case MarginalAxes::a_tenor: return "a_tenor";
        case MarginalAxes::sigma_tenor: return "sigma_tenor";
    }
    return "unknown";
}

std::vector<MarginalCell> marginal(const ErrorSurface& surface, MarginalAxes axes) {
    struct Acc {
        std::size_t n = 0;
        double gtfk = 0.0;
        double corrected = 0.0;
    };
    std::map<std::pair<double, double>, Acc> cells;
    for (const auto& row : surface.rows) {
        if (!row.failure.empty()) continue;
        const auto& p = row.point;
        std::pair<double, double> key;
        switch (axes) {
            case MarginalAxes::a_sigma: key = {p.calib.a(), p.calib.sigma()}; break;
            case MarginalAxes::a_tenor: key = {p.calib.a(), p.tenor}; break;
            case MarginalAxes::sigma_tenor: key = {p.calib.sigma(), p.tenor}; break;
        }
        auto& acc = cells[key];
        ++acc.n;
        acc.gtfk += std::abs(row.rel_err_gtfk);
        if (row.rel_err_corrected) acc.corrected += std::abs(*row.rel_err_corrected);
    }
    std::vector<MarginalCell> out;
    out.reserve(cells.size());
    for (const auto& [key, acc] : cells) {
        MarginalCell cell{key.first, key.second, acc.n, acc.gtfk / static_cast<double>(acc.n), {}};
        if (surface.has_corrected) cell.mean_abs_corrected = acc.corrected / static_cast<double>(acc.n);
        out.push_back(cell);
    }
    return out;
}

QuadrantClassifier::QuadrantClassifier(std::vector<double> a_values, std::vector<double> sigma_values)
    : a_median_(median_of_distinct(std::move(a_values))),
      sigma_median_(median_of_distinct(std::move(sigma_values))) {}

QuadrantClassifier QuadrantClassifier::from_points(const std::vector<GridPoint>& points) {
    std::vector<double> as, sigmas;
    for (const auto& p : points) {
        as.push_back(p.calib.a());
        sigmas.push_back(p.calib.sigma());
    }
    return QuadrantClassifier(std::move(as), std::move(sigmas));
}

Quadrant QuadrantClassifier::classify(double a, double sigma) const {
    if (a > a_median_ && sigma > sigma_median_) return Quadrant::upper_right;
    if (a < a_median_ && sigma < sigma_median_) return Quadrant::lower_left;
    return Quadrant::mixed;
}

}  // namespace bkgtfk
