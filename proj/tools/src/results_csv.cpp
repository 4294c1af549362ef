#include "bkgtfk/cli/results_csv.hpp"

#include "bkgtfk/errors.hpp"
#include "bkgtfk/format.hpp"

#include <cmath>
#include <map>

namespace bkgtfk::cli {

namespace {

std::string commented(std::string_view echo) {
    std::string out;
    std::size_t pos = 0;
    while (pos < echo.size()) {
        auto eol = echo.find('\n', pos);
        if (eol == std::string_view::npos) eol = echo.size();
        out += "# ";
        out += echo.substr(pos, eol - pos);
        out += '\n';
        pos = eol + 1;
    }
    return out;
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string("nan"); }

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

const char* axis_name(MarginalAxes axes, bool first) {
    switch (axes) {
        case MarginalAxes::a_sigma: return first ? "a" : "sigma";
        case MarginalAxes::a_tenor: return first ? "a" : "tenor";
        case MarginalAxes::sigma_tenor: return first ? "sigma" : "tenor";
    }
    return "";
}

}  // namespace

std::string results_csv(const ErrorSurface& surface, const std::vector<GridSplit>& splits,
                        std::string_view config_echo) {
    if (splits.size() != surface.rows.size()) throw UsageError("one split tag per surface row is required");
    std::string out = commented(config_echo);
    out += "index,split,a,sigma,theta,r0,tenor,mc_price,mc_stderr,gtfk_price";
    if (surface.has_inverse_accumulation) out += ",gtfk_inv_accumulation";
    if (surface.has_corrected) out += ",corrected_price";
    out += ",rel_err_gtfk";
    if (surface.has_corrected) out += ",rel_err_corrected";
    out += ",seed,failure\n";

    for (std::size_t i = 0; i < surface.rows.size(); ++i) {
        const auto& r = surface.rows[i];
        out += std::to_string(r.point.index) + ',' + to_string(splits[i]);
        for (double v : features(r.point.calib, r.point.tenor)) out += ',' + format_double(v);
        out += ',' + format_double(r.mc_price) + ',' + format_double(r.mc_stderr) + ',' + format_double(r.gtfk_price);
        if (surface.has_inverse_accumulation) out += ',' + opt(r.gtfk_inv_accumulation);
        if (surface.has_corrected) out += ',' + opt(r.corrected_price);
        out += ',' + format_double(r.rel_err_gtfk);
        if (surface.has_corrected) out += ',' + opt(r.rel_err_corrected);
        out += ',' + std::to_string(r.seed) + ',' + r.failure + '\n';
    }
    return out;
}

std::string marginal_csv(const std::vector<MarginalCell>& cells, MarginalAxes axes, bool has_corrected,
                         std::string_view config_echo) {
    std::string out = commented(config_echo);
    out += std::string(axis_name(axes, true)) + ',' + axis_name(axes, false) + ",count,mean_abs_rel_err_gtfk";
    if (has_corrected) out += ",mean_abs_rel_err_corrected";
    out += '\n';
    for (const auto& c : cells) {
        out += format_double(c.x) + ',' + format_double(c.y) + ',' + std::to_string(c.count) + ',' +
               format_double(c.mean_abs_gtfk);
        if (has_corrected) out += ',' + opt(c.mean_abs_corrected);
        out += '\n';
    }
    return out;
}

ResultsTable parse_results_csv(std::string_view text) {
    ResultsTable table;
    std::map<std::string, std::size_t> col;
    bool have_header = false;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.front() == '#') {
            line.remove_prefix(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            table.echo += std::string(line) + '\n';
            continue;
        }
        const auto fields = split_fields(line);
        if (!have_header) {
            for (std::size_t i = 0; i < fields.size(); ++i) col[std::string(fields[i])] = i;
            for (const char* need : {"a", "sigma", "theta", "r0", "tenor", "mc_price", "rel_err_gtfk", "failure"}) {
                if (!col.count(need)) throw UsageError(std::string("results CSV lacks column '") + need + "'");
            }
            table.has_corrected = col.count("rel_err_corrected") != 0;
            have_header = true;
            continue;
        }
        if (fields.size() != col.size()) {
            throw UsageError("results CSV line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " + std::to_string(col.size()));
        }
        const auto num = [&](const char* name) { return parse_double(fields[col.at(name)], name); };
        ResultRecord r;
        r.a = num("a");
        r.sigma = num("sigma");
        r.theta = num("theta");
        r.r0 = num("r0");
        r.tenor = num("tenor");
        r.mc_price = num("mc_price");
        r.rel_err_gtfk = num("rel_err_gtfk");
        if (table.has_corrected) r.rel_err_corrected = num("rel_err_corrected");
        r.failed = !fields[col.at("failure")].empty();
        table.rows.push_back(r);
    }
    if (!have_header) throw UsageError("results CSV has no header row");
    return table;
}

std::vector<DensityCell> improvement_density(const ResultsTable& pre, const ResultsTable& post) {
    if (pre.rows.size() != post.rows.size()) {
        throw UsageError("results files cover different grids (" + std::to_string(pre.rows.size()) + " vs " +
                         std::to_string(post.rows.size()) + " rows)");
    }
    std::map<std::pair<double, double>, DensityCell> cells;
    for (std::size_t i = 0; i < pre.rows.size(); ++i) {
        const auto& p = pre.rows[i];
        const auto& q = post.rows[i];
        if (p.a != q.a || p.sigma != q.sigma || p.theta != q.theta || p.r0 != q.r0 || p.tenor != q.tenor) {
            throw UsageError("results files cover different grids (row " + std::to_string(i) + " differs)");
        }
        auto& cell = cells[{p.a, p.sigma}];
        cell.a = p.a;
        cell.sigma = p.sigma;
        if (p.failed || q.failed) continue;
        const double before = std::abs(p.rel_err_gtfk);
        const double after = std::abs(q.rel_err_corrected ? *q.rel_err_corrected : q.rel_err_gtfk);
        ++cell.count;
        if (after < before) ++cell.improved;
    }
    std::vector<DensityCell> out;
    for (auto& [key, cell] : cells) {
        cell.density = cell.count ? static_cast<double>(cell.improved) / static_cast<double>(cell.count) : 0.0;
        out.push_back(cell);
    }
    return out;
}

std::string density_csv(const std::vector<DensityCell>& cells) {
    std::string out = "a,sigma,count,improved,density\n";
    for (const auto& c : cells) {
        out += format_double(c.a) + ',' + format_double(c.sigma) + ',' + std::to_string(c.count) + ',' +
               std::to_string(c.improved) + ',' + format_double(c.density) + '\n';
    }
    return out;
}

}  // namespace bkgtfk::cli
