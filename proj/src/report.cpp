// SPDX-License-Identifier: Apache-2.0
#include "rsmasg/report.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include "rsmasg/errors.hpp"

namespace rsmasg {

namespace {

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    CsvWriter& operator<<(double v) { return cell(format_number(v)); }
    CsvWriter& operator<<(int v) { return cell(std::to_string(v)); }
    CsvWriter& operator<<(std::string_view s) { return cell(s); }
    void end_row() {
        os_ << '\n';
        first_ = true;
    }

private:
    CsvWriter& cell(std::string_view s) {
        if (!first_) os_ << ',';
        os_ << s;
        first_ = false;
        return *this;
    }
    std::ostream& os_;
    bool first_ = true;
};

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_number(const std::string& s, int line) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidParameter("line " + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

double relative(double other, double reference) {
    if (other == reference) return 0.0;
    return std::abs(other - reference) / std::abs(reference);
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

double unit_scale(RateUnits units) { return units == RateUnits::Bits ? 1.0 / std::numbers::ln2 : 1.0; }

void write_stats_csv(std::ostream& os, std::span<const RateStatistics> points, std::string_view source,
                     RateUnits units) {
    const double k = unit_scale(units);
    CsvWriter w(os);
    w << "sweep_param" << "sweep_value" << "rank" << "mean" << "m2" << "var" << "stderr" << "source";
    w.end_row();
    for (const auto& p : points)
        for (std::size_t n = 0; n < p.ranks.size(); ++n) {
            const auto& r = p.ranks[n];
            w << std::string_view(p.sweep_param) << p.sweep_value << static_cast<int>(n + 1) << k * r.mean
              << k * k * r.m2 << k * k * r.var << k * r.stderr_mean << source;
            w.end_row();
        }
}

void write_ccdf_csv(std::ostream& os, std::span<const RateStatistics> points, std::string_view source,
                    RateUnits units) {
    const double k = unit_scale(units);
    CsvWriter w(os);
    w << "sweep_param" << "sweep_value" << "xi" << "rank" << "ccdf" << "source";
    w.end_row();
    for (const auto& p : points)
        for (std::size_t n = 0; n < p.ranks.size(); ++n) {
            const auto& ccdf = p.ranks[n].ccdf;
            for (std::size_t i = 0; i < ccdf.size() && i < p.xi_grid.size(); ++i) {
                w << std::string_view(p.sweep_param) << p.sweep_value << k * p.xi_grid[i] << static_cast<int>(n + 1)
                  << ccdf[i] << source;
                w.end_row();
            }
        }
}

void write_achievable_csv(std::ostream& os, std::span<const RateStatistics> points, std::string_view source,
                          RateUnits units) {
    const double k = unit_scale(units);
    CsvWriter w(os);
    w << "sweep_param" << "sweep_value" << "rank" << "mean" << "stderr" << "source";
    w.end_row();
    for (const auto& p : points)
        for (std::size_t n = 0; n < p.ranks.size(); ++n) {
            const auto& r = p.ranks[n];
            w << std::string_view(p.sweep_param) << p.sweep_value << static_cast<int>(n + 1) << k * r.achievable_mean
              << k * r.achievable_stderr << source;
            w.end_row();
        }
}

void write_k_function_csv(std::ostream& os, const SpatialStats& stats, double lambda) {
    CsvWriter w(os);
    w << "n_users" << "r" << "lambda_pi_r2" << "k_empirical" << "k_theory";
    w.end_row();
    for (const auto& row : stats.k_function) {
        w << row.n_users << row.r << lambda * std::numbers::pi * row.r * row.r << row.empirical << row.theory;
        w.end_row();
    }
}

void write_second_moment_csv(std::ostream& os, const SpatialStats& stats, double lambda) {
    CsvWriter w(os);
    w << "n_users" << "r" << "lambda_pi_r2" << "network" << "model_a" << "model_b" << "theory_a" << "theory_b";
    w.end_row();
    for (const auto& row : stats.second_moment) {
        w << row.n_users << row.r << lambda * std::numbers::pi * row.r * row.r << row.network << row.model_a
          << row.model_b << row.theory_a << row.theory_b;
        w.end_row();
    }
}

std::vector<StatsRow> read_stats_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidParameter("line 1: missing header");
    const auto header = split(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* name : {"sweep_param", "sweep_value", "rank", "mean", "m2", "var", "stderr"})
        if (!col.contains(name)) throw InvalidParameter(std::string("line 1: missing column '") + name + "'");

    std::vector<StatsRow> rows;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw InvalidParameter("line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(header.size()) + " fields");
        StatsRow r;
        r.sweep_param = cells[col["sweep_param"]];
        r.sweep_value = parse_number(cells[col["sweep_value"]], line_no);
        r.rank = static_cast<int>(parse_number(cells[col["rank"]], line_no));
        r.mean = parse_number(cells[col["mean"]], line_no);
        r.m2 = parse_number(cells[col["m2"]], line_no);
        r.var = parse_number(cells[col["var"]], line_no);
        r.stderr_mean = parse_number(cells[col["stderr"]], line_no);
        if (col.contains("source")) r.source = cells[col["source"]];
        rows.push_back(std::move(r));
    }
    return rows;
}

Comparison compare_stats(std::span<const StatsRow> reference, std::span<const StatsRow> other) {
    using Key = std::tuple<std::string, double, int>;
    std::map<Key, const StatsRow*> lookup;
    for (const auto& r : other) lookup[{r.sweep_param, r.sweep_value, r.rank}] = &r;

    struct Accum {
        int points = 0;
        double max_rel = 0.0, sum_rel = 0.0, max_rel_m2 = 0.0;
    };
    std::map<int, Accum> per_rank;
    Comparison out;
    std::size_t matched = 0;
    for (const auto& ref : reference) {
        const auto it = lookup.find({ref.sweep_param, ref.sweep_value, ref.rank});
        if (it == lookup.end()) {
            ++out.unmatched;
            continue;
        }
        ++matched;
        auto& a = per_rank[ref.rank];
        const double rel = relative(it->second->mean, ref.mean);
        ++a.points;
        a.max_rel = std::max(a.max_rel, rel);
        a.sum_rel += rel;
        a.max_rel_m2 = std::max(a.max_rel_m2, relative(it->second->m2, ref.m2));
    }
    out.unmatched += static_cast<int>(other.size() - matched);
    for (const auto& [rank, a] : per_rank)
        out.ranks.push_back({rank, a.points, a.max_rel, a.sum_rel / a.points, a.max_rel_m2});
    return out;
}

nlohmann::json to_json(const Comparison& c) {
    nlohmann::json ranks = nlohmann::json::array();
    for (const auto& r : c.ranks)
        ranks.push_back({{"rank", r.rank},
                         {"points", r.points},
                         {"max_relative_deviation", r.max_relative},
                         {"mean_relative_deviation", r.mean_relative},
                         {"max_relative_deviation_m2", r.max_relative_m2}});
    return {{"ranks", ranks}, {"unmatched_rows", c.unmatched}};
}

nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json phases = nlohmann::json::object();
    for (const auto& [name, seconds] : m.wall_time) phases[name] = seconds;
    return {{"subcommand", m.subcommand},
            {"config", m.config},
            {"config_hash", m.config_hash},
            {"presets", m.presets},
            {"master_seed", m.master_seed},
            {"version", m.version},
            {"wall_time_s", phases},
            {"discard_rate", m.discard_rate},
            {"warnings", m.warnings}};
}

nlohmann::json error_json(std::string_view kind, std::string_view message) {
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace rsmasg
