// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include "CLI11.hpp"

#include "rsmasg/config.hpp"
#include "rsmasg/errors.hpp"
#include "rsmasg/pipeline.hpp"
#include "rsmasg/quadrature.hpp"
#include "rsmasg/report.hpp"

namespace rsmasg::cli {

namespace fs = std::filesystem;

namespace {

// Surrounding blanks are ignored.
double to_number(std::string_view s, std::string_view what) {
    const auto first = s.find_first_not_of(" \t");
    s = first == std::string_view::npos ? std::string_view{} : s.substr(first, s.find_last_not_of(" \t") - first + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidParameter(std::string(what) + ": not a number: '" + std::string(s) + "'");
    return v;
}

// Flags left unset keep the config-file (or default) value.
struct Overrides {
    std::optional<std::string> preset, access, layout, units, beta_grid, sweep;
    std::optional<double> beta, q, eta, lambda_bs, sigma2_db;
    std::optional<int> n_users, topologies, fading, workers;
    std::optional<std::uint64_t> seed;
    bool achievable = false;
};

void add_run_options(CLI::App& cmd, std::string& config_path, Overrides& o) {
    cmd.add_option("--config", config_path, "YAML configuration file")->check(CLI::ExistingFile);
    cmd.add_option("--preset", o.preset, "MCS preset S1-S4");
    cmd.add_option("--beta-grid", o.beta_grid, "sweep beta over lo:step:hi or v1,v2,...");
    cmd.add_option("--sweep", o.sweep, "param:grid with param in beta, q, sigma2_norm, lambda_bs, eta, thresholds");
    cmd.add_option("--beta", o.beta, "power split");
    cmd.add_option("--q", o.q, "P(sub-message 2 decoded first)");
    cmd.add_option("--eta", o.eta, "path-loss exponent");
    cmd.add_option("--lambda-bs", o.lambda_bs, "BS intensity per m^2");
    cmd.add_option("--sigma2-db", o.sigma2_db, "normalized noise power in dB (-inf for none)");
    cmd.add_option("--n-users", o.n_users, "users per cell");
    cmd.add_option("--access", o.access, "rsma, noma or oma");
    cmd.add_option("--layout", o.layout, "dispersed or colocated interferers");
    cmd.add_option("--topologies", o.topologies, "topology count");
    cmd.add_option("--fading", o.fading, "fading draws per topology");
    cmd.add_option("--seed", o.seed, "master seed");
    cmd.add_option("--workers", o.workers, "worker threads");
    cmd.add_option("--units", o.units, "nats or bits");
    cmd.add_flag("--achievable", o.achievable, "also report the Shannon rate");
}

RunConfig effective_config(const std::string& config_path, const Overrides& o) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    auto& e = cfg.experiment;
    if (o.preset) {
        e.scheme = preset_scheme(*o.preset);
        cfg.preset = *o.preset;
    }
    if (o.beta) e.cfg.beta = *o.beta;
    if (o.q) e.cfg.q = *o.q;
    if (o.eta) e.cfg.eta = *o.eta;
    if (o.lambda_bs) e.cfg.lambda_bs = *o.lambda_bs;
    if (o.sigma2_db) e.cfg.sigma2_norm = noise_from_db(*o.sigma2_db);
    if (o.n_users) e.cfg.n_users = *o.n_users;
    if (o.access) e.access = access_from_string(*o.access);
    if (o.layout) e.layout = layout_from_string(*o.layout);
    if (o.topologies) e.n_topologies = *o.topologies;
    if (o.fading) e.n_fading = *o.fading;
    if (o.seed) e.master_seed = *o.seed;
    if (o.workers) e.workers = *o.workers;
    if (o.units) cfg.units = units_from_string(*o.units);
    if (o.beta_grid && o.sweep) throw InvalidParameter("--beta-grid conflicts with --sweep");
    if (o.beta_grid) e.sweep = {"beta", parse_grid(*o.beta_grid)};
    if (o.sweep) {
        const auto colon = o.sweep->find(':');
        if (colon == std::string::npos) throw InvalidParameter("--sweep: expected param:grid");
        e.sweep = {o.sweep->substr(0, colon), parse_grid(std::string_view(*o.sweep).substr(colon + 1))};
    }
    if (o.achievable) {
        e.track_achievable = true;
        cfg.analytic_achievable = true;
    }
    cfg.validate();
    return cfg;
}

fs::path resolve_out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return "rsmasg-out";
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    body(f);
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

class PhaseTimer {
public:
    void lap(std::string name) {
        const auto now = std::chrono::steady_clock::now();
        phases_.emplace_back(std::move(name), std::chrono::duration<double>(now - last_).count());
        last_ = now;
    }
    const auto& phases() const { return phases_; }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, double>> phases_;
};

RunManifest base_manifest(std::string subcommand, const RunConfig& cfg) {
    RunManifest m;
    m.subcommand = std::move(subcommand);
    m.config = to_json(cfg);
    m.config_hash = config_hash(cfg);
    m.presets = preset_names();
    m.master_seed = cfg.experiment.master_seed;
    m.version = std::string(kToolVersion);
    return m;
}

void emit_results(const fs::path& dir, const RunConfig& cfg, const ExperimentResult& result, std::string_view source,
                  bool achievable) {
    write_file(dir / "stats.csv", [&](std::ostream& os) { write_stats_csv(os, result.points, source, cfg.units); });
    write_file(dir / "ccdf.csv", [&](std::ostream& os) { write_ccdf_csv(os, result.points, source, cfg.units); });
    if (achievable)
        write_file(dir / "achievable.csv",
                   [&](std::ostream& os) { write_achievable_csv(os, result.points, source, cfg.units); });
    // Re-loadable with --config.
    write_json(dir / "config.json", to_json(cfg));
}

int cmd_experiment(bool simulate, const std::string& config_path, const Overrides& o, const fs::path& dir,
                   std::ostream& out, std::ostream& err) {
    PhaseTimer timer;
    const RunConfig cfg = effective_config(config_path, o);
    fs::create_directories(dir);
    timer.lap("configure");

    const ExperimentResult result = simulate ? run_experiment(cfg.experiment)
                                             : run_analytic(cfg.experiment, cfg.analytic, cfg.analytic_achievable);
    timer.lap(simulate ? "simulate" : "analytic");

    const bool achievable = simulate ? cfg.experiment.track_achievable : cfg.analytic_achievable;
    emit_results(dir, cfg, result, simulate ? "simulation" : "analytic", achievable);
    timer.lap("write");

    RunManifest m = base_manifest(simulate ? "simulate" : "analytic", cfg);
    m.wall_time = timer.phases();
    m.discard_rate = result.discard_rate;
    m.warnings = result.warnings;
    write_json(dir / "manifest.json", to_json(m));
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    out << "wrote " << (dir / "stats.csv").string() << " (" << result.points.size() << " sweep points)\n";
    return 0;
}

std::vector<StatsRow> load_stats(const fs::path& p) {
    const fs::path file = fs::is_directory(p) ? p / "stats.csv" : p;
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InvalidParameter("cannot open '" + file.string() + "'");
    return read_stats_csv(in);
}

int cmd_compare(const std::string& analytic, const std::string& simulation, const std::string& out_flag,
                std::optional<double> fail_above, std::ostream& out) {
    const auto reference = load_stats(analytic);
    const auto other = load_stats(simulation);
    const Comparison c = compare_stats(reference, other);
    nlohmann::json report = to_json(c);
    report["analytic"] = analytic;
    report["simulation"] = simulation;
    if (!out_flag.empty() || std::getenv(kOutDirEnv)) {
        const fs::path dir = resolve_out_dir(out_flag);
        fs::create_directories(dir);
        write_json(dir / "comparison.json", report);
    }
    out << report.dump(2) << '\n';
    if (fail_above)
        for (const auto& r : c.ranks)
            if (r.max_relative > *fail_above) return 3;
    return 0;
}

int cmd_spatial(const SpatialStatsSpec& spec, const fs::path& dir, std::ostream& out) {
    PhaseTimer timer;
    fs::create_directories(dir);
    const SpatialStats stats = spatial_statistics(spec);
    timer.lap("spatial");
    write_file(dir / "k_function.csv", [&](std::ostream& os) { write_k_function_csv(os, stats, spec.lambda_bs); });
    write_file(dir / "second_moment.csv",
               [&](std::ostream& os) { write_second_moment_csv(os, stats, spec.lambda_bs); });
    timer.lap("write");

    RunManifest m;
    m.subcommand = "spatial-stats";
    m.config = {{"lambda_bs", spec.lambda_bs},
                {"n_users", spec.n_users},
                {"network_realizations", spec.network_realizations},
                {"model_realizations", spec.model_realizations},
                {"seed", spec.seed},
                {"window", spec.window.side_length},
                {"wraparound", spec.window.wraparound},
                {"r_grid", stats.r_grid}};
    m.master_seed = spec.seed;
    m.version = std::string(kToolVersion);
    m.presets = preset_names();
    m.wall_time = timer.phases();
    const double total = static_cast<double>(spec.network_realizations) * static_cast<double>(spec.n_users.size());
    m.discard_rate = static_cast<double>(stats.discarded) / (static_cast<double>(stats.discarded) + total);
    write_json(dir / "manifest.json", to_json(m));
    out << "wrote " << (dir / "k_function.csv").string() << " and second_moment.csv\n";
    return 0;
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const InvalidParameter*>(&e)) return "invalid_parameter";
    if (dynamic_cast<const InfeasibleMoments*>(&e)) return "infeasible_moments";
    if (dynamic_cast<const quad::NonConvergence*>(&e)) return "non_convergence";
    if (dynamic_cast<const quad::NanIntegrand*>(&e)) return "nan_integrand";
    return "runtime_error";
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string_view::npos) throw InvalidParameter("grid: expected lo:step:hi");
        const double lo = to_number(text.substr(0, c1), "grid");
        const double step = to_number(text.substr(c1 + 1, c2 - c1 - 1), "grid");
        const double hi = to_number(text.substr(c2 + 1), "grid");
        if (!(step > 0.0) || !(hi >= lo)) throw InvalidParameter("grid: need step > 0 and hi >= lo");
        const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
        if (count > 100000) throw InvalidParameter("grid: more than 100000 points");
        for (long k = 0; k < count; ++k) out.push_back(std::round((lo + k * step) * 1e12) / 1e12);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        out.push_back(to_number(text.substr(start, comma - start), "grid"));
        start = comma + 1;
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Uplink RSMA/NOMA/OMA stochastic-geometry toolkit", "rsmasg"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string config_path, out_flag;
    Overrides o;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo network simulation");
    auto* analytic = app.add_subcommand("analytic", "numerical evaluation of the closed-form rates and moments");
    for (auto* cmd : {simulate, analytic}) {
        add_run_options(*cmd, config_path, o);
        cmd->add_option("--out", out_flag, std::string("output directory (default: $") + kOutDirEnv + ")");
    }

    auto* compare = app.add_subcommand("compare", "join analytic and simulated stats and report deviations");
    std::string analytic_path, simulation_path;
    std::optional<double> fail_above;
    compare->add_option("--analytic", analytic_path, "stats.csv or its directory")->required();
    compare->add_option("--simulation", simulation_path, "stats.csv or its directory")->required();
    compare->add_option("--fail-above", fail_above, "exit 3 when a rank's max relative deviation exceeds this");
    compare->add_option("--out", out_flag, "directory for comparison.json");

    auto* spatial = app.add_subcommand("spatial-stats", "K-function and second moment measure of interferers");
    SpatialStatsSpec sp;
    spatial->add_option("--lambda-bs", sp.lambda_bs, "BS intensity per m^2");
    spatial->add_option("--n-users", sp.n_users, "users per cell (repeatable)")->delimiter(',');
    spatial->add_option("--realizations", sp.network_realizations, "full network realizations per N");
    spatial->add_option("--model-realizations", sp.model_realizations, "model A/B realizations per N");
    spatial->add_option("--seed", sp.seed, "master seed");
    spatial->add_option("--workers", sp.workers, "worker threads");
    spatial->add_option("--window", sp.window.side_length, "window side length in metres");
    spatial->add_option("--out", out_flag, std::string("output directory (default: $") + kOutDirEnv + ")");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    const fs::path dir = resolve_out_dir(out_flag);
    try {
        if (*simulate) return cmd_experiment(true, config_path, o, dir, out, err);
        if (*analytic) return cmd_experiment(false, config_path, o, dir, out, err);
        if (*compare) return cmd_compare(analytic_path, simulation_path, out_flag, fail_above, out);
        return cmd_spatial(sp, dir, out);
    } catch (const std::exception& e) {
        const auto kind = error_kind(e);
        const auto j = error_json(kind, e.what());
        err << j.dump() << '\n';
        std::error_code ec;
        if (!*compare || !out_flag.empty()) fs::create_directories(dir, ec);
        if (fs::is_directory(dir, ec)) {
            std::ofstream f(dir / "error.json", std::ios::binary);
            f << j.dump(2) << '\n';
        }
        return kind == "invalid_parameter" ? 2 : 1;
    }
}

}  // namespace rsmasg::cli
