// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 1 when any
// criterion fails. Criteria run cheapest-first; the integral oracles (10) run before
// every suite that relies on the quadrature.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "rsmasg/analytic.hpp"
#include "rsmasg/errors.hpp"
#include "rsmasg/montecarlo.hpp"
#include "rsmasg/pipeline.hpp"

using namespace rsmasg;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int worker_count() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

struct Verdict {
    int id;
    bool pass;
    std::string summary;
};

std::vector<Verdict> g_verdicts;

void verdict(int id, bool pass, const std::string& summary) {
    g_verdicts.push_back({id, pass, summary});
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, summary.c_str());
    std::fflush(stdout);
}

void note(const std::string& line) {
    std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double rel(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

SystemConfig base_config(double beta = 0.5, double q = 0.0) {
    SystemConfig c;
    c.beta = beta;
    c.q = q;
    return c;
}

std::vector<double> beta_grid() { return linspace(0.0, 1.0, 11); }

// ----- 10: integral families against brute-force sums ---------------------------------

void criterion_10() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    auto check = [&](const std::string& name, double lib, double ref) {
        const double d = rel(lib, ref);
        worst = std::max(worst, d);
        note(name + ": " + fmt("library %.12g, brute force %.12g", lib, ref) + fmt(", rel %.2e", d));
    };
    SystemConfig cfg = base_config();
    const std::vector<SlopePower> t1 = {{db_to_linear(-5.0) / 0.5, 1}};
    const std::vector<SlopePower> t3 = {{db_to_linear(-15.0) / 0.3, 2}, {db_to_linear(-5.0) / 0.7, 1}};

    // Ordered-region factor, dimensions 1 to 3, and the direct two-dimensional sum.
    for (int d : {1, 2, 3}) {
        cfg.n_users = d + 1;
        check("ordered region d=" + std::to_string(d), intra_cell_factor(t3, 0.8, cfg, 1),
              oracle::intra_cell(t3, 0.8, cfg.eta, kB1, d));
    }
    cfg.n_users = 3;
    check("ordered region d=2 (direct 2-D sum)", intra_cell_factor(t1, 0.5, cfg, 1),
          oracle::intra_cell_2d(t1, 0.5, cfg.eta, kB1));

    // Cluster-process PGFL, single factor and powered product.
    cfg.n_users = 2;
    check("PGFL factor, single", inter_cell_factor(t1, 0.7, cfg), oracle::inter_cell(t1, 0.7, cfg.eta, kB2, 2));
    cfg.n_users = 5;
    check("PGFL factor, product of powers", inter_cell_factor(t3, 1.3, cfg),
          oracle::inter_cell(t3, 1.3, cfg.eta, kB2, 5));

    // Outer radial integral (first and second moments), with and without noise.
    cfg = base_config();
    for (int rank : {1, 2})
        check("radial expectation, first-moment kernel, rank " + std::to_string(rank),
              spatial_expectation(t1, cfg, rank), oracle::spatial_expectation(t1, cfg.eta, kB1, kB2, 2, rank, 0.0));
    check("radial expectation, second-moment kernel, rank 1", spatial_expectation(t3, cfg, 1),
          oracle::spatial_expectation(t3, cfg.eta, kB1, kB2, 2, 1, 0.0));
    cfg.eta = 3.5;
    cfg.sigma2_norm = 2e-9;
    const double noise = cfg.sigma2_norm * std::pow(cfg.lambda_bs * std::numbers::pi, -cfg.eta / 2.0);
    check("radial expectation, eta 3.5 with noise, rank 2", spatial_expectation(t3, cfg, 2),
          oracle::spatial_expectation(t3, cfg.eta, kB1, kB2, 2, 2, noise));

    // Shannon t-integral on top of the radial expectation, branches j=2 (constant L,
    // truncated at t = 80 where the integrand is below e^-40) and j=3 (finite end).
    // Outage grows like theta log(1/theta) at t = 0 and the finite end has a
    // square-root edge, so both ends go through the map t = T w(s) with the
    // smoothstep w(s) = s^3 (10 - 15 s + 6 s^2), whose derivative vanishes there.
    cfg = base_config(0.3, 0.0);
    AnalyticOptions fast;
    fast.outer = {1e-11, 1e-10, 400};
    const auto se = [&](double slope) {
        const SlopePower f{slope, 1};
        return spatial_expectation(std::span<const SlopePower>(&f, 1), cfg, 1, fast);
    };
    const auto w = [](double s) { return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s); };
    const auto dw = [](double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); };
    const double beta = cfg.beta;
    const double t_max = 80.0, t_end = -std::log(beta);
    const double j2 = oracle::riemann(
        [&](double s) { return t_max * dw(s) * se(std::expm1(t_max * w(s)) / beta); }, 0.0, 1.0, 200);
    const double j3 = oracle::riemann(
        [&](double s) {
            const double t = t_end * w(s);
            const double l = 1.0 - beta * std::exp(t);
            return l > 0.0 ? t_end * dw(s) * se(std::expm1(t) / l) : 0.0;
        },
        0.0, 1.0, 200);
    check("Shannon t-integral, q = 0", avg_achievable_rate(cfg, 1, Access::Rsma, fast), j2 + j3);

    verdict(10, worst <= 1e-6,
            fmt("worst relative deviation %.2e over all integral families (bound 1e-6), %.0f s", worst, seconds_since(t0)));
}

// ----- 2: conditional degeneracies ------------------------------------------------------

void criterion_2() {
    Rng rng = make_stream(2, 0);
    std::uniform_real_distribution<double> dist(1.0, 400.0), unit(0.0, 1.0);
    const std::vector<McsScheme> schemes = {preset_scheme("S1"), preset_scheme("S2"), preset_scheme("S3"),
                                            preset_scheme("S4")};
    double worst_rsma = 0.0, worst_oma = 0.0;
    int oma_cases = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n_users = std::uniform_int_distribution<int>(1, 4)(rng);
        DistanceProfile p;
        p.ordered_typical.resize(n_users);
        for (auto& r : p.ordered_typical) r = dist(rng);
        std::sort(p.ordered_typical.begin(), p.ordered_typical.end());
        p.interferer.resize(std::uniform_int_distribution<int>(0, 60)(rng));
        for (auto& d : p.interferer) d = dist(rng);
        SystemConfig cfg = base_config(0.0, unit(rng));
        cfg.n_users = n_users;
        cfg.sigma2_norm = unit(rng) < 0.5 ? 0.0 : 1e-9 * unit(rng);
        const auto& scheme = schemes[static_cast<std::size_t>(i) % schemes.size()];
        const int rank = std::uniform_int_distribution<int>(1, n_users)(rng);
        const double noma = crr_noma_conditional(p, cfg, scheme, rank);
        worst_rsma = std::max(worst_rsma, std::abs(crr_conditional(p, cfg, scheme, rank) - noma));
        // NOMA with one user against OMA on the same profile.
        DistanceProfile single = p;
        single.ordered_typical = p.ordered_typical.head(1);
        SystemConfig one = cfg;
        one.n_users = 1;
        worst_oma = std::max(worst_oma, std::abs(crr_oma_conditional(single, one, scheme) -
                                                 crr_noma_conditional(single, one, scheme, 1)));
        ++oma_cases;
    }
    const bool pass = worst_rsma <= 1e-12 && worst_oma <= 1e-12;
    verdict(2, pass,
            fmt("max |RSMA(beta=0) - NOMA| = %.1e, max |NOMA(N=1) - OMA| = %.1e", worst_rsma, worst_oma) +
                " over 1000 random profiles (bound 1e-12)");
}

// ----- 3: coverage-probability reduction ------------------------------------------------

void criterion_3() {
    double worst = 0.0;
    for (double th_db : {-15.0, -5.0, 0.0}) {
        const McsScheme unit({db_to_linear(th_db)}, {1.0});
        for (int rank : {1, 2}) {
            const double coverage = moment_crr_noma(1, base_config(), unit, rank);
            for (double beta : {0.0, 1.0}) {
                const double v = avg_received_rate(base_config(beta, 0.0), unit, rank);
                worst = std::max(worst, std::abs(v - coverage));
            }
            note(fmt("theta %g dB", th_db) + ", rank " + std::to_string(rank) + fmt(": coverage %.9f", coverage));
        }
    }
    verdict(3, worst <= 1e-6, fmt("max |rate(beta in {0,1}) - NOMA first moment| = %.2e (bound 1e-6)", worst));
}

// ----- 7: q-symmetry -----------------------------------------------------------------------

void criterion_7() {
    double worst = 0.0;
    for (const auto& name : preset_names()) {
        const auto scheme = preset_scheme(name);
        for (double beta : beta_grid())
            for (int rank : {1, 2}) {
                const double a = avg_received_rate(base_config(beta, 0.0), scheme, rank);
                const double b = avg_received_rate(base_config(1.0 - beta, 1.0), scheme, rank);
                worst = std::max(worst, std::abs(a - b));
            }
    }
    verdict(7, worst <= 1e-6, fmt("max |value(beta, 0) - value(1 - beta, 1)| = %.2e over S1-S4, 11 betas (bound 1e-6)", worst));
}

// ----- 9: interior optimum beats both NOMA endpoints ---------------------------------------

void criterion_9() {
    const auto s1 = preset_scheme("S1");
    bool pass = true;
    std::string summary;
    for (int rank : {1, 2}) {
        const double at0 = avg_received_rate(base_config(0.0), s1, rank);
        const double at1 = avg_received_rate(base_config(1.0), s1, rank);
        double best = -1.0, best_beta = 0.0;
        for (int k = 1; k < 100; ++k) {
            const double v = avg_received_rate(base_config(k / 100.0), s1, rank);
            if (v > best) best = v, best_beta = k / 100.0;
        }
        pass = pass && best > at0 && best > at1;
        summary += "rank " + std::to_string(rank) + fmt(": best %.4f at beta ", best) + fmt("%.2f", best_beta) +
                   fmt(" vs endpoints %.4f / %.4f; ", at0, at1);
    }
    verdict(9, pass, summary);
}

// ----- 8: Shannon bound and flatness -----------------------------------------------------

void criterion_8() {
    const auto t0 = Clock::now();
    AnalyticOptions loose;
    loose.outer = {1e-9, 1e-8, 400};
    loose.inner = {1e-11, 1e-10, 400};
    // r_m = ln(1 + theta_m) at the S4 thresholds.
    const double th1 = db_to_linear(-15.0), th2 = db_to_linear(-5.0);
    const McsScheme admissible({th1, th2}, {std::log1p(th1), std::log1p(th2)});
    bool strict = true;
    double min_gap = 1e300;
    std::map<int, std::vector<double>> achievable;
    for (double beta : beta_grid())
        for (int rank : {1, 2}) {
            const auto cfg = base_config(beta, 0.0);
            const double shannon = avg_achievable_rate(cfg, rank, Access::Rsma, loose);
            const double mcs = avg_received_rate(cfg, admissible, rank);
            strict = strict && mcs < shannon;
            min_gap = std::min(min_gap, shannon - mcs);
            if (beta >= 0.1 - 1e-12 && beta <= 0.9 + 1e-12) achievable[rank].push_back(shannon);
        }
    double worst_flat = 0.0;
    for (const auto& [rank, values] : achievable) {
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        double mean = 0.0;
        for (double v : values) mean += v / static_cast<double>(values.size());
        worst_flat = std::max(worst_flat, (*hi - *lo) / mean);
        note("rank " + std::to_string(rank) + fmt(": achievable rate %.6f nats/s/Hz, spread %.2e of mean", mean, (*hi - *lo) / mean));
    }
    verdict(8, strict && worst_flat < 0.02,
            std::string(strict ? "received < achievable at all 22 points" : "Shannon bound violated") +
                fmt(" (min gap %.4f)", min_gap) + fmt(", achievable spread over beta in [0.1, 0.9] %.2e of mean (bound 0.02)", worst_flat) +
                fmt(", %.0f s", seconds_since(t0)));
}

// ----- 6: spatial statistics ------------------------------------------------------------

void criterion_6() {
    const auto t0 = Clock::now();
    SpatialStatsSpec spec;
    spec.workers = worker_count();
    const auto stats = spatial_statistics(spec);
    const double lambda = spec.lambda_bs;
    double worst_k = 0.0, worst_a = 0.0;
    bool a_above_b = true;
    for (const auto& row : stats.k_function) {
        const double x = lambda * std::numbers::pi * row.r * row.r;
        if (x <= 0.5) continue;
        const double d = rel(row.empirical, row.theory);
        worst_k = std::max(worst_k, d);
        note("K  N=" + std::to_string(row.n_users) + fmt(" lambda pi r^2 %.2f", x) +
             fmt(": empirical/theory %.4f", row.empirical / row.theory));
    }
    for (const auto& row : stats.second_moment) {
        if (row.n_users != 2) continue;
        const double x = lambda * std::numbers::pi * row.r * row.r;
        worst_a = std::max(worst_a, rel(row.model_a, row.theory_a));
        a_above_b = a_above_b && row.model_a > row.model_b;
        note("M2 N=2" + fmt(" lambda pi r^2 %.2f", x) + fmt(": model A/theory %.4f", row.model_a / row.theory_a) +
             fmt(", model A/model B %.4f", row.model_a / row.model_b));
    }
    const bool pass = worst_k <= 0.05 && worst_a <= 0.05 && a_above_b;
    verdict(6, pass,
            fmt("K-function max rel deviation %.4f (bound 0.05); model A second moment max rel deviation %.4f (bound 0.05)",
                worst_k, worst_a) +
                (a_above_b ? "; model A > model B everywhere" : "; model A not above model B") +
                fmt(", %.0f s", seconds_since(t0)));
}

// ----- 1, 4, 5: shared Monte Carlo batch -------------------------------------------------

struct ProbeKey {
    std::string preset;
    Access access;
    double beta;
    bool unit_rate;
};

void criteria_1_4_5() {
    const auto grid = beta_grid();
    BatchSpec batch;
    batch.n_topologies = 10000;
    batch.n_fading = 5000;
    batch.seed = 20240501;
    batch.workers = worker_count();
    std::vector<ProbeKey> keys;
    for (const auto& name : preset_names())
        for (double beta : grid) {
            Probe p{preset_scheme(name)};
            p.beta = beta;
            batch.probes.push_back(p);
            keys.push_back({name, Access::Rsma, beta, false});
        }
    for (const char* name : {"S1", "S2"})
        for (auto [access, beta] : {std::pair{Access::Noma, 0.0}, {Access::Rsma, 0.5}}) {
            Probe p{preset_scheme(name, {1.0})};
            p.access = access;
            p.beta = beta;
            batch.probes.push_back(p);
            keys.push_back({name, access, beta, true});
        }

    const auto t0 = Clock::now();
    const auto sim = run_batch(batch);
    const double sim_seconds = seconds_since(t0);
    note(std::to_string(batch.probes.size()) + fmt(" probes, 1e4 topologies x 5e3 fading draws: %.0f s", sim_seconds));

    // Analytic first and second moments for every probe and rank.
    const auto t1 = Clock::now();
    std::vector<std::array<double, 2>> m1(keys.size()), m2(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto& pr = batch.probes[i];
        for (int rank : {1, 2}) {
            const auto cfg = base_config(pr.beta, pr.q);
            m1[i][static_cast<std::size_t>(rank - 1)] = avg_received_rate(cfg, pr.scheme, rank, pr.access);
            m2[i][static_cast<std::size_t>(rank - 1)] = moment_crr(2, cfg, pr.scheme, rank, pr.access);
        }
    }
    const double analytic_seconds = seconds_since(t1);

    // Criterion 1: means, presets S1-S4, both ranks.
    {
        double worst = 0.0;
        std::string worst_at;
        for (const auto& name : preset_names()) {
            double preset_worst = 0.0;
            for (std::size_t i = 0; i < keys.size(); ++i) {
                if (keys[i].unit_rate || keys[i].preset != name) continue;
                for (int n = 0; n < 2; ++n) {
                    const double d = rel(sim[i].ranks[static_cast<std::size_t>(n)].mean, m1[i][static_cast<std::size_t>(n)]);
                    preset_worst = std::max(preset_worst, d);
                    if (d > worst) {
                        worst = d;
                        worst_at = name + fmt(" beta %.1f", keys[i].beta) + " rank " + std::to_string(n + 1);
                    }
                }
            }
            note(name + fmt(": max relative deviation of the mean %.4f", preset_worst));
        }
        const bool pass = worst <= 0.03 && sim_seconds <= 900.0;
        verdict(1, pass,
                fmt("max relative deviation %.4f (bound 0.03)", worst) + " at " + worst_at +
                    fmt("; simulation wall time %.0f s (bound 900 s)", sim_seconds));
    }

    // Criterion 4: second moments, S1 and S2, plus interior extremum locations.
    {
        double worst = 0.0;
        bool locations = true;
        for (const char* name : {"S1", "S2"}) {
            for (int n = 0; n < 2; ++n) {
                std::vector<double> an, em;
                for (std::size_t i = 0; i < keys.size(); ++i) {
                    if (keys[i].unit_rate || keys[i].preset != name) continue;
                    an.push_back(m2[i][static_cast<std::size_t>(n)]);
                    em.push_back(sim[i].ranks[static_cast<std::size_t>(n)].m2);
                }
                double local = 0.0;
                for (std::size_t k = 0; k < an.size(); ++k) local = std::max(local, rel(em[k], an[k]));
                worst = std::max(worst, local);
                // Interior points beta = 0.1 .. 0.9.
                auto arg = [](const std::vector<double>& v, bool max) {
                    const auto first = v.begin() + 1, last = v.end() - 1;
                    return static_cast<int>((max ? std::max_element(first, last) : std::min_element(first, last)) - v.begin());
                };
                const int dmin = std::abs(arg(an, false) - arg(em, false));
                const int dmax = std::abs(arg(an, true) - arg(em, true));
                locations = locations && dmin <= 1 && dmax <= 1;
                note(std::string(name) + " rank " + std::to_string(n + 1) + fmt(": max rel M2 deviation %.4f", local) +
                     fmt("; interior argmin beta analytic %.1f", grid[static_cast<std::size_t>(arg(an, false))]) +
                     fmt(" / simulated %.1f", grid[static_cast<std::size_t>(arg(em, false))]) +
                     fmt("; argmax %.1f", grid[static_cast<std::size_t>(arg(an, true))]) +
                     fmt(" / %.1f", grid[static_cast<std::size_t>(arg(em, true))]));
            }
        }
        verdict(4, worst <= 0.05 && locations,
                fmt("max relative M2 deviation %.4f (bound 0.05); extremum locations ", worst) +
                    (locations ? "agree within one grid step" : "differ by more than one grid step"));
    }

    // Criterion 5: beta-approximated meta distribution.
    {
        double worst = 0.0;
        bool fits = true;
        double xi02[2] = {0.0, 0.0}, xi02_emp[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (!keys[i].unit_rate) continue;
            const double scale = crr_scale(batch.probes[i].scheme, keys[i].access);
            for (int n = 0; n < 2; ++n) {
                const auto& samples = sim[i].ranks[static_cast<std::size_t>(n)].samples;
                const EmpiricalCcdf emp(samples);
                BetaMeta fit;
                try {
                    fit = fit_beta_meta(m1[i][static_cast<std::size_t>(n)], m2[i][static_cast<std::size_t>(n)], scale);
                } catch (const InfeasibleMoments& e) {
                    fits = false;
                    note(keys[i].preset + " infeasible beta fit: " + e.what());
                    continue;
                }
                // Sup-norm over a fine grid and both sides of every jump of the empirical CCDF.
                double sup = 0.0;
                for (int k = 0; k <= 4000; ++k) {
                    const double xi = scale * k / 4000.0;
                    sup = std::max(sup, std::abs(fit.ccdf(xi) - emp(xi)));
                }
                for (double s : samples) {
                    sup = std::max(sup, std::abs(fit.ccdf(s) - emp(s)));
                    sup = std::max(sup, std::abs(fit.ccdf(s) - emp(std::nextafter(s, -1.0))));
                }
                worst = std::max(worst, sup);
                note(keys[i].preset + (keys[i].access == Access::Noma ? " NOMA" : " RSMA beta 0.5") + " rank " +
                     std::to_string(n + 1) + fmt(": sup-norm %.4f", sup));
                if (keys[i].preset == "S2" && keys[i].access == Access::Noma) {
                    xi02[n] = fit.ccdf(0.2);
                    xi02_emp[n] = emp(0.2);
                }
            }
        }
        const bool points = std::abs(xi02[0] - 0.9) <= 0.05 && std::abs(xi02[1] - 0.6) <= 0.05 &&
                            std::abs(xi02_emp[0] - 0.9) <= 0.05 && std::abs(xi02_emp[1] - 0.6) <= 0.05;
        note(fmt("S2 NOMA at xi = 0.2: beta fit %.3f / %.3f", xi02[0], xi02[1]) +
             fmt(", empirical %.3f / %.3f (targets 0.9 / 0.6)", xi02_emp[0], xi02_emp[1]));
        verdict(5, fits && worst <= 0.05 && points,
                fmt("max sup-norm %.4f (bound 0.05)", worst) +
                    (points ? "; xi = 0.2 values within 0.05 of 0.9 / 0.6" : "; xi = 0.2 values off target"));
    }
    note(fmt("analytic moments for all probes: %.0f s", analytic_seconds));
}

// ----- 11: reproducibility through the command line ---------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void criterion_11() {
    const fs::path root = fs::temp_directory_path() / "rsmasg_acceptance_repro";
    fs::remove_all(root);
    const std::vector<std::string> common = {"simulate", "--preset", "S4", "--beta-grid", "0:0.1:1", "--topologies",
                                             "300", "--fading", "500", "--seed", "987654321", "--achievable"};
    std::vector<std::string> outputs;
    bool ok = true;
    for (const char* workers : {"1", "2", "5", "1"}) {
        const fs::path dir = root / (std::string("w") + workers + "_" + std::to_string(outputs.size()));
        auto args = common;
        args.insert(args.end(), {"--workers", workers, "--out", dir.string()});
        std::ostringstream out, err;
        ok = ok && rsmasg::cli::run(args, out, err) == 0;
        outputs.push_back(slurp(dir / "stats.csv") + slurp(dir / "ccdf.csv") + slurp(dir / "achievable.csv"));
    }
    fs::remove_all(root);
    const bool same = ok && !outputs[0].empty() &&
                      std::all_of(outputs.begin(), outputs.end(), [&](const std::string& s) { return s == outputs[0]; });
    verdict(11, same, same ? "stats, ccdf and achievable CSVs byte-identical for workers 1, 2, 5 and a repeat run"
                           : "CSV output differs between runs");
}

void guarded(int id, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        verdict(id, false, std::string("threw: ") + e.what());
    }
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    std::printf("acceptance suite, %d worker thread(s)\n", worker_count());
    guarded(10, criterion_10);
    guarded(2, criterion_2);
    guarded(3, criterion_3);
    guarded(7, criterion_7);
    guarded(9, criterion_9);
    guarded(8, criterion_8);
    guarded(6, criterion_6);
    guarded(1, criteria_1_4_5);
    guarded(11, criterion_11);

    std::sort(g_verdicts.begin(), g_verdicts.end(), [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
    std::printf("\nsummary (%.0f s):\n", seconds_since(t0));
    int failed = 0;
    for (const auto& v : g_verdicts) {
        std::printf("  [%s] %d\n", v.pass ? "PASS" : "FAIL", v.id);
        failed += !v.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(g_verdicts.size()) - failed, g_verdicts.size());
    return failed == 0 ? 0 : 1;
}
