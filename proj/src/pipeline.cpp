// SPDX-License-Identifier: Apache-2.0
#include "rsmasg/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rsmasg/errors.hpp"
#include "rsmasg/parallel.hpp"

namespace rsmasg {

namespace {

struct RankTask {
    RankStatistics stats;
    std::string warning;
};

RankTask analytic_rank(const SweepPoint& sp, Access access, int rank, std::span<const double> xi_grid,
                       const AnalyticOptions& opts, bool achievable) {
    RankTask out;
    auto& st = out.stats;
    st.mean = avg_received_rate(sp.cfg, sp.scheme, rank, access, opts);
    st.m2 = moment_crr(2, sp.cfg, sp.scheme, rank, access, opts);
    st.var = st.m2 - st.mean * st.mean;
    if (achievable) st.achievable_mean = avg_achievable_rate(sp.cfg, rank, access, opts);
    try {
        const BetaMeta meta = fit_beta_meta(st.mean, st.m2, crr_scale(sp.scheme, access), InfeasiblePolicy::Clamp);
        st.meta_clamped = meta.clamped;
        st.ccdf.reserve(xi_grid.size());
        for (double xi : xi_grid) st.ccdf.push_back(meta.ccdf(xi));
        if (meta.clamped) out.warning = "variance clamped for the beta fit";
    } catch (const InfeasibleMoments& e) {
        out.warning = std::string("no beta fit: ") + e.what();
    }
    return out;
}

}  // namespace

ExperimentResult run_analytic(const ExperimentSpec& spec, const AnalyticOptions& opts, bool achievable) {
    spec.validate();
    const std::vector<double> values =
        spec.sweep.param == "none" ? std::vector<double>{0.0} : spec.sweep.values;
    const auto n_users = static_cast<std::size_t>(spec.cfg.n_users);

    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (double v : values) points.push_back(sweep_point(spec, v));
    std::vector<std::vector<double>> grids;
    for (const auto& sp : points)
        grids.push_back(spec.xi_grid.empty() ? linspace(0.0, 2.0 * sp.scheme.top_rate(), 100) : spec.xi_grid);

    std::vector<RankTask> tasks(points.size() * n_users);
    parallel_for(tasks.size(), spec.workers, [&](std::size_t k) {
        const std::size_t i = k / n_users;
        tasks[k] = analytic_rank(points[i], spec.access, static_cast<int>(k % n_users) + 1, grids[i], opts, achievable);
    });

    ExperimentResult result;
    for (std::size_t i = 0; i < points.size(); ++i) {
        RateStatistics rs;
        rs.sweep_param = spec.sweep.param;
        rs.sweep_value = values[i];
        rs.access = spec.access;
        rs.xi_grid = grids[i];
        for (std::size_t n = 0; n < n_users; ++n) {
            auto& task = tasks[i * n_users + n];
            if (!task.warning.empty())
                result.warnings.push_back(spec.sweep.param + "=" + std::to_string(values[i]) + " rank " +
                                          std::to_string(n + 1) + ": " + task.warning);
            rs.ranks.push_back(std::move(task.stats));
        }
        result.points.push_back(std::move(rs));
    }
    return result;
}

std::vector<double> normalized_r_grid(double lambda, int count, double lo, double hi) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidParameter("lambda must be finite and > 0");
    if (count < 2 || !(lo > 0.0) || !(hi > lo)) throw InvalidParameter("invalid r grid");
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double step = std::log(hi / lo) / (count - 1);
    for (int k = 0; k < count; ++k)
        grid[static_cast<std::size_t>(k)] = std::sqrt(lo * std::exp(step * k) / (lambda * std::numbers::pi));
    return grid;
}

SpatialStats spatial_statistics(const SpatialStatsSpec& spec) {
    if (spec.n_users.empty()) throw InvalidParameter("n_users: empty list");
    for (int n : spec.n_users)
        if (n < 1) throw InvalidParameter("n_users: every entry must be >= 1");
    if (spec.network_realizations < 1) throw InvalidParameter("network_realizations must be >= 1");
    if (spec.model_realizations < 1) throw InvalidParameter("model_realizations must be >= 1");

    SpatialStats out;
    out.r_grid = spec.r_grid.empty() ? normalized_r_grid(spec.lambda_bs, 12, 0.5, 9.0) : spec.r_grid;
    const double lambda = spec.lambda_bs;

    const auto grid_size = out.r_grid.size();

    for (int n_users : spec.n_users) {
        // Per-realization ball counts, reduced afterwards in index order.
        const auto counts = [&](const PointSet& pts) {
            const PointSet* one = &pts;
            return estimate_second_moment(std::span<const PointSet>(one, 1), out.r_grid, spec.window);
        };
        std::vector<std::vector<double>> network(static_cast<std::size_t>(spec.network_realizations));
        std::vector<std::vector<double>> network_k(network.size());
        std::vector<int> discarded(network.size(), 0);
        parallel_for(network.size(), spec.workers, [&](std::size_t t) {
            Rng rng = make_stream(spec.seed, t, 0);
            const auto net = sample_network(lambda, 20.0 * n_users * lambda, n_users, spec.window, rng);
            discarded[t] = net.discarded;
            const PointSet pts = interferer_points(net);
            network[t] = counts(pts);
            network_k[t] = estimate_k_function(std::span<const PointSet>(&pts, 1), n_users, lambda, out.r_grid,
                                               spec.window);
        });
        for (int d : discarded) out.discarded += d;

        std::vector<std::vector<double>> model_a(static_cast<std::size_t>(spec.model_realizations));
        std::vector<std::vector<double>> model_b(model_a.size());
        parallel_for(model_a.size(), spec.workers, [&](std::size_t t) {
            Rng rng_a = make_stream(spec.seed, t, 2);
            Rng rng_b = make_stream(spec.seed, t, 3);
            model_a[t] = counts(sample_interferers_model_a(lambda, n_users, spec.window, rng_a));
            model_b[t] = counts(sample_interferers_model_b(lambda, n_users, spec.window, rng_b));
        });

        const auto average = [](const std::vector<std::vector<double>>& rows, std::size_t k) {
            std::vector<double> column(rows.size());
            for (std::size_t t = 0; t < rows.size(); ++t) column[t] = rows[t][k];
            return pairwise_sum(column) / static_cast<double>(rows.size());
        };
        const double n = n_users;
        for (std::size_t k = 0; k < grid_size; ++k) {
            const double r = out.r_grid[k];
            const double big_lambda = lambda * k_function(r, lambda);
            out.k_function.push_back({n_users, r, average(network_k, k), k_function(r, lambda)});
            out.second_moment.push_back({n_users, r, average(network, k), average(model_a, k), average(model_b, k),
                                         n * n * (big_lambda * big_lambda + big_lambda),
                                         n * n * big_lambda * big_lambda + n * big_lambda});
        }
    }
    return out;
}

}  // namespace rsmasg
