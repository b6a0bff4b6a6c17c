// SPDX-License-Identifier: Apache-2.0
#include "rsmasg/montecarlo.hpp"

#include <cmath>
#include <map>

#include <boost/random/exponential_distribution.hpp>

#include "rsmasg/errors.hpp"
#include "rsmasg/parallel.hpp"

namespace rsmasg {

namespace {

constexpr std::uint64_t kSpatialStream = 0;
constexpr std::uint64_t kFadingStream = 1;

// Probes sharing a path-loss exponent share the received-power terms of a draw.
struct EtaGroup {
    double eta;
    std::vector<std::size_t> probes;
};

std::vector<EtaGroup> group_by_eta(const std::vector<Probe>& probes) {
    std::vector<EtaGroup> groups;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const EtaGroup& g) { return g.eta == probes[p].eta; });
        if (it == groups.end()) groups.push_back({probes[p].eta, {p}});
        else it->probes.push_back(p);
    }
    return groups;
}

struct TopologyResult {
    std::vector<double> crr;         // probe-major, rank-minor
    std::vector<double> achievable;  // same layout, empty unless tracked
    int discarded = 0;
};

TopologyResult simulate_topology(const BatchSpec& spec, const std::vector<EtaGroup>& groups, double lambda_ue,
                                 std::uint64_t topo) {
    const int n_users = spec.n_users;
    const std::size_t n_probes = spec.probes.size();
    Rng spatial_rng = make_stream(spec.seed, topo, kSpatialStream);
    const NetworkRealization net =
        sample_network(spec.lambda_bs, lambda_ue, n_users, spec.window, spatial_rng, spec.max_attempts);
    const DistanceProfile profile = distance_profile(net.assignment, net.bs, net.ue, spec.window, spec.layout);

    struct GroupPowers {
        Eigen::ArrayXd typical;     // R_n^-eta
        Eigen::ArrayXd interferer;  // D_x^-eta
    };
    std::vector<GroupPowers> powers;
    for (const auto& g : groups)
        powers.push_back({profile.ordered_typical.pow(-g.eta), profile.interferer.pow(-g.eta)});

    TopologyResult out;
    out.discarded = net.discarded;
    out.crr.assign(n_probes * static_cast<std::size_t>(n_users), 0.0);
    if (spec.track_achievable) out.achievable.assign(out.crr.size(), 0.0);
    // MCS level hit counts per (probe, rank), levels 0..M.
    std::vector<std::vector<long>> hits(out.crr.size());
    for (std::size_t p = 0; p < n_probes; ++p)
        for (int n = 0; n < n_users; ++n)
            hits[p * static_cast<std::size_t>(n_users) + static_cast<std::size_t>(n)].assign(
                static_cast<std::size_t>(spec.probes[p].scheme.levels() + 1), 0);

    Rng fading_rng = make_stream(spec.seed, topo, kFadingStream);
    boost::random::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::Index n_int = profile.interferer.size();
    Eigen::ArrayXd h_typ(n_users), h_int(n_int), u_bits(n_users), x(n_users), floor_intra(n_users);

    for (int draw = 0; draw < spec.n_fading; ++draw) {
        for (Eigen::Index i = 0; i < n_users; ++i) h_typ(i) = expo(fading_rng);
        for (Eigen::Index i = 0; i < n_int; ++i) h_int(i) = expo(fading_rng);
        for (Eigen::Index i = 0; i < n_users; ++i) u_bits(i) = unit(fading_rng);

        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const auto& pw = powers[gi];
            const double inter = (h_int * pw.interferer).sum();
            x = h_typ * pw.typical;
            double tail = 0.0;
            for (int n = n_users - 1; n >= 0; --n) {
                floor_intra(n) = tail + inter;
                tail += x(n);
            }
            for (std::size_t p : groups[gi].probes) {
                const Probe& pr = spec.probes[p];
                auto* acc = &hits[p * static_cast<std::size_t>(n_users)];
                double* sh = spec.track_achievable ? &out.achievable[p * static_cast<std::size_t>(n_users)] : nullptr;
                for (int n = 0; n < n_users; ++n) {
                    const double floor = floor_intra(n) + pr.sigma2_norm;
                    if (pr.access == Access::Rsma) {
                        const SinrPair g = sinr_split(pr.beta, u_bits(n) < pr.q, x(n), floor);
                        ++acc[n][static_cast<std::size_t>(rate_level(g.gamma1, pr.scheme))];
                        ++acc[n][static_cast<std::size_t>(rate_level(g.gamma2, pr.scheme))];
                        if (sh) sh[n] += shannon_map(g.gamma1) + shannon_map(g.gamma2);
                    } else {
                        const double g = sinr_ratio(x(n), floor);
                        ++acc[n][static_cast<std::size_t>(rate_level(g, pr.scheme))];
                        if (sh) sh[n] += shannon_map(g);
                    }
                }
            }
        }
    }
    const double n = static_cast<double>(spec.n_fading);
    for (std::size_t p = 0; p < n_probes; ++p)
        for (int k = 0; k < n_users; ++k) {
            const std::size_t i = p * static_cast<std::size_t>(n_users) + static_cast<std::size_t>(k);
            out.crr[i] = rate_from_level_hits(hits[i], spec.n_fading, spec.probes[p].scheme);
        }
    for (auto& v : out.achievable) v /= n;
    return out;
}

void validate_batch(const BatchSpec& spec) {
    if (!std::isfinite(spec.lambda_bs) || !(spec.lambda_bs > 0.0)) throw InvalidParameter("lambda_bs must be > 0");
    if (spec.n_users < 1) throw InvalidParameter("n_users must be >= 1");
    if (spec.n_topologies < 1) throw InvalidParameter("n_topologies must be >= 1");
    if (spec.n_fading < 1) throw InvalidParameter("n_fading must be >= 1");
    if (spec.workers < 1) throw InvalidParameter("workers must be >= 1");
    if (spec.probes.empty()) throw InvalidParameter("no operating points to evaluate");
    spec.window.validate();
    for (const auto& p : spec.probes) {
        if (p.access == Access::Oma && spec.n_users != 1)
            throw InvalidParameter("OMA serves exactly one user per resource block");
        if (!(p.beta >= 0.0 && p.beta <= 1.0)) throw InvalidParameter("beta must lie in [0, 1]");
        if (!(p.q >= 0.0 && p.q <= 1.0)) throw InvalidParameter("q must lie in [0, 1]");
        if (!(p.sigma2_norm >= 0.0) || !std::isfinite(p.sigma2_norm)) throw InvalidParameter("sigma2_norm must be >= 0");
        if (!(p.eta > 2.0) || !std::isfinite(p.eta)) throw InvalidParameter("eta must be > 2");
    }
}

RankStatistics summarize(std::vector<double> samples, std::span<const double> achievable,
                         std::span<const double> xi_grid) {
    RankStatistics st;
    const double n = static_cast<double>(samples.size());
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = samples[i] * samples[i];
    st.mean = pairwise_sum(samples) / n;
    st.m2 = pairwise_sum(sq) / n;
    st.var = st.m2 - st.mean * st.mean;
    if (samples.size() > 1) {
        std::vector<double> dev(samples.size()), dev2(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            dev[i] = (samples[i] - st.mean) * (samples[i] - st.mean);
            dev2[i] = (sq[i] - st.m2) * (sq[i] - st.m2);
        }
        st.stderr_mean = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
        st.stderr_m2 = std::sqrt(pairwise_sum(dev2) / (n - 1.0) / n);
    }
    if (!achievable.empty()) {
        st.achievable_mean = pairwise_sum(achievable) / n;
        if (achievable.size() > 1) {
            std::vector<double> dev(achievable.size());
            for (std::size_t i = 0; i < achievable.size(); ++i)
                dev[i] = (achievable[i] - st.achievable_mean) * (achievable[i] - st.achievable_mean);
            st.achievable_stderr = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
        }
    }
    st.ccdf = empirical_meta(samples, xi_grid);
    st.samples = std::move(samples);
    return st;
}

}  // namespace

std::vector<RateStatistics> run_batch(const BatchSpec& spec) {
    validate_batch(spec);
    const double lambda_ue = spec.lambda_ue > 0.0 ? spec.lambda_ue : 20.0 * spec.n_users * spec.lambda_bs;
    const auto groups = group_by_eta(spec.probes);
    const auto n_topo = static_cast<std::size_t>(spec.n_topologies);

    std::vector<TopologyResult> results(n_topo);
    parallel_for(n_topo, spec.workers, [&](std::size_t t) { results[t] = simulate_topology(spec, groups, lambda_ue, t); });

    long discarded = 0;
    for (const auto& r : results) discarded += r.discarded;
    const double discard_rate = static_cast<double>(discarded) / static_cast<double>(discarded + spec.n_topologies);

    std::vector<RateStatistics> out;
    out.reserve(spec.probes.size());
    const auto n_users = static_cast<std::size_t>(spec.n_users);
    for (std::size_t p = 0; p < spec.probes.size(); ++p) {
        const Probe& pr = spec.probes[p];
        RateStatistics rs;
        rs.sweep_param = pr.sweep_param;
        rs.sweep_value = pr.sweep_value;
        rs.access = pr.access;
        rs.xi_grid = spec.xi_grid.empty() ? linspace(0.0, 2.0 * pr.scheme.top_rate(), 100) : spec.xi_grid;
        rs.n_topologies = spec.n_topologies;
        rs.discarded = discarded;
        rs.discard_rate = discard_rate;
        for (std::size_t n = 0; n < n_users; ++n) {
            std::vector<double> samples(n_topo), shannon;
            for (std::size_t t = 0; t < n_topo; ++t) samples[t] = results[t].crr[p * n_users + n];
            if (spec.track_achievable) {
                shannon.resize(n_topo);
                for (std::size_t t = 0; t < n_topo; ++t) shannon[t] = results[t].achievable[p * n_users + n];
            }
            rs.ranks.push_back(summarize(std::move(samples), shannon, rs.xi_grid));
        }
        out.push_back(std::move(rs));
    }
    return out;
}

void ExperimentSpec::validate() const {
    cfg.validate();
    if (n_topologies < 1) throw InvalidParameter("experiment.topologies: must be >= 1");
    if (n_fading < 1) throw InvalidParameter("experiment.fading: must be >= 1");
    if (workers < 1) throw InvalidParameter("experiment.workers: must be >= 1");
    if (access == Access::Oma && cfg.n_users != 1)
        throw InvalidParameter("system.n_users: OMA requires exactly one user per cell");
    static const std::vector<std::string> known = {"none", "beta", "q", "sigma2_norm", "lambda_bs", "eta", "thresholds"};
    if (std::find(known.begin(), known.end(), sweep.param) == known.end())
        throw InvalidParameter("sweep.param: unknown parameter '" + sweep.param + "'");
    if (sweep.param != "none" && sweep.values.empty()) throw InvalidParameter("sweep.values: list is empty");
    if (sweep.param == "none") return;
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        try {
            sweep_point(*this, sweep.values[i]).cfg.validate();
        } catch (const InvalidParameter& e) {
            throw InvalidParameter("sweep.values[" + std::to_string(i) + "]: " + e.what());
        }
    }
}

SweepPoint sweep_point(const ExperimentSpec& spec, double value) {
    SweepPoint pt{spec.cfg, spec.scheme};
    const std::string& p = spec.sweep.param;
    if (p == "beta") pt.cfg.beta = value;
    else if (p == "q") pt.cfg.q = value;
    else if (p == "sigma2_norm") pt.cfg.sigma2_norm = value;
    else if (p == "lambda_bs") pt.cfg.lambda_bs = value;
    else if (p == "eta") pt.cfg.eta = value;
    else if (p == "thresholds") {
        if (!std::isfinite(value)) throw InvalidParameter("thresholds shift must be finite");
        pt.scheme = spec.scheme.shifted_db(value);
    }
    return pt;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const bool swept = spec.sweep.param != "none";
    const std::vector<double> values = swept ? spec.sweep.values : std::vector<double>{0.0};

    // One probe per sweep point.
    std::vector<Probe> probes;
    std::vector<double> lambdas;
    for (double v : values) {
        const auto [c, scheme] = sweep_point(spec, v);
        probes.push_back({scheme, spec.access, c.beta, c.q, c.sigma2_norm, c.eta, spec.sweep.param, swept ? v : 0.0});
        lambdas.push_back(c.lambda_bs);
    }

    auto base_batch = [&](double lambda_bs) {
        BatchSpec b;
        b.lambda_bs = lambda_bs;
        b.n_users = spec.cfg.n_users;
        b.lambda_ue = spec.lambda_ue;
        b.window = spec.window;
        b.layout = spec.layout;
        b.n_topologies = spec.n_topologies;
        b.n_fading = spec.n_fading;
        b.seed = spec.master_seed;
        b.workers = spec.workers;
        b.track_achievable = spec.track_achievable;
        b.xi_grid = spec.xi_grid;
        return b;
    };

    ExperimentResult result;
    result.points.resize(probes.size());
    long total_discarded = 0;
    long total_topologies = 0;
    auto run = [&](BatchSpec batch, const std::vector<std::size_t>& which) {
        auto stats = run_batch(batch);
        for (std::size_t k = 0; k < which.size(); ++k) result.points[which[k]] = std::move(stats[k]);
        total_discarded += stats.empty() ? 0 : result.points[which.front()].discarded;
        total_topologies += batch.n_topologies;
    };

    if (spec.common_random_numbers) {
        // One batch per distinct BS intensity; everything else shares topologies.
        std::map<double, std::vector<std::size_t>> by_lambda;
        for (std::size_t i = 0; i < probes.size(); ++i) by_lambda[lambdas[i]].push_back(i);
        for (const auto& [lambda, which] : by_lambda) {
            BatchSpec b = base_batch(lambda);
            for (std::size_t i : which) b.probes.push_back(probes[i]);
            run(std::move(b), which);
        }
    } else {
        for (std::size_t i = 0; i < probes.size(); ++i) {
            BatchSpec b = base_batch(lambdas[i]);
            b.seed = spec.master_seed + 0x9E3779B97F4A7C15ULL * (i + 1);
            b.probes.push_back(probes[i]);
            run(std::move(b), {i});
        }
    }
    result.discarded = total_discarded;
    result.discard_rate =
        static_cast<double>(total_discarded) / static_cast<double>(total_discarded + total_topologies);
    if (result.discard_rate > kDiscardWarning)
        result.warnings.push_back("typical-cell resample rate " + std::to_string(result.discard_rate) +
                                  " exceeds 5%; raise the UE intensity");
    return result;
}

ExperimentResult co_location_toggle(ExperimentSpec spec, InterfererLayout mode) {
    spec.layout = mode;
    return run_experiment(spec);
}

std::vector<double> empirical_meta(std::span<const double> samples, std::span<const double> xi_grid) {
    if (samples.empty()) throw InvalidParameter("empirical meta distribution needs at least one sample");
    const EmpiricalCcdf ccdf(std::vector<double>(samples.begin(), samples.end()));
    std::vector<double> out;
    out.reserve(xi_grid.size());
    for (double xi : xi_grid) out.push_back(ccdf(xi));
    return out;
}

std::vector<double> empirical_meta(std::span<const CrrSample> samples, std::span<const double> xi_grid) {
    std::vector<double> values;
    values.reserve(samples.size());
    for (const auto& s : samples) values.push_back(s.value);
    return empirical_meta(values, xi_grid);
}

EmpiricalCcdf::EmpiricalCcdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw InvalidParameter("empirical CCDF needs at least one sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCcdf::operator()(double xi) const {
    const auto above = sorted_.end() - std::upper_bound(sorted_.begin(), sorted_.end(), xi);
    return static_cast<double>(above) / static_cast<double>(sorted_.size());
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kBlock = 8;
    if (values.size() <= kBlock) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw InvalidParameter("linspace needs at least two points");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double step = (hi - lo) / (n - 1);
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = lo + step * k;
    out.back() = hi;
    return out;
}

}  // namespace rsmasg
