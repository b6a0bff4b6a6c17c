// SPDX-License-Identifier: Apache-2.0
#include "rsmasg/analytic.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "rsmasg/errors.hpp"

namespace rsmasg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// All spatial integrals run in units of 1 / sqrt(lambda * pi); lambda then only
// survives in the rescaled noise power.
double dimensionless_noise(const SystemConfig& cfg) {
    return cfg.sigma2_norm * std::pow(cfg.lambda_bs * kPi, -0.5 * cfg.eta);
}

double log_h(std::span<const SlopePower> factors, double ratio_eta) {
    double acc = 0.0;
    for (const auto& f : factors) acc -= f.power * std::log1p(f.slope * ratio_eta);
    return acc;
}

double max_slope(std::span<const SlopePower> factors) {
    double s = 0.0;
    for (const auto& f : factors) s = std::max(s, f.slope);
    return s;
}

void check_rank(const SystemConfig& cfg, int rank) {
    if (rank < 1 || rank > cfg.n_users)
        throw InvalidParameter("rank " + std::to_string(rank) + " outside 1.." + std::to_string(cfg.n_users));
    if (cfg.n_users - rank > quad::kMaxSimplexDimension)
        throw InvalidParameter("N - n must not exceed " + std::to_string(quad::kMaxSimplexDimension));
}

quad::Tolerance tightened(const quad::Tolerance& t, double factor) {
    quad::Tolerance out = t;
    out.abs *= factor;
    out.rel *= factor;
    return out;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// Conditional success probability of one branch with slope s on a fixed topology.
double conditional_success(const DistanceProfile& p, int rank, double slope, const SystemConfig& cfg) {
    const auto& r = p.ordered_typical;
    const double rn = r(rank - 1);
    double prod = std::exp(-std::pow(rn, cfg.eta) * cfg.sigma2_norm * slope);
    for (Eigen::Index i = rank; i < r.size(); ++i) prod /= 1.0 + slope * std::pow(rn / r(i), cfg.eta);
    for (Eigen::Index x = 0; x < p.interferer.size(); ++x)
        prod /= 1.0 + slope * std::pow(rn / p.interferer(x), cfg.eta);
    return prod;
}

double crr_from_levels(const DistanceProfile& profile, const SystemConfig& cfg, const std::vector<LevelTerms>& levels,
                       int rank) {
    if (rank < 1 || rank > profile.n_users())
        throw InvalidParameter("rank " + std::to_string(rank) + " outside 1.." + std::to_string(profile.n_users()));
    double total = 0.0;
    for (const auto& level : levels) {
        double inner = 0.0;
        for (const auto& br : level.branches)
            if (br.active() && br.weight != 0.0)
                inner += br.weight * conditional_success(profile, rank, level.theta / br.u, cfg);
        total += level.increment * inner;
    }
    return total;
}

}  // namespace

// ----- split factors ---------------------------------------------------------------

SplitFactors split_factors(double beta, double q, const McsScheme& scheme) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidParameter("beta must lie in [0, 1]");
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidParameter("q must lie in [0, 1]");
    const int m_count = scheme.levels();
    SplitFactors sf;
    sf.u.resize(4, m_count);
    sf.active.resize(4, m_count);
    sf.c << q, 1.0 - q, 1.0 - q, q;
    for (int m = 0; m < m_count; ++m) {
        const double th = scheme.thresholds()[static_cast<std::size_t>(m)];
        sf.u(0, m) = (1.0 + th) * beta - th;
        sf.u(1, m) = beta;
        sf.u(2, m) = 1.0 - (1.0 + th) * beta;
        sf.u(3, m) = 1.0 - beta;
    }
    sf.active = sf.u > 0.0;
    return sf;
}

std::vector<LevelTerms> level_terms(const SystemConfig& cfg, const McsScheme& scheme, Access access) {
    if (access == Access::Oma && cfg.n_users != 1)
        throw InvalidParameter("OMA serves exactly one user per resource block");
    std::vector<LevelTerms> out;
    out.reserve(static_cast<std::size_t>(scheme.levels()));
    const SplitFactors sf = access == Access::Rsma ? split_factors(cfg.beta, cfg.q, scheme) : SplitFactors{};
    for (int m = 1; m <= scheme.levels(); ++m) {
        LevelTerms lt{scheme.increment(m), scheme.thresholds()[static_cast<std::size_t>(m - 1)], {}};
        if (access == Access::Rsma) {
            for (int j = 0; j < 4; ++j) lt.branches.push_back({sf.c(j), sf.u(j, m - 1)});
        } else {
            lt.branches.push_back({1.0, 1.0});
        }
        out.push_back(std::move(lt));
    }
    return out;
}

// ----- conditional rates -----------------------------------------------------------------

double crr_conditional(const DistanceProfile& profile, const SystemConfig& cfg, const McsScheme& scheme, int rank) {
    return crr_from_levels(profile, cfg, level_terms(cfg, scheme, Access::Rsma), rank);
}

double crr_noma_conditional(const DistanceProfile& profile, const SystemConfig& cfg, const McsScheme& scheme,
                            int rank) {
    return crr_from_levels(profile, cfg, level_terms(cfg, scheme, Access::Noma), rank);
}

double crr_oma_conditional(const DistanceProfile& profile, const SystemConfig& cfg, const McsScheme& scheme) {
    if (profile.n_users() != 1) throw InvalidParameter("OMA serves exactly one user per resource block");
    return crr_from_levels(profile, cfg, level_terms(cfg, scheme, Access::Noma), 1);
}

// ----- spatial averages ---------------------------------------------------------------------

double intra_cell_factor(std::span<const SlopePower> factors, double r, const SystemConfig& cfg, int rank,
                         const AnalyticOptions& opts) {
    const int d = cfg.n_users - rank;
    if (d == 0) return 1.0;
    const double eta = cfg.eta, b1 = cfg.b1;
    // f(x) / (1 - F(r)) on x >= r, times the product kernel.
    auto weight = [&](double x) {
        if (!std::isfinite(x)) return 0.0;
        const double decay = std::exp(-b1 * (x - r) * (x + r));
        if (decay == 0.0) return 0.0;
        return 2.0 * b1 * x * decay * std::exp(log_h(factors, std::pow(r / x, eta)));
    };
    auto integrand = [&](std::span<const double> xs) {
        double p = 1.0;
        for (double x : xs) p *= weight(x);
        return p;
    };
    return factorial(d) * quad::ordered_simplex(integrand, r, d, opts.inner).value;
}

double inter_cell_factor(std::span<const SlopePower> factors, double r, const SystemConfig& cfg,
                         const AnalyticOptions& opts) {
    if (!opts.inter_cell_interference) return 1.0;
    const double s_ref = max_slope(factors);
    if (!(s_ref > 0.0) || !(r > 0.0)) return 1.0;
    const double eta = cfg.eta, b2 = cfg.b2;
    const double n = cfg.n_users;
    // Integral over y of (1 - h(r/y)^N) g(y) y, taken in z = ln y and split at the
    // scale where the kernel turns over.
    auto kernel = [&](double z) {
        const double y = std::exp(z);
        if (y == 0.0 || !std::isfinite(y)) return 0.0;
        const double miss = -std::expm1(n * log_h(factors, std::pow(r / y, eta)));
        if (miss == 0.0) return 0.0;
        return miss * -std::expm1(-b2 * y * y) * y * y;
    };
    const double z0 = std::log(r) + std::log(s_ref) / eta;
    const double upper = quad::semi_infinite([&](double w) { return kernel(z0 + w); }, 0.0, opts.inner).value;
    const double lower = quad::semi_infinite([&](double w) { return kernel(z0 - w); }, 0.0, opts.inner).value;
    return std::exp(-2.0 * (upper + lower));
}

double spatial_expectation(std::span<const SlopePower> factors_in, const SystemConfig& cfg, int rank,
                           const AnalyticOptions& opts) {
    cfg.validate();
    check_rank(cfg, rank);
    std::vector<SlopePower> factors;
    for (const auto& f : factors_in) {
        if (f.power < 0 || !(f.slope >= 0.0) || !std::isfinite(f.slope))
            throw InvalidParameter("slopes must be finite and >= 0 with non-negative powers");
        if (f.power > 0 && f.slope > 0.0) factors.push_back(f);
    }
    if (factors.empty()) return 1.0;

    double slope_sum = 0.0;
    for (const auto& f : factors) slope_sum += f.power * f.slope;
    const double noise = dimensionless_noise(cfg);
    const double eta = cfg.eta, b1 = cfg.b1;
    const int n_users = cfg.n_users;

    // Outer radial integral in z = ln r, from the truncation radius downwards.
    const double z_max = 0.5 * std::log(-std::log(opts.radial_tail) / b1);
    auto outer = [&](double w) {
        const double r = std::exp(z_max - w);
        if (r == 0.0) return 0.0;
        const double density = ordered_pdf(r, rank, n_users, 1.0 / kPi, b1);
        if (density == 0.0) return 0.0;
        const double noise_term = noise > 0.0 ? std::exp(-std::pow(r, eta) * noise * slope_sum) : 1.0;
        if (noise_term == 0.0) return 0.0;
        return density * r * noise_term * intra_cell_factor(factors, r, cfg, rank, opts) *
               inter_cell_factor(factors, r, cfg, opts);
    };
    return quad::semi_infinite(outer, 0.0, opts.outer).value;
}

double avg_received_rate(const SystemConfig& cfg, const McsScheme& scheme, int rank, Access access,
                         const AnalyticOptions& opts) {
    cfg.validate();
    check_rank(cfg, rank);
    double total = 0.0;
    for (const auto& level : level_terms(cfg, scheme, access)) {
        double inner = 0.0;
        for (const auto& br : level.branches) {
            if (!br.active() || br.weight == 0.0) continue;
            const SlopePower f{level.theta / br.u, 1};
            inner += br.weight * spatial_expectation(std::span<const SlopePower>(&f, 1), cfg, rank, opts);
        }
        total += level.increment * inner;
    }
    return total;
}

double avg_achievable_rate(const SystemConfig& cfg, int rank, Access access, const AnalyticOptions& opts) {
    cfg.validate();
    check_rank(cfg, rank);
    if (access == Access::Oma && cfg.n_users != 1)
        throw InvalidParameter("OMA serves exactly one user per resource block");
    if (cfg.sigma2_norm == 0.0 && !opts.inter_cell_interference && rank == cfg.n_users)
        throw InvalidParameter("achievable rate diverges without noise or interference");

    // ln(1 + gamma) = int_0^inf 1(gamma > e^t - 1) dt; each branch succeeds with slope
    // (e^t - 1) / L_j(t) while L_j(t) > 0.
    struct ShannonBranch {
        double weight;
        std::function<double(double)> L;
        double t_end;
    };
    std::vector<ShannonBranch> branches;
    const double beta = cfg.beta, q = cfg.q;
    if (access == Access::Rsma) {
        branches.push_back({q, [beta](double t) { return 1.0 - (1.0 - beta) * std::exp(t); },
                            beta < 1.0 ? -std::log1p(-beta) : kInf});
        branches.push_back({1.0 - q, [beta](double) { return beta; }, beta > 0.0 ? kInf : 0.0});
        branches.push_back({1.0 - q, [beta](double t) { return 1.0 - beta * std::exp(t); },
                            beta > 0.0 ? -std::log(beta) : kInf});
        branches.push_back({q, [beta](double) { return 1.0 - beta; }, beta < 1.0 ? kInf : 0.0});
    } else {
        branches.push_back({1.0, [](double) { return 1.0; }, kInf});
    }

    AnalyticOptions nested = opts;
    nested.outer = tightened(opts.outer, 0.1);
    nested.inner = tightened(opts.inner, 0.1);
    double total = 0.0;
    for (const auto& br : branches) {
        if (br.weight == 0.0 || !(br.t_end > 0.0)) continue;
        auto integrand = [&](double t) {
            const double l = br.L(t);
            if (!(l > 0.0)) return 0.0;
            const SlopePower f{std::expm1(t) / l, 1};
            if (!std::isfinite(f.slope)) return 0.0;
            return spatial_expectation(std::span<const SlopePower>(&f, 1), cfg, rank, nested);
        };
        const double v = std::isfinite(br.t_end) ? quad::gauss_kronrod(integrand, 0.0, br.t_end, opts.outer).value
                                                 : quad::semi_infinite(integrand, 0.0, opts.outer).value;
        total += br.weight * v;
    }
    return total;
}

// ----- moments ----------------------------------------------------------------------------------

std::vector<std::vector<int>> compositions(int total, int parts) {
    if (total < 0 || parts < 0) throw InvalidParameter("compositions need non-negative arguments");
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(parts), 0);
    std::function<void(int, int)> fill = [&](int index, int left) {
        if (index == parts - 1) {
            current[static_cast<std::size_t>(index)] = left;
            out.push_back(current);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            current[static_cast<std::size_t>(index)] = k;
            fill(index + 1, left - k);
        }
    };
    if (parts == 0) {
        if (total == 0) out.emplace_back();
        return out;
    }
    fill(0, total);
    return out;
}

double multinomial(int total, std::span<const int> parts) {
    int sum = 0;
    double denom = 1.0;
    for (int k : parts) {
        if (k < 0) throw InvalidParameter("multinomial parts must be non-negative");
        sum += k;
        denom *= factorial(k);
    }
    if (sum != total) throw InvalidParameter("multinomial parts must sum to the total");
    return factorial(total) / denom;
}

double moment_crr(int b, const SystemConfig& cfg, const McsScheme& scheme, int rank, Access access,
                  const AnalyticOptions& opts) {
    if (b < 1 || b > kMaxMomentOrder)
        throw InvalidParameter("moment order must lie in 1.." + std::to_string(kMaxMomentOrder));
    cfg.validate();
    check_rank(cfg, rank);
    const auto levels = level_terms(cfg, scheme, access);
    const int m_count = static_cast<int>(levels.size());

    double total = 0.0;
    std::vector<SlopePower> factors;
    // Outer expansion over level counts n_m (sum b), inner over branch counts k_{j,m}
    // (sum n_m); coefficients A_b * prod dr_m^{n_m} and B_m * prod c_j^{k_{j,m}}.
    for (const auto& counts : compositions(b, m_count)) {
        double coeff = multinomial(b, counts);
        for (int m = 0; m < m_count; ++m)
            coeff *= std::pow(levels[static_cast<std::size_t>(m)].increment, counts[static_cast<std::size_t>(m)]);
        if (coeff == 0.0) continue;

        std::function<void(int, double)> expand = [&](int m, double c) {
            if (m == m_count) {
                total += c * spatial_expectation(factors, cfg, rank, opts);
                return;
            }
            const int n_m = counts[static_cast<std::size_t>(m)];
            if (n_m == 0) {
                expand(m + 1, c);
                return;
            }
            const auto& level = levels[static_cast<std::size_t>(m)];
            const int n_branch = static_cast<int>(level.branches.size());
            for (const auto& k : compositions(n_m, n_branch)) {
                double bm = multinomial(n_m, k);
                bool usable = true;
                for (int j = 0; j < n_branch && usable; ++j) {
                    const int kj = k[static_cast<std::size_t>(j)];
                    if (kj == 0) continue;
                    const auto& br = level.branches[static_cast<std::size_t>(j)];
                    usable = br.active() && br.weight != 0.0;
                    bm *= std::pow(br.weight, kj);
                }
                if (!usable) continue;
                const std::size_t mark = factors.size();
                for (int j = 0; j < n_branch; ++j) {
                    const int kj = k[static_cast<std::size_t>(j)];
                    if (kj > 0)
                        factors.push_back({level.theta / level.branches[static_cast<std::size_t>(j)].u, kj});
                }
                expand(m + 1, c * bm);
                factors.resize(mark);
            }
        };
        expand(0, coeff);
    }
    return total;
}

double moment_crr_oma(int b, const SystemConfig& cfg, const McsScheme& scheme, const AnalyticOptions& opts) {
    return moment_crr(b, cfg, scheme, 1, Access::Oma, opts);
}

// ----- meta distribution -------------------------------------------------------------------------

double BetaMeta::ccdf(double xi) const {
    const double x = xi / scale;
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    return boost::math::ibetac(alpha, phi, x);
}

BetaMeta fit_beta_meta(double mean, double m2, double scale, InfeasiblePolicy policy) {
    if (!std::isfinite(scale) || !(scale > 0.0)) throw InvalidParameter("beta meta scale must be > 0");
    const double mu = mean / scale;
    if (!(mu > 0.0 && mu < 1.0)) throw InfeasibleMoments("mean must lie strictly inside (0, scale)");
    const double bound = mu * (1.0 - mu);
    double v = (m2 - mean * mean) / (scale * scale);
    BetaMeta out;
    out.scale = scale;
    if (!(v < bound)) {
        if (policy == InfeasiblePolicy::Throw)
            throw InfeasibleMoments("variance must be below mean * (scale - mean)");
        v = 0.999 * bound;
        out.clamped = true;
    } else if (!(v > 0.0)) {
        if (policy == InfeasiblePolicy::Throw) throw InfeasibleMoments("variance must be positive");
        v = 1e-6 * bound;
        out.clamped = true;
    }
    const double k = bound / v - 1.0;
    out.alpha = mu * k;
    out.phi = (1.0 - mu) * k;
    return out;
}

std::vector<double> beta_meta(double mean, double m2, double scale, std::span<const double> xi_grid) {
    const BetaMeta fit = fit_beta_meta(mean, m2, scale, InfeasiblePolicy::Throw);
    std::vector<double> out;
    out.reserve(xi_grid.size());
    for (double xi : xi_grid) out.push_back(fit.ccdf(xi));
    return out;
}

double crr_scale(const McsScheme& scheme, Access access) {
    return access == Access::Rsma ? 2.0 * scheme.top_rate() : scheme.top_rate();
}

}  // namespace rsmasg
