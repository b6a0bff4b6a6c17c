// SPDX-License-Identifier: Apache-2.0
//
// Numerical evaluation of the closed-form rate expressions:
//
//  * conditional received rate on a fixed topology (exact fading expectation),
//  * its spatial average over the Rayleigh-approximated link distances and the
//    clustered (co-located, parent intensity lambda * g) interferer model,
//  * the Shannon-rate counterpart,
//  * b-th moments via the double multinomial expansion, and
//  * a beta approximation of the CRR meta distribution.
//
// Every CRR is a weighted sum of "success terms"  c * 1(u > 0) * P(H > s * (I + noise) R^eta)
// with slope s = theta / u, which makes RSMA, NOMA and OMA share one evaluator.
#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rsmasg/mcs.hpp"
#include "rsmasg/quadrature.hpp"
#include "rsmasg/spatial.hpp"

namespace rsmasg {

// ----- split factors ----------------------------------------------------------------

/// Rows j = 1..4 of u_{j,m}(beta), the branch weights c_j(q) and the activity mask.
struct SplitFactors {
    Eigen::Array<double, 4, Eigen::Dynamic> u;
    Eigen::Array4d c;
    Eigen::Array<bool, 4, Eigen::Dynamic> active;
};

SplitFactors split_factors(double beta, double q, const McsScheme& scheme);

/// One (j, m) branch of the CRR expansion.
struct Branch {
    double weight;  ///< c_j(q)
    double u;       ///< u_{j,m}(beta); inactive when u <= 0
    bool active() const { return u > 0.0; }
};

/// All branches of MCS level m; NOMA/OMA use the single branch (1, 1).
struct LevelTerms {
    double increment;  ///< r_m - r_{m-1}
    double theta;      ///< linear threshold
    std::vector<Branch> branches;
};

std::vector<LevelTerms> level_terms(const SystemConfig& cfg, const McsScheme& scheme, Access access);

// ----- conditional rates --------------------------------------------------------------

/// Exact fading expectation of the RSMA CRR for a fixed topology (uses cfg.beta, cfg.q).
double crr_conditional(const DistanceProfile& profile, const SystemConfig& cfg, const McsScheme& scheme, int rank);
double crr_noma_conditional(const DistanceProfile& profile, const SystemConfig& cfg, const McsScheme& scheme, int rank);
double crr_oma_conditional(const DistanceProfile& profile, const SystemConfig& cfg, const McsScheme& scheme);

// ----- spatial averages ---------------------------------------------------------------

struct AnalyticOptions {
    quad::Tolerance outer{1e-10, 1e-9, 400};
    quad::Tolerance inner{1e-12, 1e-11, 400};
    /// Radial truncation: exp(-B1 lambda pi r_max^2) equals this value.
    double radial_tail = 1e-13;
    /// Off: inter-cell interference is dropped entirely (the PGFL factor is 1).
    bool inter_cell_interference = true;
};

/// A factor I_l raised to power k_l inside a spatial expectation.
struct SlopePower {
    double slope;  ///< theta / u
    int power;
};

/// E[ prod_l (exp(-R_n^eta sigma2 s_l) prod_i 1/(1+s_l (R_n/R_i)^eta) prod_x 1/(1+s_l (R_n/D_x)^eta))^{k_l} ]
/// over the approximated spatial model: R_n from the ordered Rayleigh law, farther
/// intra-cell users through the conditional joint density on the ordered region, and
/// interferers through the clustered-process PGFL.
double spatial_expectation(std::span<const SlopePower> factors, const SystemConfig& cfg, int rank,
                           const AnalyticOptions& opts = {});

/// Intra-cell factor E[prod_{i>n} h(R_i) | R_n = r] evaluated on the ordered region.
/// `r` is dimensionless (units of 1/sqrt(lambda pi)).
double intra_cell_factor(std::span<const SlopePower> factors, double r, const SystemConfig& cfg, int rank,
                         const AnalyticOptions& opts = {});
/// Inter-cell PGFL factor at dimensionless r.
double inter_cell_factor(std::span<const SlopePower> factors, double r, const SystemConfig& cfg,
                         const AnalyticOptions& opts = {});

/// Spatially averaged received rate; access = Rsma uses cfg.beta / cfg.q.
double avg_received_rate(const SystemConfig& cfg, const McsScheme& scheme, int rank, Access access = Access::Rsma,
                         const AnalyticOptions& opts = {});
inline double avg_received_rate_rsma(const SystemConfig& cfg, const McsScheme& scheme, int rank,
                                     const AnalyticOptions& opts = {}) {
    return avg_received_rate(cfg, scheme, rank, Access::Rsma, opts);
}

/// Spatially averaged Shannon rate E[ln(1+gamma1) + ln(1+gamma2)] (RSMA) or E[ln(1+gamma)].
/// Throws InvalidParameter when neither noise nor any interference is present for the
/// last-decoded user.
double avg_achievable_rate(const SystemConfig& cfg, int rank, Access access = Access::Rsma,
                           const AnalyticOptions& opts = {});
inline double avg_achievable_rate_rsma(const SystemConfig& cfg, int rank, const AnalyticOptions& opts = {}) {
    return avg_achievable_rate(cfg, rank, Access::Rsma, opts);
}

// ----- moments -------------------------------------------------------------------------

/// All vectors of `parts` non-negative integers summing to `total`, in lexicographic order.
std::vector<std::vector<int>> compositions(int total, int parts);
/// total! / prod(parts!)
double multinomial(int total, std::span<const int> parts);

inline constexpr int kMaxMomentOrder = 3;

/// b-th moment of the CRR over topologies (1 <= b <= 3).
double moment_crr(int b, const SystemConfig& cfg, const McsScheme& scheme, int rank, Access access = Access::Rsma,
                  const AnalyticOptions& opts = {});
inline double moment_crr_rsma(int b, const SystemConfig& cfg, const McsScheme& scheme, int rank,
                              const AnalyticOptions& opts = {}) {
    return moment_crr(b, cfg, scheme, rank, Access::Rsma, opts);
}
inline double moment_crr_noma(int b, const SystemConfig& cfg, const McsScheme& scheme, int rank,
                              const AnalyticOptions& opts = {}) {
    return moment_crr(b, cfg, scheme, rank, Access::Noma, opts);
}
/// Requires cfg.n_users == 1.
double moment_crr_oma(int b, const SystemConfig& cfg, const McsScheme& scheme, const AnalyticOptions& opts = {});

// ----- meta distribution -----------------------------------------------------------------

enum class InfeasiblePolicy {
    Throw,  ///< InfeasibleMoments naming the violated bound
    Clamp,  ///< pull the variance inside the feasible region and flag it
};

/// scale * Beta(alpha, phi) matched to a CRR mean and second moment.
struct BetaMeta {
    double alpha = 1.0;
    double phi = 1.0;
    double scale = 1.0;
    bool clamped = false;

    /// P[CRR > xi]
    double ccdf(double xi) const;
};

BetaMeta fit_beta_meta(double mean, double m2, double scale, InfeasiblePolicy policy = InfeasiblePolicy::Throw);

/// CCDF of the moment-matched beta law on `xi_grid`. Throws InfeasibleMoments.
std::vector<double> beta_meta(double mean, double m2, double scale, std::span<const double> xi_grid);

/// Normalisation scale of the CRR: 2 r_M for RSMA, r_M otherwise.
double crr_scale(const McsScheme& scheme, Access access);

}  // namespace rsmasg
