// SPDX-License-Identifier: Apache-2.0
//
// Multi-level MCS rate adaptation and the fading-averaged conditional received
// rate (CRR) on a fixed topology. Rates are in nats/s/Hz with unit bandwidth.
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsmasg/sinr.hpp"

namespace rsmasg {

enum class Access { Rsma, Noma, Oma };

std::string_view to_string(Access a);
Access access_from_string(std::string_view name);

/// SINR thresholds theta_1 < ... < theta_M (linear) and rates r_0 = 0 < r_1 < ... < r_M.
class McsScheme {
public:
    /// `rates` lists r_1..r_M. Throws InvalidParameter on any ordering/size violation.
    McsScheme(std::vector<double> thresholds_linear, std::vector<double> rates);
    static McsScheme from_db(std::span<const double> thresholds_db, std::vector<double> rates);

    int levels() const { return static_cast<int>(thresholds_.size()); }
    const std::vector<double>& thresholds() const { return thresholds_; }
    /// Full ladder r_0..r_M.
    const std::vector<double>& ladder() const { return ladder_; }
    double rate(int m) const { return ladder_[static_cast<std::size_t>(m)]; }
    double top_rate() const { return ladder_.back(); }
    /// r_m - r_{m-1} for m = 1..M.
    double increment(int m) const { return ladder_[static_cast<std::size_t>(m)] - ladder_[static_cast<std::size_t>(m - 1)]; }
    std::vector<double> thresholds_db() const;

    /// Copy with every threshold shifted by `db`.
    McsScheme shifted_db(double db) const;

private:
    std::vector<double> thresholds_;
    std::vector<double> ladder_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// Named presets S1-S4. An empty `rates` selects the default ladder r_1 = 0.4, r_2 = 0.6
/// truncated to the preset's level count.
McsScheme preset_scheme(std::string_view name, std::vector<double> rates = {});
std::vector<std::string> preset_names();

/// The unique m with theta_m <= gamma < theta_{m+1}; +inf maps to M.
inline int rate_level(double gamma, const McsScheme& scheme) {
    const auto& th = scheme.thresholds();
    int m = 0;
    while (m < static_cast<int>(th.size()) && gamma >= th[static_cast<std::size_t>(m)]) ++m;
    return m;
}

/// r_m for the unique m with theta_m <= gamma < theta_{m+1}; +inf maps to r_M.
inline double rate_map(double gamma, const McsScheme& scheme) { return scheme.rate(rate_level(gamma, scheme)); }

/// sum_{m >= 1} (hits_m / draws) r_m. Averaging level counts instead of rates keeps
/// the result exactly at the top of its support when every hit is at level M.
double rate_from_level_hits(std::span<const long> hits, long draws, const McsScheme& scheme);

/// ln(1 + gamma); +inf stays +inf.
inline double shannon_map(double gamma) { return std::log1p(gamma); }

struct CrrSample {
    double value = 0.0;
    int rank = 1;
    Access access = Access::Rsma;
};

/// Mean over `n_fading` draws of rate_map(gamma1) + rate_map(gamma2) (RSMA) or
/// rate_map(gamma) (NOMA/OMA).
CrrSample crr_empirical(const DistanceProfile& profile, const SystemConfig& cfg, const McsScheme& scheme, int rank,
                        int n_fading, Rng& rng, Access access = Access::Rsma);

/// Fading-averaged Shannon rate, ln(1+gamma1) + ln(1+gamma2) for RSMA. Rejects the
/// degenerate case with no noise and no interference for the last-decoded user, where
/// the rate is infinite.
double achievable_empirical(const DistanceProfile& profile, const SystemConfig& cfg, int rank, int n_fading, Rng& rng,
                            Access access = Access::Rsma);

/// rate / bandwidth.
double spectral_efficiency(double rate, double bandwidth = 1.0);

inline constexpr double kNatsToBits = 1.4426950408889634;  // 1 / ln 2

}  // namespace rsmasg
