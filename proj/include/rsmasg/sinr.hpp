// SPDX-License-Identifier: Apache-2.0
//
// Instantaneous SINR of the typical BS for RSMA sub-messages, NOMA and OMA.
// Ranks are 1-based: rank 1 is the nearest scheduled user, decoded first, and
// suffers intra-cell interference from every farther user (distance-based SIC).
#pragma once

#include <cstdint>
#include <limits>

#include <Eigen/Dense>

#include "rsmasg/spatial.hpp"

namespace rsmasg {

struct SystemConfig {
    double lambda_bs = 1e-4;   ///< BS intensity, per m^2
    int n_users = 2;           ///< scheduled users per cell (N)
    double eta = 4.0;          ///< path-loss exponent
    double sigma2_norm = 0.0;  ///< noise power over transmit power
    double beta = 0.5;         ///< power fraction of sub-message 1
    double q = 0.0;            ///< P(b_n = 1): sub-message 2 decoded first
    double b1 = kB1;
    double b2 = kB2;

    /// Throws InvalidParameter naming the offending field.
    void validate() const;
};

struct FadingDraw {
    Eigen::ArrayXd h_typical;                    ///< H_n, unit exponential
    Eigen::ArrayXd h_interferer;                 ///< H_x, unit exponential
    Eigen::Array<std::uint8_t, Eigen::Dynamic, 1> b;  ///< decoding-order bits b_n
};

/// Unit-exponential gains for every link of the profile and Bernoulli(q) bits.
FadingDraw sample_fading(const DistanceProfile& profile, double q, Rng& rng);

struct SinrPair {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

/// num / den with 0 / x = 0 and x / 0 = +inf for x > 0.
inline double sinr_ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

/// RSMA sub-message SINRs from the desired power x = H_n R_n^-eta and the interference
/// plus noise floor; b = 1 decodes sub-message 2 first.
inline SinrPair sinr_split(double beta, bool b, double x, double floor) {
    const double bf = b ? 1.0 : 0.0;
    return {sinr_ratio(beta * x, bf * x * (1.0 - beta) + floor),
            sinr_ratio((1.0 - beta) * x, (1.0 - bf) * x * beta + floor)};
}

SinrPair sinr_rsma(int rank, const DistanceProfile& profile, const FadingDraw& fading, const SystemConfig& cfg);
double sinr_noma(int rank, const DistanceProfile& profile, const FadingDraw& fading, const SystemConfig& cfg);
/// Requires a single scheduled user.
double sinr_oma(const DistanceProfile& profile, const FadingDraw& fading, const SystemConfig& cfg);

}  // namespace rsmasg
