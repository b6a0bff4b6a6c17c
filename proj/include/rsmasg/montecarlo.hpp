// SPDX-License-Identifier: Apache-2.0
//
// End-to-end network simulation: sample topologies, draw fading, evaluate the
// MCS rate per draw, fading-average per topology and aggregate across topologies.
//
// Every topology owns two RNG streams derived from (seed, topology index): one for
// the spatial layer and one for fading. Per-topology results are merged in index
// order with pairwise summation, so output is bit-identical for any worker count.
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rsmasg/mcs.hpp"
#include "rsmasg/spatial.hpp"

namespace rsmasg {

/// One operating point evaluated on the shared topology/fading draws.
struct Probe {
    McsScheme scheme;
    Access access = Access::Rsma;
    double beta = 0.5;
    double q = 0.0;
    double sigma2_norm = 0.0;
    double eta = 4.0;
    std::string sweep_param = "none";
    double sweep_value = 0.0;
};

struct BatchSpec {
    double lambda_bs = 1e-4;
    int n_users = 2;
    double lambda_ue = 0.0;  ///< 0 selects 20 * N * lambda_bs
    Window window{};
    InterfererLayout layout = InterfererLayout::Dispersed;
    int n_topologies = 1000;
    int n_fading = 5000;
    std::uint64_t seed = 1;
    int workers = 1;
    bool track_achievable = false;
    int max_attempts = 1000;
    std::vector<double> xi_grid;  ///< empty: 100 points on [0, 2 r_M] per probe
    std::vector<Probe> probes;
};

struct RankStatistics {
    double mean = 0.0;
    double m2 = 0.0;
    double var = 0.0;        ///< m2 - mean^2
    double stderr_mean = 0.0;
    double stderr_m2 = 0.0;
    std::vector<double> ccdf;     ///< P[CRR > xi] on the probe's xi grid
    std::vector<double> samples;  ///< per-topology CRR, in topology order
    double achievable_mean = 0.0;  ///< only with track_achievable
    double achievable_stderr = 0.0;
    bool meta_clamped = false;  ///< analytic rows: beta fit needed a variance clamp
};

struct RateStatistics {
    std::string sweep_param = "none";
    double sweep_value = 0.0;
    Access access = Access::Rsma;
    std::vector<double> xi_grid;
    std::vector<RankStatistics> ranks;  ///< index n - 1
    int n_topologies = 0;
    long discarded = 0;
    double discard_rate = 0.0;
};

/// Evaluates all probes on one shared set of topologies.
std::vector<RateStatistics> run_batch(const BatchSpec& spec);

inline constexpr double kDiscardWarning = 0.05;

struct SweepSpec {
    std::string param = "none";  ///< beta, q, sigma2_norm, lambda_bs, eta, thresholds
    std::vector<double> values;  ///< thresholds: dB shift applied to every threshold
};

struct ExperimentSpec {
    SystemConfig cfg{};
    McsScheme scheme = preset_scheme("S1");
    Access access = Access::Rsma;
    int n_topologies = 1000;
    int n_fading = 5000;
    std::uint64_t master_seed = 1;
    SweepSpec sweep{};
    int workers = 1;
    double lambda_ue = 0.0;
    Window window{};
    InterfererLayout layout = InterfererLayout::Dispersed;
    /// Reuse one topology set across sweep points that do not change the spatial law.
    bool common_random_numbers = true;
    bool track_achievable = false;
    std::vector<double> xi_grid;

    /// Throws InvalidParameter naming the offending field.
    void validate() const;
};

struct ExperimentResult {
    std::vector<RateStatistics> points;
    std::vector<std::string> warnings;
    long discarded = 0;
    double discard_rate = 0.0;
};

/// System configuration and MCS scheme at one sweep value (the experiment's own values
/// when the sweep is "none").
struct SweepPoint {
    SystemConfig cfg;
    McsScheme scheme;
};
SweepPoint sweep_point(const ExperimentSpec& spec, double value);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// run_experiment with the interferer layout forced to `mode`.
ExperimentResult co_location_toggle(ExperimentSpec spec, InterfererLayout mode);

/// Fraction of samples strictly above each xi.
std::vector<double> empirical_meta(std::span<const double> samples, std::span<const double> xi_grid);
std::vector<double> empirical_meta(std::span<const CrrSample> samples, std::span<const double> xi_grid);

/// Right-continuous empirical CCDF of a sample set.
class EmpiricalCcdf {
public:
    explicit EmpiricalCcdf(std::vector<double> samples);
    double operator()(double xi) const;
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

/// ccdf(xi - delta) - ccdf(xi) for any callable CCDF.
template <class Ccdf>
double interval_probability(const Ccdf& ccdf, double xi, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("interval width must be > 0");
    return ccdf(xi - delta) - ccdf(xi);
}

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

/// n points evenly spaced on [lo, hi].
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace rsmasg
