// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration shared by the CLI and the acceptance suite: analytic
// sweeps in the same result layout as the simulator, and second-order statistics
// of the interferer pattern.
#pragma once

#include <cstdint>
#include <vector>

#include "rsmasg/analytic.hpp"
#include "rsmasg/montecarlo.hpp"

namespace rsmasg {

/// Evaluates the mean (closed form), second moment and beta meta distribution for
/// every sweep point and rank. Stderr fields are zero; `samples` stays empty. Points
/// run on `spec.workers` threads; results do not depend on the worker count.
ExperimentResult run_analytic(const ExperimentSpec& spec, const AnalyticOptions& opts = {},
                              bool achievable = false);

struct SpatialStatsSpec {
    double lambda_bs = 1e-4;
    std::vector<int> n_users{2, 5};
    int network_realizations = 2000;
    int model_realizations = 50000;
    std::uint64_t seed = 1;
    Window window{};
    std::vector<double> r_grid;  ///< empty: 12 log-spaced radii with lambda pi r^2 in [0.5, 9]
    int workers = 1;
};

struct KFunctionRow {
    int n_users;
    double r;
    double empirical;  ///< K of Phi_I from full network realizations
    double theory;     ///< pi r^2 - (1 - exp(-B2 lambda pi r^2)) / (B2 lambda)
};

struct SecondMomentRow {
    int n_users;
    double r;
    double network;   ///< E[N(b(o, r))^2] of Phi_I
    double model_a;   ///< empirical, co-located clusters
    double model_b;   ///< empirical, inhomogeneous PPP
    double theory_a;  ///< N^2 (Lambda^2 + Lambda)
    double theory_b;  ///< N^2 Lambda^2 + N Lambda
};

struct SpatialStats {
    std::vector<double> r_grid;
    std::vector<KFunctionRow> k_function;
    std::vector<SecondMomentRow> second_moment;
    long discarded = 0;
};

/// Network realization t of configuration N uses make_stream(seed, t, 0), model
/// realizations use streams 2 (model A) and 3 (model B).
SpatialStats spatial_statistics(const SpatialStatsSpec& spec);

/// Radii with lambda pi r^2 log-spaced on [lo, hi].
std::vector<double> normalized_r_grid(double lambda, int count, double lo, double hi);

}  // namespace rsmasg
