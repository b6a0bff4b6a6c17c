// SPDX-License-Identifier: Apache-2.0
//
// Spatial layer of the uplink network: Poisson sampling of base stations and
// users, nearest-BS association with per-cell scheduling, link-distance
// profiles seen from the typical BS at the origin, and the interference-field
// models (pair correlation, K function, clustered and Poisson interferers).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rsmasg {

using Rng = std::mt19937_64;

/// Independent stream for work item `index` of sub-stream `stream` under `master_seed`.
/// Pure function of its arguments.
Rng make_stream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t stream = 0);

/// Square observation window centred on the origin, [-L/2, L/2)^2.
struct Window {
    double side_length = 1000.0;
    bool wraparound = true;  ///< torus metric

    double area() const { return side_length * side_length; }
    void validate() const;
};

/// Points stored column-wise, metres.
using PointSet = Eigen::Matrix2Xd;

/// Displacement a - b under the window metric (minimum image on the torus).
Eigen::Vector2d displacement(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Window& w);
/// Distance of every point to the origin under the window metric.
Eigen::ArrayXd distances_to_origin(const PointSet& pts, const Window& w);

/// Fixed model constants of the distance and interference approximations.
inline constexpr double kB1 = 5.0 / 4.0;
inline constexpr double kB2 = 12.0 / 5.0;

// ----- sampling ----------------------------------------------------------------

/// Homogeneous PPP of the given intensity (per m^2) on the window.
PointSet sample_homogeneous_ppp(double intensity, const Window& w, Rng& rng);

struct CellAssignment {
    std::vector<int> serving_bs;              ///< per UE: index of its nearest BS
    std::vector<std::vector<int>> selected;   ///< per BS: scheduled UE indices
    int short_cells = 0;                      ///< cells with fewer than N members
};

/// Nearest-BS association followed by uniform selection, without replacement, of
/// `n_per_cell` members in each cell. Cells with fewer members schedule all of them
/// and are counted in `short_cells`.
CellAssignment associate_and_select(const PointSet& bs, const PointSet& ue, int n_per_cell,
                                    const Window& w, Rng& rng);

struct DistanceProfile {
    Eigen::ArrayXd ordered_typical;  ///< R_1 <= ... <= R_N
    Eigen::ArrayXd interferer;       ///< D_x, all scheduled UEs of other cells

    int n_users() const { return static_cast<int>(ordered_typical.size()); }
};

enum class InterfererLayout {
    Dispersed,   ///< true UE positions
    Colocated,   ///< every scheduled UE of a cell placed at one parent point
};

/// Typical BS is column 0 of `bs` and sits at the origin. In the colocated layout the
/// parent of an interfering cell is the position of its first scheduled UE, which is a
/// uniform pick from the cell.
DistanceProfile distance_profile(const CellAssignment& assignment, const PointSet& bs, const PointSet& ue,
                                 const Window& w, InterfererLayout layout = InterfererLayout::Dispersed);

/// One sampled topology with the typical BS at the origin.
struct NetworkRealization {
    PointSet bs;
    PointSet ue;
    CellAssignment assignment;
    int discarded = 0;  ///< redraws because the typical cell had fewer than N users
};

/// Draws BS and UE processes (Palm: a BS is added at the origin) until the typical
/// cell holds at least `n_per_cell` users. Gives up with InvalidParameter after
/// `max_attempts` consecutive failures.
NetworkRealization sample_network(double lambda_bs, double lambda_ue, int n_per_cell, const Window& w, Rng& rng,
                                  int max_attempts = 1000);

/// Positions of every scheduled UE outside the typical cell (the pattern Phi_I).
PointSet interferer_points(const NetworkRealization& net);

/// Model A: parents form an inhomogeneous PPP with intensity lambda * g(r); each
/// parent carries `n_per_cell` co-located points.
PointSet sample_interferers_model_a(double lambda, int n_per_cell, const Window& w, Rng& rng, double b2 = kB2);
/// Model B: inhomogeneous PPP with intensity N * lambda * g(r).
PointSet sample_interferers_model_b(double lambda, int n_per_cell, const Window& w, Rng& rng, double b2 = kB2);

// ----- distance distributions ---------------------------------------------------

/// Rayleigh-type pdf of an unordered user-to-BS distance: 2 B1 pi lambda r exp(-B1 lambda pi r^2).
double rayleigh_distance_pdf(double r, double lambda, double b1 = kB1);
double rayleigh_distance_cdf(double r, double lambda, double b1 = kB1);
/// Density of the n-th smallest of N i.i.d. distances (1 <= n <= N).
double ordered_pdf(double r, int n, int n_users, double lambda, double b1 = kB1);

// ----- second-order statistics ----------------------------------------------------

/// BS-UE pair correlation g(r) = 1 - exp(-B2 lambda pi r^2).
double pair_correlation(double r, double lambda, double b2 = kB2);
/// K(r) = pi r^2 - (1 - exp(-B2 lambda pi r^2)) / (B2 lambda), the integral of 2 pi s g(s).
double k_function(double r, double lambda, double b2 = kB2);

/// Empirical K of interferer patterns seen from a BS at the origin:
/// mean count within r divided by N lambda. Distances use the window metric, so the
/// torus needs no further edge correction for r <= L/2.
std::vector<double> estimate_k_function(std::span<const PointSet> realizations, int n_per_cell, double lambda,
                                        std::span<const double> r_grid, const Window& w);

/// Empirical E[N(b(o, r))^2] over the realizations.
std::vector<double> estimate_second_moment(std::span<const PointSet> realizations, std::span<const double> r_grid,
                                           const Window& w);

/// `count` log-spaced radii in [lo, hi] / sqrt(lambda pi).
std::vector<double> default_r_grid(double lambda, int count = 50, double lo = 0.01, double hi = 3.0);

/// Writes "x,y" rows (metres).
void write_points_csv(std::ostream& os, const PointSet& pts);

}  // namespace rsmasg
