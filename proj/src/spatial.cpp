// SPDX-License-Identifier: Apache-2.0
#include "rsmasg/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "rsmasg/errors.hpp"

namespace rsmasg {

namespace {

constexpr double kPi = std::numbers::pi;

inline double wrap(double d, double side) {
    const double half = 0.5 * side;
    if (d >= half) return d - side;
    if (d < -half) return d + side;
    return d;
}

void require_finite_positive(double v, const char* what) {
    if (!std::isfinite(v) || !(v > 0.0)) throw InvalidParameter(std::string(what) + " must be finite and positive");
}

PointSet thin_by_pair_correlation(const PointSet& pts, double lambda, double b2, const Window& w, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::ArrayXd d = distances_to_origin(pts, w);
    std::vector<Eigen::Index> keep;
    keep.reserve(static_cast<std::size_t>(pts.cols()));
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
        if (unit(rng) < pair_correlation(d(i), lambda, b2)) keep.push_back(i);
    PointSet out(2, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = pts.col(keep[k]);
    return out;
}

}  // namespace

Rng make_stream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

void Window::validate() const {
    if (!std::isfinite(side_length) || !(side_length > 0.0)) throw InvalidParameter("window.side_length must be > 0");
}

Eigen::Vector2d displacement(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Window& w) {
    Eigen::Vector2d d = a - b;
    if (w.wraparound) {
        d.x() = wrap(d.x(), w.side_length);
        d.y() = wrap(d.y(), w.side_length);
    }
    return d;
}

Eigen::ArrayXd distances_to_origin(const PointSet& pts, const Window& w) {
    Eigen::ArrayXd out(pts.cols());
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
        out(i) = displacement(pts.col(i), Eigen::Vector2d::Zero(), w).norm();
    return out;
}

PointSet sample_homogeneous_ppp(double intensity, const Window& w, Rng& rng) {
    require_finite_positive(intensity, "intensity");
    w.validate();
    std::poisson_distribution<long> count_dist(intensity * w.area());
    const long count = count_dist(rng);
    std::uniform_real_distribution<double> coord(-0.5 * w.side_length, 0.5 * w.side_length);
    PointSet pts(2, count);
    for (long i = 0; i < count; ++i) {
        pts(0, i) = coord(rng);
        pts(1, i) = coord(rng);
    }
    return pts;
}

CellAssignment associate_and_select(const PointSet& bs, const PointSet& ue, int n_per_cell, const Window& w,
                                    Rng& rng) {
    if (n_per_cell < 1) throw InvalidParameter("n_per_cell must be >= 1");
    if (bs.cols() == 0) throw InvalidParameter("at least one BS is required");

    const Eigen::Index n_bs = bs.cols();
    const double side = w.side_length;
    CellAssignment out;
    out.serving_bs.resize(static_cast<std::size_t>(ue.cols()));
    std::vector<std::vector<int>> members(static_cast<std::size_t>(n_bs));

    for (Eigen::Index u = 0; u < ue.cols(); ++u) {
        const double ux = ue(0, u), uy = ue(1, u);
        double best = std::numeric_limits<double>::infinity();
        int best_idx = 0;
        for (Eigen::Index b = 0; b < n_bs; ++b) {
            double dx = ux - bs(0, b), dy = uy - bs(1, b);
            if (w.wraparound) {
                dx = wrap(dx, side);
                dy = wrap(dy, side);
            }
            const double d2 = dx * dx + dy * dy;
            if (d2 < best) {
                best = d2;
                best_idx = static_cast<int>(b);
            }
        }
        out.serving_bs[static_cast<std::size_t>(u)] = best_idx;
        members[static_cast<std::size_t>(best_idx)].push_back(static_cast<int>(u));
    }

    out.selected.resize(static_cast<std::size_t>(n_bs));
    for (std::size_t b = 0; b < members.size(); ++b) {
        auto& pool = members[b];
        const int take = std::min<int>(n_per_cell, static_cast<int>(pool.size()));
        if (static_cast<int>(pool.size()) < n_per_cell) ++out.short_cells;
        // Partial Fisher-Yates: the first `take` entries become a uniform sample.
        for (int k = 0; k < take; ++k) {
            std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), pool.size() - 1);
            std::swap(pool[static_cast<std::size_t>(k)], pool[pick(rng)]);
        }
        out.selected[b].assign(pool.begin(), pool.begin() + take);
    }
    return out;
}

DistanceProfile distance_profile(const CellAssignment& assignment, const PointSet& bs, const PointSet& ue,
                                 const Window& w, InterfererLayout layout) {
    if (assignment.selected.empty() || bs.cols() == 0) throw InvalidParameter("empty assignment");
    DistanceProfile p;
    const auto& typical = assignment.selected.front();
    p.ordered_typical.resize(static_cast<Eigen::Index>(typical.size()));
    for (std::size_t k = 0; k < typical.size(); ++k)
        p.ordered_typical(static_cast<Eigen::Index>(k)) =
            displacement(ue.col(typical[k]), bs.col(0), w).norm();
    std::sort(p.ordered_typical.begin(), p.ordered_typical.end());

    std::size_t total = 0;
    for (std::size_t b = 1; b < assignment.selected.size(); ++b) total += assignment.selected[b].size();
    p.interferer.resize(static_cast<Eigen::Index>(total));
    Eigen::Index k = 0;
    for (std::size_t b = 1; b < assignment.selected.size(); ++b) {
        const auto& cell = assignment.selected[b];
        if (cell.empty()) continue;
        const double parent = displacement(ue.col(cell.front()), bs.col(0), w).norm();
        for (int u : cell)
            p.interferer(k++) =
                layout == InterfererLayout::Colocated ? parent : displacement(ue.col(u), bs.col(0), w).norm();
    }
    return p;
}

NetworkRealization sample_network(double lambda_bs, double lambda_ue, int n_per_cell, const Window& w, Rng& rng,
                                  int max_attempts) {
    NetworkRealization net;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        const PointSet others = sample_homogeneous_ppp(lambda_bs, w, rng);
        net.bs.resize(2, others.cols() + 1);
        net.bs.col(0).setZero();
        net.bs.rightCols(others.cols()) = others;
        net.ue = sample_homogeneous_ppp(lambda_ue, w, rng);
        net.assignment = associate_and_select(net.bs, net.ue, n_per_cell, w, rng);
        if (static_cast<int>(net.assignment.selected.front().size()) >= n_per_cell) return net;
        ++net.discarded;
    }
    throw InvalidParameter("typical cell never reached N users; raise the UE intensity");
}

PointSet interferer_points(const NetworkRealization& net) {
    const auto& cells = net.assignment.selected;
    std::size_t total = 0;
    for (std::size_t b = 1; b < cells.size(); ++b) total += cells[b].size();
    PointSet out(2, static_cast<Eigen::Index>(total));
    Eigen::Index k = 0;
    for (std::size_t b = 1; b < cells.size(); ++b)
        for (int u : cells[b]) out.col(k++) = net.ue.col(u);
    return out;
}

PointSet sample_interferers_model_a(double lambda, int n_per_cell, const Window& w, Rng& rng, double b2) {
    require_finite_positive(lambda, "lambda");
    if (n_per_cell < 1) throw InvalidParameter("n_per_cell must be >= 1");
    const PointSet parents = thin_by_pair_correlation(sample_homogeneous_ppp(lambda, w, rng), lambda, b2, w, rng);
    PointSet out(2, parents.cols() * n_per_cell);
    for (Eigen::Index i = 0; i < parents.cols(); ++i)
        for (int k = 0; k < n_per_cell; ++k) out.col(i * n_per_cell + k) = parents.col(i);
    return out;
}

PointSet sample_interferers_model_b(double lambda, int n_per_cell, const Window& w, Rng& rng, double b2) {
    require_finite_positive(lambda, "lambda");
    if (n_per_cell < 1) throw InvalidParameter("n_per_cell must be >= 1");
    return thin_by_pair_correlation(sample_homogeneous_ppp(n_per_cell * lambda, w, rng), lambda, b2, w, rng);
}

double rayleigh_distance_pdf(double r, double lambda, double b1) {
    if (r < 0.0) return 0.0;
    const double a = b1 * lambda * kPi;
    return 2.0 * a * r * std::exp(-a * r * r);
}

double rayleigh_distance_cdf(double r, double lambda, double b1) {
    if (r <= 0.0) return 0.0;
    return -std::expm1(-b1 * lambda * kPi * r * r);
}

double ordered_pdf(double r, int n, int n_users, double lambda, double b1) {
    if (n < 1 || n > n_users) throw InvalidParameter("rank n must lie in 1..N");
    if (r <= 0.0) return 0.0;
    const double a = b1 * lambda * kPi * r * r;
    const double cdf = -std::expm1(-a);
    if (n > 1 && cdf == 0.0) return 0.0;
    const double log_cdf = n > 1 ? (n - 1) * std::log(cdf) : 0.0;
    const double log_density = std::log(2.0 * b1 * lambda * kPi * r) + log_cdf -
                               (n_users - n + 1) * a - std::log(std::beta(n_users - n + 1.0, double(n)));
    return std::exp(log_density);
}

double pair_correlation(double r, double lambda, double b2) { return -std::expm1(-b2 * lambda * kPi * r * r); }

double k_function(double r, double lambda, double b2) {
    return kPi * r * r + std::expm1(-b2 * lambda * kPi * r * r) / (b2 * lambda);
}

std::vector<double> estimate_k_function(std::span<const PointSet> realizations, int n_per_cell, double lambda,
                                        std::span<const double> r_grid, const Window& w) {
    if (realizations.empty()) throw InvalidParameter("no realizations supplied");
    if (n_per_cell < 1) throw InvalidParameter("n_per_cell must be >= 1");
    require_finite_positive(lambda, "lambda");
    std::vector<double> totals(r_grid.size(), 0.0);
    for (const auto& pts : realizations) {
        Eigen::ArrayXd d = distances_to_origin(pts, w);
        std::sort(d.begin(), d.end());
        for (std::size_t k = 0; k < r_grid.size(); ++k)
            totals[k] += static_cast<double>(std::upper_bound(d.begin(), d.end(), r_grid[k]) - d.begin());
    }
    const double norm = 1.0 / (static_cast<double>(realizations.size()) * n_per_cell * lambda);
    for (auto& t : totals) t *= norm;
    return totals;
}

std::vector<double> estimate_second_moment(std::span<const PointSet> realizations, std::span<const double> r_grid,
                                           const Window& w) {
    if (realizations.empty()) throw InvalidParameter("no realizations supplied");
    std::vector<double> totals(r_grid.size(), 0.0);
    for (const auto& pts : realizations) {
        Eigen::ArrayXd d = distances_to_origin(pts, w);
        std::sort(d.begin(), d.end());
        for (std::size_t k = 0; k < r_grid.size(); ++k) {
            const double c = static_cast<double>(std::upper_bound(d.begin(), d.end(), r_grid[k]) - d.begin());
            totals[k] += c * c;
        }
    }
    for (auto& t : totals) t /= static_cast<double>(realizations.size());
    return totals;
}

std::vector<double> default_r_grid(double lambda, int count, double lo, double hi) {
    require_finite_positive(lambda, "lambda");
    if (count < 2 || !(lo > 0.0) || !(hi > lo)) throw InvalidParameter("invalid r grid");
    const double scale = 1.0 / std::sqrt(lambda * kPi);
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double step = std::log(hi / lo) / (count - 1);
    for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = scale * lo * std::exp(step * k);
    return grid;
}

void write_points_csv(std::ostream& os, const PointSet& pts) {
    os << "x,y\n";
    for (Eigen::Index i = 0; i < pts.cols(); ++i) os << pts(0, i) << ',' << pts(1, i) << '\n';
}

}  // namespace rsmasg
