// SPDX-License-Identifier: Apache-2.0
//
// Deterministic numerical integration: globally adaptive Gauss-Kronrod (7/15)
// on finite intervals, semi-infinite intervals through a map onto [0, 1), and
// ordered simplices  lower <= x_1 <= ... <= x_d  by iterated integration.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rsmasg::quad {

struct Tolerance {
    double abs = 1e-6;
    double rel = 1e-5;
    int max_subdivisions = 200;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    int subdivisions = 0;
};

/// Subdivision budget exhausted before the tolerance was met. Carries the best
/// estimate reached.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const Result& best)
        : std::runtime_error("quadrature did not converge: estimate " + std::to_string(best.value) +
                             ", error estimate " + std::to_string(best.error)),
          best_(best) {}
    const Result& best() const noexcept { return best_; }

private:
    Result best_;
};

/// The integrand returned NaN. `location()` is the abscissa in the original variable.
class NanIntegrand : public std::domain_error {
public:
    explicit NanIntegrand(double x)
        : std::domain_error("integrand returned NaN at x = " + std::to_string(x)), location_(x) {}
    double location() const noexcept { return location_; }

private:
    double location_;
};

enum class SemiInfiniteMap {
    Rational,  ///< x = a + s / (1 - s)
    Tangent,   ///< x = a + tan(pi s / 2)
};

namespace detail {

// QUADPACK qk15 abscissae and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto eval = [&](double x) {
        const double y = f(x);
        if (std::isnan(y)) throw NanIntegrand(x);
        return y;
    };

    std::array<double, 7> f1{}, f2{};
    const double fc = eval(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double dx = half * kXgk[jtw];
        const double y1 = eval(center - dx), y2 = eval(center + dx);
        f1[jtw] = y1;
        f2[jtw] = y2;
        resg += kWg[j] * (y1 + y2);
        resk += kWgk[jtw] * (y1 + y2);
        resabs += kWgk[jtw] * (std::abs(y1) + std::abs(y2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double dx = half * kXgk[jtwm1];
        const double y1 = eval(center - dx), y2 = eval(center + dx);
        f1[jtwm1] = y1;
        f2[jtwm1] = y2;
        resk += kWgk[jtwm1] * (y1 + y2);
        resabs += kWgk[jtwm1] * (std::abs(y1) + std::abs(y2));
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, value, err};
}

}  // namespace detail

/// Globally adaptive G7/K15 on [a, b]. Converged when the summed error estimate is at
/// most max(abs, rel * |value|). Throws NonConvergence when the budget runs out.
template <class F>
Result gauss_kronrod(F&& f, double a, double b, const Tolerance& tol = {}) {
    if (!(tol.abs > 0.0) || !(tol.rel > 0.0)) throw std::invalid_argument("tolerances must be positive");
    Result out;
    if (a == b) return out;

    std::priority_queue<detail::Segment> heap;
    auto first = detail::kronrod15(f, a, b);
    out.evaluations = 15;
    heap.push(first);
    double value = first.value;
    double error = first.error;

    auto target = [&] { return std::max(tol.abs, tol.rel * std::abs(value)); };
    bool exhausted = false;
    while (error > target()) {
        if (out.subdivisions >= tol.max_subdivisions) {
            exhausted = true;
            break;
        }
        const auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
            exhausted = true;
            break;
        }
        heap.pop();
        const auto left = detail::kronrod15(f, worst.a, mid);
        const auto right = detail::kronrod15(f, mid, worst.b);
        out.evaluations += 30;
        ++out.subdivisions;
        heap.push(left);
        heap.push(right);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
    }

    // Re-sum from the segment list so the reported pair carries no update drift.
    std::vector<detail::Segment> segments;
    segments.reserve(heap.size());
    while (!heap.empty()) {
        segments.push_back(heap.top());
        heap.pop();
    }
    std::sort(segments.begin(), segments.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    out.value = 0.0;
    out.error = 0.0;
    for (const auto& s : segments) {
        out.value += s.value;
        out.error += s.error;
    }
    if (exhausted && out.error > std::max(tol.abs, tol.rel * std::abs(out.value))) throw NonConvergence(out);
    return out;
}

/// Integral of f over [a, inf).
template <class F>
Result semi_infinite(F&& f, double a, const Tolerance& tol = {}, SemiInfiniteMap map = SemiInfiniteMap::Rational) {
    if (map == SemiInfiniteMap::Rational) {
        auto g = [&](double s) {
            const double w = 1.0 - s;
            const double x = a + s / w;
            const double y = f(x);
            if (std::isnan(y)) throw NanIntegrand(x);
            return y == 0.0 ? 0.0 : y / (w * w);
        };
        return gauss_kronrod(g, 0.0, 1.0, tol);
    }
    auto g = [&](double s) {
        const double angle = 0.5 * std::numbers::pi * s;
        const double c = std::cos(angle);
        const double x = a + std::tan(angle);
        const double y = f(x);
        if (std::isnan(y)) throw NanIntegrand(x);
        return y == 0.0 ? 0.0 : y * 0.5 * std::numbers::pi / (c * c);
    };
    return gauss_kronrod(g, 0.0, 1.0, tol);
}

inline constexpr int kMaxSimplexDimension = 3;

/// Integral of f(x_1, ..., x_d) over lower <= x_1 <= ... <= x_d < inf, innermost
/// coordinate first. d = 0 evaluates f on the empty tuple (unit measure).
/// Inner integrals run at a tenth of the outer tolerance.
template <class F>
Result ordered_simplex(F&& f, double lower, int dimension, const Tolerance& tol = {}) {
    if (dimension < 0 || dimension > kMaxSimplexDimension)
        throw std::invalid_argument("ordered simplex dimension must lie in [0, 3]");
    std::array<double, kMaxSimplexDimension> x{};
    Result total;
    if (dimension == 0) {
        total.value = f(std::span<const double>(x.data(), 0));
        total.evaluations = 1;
        return total;
    }
    std::function<double(int, double, const Tolerance&)> level = [&](int k, double from, const Tolerance& t) {
        auto g = [&](double xk) {
            x[k] = xk;
            if (k + 1 == dimension) return f(std::span<const double>(x.data(), dimension));
            Tolerance inner = t;
            inner.abs *= 0.1;
            inner.rel *= 0.1;
            return level(k + 1, xk, inner);
        };
        const Result r = semi_infinite(g, from, t);
        total.evaluations += r.evaluations;
        if (k == 0) {
            total.error = r.error;
            total.subdivisions = r.subdivisions;
        }
        return r.value;
    };
    total.value = level(0, lower, tol);
    return total;
}

// ----- type-erased front end ------------------------------------------------

using Integrand = std::function<double(std::span<const double>)>;

struct Finite {
    double lower;
    double upper;
};
struct SemiInfinite {
    double lower;
    SemiInfiniteMap map = SemiInfiniteMap::Rational;
};
struct OrderedSimplex {
    double lower;
    int dimension;
};

struct IntegralSpec {
    Integrand integrand;
    std::variant<Finite, SemiInfinite, OrderedSimplex> domain;
    Tolerance tolerance;
};

/// Dispatches on the domain. Errors: NanIntegrand, NonConvergence, and
/// std::invalid_argument for non-positive tolerances or dimension outside [0, 3].
Result integrate(const IntegralSpec& spec);

}  // namespace rsmasg::quad
