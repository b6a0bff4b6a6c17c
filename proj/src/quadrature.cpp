// SPDX-License-Identifier: Apache-2.0
#include "rsmasg/quadrature.hpp"

namespace rsmasg::quad {

Result integrate(const IntegralSpec& spec) {
    if (!spec.integrand) throw std::invalid_argument("integral spec has no integrand");
    const auto& f = spec.integrand;
    return std::visit(
        [&](const auto& domain) -> Result {
            using D = std::decay_t<decltype(domain)>;
            if constexpr (std::is_same_v<D, Finite>) {
                auto g = [&](double x) { return f(std::span<const double>(&x, 1)); };
                return gauss_kronrod(g, domain.lower, domain.upper, spec.tolerance);
            } else if constexpr (std::is_same_v<D, SemiInfinite>) {
                auto g = [&](double x) { return f(std::span<const double>(&x, 1)); };
                return semi_infinite(g, domain.lower, spec.tolerance, domain.map);
            } else {
                return ordered_simplex(f, domain.lower, domain.dimension, spec.tolerance);
            }
        },
        spec.domain);
}

}  // namespace rsmasg::quad
