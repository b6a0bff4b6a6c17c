// SPDX-License-Identifier: Apache-2.0
#include "rsmasg/sinr.hpp"

#include <cmath>
#include <string>

#include "rsmasg/errors.hpp"

namespace rsmasg {

namespace {

struct LinkPowers {
    double desired;  // H_n R_n^-eta
    double floor;    // intra + inter + noise
};

void check_draw(int rank, const DistanceProfile& profile, const FadingDraw& fading) {
    if (rank < 1 || rank > profile.n_users())
        throw InvalidParameter("rank " + std::to_string(rank) + " outside 1.." + std::to_string(profile.n_users()));
    if (fading.h_typical.size() != profile.ordered_typical.size() ||
        fading.h_interferer.size() != profile.interferer.size() || fading.b.size() != profile.ordered_typical.size())
        throw InvalidParameter("fading draw does not match the distance profile");
}

LinkPowers link_powers(int rank, const DistanceProfile& profile, const FadingDraw& fading, const SystemConfig& cfg) {
    const Eigen::Index n = rank - 1;
    const auto& r = profile.ordered_typical;
    const double desired = fading.h_typical(n) * std::pow(r(n), -cfg.eta);
    const Eigen::Index tail = r.size() - rank;
    const double intra =
        tail > 0 ? (fading.h_typical.tail(tail) * r.tail(tail).pow(-cfg.eta)).sum() : 0.0;
    const double inter = (fading.h_interferer * profile.interferer.pow(-cfg.eta)).sum();
    return {desired, intra + inter + cfg.sigma2_norm};
}

}  // namespace

void SystemConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw InvalidParameter("system." + field + ": " + why);
    };
    if (!std::isfinite(lambda_bs) || !(lambda_bs > 0.0)) fail("lambda_bs", "must be finite and > 0");
    if (n_users < 1) fail("n_users", "must be >= 1");
    if (!std::isfinite(eta) || !(eta > 2.0)) fail("eta", "must be > 2");
    if (!(sigma2_norm >= 0.0) || !std::isfinite(sigma2_norm)) fail("sigma2_norm", "must be finite and >= 0");
    if (!(beta >= 0.0 && beta <= 1.0)) fail("beta", "must lie in [0, 1]");
    if (!(q >= 0.0 && q <= 1.0)) fail("q", "must lie in [0, 1]");
    if (!(b1 > 0.0) || !(b2 > 0.0)) fail("b1/b2", "must be > 0");
}

FadingDraw sample_fading(const DistanceProfile& profile, double q, Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::bernoulli_distribution bit(q);
    FadingDraw d;
    d.h_typical.resize(profile.ordered_typical.size());
    d.h_interferer.resize(profile.interferer.size());
    d.b.resize(profile.ordered_typical.size());
    for (auto& h : d.h_typical) h = expo(rng);
    for (auto& h : d.h_interferer) h = expo(rng);
    for (auto& v : d.b) v = bit(rng) ? 1 : 0;
    return d;
}

SinrPair sinr_rsma(int rank, const DistanceProfile& profile, const FadingDraw& fading, const SystemConfig& cfg) {
    check_draw(rank, profile, fading);
    const auto [x, floor] = link_powers(rank, profile, fading, cfg);
    return sinr_split(cfg.beta, fading.b(rank - 1) != 0, x, floor);
}

double sinr_noma(int rank, const DistanceProfile& profile, const FadingDraw& fading, const SystemConfig& cfg) {
    check_draw(rank, profile, fading);
    const auto [x, floor] = link_powers(rank, profile, fading, cfg);
    return sinr_ratio(x, floor);
}

double sinr_oma(const DistanceProfile& profile, const FadingDraw& fading, const SystemConfig& cfg) {
    if (profile.n_users() != 1) throw InvalidParameter("OMA serves exactly one user per resource block");
    return sinr_noma(1, profile, fading, cfg);
}

}  // namespace rsmasg
