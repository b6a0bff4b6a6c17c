// SPDX-License-Identifier: Apache-2.0
#include "rsmasg/mcs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsmasg/errors.hpp"

namespace rsmasg {

std::string_view to_string(Access a) {
    switch (a) {
        case Access::Rsma: return "rsma";
        case Access::Noma: return "noma";
        case Access::Oma: return "oma";
    }
    return "rsma";
}

Access access_from_string(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "rsma") return Access::Rsma;
    if (lower == "noma") return Access::Noma;
    if (lower == "oma") return Access::Oma;
    throw InvalidParameter("access: unknown scheme '" + std::string(name) + "' (expected rsma, noma or oma)");
}

McsScheme::McsScheme(std::vector<double> thresholds_linear, std::vector<double> rates)
    : thresholds_(std::move(thresholds_linear)) {
    if (thresholds_.empty()) throw InvalidParameter("mcs.thresholds_db: at least one threshold is required");
    if (rates.empty()) throw InvalidParameter("mcs.rates: rate list is empty");
    if (rates.size() != thresholds_.size())
        throw InvalidParameter("mcs.rates: expected one rate per threshold (" + std::to_string(thresholds_.size()) +
                               "), got " + std::to_string(rates.size()));
    for (double t : thresholds_)
        if (!std::isfinite(t) || !(t > 0.0)) throw InvalidParameter("mcs.thresholds_db: thresholds must be finite");
    for (std::size_t m = 1; m < thresholds_.size(); ++m)
        if (!(thresholds_[m] > thresholds_[m - 1])) throw InvalidParameter("mcs.thresholds_db: thresholds not ascending");
    ladder_.reserve(rates.size() + 1);
    ladder_.push_back(0.0);
    for (double r : rates) {
        if (!std::isfinite(r) || !(r > ladder_.back())) throw InvalidParameter("mcs.rates: rates not ascending from r_0 = 0");
        ladder_.push_back(r);
    }
}

McsScheme McsScheme::from_db(std::span<const double> thresholds_db, std::vector<double> rates) {
    std::vector<double> linear;
    linear.reserve(thresholds_db.size());
    for (std::size_t m = 0; m < thresholds_db.size(); ++m) {
        if (m > 0 && !(thresholds_db[m] > thresholds_db[m - 1]))
            throw InvalidParameter("mcs.thresholds_db: thresholds not ascending");
        linear.push_back(db_to_linear(thresholds_db[m]));
    }
    return McsScheme(std::move(linear), std::move(rates));
}

std::vector<double> McsScheme::thresholds_db() const {
    std::vector<double> out;
    out.reserve(thresholds_.size());
    for (double t : thresholds_) out.push_back(linear_to_db(t));
    return out;
}

McsScheme McsScheme::shifted_db(double db) const {
    std::vector<double> th = thresholds_;
    const double factor = db_to_linear(db);
    for (auto& t : th) t *= factor;
    return McsScheme(std::move(th), std::vector<double>(ladder_.begin() + 1, ladder_.end()));
}

McsScheme preset_scheme(std::string_view name, std::vector<double> rates) {
    std::vector<double> db;
    if (name == "S1") db = {-15.0};
    else if (name == "S2") db = {-5.0};
    else if (name == "S3") db = {-15.0, -10.0};
    else if (name == "S4") db = {-15.0, -5.0};
    else throw InvalidParameter("preset: unknown MCS preset '" + std::string(name) + "' (expected S1..S4)");
    if (rates.empty()) {
        rates = {0.4, 0.6};
        rates.resize(db.size());
    }
    return McsScheme::from_db(db, std::move(rates));
}

std::vector<std::string> preset_names() { return {"S1", "S2", "S3", "S4"}; }

namespace {

void check_fading_inputs(const DistanceProfile& profile, const SystemConfig& cfg, int n_fading, Access access) {
    cfg.validate();
    if (n_fading < 1) throw InvalidParameter("n_fading must be >= 1");
    if (access == Access::Oma && profile.n_users() != 1)
        throw InvalidParameter("OMA serves exactly one user per resource block");
}

// Calls visit(gamma) for every decoded SINR of every draw (two per draw for RSMA).
template <class Visit>
void for_each_sinr(const DistanceProfile& profile, const SystemConfig& cfg, int rank, int n_fading, Rng& rng,
                   Access access, Visit&& visit) {
    for (int k = 0; k < n_fading; ++k) {
        const FadingDraw draw = sample_fading(profile, cfg.q, rng);
        if (access == Access::Rsma) {
            const SinrPair g = sinr_rsma(rank, profile, draw, cfg);
            visit(g.gamma1);
            visit(g.gamma2);
        } else {
            visit(sinr_noma(rank, profile, draw, cfg));
        }
    }
}

}  // namespace

double rate_from_level_hits(std::span<const long> hits, long draws, const McsScheme& scheme) {
    double v = 0.0;
    const double n = static_cast<double>(draws);
    for (int m = 1; m <= scheme.levels(); ++m) v += static_cast<double>(hits[static_cast<std::size_t>(m)]) / n * scheme.rate(m);
    return v;
}

CrrSample crr_empirical(const DistanceProfile& profile, const SystemConfig& cfg, const McsScheme& scheme, int rank,
                        int n_fading, Rng& rng, Access access) {
    check_fading_inputs(profile, cfg, n_fading, access);
    std::vector<long> hits(static_cast<std::size_t>(scheme.levels() + 1), 0);
    for_each_sinr(profile, cfg, rank, n_fading, rng, access,
                  [&](double g) { ++hits[static_cast<std::size_t>(rate_level(g, scheme))]; });
    return {rate_from_level_hits(hits, n_fading, scheme), rank, access};
}

double achievable_empirical(const DistanceProfile& profile, const SystemConfig& cfg, int rank, int n_fading, Rng& rng,
                            Access access) {
    if (cfg.sigma2_norm == 0.0 && profile.interferer.size() == 0 && rank == profile.n_users())
        throw InvalidParameter("achievable rate diverges without noise or interference");
    check_fading_inputs(profile, cfg, n_fading, access);
    double total = 0.0;
    for_each_sinr(profile, cfg, rank, n_fading, rng, access, [&](double g) { total += shannon_map(g); });
    return total / n_fading;
}

double spectral_efficiency(double rate, double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw InvalidParameter("bandwidth must be > 0");
    return rate / bandwidth;
}

}  // namespace rsmasg
