// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <limits>

#include "rsmasg/errors.hpp"
#include "rsmasg/mcs.hpp"

using namespace rsmasg;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DistanceProfile network_profile(std::uint64_t seed, int n_users) {
    Rng rng = make_stream(seed, 0);
    const Window w{};
    const auto net = sample_network(1e-4, 20.0 * n_users * 1e-4, n_users, w, rng);
    return distance_profile(net.assignment, net.bs, net.ue, w);
}

}  // namespace

TEST_CASE("S3 rate map hand values") {
    const auto s3 = preset_scheme("S3");
    CHECK(s3.levels() == 2);
    CHECK(rate_map(db_to_linear(-12.0), s3) == 0.4);
    CHECK(rate_map(db_to_linear(0.0), s3) == 0.6);
    CHECK(rate_map(db_to_linear(-20.0), s3) == 0.0);
    CHECK(rate_map(0.0, s3) == 0.0);
    CHECK(rate_map(kInf, s3) == 0.6);
}

TEST_CASE("presets carry their thresholds and the default ladder") {
    CHECK(preset_scheme("S1").thresholds_db() == std::vector<double>{-15.0});
    CHECK(preset_scheme("S2").thresholds_db() == std::vector<double>{-5.0});
    const auto s4 = preset_scheme("S4");
    REQUIRE(s4.levels() == 2);
    CHECK(s4.thresholds_db()[0] == doctest::Approx(-15.0).epsilon(1e-14));
    CHECK(s4.thresholds_db()[1] == doctest::Approx(-5.0).epsilon(1e-14));
    CHECK(s4.ladder() == std::vector<double>{0.0, 0.4, 0.6});
    CHECK(preset_scheme("S1").ladder() == std::vector<double>{0.0, 0.4});
    CHECK(preset_scheme("S1", {1.0}).top_rate() == 1.0);
    CHECK_THROWS_AS(preset_scheme("S9"), InvalidParameter);
    CHECK(preset_names().size() == 4);
}

TEST_CASE("scheme construction enforces strict ordering") {
    CHECK_THROWS_AS(McsScheme({2.0, 1.0}, {0.4, 0.6}), InvalidParameter);
    CHECK_THROWS_AS(McsScheme({1.0, 1.0}, {0.4, 0.6}), InvalidParameter);
    CHECK_THROWS_AS(McsScheme({1.0, 2.0}, {0.6, 0.4}), InvalidParameter);
    CHECK_THROWS_AS(McsScheme({1.0, 2.0}, {0.4}), InvalidParameter);
    CHECK_THROWS_AS(McsScheme({}, {}), InvalidParameter);
    CHECK_THROWS_AS(McsScheme({1.0}, {0.0}), InvalidParameter);
    const McsScheme s({1.0, 2.0}, {0.4, 0.6});
    CHECK(s.increment(1) == doctest::Approx(0.4));
    CHECK(s.increment(2) == doctest::Approx(0.2));
    const auto shifted = preset_scheme("S3").shifted_db(3.0);
    CHECK(shifted.thresholds_db()[0] == doctest::Approx(-12.0).epsilon(1e-13));
    CHECK(shifted.ladder() == preset_scheme("S3").ladder());
}

TEST_CASE("rate map is monotone, right-continuous, with exactly M jumps") {
    const McsScheme s = McsScheme::from_db(std::vector<double>{-15.0, -10.0, -5.0, 0.0}, {0.2, 0.4, 0.7, 1.0});
    int jumps = 0;
    double prev = rate_map(0.0, s);
    for (double db = -30.0; db <= 10.0; db += 0.01) {
        const double r = rate_map(db_to_linear(db), s);
        CHECK(r >= prev);
        jumps += r != prev;
        prev = r;
    }
    CHECK(jumps == 4);
    for (int m = 0; m < s.levels(); ++m) {
        const double th = s.thresholds()[static_cast<std::size_t>(m)];
        CHECK(rate_map(th, s) == s.rate(m + 1));
        CHECK(rate_map(std::nextafter(th, 0.0), s) == s.rate(m));
    }
}

TEST_CASE("access names round-trip") {
    for (auto a : {Access::Rsma, Access::Noma, Access::Oma}) CHECK(access_from_string(to_string(a)) == a);
    CHECK_THROWS_AS(access_from_string("cdma"), InvalidParameter);
}

TEST_CASE("CRR without interference matches its closed form") {
    DistanceProfile p;
    p.ordered_typical = Eigen::ArrayXd::Constant(1, 25.0);
    SystemConfig cfg;
    cfg.n_users = 1;
    const auto s3 = preset_scheme("S3");
    for (double beta : {0.1, 0.3, 0.5, 0.8}) {
        cfg.beta = beta;
        Rng rng = make_stream(1, 0);
        const auto crr = crr_empirical(p, cfg, s3, 1, 500, rng);
        CHECK(crr.value == doctest::Approx(s3.top_rate() + rate_map((1.0 - beta) / beta, s3)).epsilon(1e-14));
        CHECK(crr.rank == 1);
        CHECK(crr.access == Access::Rsma);
    }
}

TEST_CASE("zero split reproduces NOMA on identical draws") {
    const auto p = network_profile(5, 2);
    SystemConfig cfg;
    cfg.beta = 0.0;
    cfg.q = 0.4;
    const auto s4 = preset_scheme("S4");
    for (int rank : {1, 2}) {
        Rng a = make_stream(9, rank), b = make_stream(9, rank);
        CHECK(crr_empirical(p, cfg, s4, rank, 2000, a).value ==
              crr_empirical(p, cfg, s4, rank, 2000, b, Access::Noma).value);
    }
}

TEST_CASE("CRR bounds, coverage reduction and determinism") {
    const McsScheme unit({db_to_linear(-5.0)}, {1.0});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = network_profile(seed, 2);
        SystemConfig cfg;
        cfg.beta = 0.3;
        cfg.q = 0.5;
        Rng rng = make_stream(seed, 1);
        const double rsma = crr_empirical(p, cfg, preset_scheme("S4"), 1, 300, rng).value;
        CHECK(rsma >= 0.0);
        CHECK(rsma <= 1.2);
        const double noma = crr_empirical(p, cfg, preset_scheme("S4"), 2, 300, rng, Access::Noma).value;
        CHECK(noma >= 0.0);
        CHECK(noma <= 0.6);
        // With one level of rate 1 the CRR is a sum of two conditional success probabilities.
        const double cov = crr_empirical(p, cfg, unit, 1, 300, rng).value;
        CHECK(cov >= 0.0);
        CHECK(cov <= 2.0);
        CHECK(std::abs(cov * 300.0 - std::round(cov * 300.0)) < 1e-9);
        Rng a = make_stream(seed, 2), b = make_stream(seed, 2);
        CHECK(crr_empirical(p, cfg, unit, 2, 100, a).value == crr_empirical(p, cfg, unit, 2, 100, b).value);
    }
}

TEST_CASE("admissible schemes never beat the Shannon rate") {
    const McsScheme admissible({1.0, 3.0, 15.0}, {0.5, 1.2, 2.5});
    for (int m = 0; m < admissible.levels(); ++m)
        REQUIRE(admissible.rate(m + 1) <= std::log1p(admissible.thresholds()[static_cast<std::size_t>(m)]));
    for (double db = -30.0; db <= 30.0; db += 0.05) {
        const double g = db_to_linear(db);
        CHECK(rate_map(g, admissible) <= shannon_map(g));
    }
    CHECK(shannon_map(kInf) == kInf);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = network_profile(100 + seed, 2);
        SystemConfig cfg;
        cfg.beta = 0.6;
        cfg.q = 0.3;
        cfg.sigma2_norm = 1e-12;
        for (int rank : {1, 2}) {
            Rng a = make_stream(seed, 7), b = make_stream(seed, 7);
            CHECK(crr_empirical(p, cfg, admissible, rank, 500, a).value <=
                  achievable_empirical(p, cfg, rank, 500, b));
        }
    }
}

TEST_CASE("achievable rate rejects the interference- and noise-free last user") {
    DistanceProfile p;
    p.ordered_typical = Eigen::ArrayXd::Constant(1, 10.0);
    SystemConfig cfg;
    cfg.n_users = 1;
    Rng rng = make_stream(2, 0);
    CHECK_THROWS_AS(achievable_empirical(p, cfg, 1, 10, rng), InvalidParameter);
    cfg.sigma2_norm = 1e-9;
    CHECK(std::isfinite(achievable_empirical(p, cfg, 1, 10, rng)));
}

TEST_CASE("OMA and fading-count validation") {
    const auto p = network_profile(3, 2);
    SystemConfig cfg;
    Rng rng = make_stream(3, 1);
    CHECK_THROWS_AS(crr_empirical(p, cfg, preset_scheme("S1"), 1, 10, rng, Access::Oma), InvalidParameter);
    CHECK_THROWS_AS(crr_empirical(p, cfg, preset_scheme("S1"), 1, 0, rng), InvalidParameter);
}

TEST_CASE("spectral efficiency") {
    CHECK(spectral_efficiency(0.6) == 0.6);
    CHECK(spectral_efficiency(0.6, 2.0) == doctest::Approx(0.3));
    CHECK(spectral_efficiency(0.0) == 0.0);
    CHECK_THROWS_AS(spectral_efficiency(0.6, 0.0), InvalidParameter);
    CHECK_THROWS_AS(spectral_efficiency(0.6, -1.0), InvalidParameter);
    CHECK(0.6 * kNatsToBits == doctest::Approx(0.6 / std::log(2.0)).epsilon(1e-15));
}
