// SPDX-License-Identifier: Apache-2.0
//
// Plot-ready CSV and JSON emission. Numbers use the shortest round-trip form with a
// '.' decimal point, rows end in LF, so output is byte-stable across platforms.
//
//   stats.csv       sweep_param,sweep_value,rank,mean,m2,var,stderr,source
//   ccdf.csv        sweep_param,sweep_value,xi,rank,ccdf,source
//   achievable.csv  sweep_param,sweep_value,rank,mean,stderr,source
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "rsmasg/config.hpp"
#include "rsmasg/montecarlo.hpp"
#include "rsmasg/pipeline.hpp"

namespace rsmasg {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Shortest decimal that round-trips; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

/// Multiplier from nats to `units` for first-order quantities.
double unit_scale(RateUnits units);

void write_stats_csv(std::ostream& os, std::span<const RateStatistics> points, std::string_view source,
                     RateUnits units = RateUnits::Nats);
/// Ranks without a CCDF (no feasible beta fit) are skipped.
void write_ccdf_csv(std::ostream& os, std::span<const RateStatistics> points, std::string_view source,
                    RateUnits units = RateUnits::Nats);
void write_achievable_csv(std::ostream& os, std::span<const RateStatistics> points, std::string_view source,
                          RateUnits units = RateUnits::Nats);

/// n_users,r,lambda_pi_r2,k_empirical,k_theory
void write_k_function_csv(std::ostream& os, const SpatialStats& stats, double lambda);
/// n_users,r,lambda_pi_r2,network,model_a,model_b,theory_a,theory_b
void write_second_moment_csv(std::ostream& os, const SpatialStats& stats, double lambda);

struct StatsRow {
    std::string sweep_param;
    double sweep_value = 0.0;
    int rank = 1;
    double mean = 0.0;
    double m2 = 0.0;
    double var = 0.0;
    double stderr_mean = 0.0;
    std::string source;
};

/// Parses a stats CSV (column order taken from the header). Throws InvalidParameter
/// with the line number on malformed input.
std::vector<StatsRow> read_stats_csv(std::istream& is);

struct RankDeviation {
    int rank = 1;
    int points = 0;
    double max_relative = 0.0;   ///< max |other - reference| / |reference| of the mean
    double mean_relative = 0.0;
    double max_relative_m2 = 0.0;
};

struct Comparison {
    std::vector<RankDeviation> ranks;
    int unmatched = 0;  ///< rows of either input without a partner
};

/// Joins on (sweep_param, sweep_value, rank). Inputs are not modified.
Comparison compare_stats(std::span<const StatsRow> reference, std::span<const StatsRow> other);
nlohmann::json to_json(const Comparison& c);

/// Everything needed to re-run an experiment bit-identically.
struct RunManifest {
    std::string subcommand;
    nlohmann::json config;
    std::string config_hash;
    std::vector<std::string> presets;
    std::uint64_t master_seed = 0;
    std::string version;
    std::vector<std::pair<std::string, double>> wall_time;  ///< phase, seconds
    double discard_rate = 0.0;
    std::vector<std::string> warnings;
};
nlohmann::json to_json(const RunManifest& m);

/// {"error": {"kind": ..., "message": ...}}
nlohmann::json error_json(std::string_view kind, std::string_view message);

}  // namespace rsmasg
