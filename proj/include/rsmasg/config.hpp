// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: a YAML file with named MCS presets, overridable from the
// command line (flag > file > default). Validation errors carry the field path.
//
//   preset: S1                    # or an explicit mcs block
//   mcs: {thresholds_db: [-15, -5], rates: [0.4, 0.6]}
//   system: {lambda_bs: 1e-4, n_users: 2, eta: 4, sigma2_db: -90, beta: 0.5, q: 0}
//   experiment: {access: rsma, topologies: 1000, fading: 5000, seed: 1, workers: 1}
//   sweep: {param: beta, values: [0, 0.5, 1]}
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "rsmasg/analytic.hpp"
#include "rsmasg/montecarlo.hpp"

namespace rsmasg {

enum class RateUnits { Nats, Bits };

struct RunConfig {
    ExperimentSpec experiment{};
    std::string preset = "S1";  ///< empty for an explicit mcs block
    AnalyticOptions analytic{};
    RateUnits units = RateUnits::Nats;
    /// The analytic subcommand also evaluates the Shannon rate (slow).
    bool analytic_achievable = false;

    /// Cross-field validation; throws InvalidParameter with a field path.
    void validate() const;
};

/// Parses YAML text. Unknown keys, wrong types and invariant violations raise
/// InvalidParameter("<field.path>: <reason>").
RunConfig parse_config(std::string_view yaml_text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON echo of every effective setting (keys sorted).
nlohmann::json to_json(const RunConfig& cfg);

/// Git-style SHA-1 ("blob <size>\0" + content) of the canonical JSON. Independent
/// of key order in the source file.
std::string config_hash(const RunConfig& cfg);

std::string_view to_string(InterfererLayout layout);
InterfererLayout layout_from_string(std::string_view name);
std::string_view to_string(RateUnits u);
RateUnits units_from_string(std::string_view name);

/// sigma2_norm from dB; -inf (or any value below -300 dB) maps to 0.
double noise_from_db(double db);

}  // namespace rsmasg
