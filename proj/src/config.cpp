// SPDX-License-Identifier: Apache-2.0
#include "rsmasg/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "rsmasg/errors.hpp"

namespace rsmasg {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) { throw InvalidParameter(path + ": " + why); }

std::string join(const std::string& parent, const std::string& key) { return parent.empty() ? key : parent + "." + key; }

void require_map(const YAML::Node& node, const std::string& path) {
    if (!node.IsMap()) fail(path.empty() ? "<root>" : path, "expected a mapping");
}

void reject_unknown(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) fail(join(path, key), "unknown field");
    }
}

double as_double(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) fail(path, "expected a number");
    const auto text = node.Scalar();
    if (text == "-inf" || text == "-.inf" || text == "-Inf") return -std::numeric_limits<double>::infinity();
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        fail(path, "expected a number, got '" + text + "'");
    }
}

long long as_integer(const YAML::Node& node, const std::string& path) {
    const double v = as_double(node, path);
    if (!std::isfinite(v) || v != std::floor(v)) fail(path, "expected an integer");
    return static_cast<long long>(v);
}

bool as_bool(const YAML::Node& node, const std::string& path) {
    try {
        return node.as<bool>();
    } catch (const YAML::Exception&) {
        fail(path, "expected true or false");
    }
}

std::string as_string(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) fail(path, "expected a string");
    return node.Scalar();
}

std::vector<double> as_list(const YAML::Node& node, const std::string& path) {
    if (!node.IsSequence()) fail(path, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(as_double(node[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

template <class T, class Parse>
void read_if(const YAML::Node& parent, const std::string& path, const char* key, T& target, Parse parse) {
    if (const auto n = parent[key]) target = parse(n, join(path, key));
}

int as_count(const YAML::Node& node, const std::string& path) {
    const long long v = as_integer(node, path);
    if (v < 1 || v > std::numeric_limits<int>::max()) fail(path, "must be a positive integer");
    return static_cast<int>(v);
}

void read_mcs(const YAML::Node& root, RunConfig& out) {
    const YAML::Node preset = root["preset"];
    const YAML::Node mcs = root["mcs"];
    std::vector<double> rates;
    std::vector<double> thresholds_db;
    bool has_thresholds = false;
    if (mcs) {
        require_map(mcs, "mcs");
        reject_unknown(mcs, "mcs", {"thresholds_db", "rates"});
        if (mcs["rates"]) rates = as_list(mcs["rates"], "mcs.rates");
        if (mcs["thresholds_db"]) {
            thresholds_db = as_list(mcs["thresholds_db"], "mcs.thresholds_db");
            has_thresholds = true;
        }
        if (mcs["rates"] && rates.empty()) fail("mcs.rates", "rate list is empty");
    }
    if (preset) {
        if (has_thresholds) fail("preset", "conflicts with mcs.thresholds_db; give one or the other");
        out.preset = as_string(preset, "preset");
        out.experiment.scheme = preset_scheme(out.preset, rates);
        return;
    }
    if (!mcs) return;  // default preset
    if (!has_thresholds) fail("mcs.thresholds_db", "missing field");
    if (!mcs["rates"]) fail("mcs.rates", "missing field");
    out.preset.clear();
    out.experiment.scheme = McsScheme::from_db(thresholds_db, rates);
}

void read_system(const YAML::Node& node, SystemConfig& cfg) {
    const std::string path = "system";
    require_map(node, path);
    reject_unknown(node, path, {"lambda_bs", "n_users", "eta", "sigma2_norm", "sigma2_db", "beta", "q"});
    read_if(node, path, "lambda_bs", cfg.lambda_bs, as_double);
    read_if(node, path, "n_users", cfg.n_users, as_count);
    read_if(node, path, "eta", cfg.eta, as_double);
    read_if(node, path, "beta", cfg.beta, as_double);
    read_if(node, path, "q", cfg.q, as_double);
    if (node["sigma2_norm"] && node["sigma2_db"]) fail("system.sigma2_db", "conflicts with system.sigma2_norm");
    read_if(node, path, "sigma2_norm", cfg.sigma2_norm, as_double);
    if (node["sigma2_db"]) cfg.sigma2_norm = noise_from_db(as_double(node["sigma2_db"], "system.sigma2_db"));
}

void read_experiment(const YAML::Node& node, ExperimentSpec& spec) {
    const std::string path = "experiment";
    require_map(node, path);
    reject_unknown(node, path,
                   {"access", "topologies", "fading", "seed", "workers", "layout", "common_random_numbers",
                    "track_achievable", "lambda_ue", "window", "wraparound", "xi_grid"});
    if (node["access"]) {
        try {
            spec.access = access_from_string(as_string(node["access"], "experiment.access"));
        } catch (const InvalidParameter&) {
            fail("experiment.access", "expected rsma, noma or oma");
        }
    }
    read_if(node, path, "topologies", spec.n_topologies, as_count);
    read_if(node, path, "fading", spec.n_fading, as_count);
    read_if(node, path, "workers", spec.workers, as_count);
    if (node["seed"]) {
        try {
            spec.master_seed = node["seed"].as<std::uint64_t>();
        } catch (const YAML::Exception&) {
            fail("experiment.seed", "expected an integer in [0, 2^64)");
        }
    }
    if (node["layout"]) {
        try {
            spec.layout = layout_from_string(as_string(node["layout"], "experiment.layout"));
        } catch (const InvalidParameter&) {
            fail("experiment.layout", "expected dispersed or colocated");
        }
    }
    read_if(node, path, "common_random_numbers", spec.common_random_numbers, as_bool);
    read_if(node, path, "track_achievable", spec.track_achievable, as_bool);
    read_if(node, path, "lambda_ue", spec.lambda_ue, as_double);
    read_if(node, path, "window", spec.window.side_length, as_double);
    read_if(node, path, "wraparound", spec.window.wraparound, as_bool);
    read_if(node, path, "xi_grid", spec.xi_grid, as_list);
    if (spec.lambda_ue < 0.0) fail("experiment.lambda_ue", "must be >= 0 (0 selects the default)");
    if (!(spec.window.side_length > 0.0)) fail("experiment.window", "must be > 0");
}

void read_sweep(const YAML::Node& node, SweepSpec& sweep) {
    require_map(node, "sweep");
    reject_unknown(node, "sweep", {"param", "values"});
    if (!node["param"]) fail("sweep.param", "missing field");
    if (!node["values"]) fail("sweep.values", "missing field");
    sweep.param = as_string(node["param"], "sweep.param");
    sweep.values = as_list(node["values"], "sweep.values");
}

void read_analytic(const YAML::Node& node, RunConfig& out) {
    const std::string path = "analytic";
    require_map(node, path);
    reject_unknown(node, path, {"abs_tol", "rel_tol", "inner_abs_tol", "inner_rel_tol", "max_subdivisions", "achievable"});
    auto& o = out.analytic;
    read_if(node, path, "abs_tol", o.outer.abs, as_double);
    read_if(node, path, "rel_tol", o.outer.rel, as_double);
    read_if(node, path, "inner_abs_tol", o.inner.abs, as_double);
    read_if(node, path, "inner_rel_tol", o.inner.rel, as_double);
    if (node["max_subdivisions"]) {
        o.outer.max_subdivisions = o.inner.max_subdivisions = as_count(node["max_subdivisions"], "analytic.max_subdivisions");
    }
    read_if(node, path, "achievable", out.analytic_achievable, as_bool);
}

std::string sha1_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha1(), nullptr) != 1)
        throw std::runtime_error("SHA-1 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

}  // namespace

void RunConfig::validate() const {
    experiment.validate();
    for (const auto& [name, t] : {std::pair{"analytic.abs_tol", analytic.outer.abs}, {"analytic.rel_tol", analytic.outer.rel},
                                  {"analytic.inner_abs_tol", analytic.inner.abs},
                                  {"analytic.inner_rel_tol", analytic.inner.rel}})
        if (!(t > 0.0) || !std::isfinite(t)) fail(name, "must be > 0");
}

RunConfig parse_config(std::string_view yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        fail("<root>", std::string("YAML parse error: ") + e.what());
    }
    RunConfig out;
    if (root.IsNull()) return out;
    require_map(root, "");
    reject_unknown(root, "", {"preset", "mcs", "system", "experiment", "sweep", "analytic", "output"});
    read_mcs(root, out);
    if (root["system"]) read_system(root["system"], out.experiment.cfg);
    if (root["experiment"]) read_experiment(root["experiment"], out.experiment);
    if (root["sweep"]) read_sweep(root["sweep"], out.experiment.sweep);
    if (root["analytic"]) read_analytic(root["analytic"], out);
    if (const auto o = root["output"]) {
        require_map(o, "output");
        reject_unknown(o, "output", {"units"});
        if (o["units"]) {
            try {
                out.units = units_from_string(as_string(o["units"], "output.units"));
            } catch (const InvalidParameter&) {
                fail("output.units", "expected nats or bits");
            }
        }
    }
    out.validate();
    return out;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("config: cannot open '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

nlohmann::json to_json(const RunConfig& c) {
    const auto& e = c.experiment;
    nlohmann::json j;
    // Loadable by parse_config: a preset carries only its rates.
    const std::vector<double> rates(e.scheme.ladder().begin() + 1, e.scheme.ladder().end());
    if (c.preset.empty()) {
        j["mcs"] = {{"thresholds_db", e.scheme.thresholds_db()}, {"rates", rates}};
    } else {
        j["preset"] = c.preset;
        j["mcs"] = {{"rates", rates}};
    }
    j["system"] = {{"lambda_bs", e.cfg.lambda_bs}, {"n_users", e.cfg.n_users}, {"eta", e.cfg.eta},
                   {"sigma2_norm", e.cfg.sigma2_norm}, {"beta", e.cfg.beta}, {"q", e.cfg.q}};
    j["experiment"] = {{"access", std::string(to_string(e.access))},
                       {"topologies", e.n_topologies},
                       {"fading", e.n_fading},
                       {"seed", e.master_seed},
                       {"layout", std::string(to_string(e.layout))},
                       {"common_random_numbers", e.common_random_numbers},
                       {"track_achievable", e.track_achievable},
                       {"lambda_ue", e.lambda_ue},
                       {"window", e.window.side_length},
                       {"wraparound", e.window.wraparound},
                       {"xi_grid", e.xi_grid}};
    j["sweep"] = {{"param", e.sweep.param}, {"values", e.sweep.values}};
    j["analytic"] = {{"abs_tol", c.analytic.outer.abs},
                     {"rel_tol", c.analytic.outer.rel},
                     {"inner_abs_tol", c.analytic.inner.abs},
                     {"inner_rel_tol", c.analytic.inner.rel},
                     {"max_subdivisions", c.analytic.outer.max_subdivisions},
                     {"achievable", c.analytic_achievable}};
    j["output"] = {{"units", std::string(to_string(c.units))}};
    return j;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string body = to_json(cfg).dump();
    return sha1_hex("blob " + std::to_string(body.size()) + std::string(1, '\0') + body);
}

std::string_view to_string(InterfererLayout layout) {
    return layout == InterfererLayout::Colocated ? "colocated" : "dispersed";
}

InterfererLayout layout_from_string(std::string_view name) {
    if (name == "dispersed") return InterfererLayout::Dispersed;
    if (name == "colocated") return InterfererLayout::Colocated;
    throw InvalidParameter("layout: expected dispersed or colocated, got '" + std::string(name) + "'");
}

std::string_view to_string(RateUnits u) { return u == RateUnits::Bits ? "bits" : "nats"; }

RateUnits units_from_string(std::string_view name) {
    if (name == "nats") return RateUnits::Nats;
    if (name == "bits") return RateUnits::Bits;
    throw InvalidParameter("units: expected nats or bits, got '" + std::string(name) + "'");
}

double noise_from_db(double db) {
    if (std::isnan(db)) throw InvalidParameter("system.sigma2_db: must be a number");
    if (db < -300.0) return 0.0;
    return db_to_linear(db);
}

}  // namespace rsmasg
