// Copyright 2026 The MABN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mabn/config.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mabn/errors.h"

namespace mabn {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kAlphaDomain = "alpha must lie in [0, 0.5)";

// ----------------------------------------------------------------- presets

TopologySpec star_of_cliques(int outer_clusters, int outer_size) {
  TopologySpec topo;
  topo.n_units = 1 + outer_clusters * outer_size;
  topo.clusters.push_back({1});
  for (int q = 0; q < outer_clusters; ++q) {
    std::vector<UnitId> members;
    for (int k = 0; k < outer_size; ++k) members.push_back(2 + q * outer_size + k);
    for (std::size_t a = 0; a < members.size(); ++a) {
      topo.edges.emplace_back(1, members[a]);
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        topo.edges.emplace_back(members[a], members[b]);
      }
    }
    topo.clusters.push_back(std::move(members));
  }
  return topo;
}

std::vector<MadSchedule> default_schedules() {
  std::vector<MadSchedule> out;
  for (double a : {0.1, 0.2, 0.3, 0.4, 0.49}) out.push_back(MadSchedule::power_law(a));
  out.push_back(MadSchedule::standard());
  out.push_back(MadSchedule::uniform());
  return out;
}

RunConfig preset_skeleton(const std::string& name) {
  RunConfig c;
  c.preset = name;
  c.mapping = {MappingKind::kNeighborFractionThreshold, 2, {1, 2}};
  c.environment.kind = EnvironmentSpec::Kind::kBernoulliDrift;
  c.environment.resample_period = 1000;
  c.schedules = default_schedules();
  c.horizon = 10000;
  c.replications = 200;
  c.master_seed = 20260101;
  c.output.rounds_stride = 100;
  c.output.cs_stride = 10;
  c.output.cs_export = CsExport::kWidest;
  return c;
}

// ---------------------------------------------------------------- json read

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
  throw ConfigError(key, msg);
}

template <typename T>
T get_as(const Json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(key, "has the wrong type");
  }
}

void check_keys(const Json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items()) {
    if (!ok.count(k)) fail(where.empty() ? k : where + "." + k, "unknown key");
  }
}

std::string join(const std::string& a, const char* b) {
  return a.empty() ? std::string(b) : a + "." + b;
}

TopologySpec read_topology(const Json& j, const std::string& where) {
  check_keys(j, where, {"n_units", "edges", "clusters"});
  TopologySpec topo;
  if (!j.contains("n_units")) fail(join(where, "n_units"), "is required");
  topo.n_units = get_as<int>(j.at("n_units"), join(where, "n_units"));
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      auto pair = get_as<std::vector<int>>(e, join(where, "edges"));
      if (pair.size() != 2) fail(join(where, "edges"), "entries must be [i, j]");
      topo.edges.emplace_back(pair[0], pair[1]);
    }
  }
  if (j.contains("clusters")) {
    topo.clusters =
        get_as<std::vector<std::vector<int>>>(j.at("clusters"), join(where, "clusters"));
  } else {
    std::vector<UnitId> all;
    for (int u = 1; u <= topo.n_units; ++u) all.push_back(u);
    topo.clusters.push_back(all);
  }
  return topo;
}

MappingKind mapping_kind_from(const std::string& s, const std::string& key) {
  for (MappingKind k :
       {MappingKind::kPerUnitArm, MappingKind::kGlobalSwitchback,
        MappingKind::kClusterIndexArm, MappingKind::kNeighborFractionThreshold}) {
    if (s == to_string(k)) return k;
  }
  fail(key, "unknown mapping kind '" + s + "'");
}

Rational parse_rational(const std::string& text, const std::string& key) {
  Rational r;
  const auto slash = text.find('/');
  if (slash == std::string::npos) fail(key, "expected a rational 'p/q'");
  auto parse = [&](std::string_view sv, std::int64_t& out) {
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    if (res.ec != std::errc() || res.ptr != sv.data() + sv.size()) {
      fail(key, "expected a rational 'p/q'");
    }
  };
  parse(std::string_view(text).substr(0, slash), r.num);
  parse(std::string_view(text).substr(slash + 1), r.den);
  return r;
}

MadSchedule schedule_from(const Json& j, const std::string& key) {
  check_keys(j, key, {"kind", "alpha"});
  const std::string kind = get_as<std::string>(j.value("kind", Json("exp3_n_cs")), key + ".kind");
  if (kind == "standard") return MadSchedule::standard();
  if (kind == "uniform") return MadSchedule::uniform();
  if (kind != "exp3_n_cs") fail(key + ".kind", "unknown schedule kind '" + kind + "'");
  if (!j.contains("alpha")) fail(key + ".alpha", "is required for exp3_n_cs");
  const double alpha = get_as<double>(j.at("alpha"), key + ".alpha");
  try {
    return MadSchedule::power_law(alpha);
  } catch (const ParameterError&) {
    fail(key + ".alpha", std::string(kAlphaDomain) + ", got " + std::to_string(alpha));
  }
}

CsExport cs_export_from(const std::string& s, const std::string& key) {
  if (s == "all") return CsExport::kAll;
  if (s == "widest") return CsExport::kWidest;
  if (s == "none") return CsExport::kNone;
  fail(key, "must be one of all, widest, none");
}

const char* to_string(CsExport e) {
  switch (e) {
    case CsExport::kAll:
      return "all";
    case CsExport::kWidest:
      return "widest";
    case CsExport::kNone:
      return "none";
  }
  return "all";
}

void read_environment(const Json& j, EnvironmentSpec& env) {
  check_keys(j, "environment",
             {"kind", "period", "base", "own_effect", "spillover", "means"});
  const std::string kind =
      get_as<std::string>(j.value("kind", Json("bernoulli_drift")), "environment.kind");
  if (kind == "bernoulli_drift") {
    env.kind = EnvironmentSpec::Kind::kBernoulliDrift;
    if (j.contains("period")) env.resample_period = get_as<int>(j.at("period"), "environment.period");
  } else if (kind == "unit_fixed_means") {
    env.kind = EnvironmentSpec::Kind::kUnitFixedMeans;
    auto vec = [&](const char* name) {
      if (!j.contains(name)) fail(std::string("environment.") + name, "is required");
      return get_as<std::vector<double>>(j.at(name), std::string("environment.") + name);
    };
    env.unit_outcomes.base = vec("base");
    env.unit_outcomes.own_effect = vec("own_effect");
    env.unit_outcomes.spillover = vec("spillover");
  } else if (kind == "adversarial_trace") {
    env.kind = EnvironmentSpec::Kind::kAdversarialTrace;
    if (!j.contains("means")) fail("environment.means", "is required");
    env.trace = get_as<std::vector<std::vector<double>>>(j.at("means"), "environment.means");
  } else {
    fail("environment.kind", "unknown environment kind '" + kind + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t out = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    fail(key, "expected an integer, got '" + value + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    fail(key, "expected a nonnegative integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(key, "expected true or false, got '" + value + "'");
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "main", "main_scaled", "instance1", "instance2", "instance3", "instance4"};
  return names;
}

RunConfig preset_instance(const std::string& name) {
  RunConfig c = preset_skeleton(name);
  if (name == "main") {
    c.topology = star_of_cliques(5, 20);
    c.replications = 1000;
    c.notes.push_back(
        "main: outer clusters are cliques and every outer unit is adjacent to "
        "the center (reconstruction); horizon 10000 is a reconstruction");
  } else if (name == "main_scaled") {
    c.topology = star_of_cliques(5, 2);
    c.notes.push_back(
        "main_scaled: 1 + 5x2 units with the main topology shape; horizon "
        "10000 is a reconstruction");
  } else if (name == "instance1") {
    c.topology.n_units = 1;
    c.topology.clusters = {{1}};
    c.mapping = {MappingKind::kPerUnitArm, 5, {1, 2}};
  } else if (name == "instance2") {
    c.topology.n_units = 6;
    for (int u = 1; u <= 6; ++u) c.topology.edges.emplace_back(u, u % 6 + 1);
    c.topology.clusters = {{1, 2}, {3, 4}, {5, 6}};
    c.notes.push_back("instance2: ring clusters {1,2},{3,4},{5,6} (reconstruction)");
  } else if (name == "instance3") {
    c.topology.n_units = 10;
    for (int u = 1; u < 10; ++u) c.topology.edges.emplace_back(u, u + 1);
    c.topology.clusters = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9, 10}};
    c.notes.push_back(
        "instance3: path 1-2-...-10 with clusters {1-3},{4-6},{7-10} "
        "(reconstruction)");
  } else if (name == "instance4") {
    c.topology = star_of_cliques(3, 3);
    c.notes.push_back(
        "instance4: center unit 1, three outer triangles, every outer unit "
        "adjacent to the center (reconstruction)");
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }
  return c;
}

void validate(const RunConfig& config) {
  const auto& topo = config.topology;
  try {
    const Network net = build_network(topo.n_units, topo.edges);
    const Clustering clustering = build_clustering(net, topo.clusters);
    (void)clustering;
  } catch (const StructureError& e) {
    throw ConfigError("network", e.what());
  }
  if (config.mapping.arm_count < 1) fail("mapping.arms", "must be positive");
  if (config.mapping.kind == MappingKind::kNeighborFractionThreshold) {
    const Rational r = config.mapping.threshold;
    if (r.den <= 0 || r.num <= 0 || r.num >= r.den) {
      fail("mapping.threshold", "must be a rational in (0, 1)");
    }
  }
  if (config.environment.kind == EnvironmentSpec::Kind::kBernoulliDrift &&
      config.environment.resample_period < 1) {
    fail("environment.period", "must be positive");
  }
  if (config.schedules.empty()) fail("schedules", "must not be empty");
  if (config.horizon < 1) fail("horizon", "must be positive");
  if (config.replications < 1) fail("replications", "must be >= 1");
  try {
    config.cs.validate();
  } catch (const ParameterError& e) {
    fail("cs", e.what());
  }
  if (config.witness_budget < 1) fail("witness_budget", "must be >= 1");
  if (config.importance_clip < 0.0) fail("importance_clip", "must be >= 0");
  if (config.threads < 1) fail("threads", "must be >= 1");
  if (config.output.rounds_stride < 1) fail("output.rounds_stride", "must be >= 1");
  if (config.output.cs_stride < 1) fail("output.cs_stride", "must be >= 1");
  for (const ArmPair& p : config.tracked_pairs) {
    if (p.i >= p.j) fail("cs.pairs", "pairs must satisfy i < j");
  }
}

RunConfig parse_config(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail("document", std::string("is not valid JSON: ") + e.what());
  }
  check_keys(doc, "",
             {"preset", "network", "mapping", "environment", "schedules",
              "horizon", "replications", "master_seed", "cs", "witness_budget",
              "importance_clip", "per_round_comparator", "threads", "output",
              "notes"});
  RunConfig c;
  if (doc.contains("preset")) {
    const auto name = get_as<std::string>(doc.at("preset"), "preset");
    if (!name.empty()) c = preset_instance(name);
  }
  if (doc.contains("network")) {
    const TopologySpec topo = read_topology(doc.at("network"), "network");
    // A network that differs from the preset's makes this a custom run.
    if (topo.n_units != c.topology.n_units || topo.edges != c.topology.edges ||
        topo.clusters != c.topology.clusters) {
      c.preset.clear();
    }
    c.topology = topo;
  }
  if (doc.contains("mapping")) {
    const Json& m = doc.at("mapping");
    check_keys(m, "mapping", {"kind", "arms", "threshold"});
    if (m.contains("kind")) {
      c.mapping.kind = mapping_kind_from(get_as<std::string>(m.at("kind"), "mapping.kind"),
                                         "mapping.kind");
    }
    if (m.contains("arms")) c.mapping.arm_count = get_as<int>(m.at("arms"), "mapping.arms");
    if (m.contains("threshold")) {
      const auto t = get_as<std::vector<std::int64_t>>(m.at("threshold"), "mapping.threshold");
      if (t.size() != 2) fail("mapping.threshold", "must be [numerator, denominator]");
      c.mapping.threshold = {t[0], t[1]};
    }
  }
  if (doc.contains("environment")) read_environment(doc.at("environment"), c.environment);
  if (doc.contains("schedules")) {
    c.schedules.clear();
    const Json& s = doc.at("schedules");
    if (!s.is_array()) fail("schedules", "must be an array");
    for (std::size_t k = 0; k < s.size(); ++k) {
      c.schedules.push_back(schedule_from(s[k], "schedules[" + std::to_string(k) + "]"));
    }
  }
  if (doc.contains("horizon")) c.horizon = get_as<std::int64_t>(doc.at("horizon"), "horizon");
  if (doc.contains("replications")) {
    c.replications = get_as<int>(doc.at("replications"), "replications");
  }
  if (doc.contains("master_seed")) {
    c.master_seed = get_as<std::uint64_t>(doc.at("master_seed"), "master_seed");
  }
  if (doc.contains("cs")) {
    const Json& cs = doc.at("cs");
    check_keys(cs, "cs", {"eta", "delta", "pairs"});
    if (cs.contains("eta")) c.cs.eta = get_as<double>(cs.at("eta"), "cs.eta");
    if (cs.contains("delta")) c.cs.tilde_delta = get_as<double>(cs.at("delta"), "cs.delta");
    if (cs.contains("pairs")) {
      c.tracked_pairs.clear();
      for (const auto& p : get_as<std::vector<std::vector<std::size_t>>>(cs.at("pairs"), "cs.pairs")) {
        if (p.size() != 2) fail("cs.pairs", "entries must be [i, j]");
        c.tracked_pairs.push_back({p[0], p[1]});
      }
    }
  }
  if (doc.contains("witness_budget")) {
    c.witness_budget = get_as<std::uint64_t>(doc.at("witness_budget"), "witness_budget");
  }
  if (doc.contains("importance_clip")) {
    c.importance_clip = get_as<double>(doc.at("importance_clip"), "importance_clip");
  }
  if (doc.contains("per_round_comparator")) {
    c.per_round_comparator = get_as<bool>(doc.at("per_round_comparator"), "per_round_comparator");
  }
  if (doc.contains("threads")) c.threads = get_as<int>(doc.at("threads"), "threads");
  if (doc.contains("output")) {
    const Json& o = doc.at("output");
    check_keys(o, "output",
               {"directory", "rounds_stride", "cs_stride", "cs_export", "log_probabilities"});
    if (o.contains("directory")) {
      c.output.directory = get_as<std::string>(o.at("directory"), "output.directory");
    }
    if (o.contains("rounds_stride")) {
      c.output.rounds_stride = get_as<std::int64_t>(o.at("rounds_stride"), "output.rounds_stride");
    }
    if (o.contains("cs_stride")) {
      c.output.cs_stride = get_as<std::int64_t>(o.at("cs_stride"), "output.cs_stride");
    }
    if (o.contains("cs_export")) {
      c.output.cs_export = cs_export_from(
          get_as<std::string>(o.at("cs_export"), "output.cs_export"), "output.cs_export");
    }
    if (o.contains("log_probabilities")) {
      c.output.log_probabilities =
          get_as<bool>(o.at("log_probabilities"), "output.log_probabilities");
    }
  }
  if (doc.contains("notes")) {
    c.notes = get_as<std::vector<std::string>>(doc.at("notes"), "notes");
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open configuration file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

TopologySpec parse_topology(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail("document", std::string("is not valid JSON: ") + e.what());
  }
  return read_topology(doc, "");
}

void apply_override(RunConfig& c, const std::string& key,
                    const std::string& value) {
  if (key == "horizon") {
    c.horizon = parse_int(key, value);
  } else if (key == "reps" || key == "replications") {
    c.replications = static_cast<int>(parse_int(key, value));
  } else if (key == "seed" || key == "master_seed") {
    c.master_seed = parse_uint(key, value);
  } else if (key == "alpha") {
    const double alpha = parse_double(key, value);
    try {
      c.schedules = {MadSchedule::power_law(alpha)};
    } catch (const ParameterError&) {
      fail(key, std::string(kAlphaDomain) + ", got " + value);
    }
  } else if (key == "algo") {
    if (value == "standard") {
      c.schedules = {MadSchedule::standard()};
    } else if (value == "uniform") {
      c.schedules = {MadSchedule::uniform()};
    } else if (value == "exp3_n_cs") {
      std::vector<MadSchedule> kept;
      for (const auto& s : c.schedules) {
        if (s.kind() == MadSchedule::Kind::kPowerLaw) kept.push_back(s);
      }
      if (kept.empty()) fail(key, "exp3_n_cs needs an alpha (set alpha=...)");
      c.schedules = kept;
    } else {
      fail(key, "must be one of standard, uniform, exp3_n_cs");
    }
  } else if (key == "eta") {
    c.cs.eta = parse_double(key, value);
  } else if (key == "delta") {
    c.cs.tilde_delta = parse_double(key, value);
  } else if (key == "witness_budget") {
    c.witness_budget = parse_uint(key, value);
  } else if (key == "importance_clip") {
    c.importance_clip = parse_double(key, value);
  } else if (key == "per_round_comparator") {
    c.per_round_comparator = parse_bool(key, value);
  } else if (key == "threads") {
    c.threads = static_cast<int>(parse_int(key, value));
  } else if (key == "out" || key == "output.directory") {
    c.output.directory = value;
  } else if (key == "rounds_stride") {
    c.output.rounds_stride = parse_int(key, value);
  } else if (key == "cs_stride") {
    c.output.cs_stride = parse_int(key, value);
  } else if (key == "cs_export") {
    c.output.cs_export = cs_export_from(value, key);
  } else if (key == "log_probabilities") {
    c.output.log_probabilities = parse_bool(key, value);
  } else if (key == "period") {
    c.environment.resample_period = static_cast<int>(parse_int(key, value));
  } else if (key == "threshold") {
    c.mapping.threshold = parse_rational(value, key);
  } else {
    fail(key, "unknown override key");
  }
  validate(c);
}

std::string to_json(const RunConfig& c) {
  Json doc;
  doc["preset"] = c.preset;
  Json net;
  net["n_units"] = c.topology.n_units;
  Json edges = Json::array();
  for (const auto& [i, j] : c.topology.edges) edges.push_back({i, j});
  net["edges"] = edges;
  net["clusters"] = c.topology.clusters;
  doc["network"] = net;
  doc["mapping"] = {{"kind", to_string(c.mapping.kind)},
                    {"arms", c.mapping.arm_count},
                    {"threshold", {c.mapping.threshold.num, c.mapping.threshold.den}}};
  Json env;
  env["kind"] = to_string(c.environment.kind);
  switch (c.environment.kind) {
    case EnvironmentSpec::Kind::kBernoulliDrift:
      env["period"] = c.environment.resample_period;
      break;
    case EnvironmentSpec::Kind::kUnitFixedMeans:
      env["base"] = c.environment.unit_outcomes.base;
      env["own_effect"] = c.environment.unit_outcomes.own_effect;
      env["spillover"] = c.environment.unit_outcomes.spillover;
      break;
    case EnvironmentSpec::Kind::kAdversarialTrace:
      env["means"] = c.environment.trace;
      break;
  }
  doc["environment"] = env;
  Json schedules = Json::array();
  for (const auto& s : c.schedules) {
    switch (s.kind()) {
      case MadSchedule::Kind::kPowerLaw:
        schedules.push_back({{"kind", "exp3_n_cs"}, {"alpha", s.alpha()}});
        break;
      case MadSchedule::Kind::kStandard:
        schedules.push_back({{"kind", "standard"}});
        break;
      case MadSchedule::Kind::kUniform:
        schedules.push_back({{"kind", "uniform"}});
        break;
    }
  }
  doc["schedules"] = schedules;
  doc["horizon"] = c.horizon;
  doc["replications"] = c.replications;
  doc["master_seed"] = c.master_seed;
  Json pairs = Json::array();
  for (const auto& p : c.tracked_pairs) pairs.push_back({p.i, p.j});
  doc["cs"] = {{"eta", c.cs.eta}, {"delta", c.cs.tilde_delta}, {"pairs", pairs}};
  doc["witness_budget"] = c.witness_budget;
  doc["importance_clip"] = c.importance_clip;
  doc["per_round_comparator"] = c.per_round_comparator;
  doc["threads"] = c.threads;
  doc["output"] = {{"directory", c.output.directory},
                   {"rounds_stride", c.output.rounds_stride},
                   {"cs_stride", c.output.cs_stride},
                   {"cs_export", to_string(c.output.cs_export)},
                   {"log_probabilities", c.output.log_probabilities}};
  doc["notes"] = c.notes;
  return doc.dump(2);
}

}  // namespace mabn
