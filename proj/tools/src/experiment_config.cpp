// Copyright 2026 The ergodic_counts Authors
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

#include "experiment_config.hpp"

#include <fstream>
#include <sstream>

#include "ergodic/errors.hpp"
#include "ergodic/model_io.hpp"

namespace ergodic::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError((path.empty() ? std::string("/") : path) + ": " + what);
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

double get_positive(const json& v, const std::string& path) {
  const double x = get_number(v, path);
  if (!(x > 0.0)) fail(path, "expected a positive number");
  return x;
}

std::uint64_t get_count(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  fail(path, "expected a nonnegative integer");
}

std::vector<double> get_numbers(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<int> get_indices(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected a list of indices");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto n = get_count(v[i], path + "/" + std::to_string(i));
    if (n < 1) fail(path + "/" + std::to_string(i), "indices start at 1");
    out.push_back(static_cast<int>(n));
  }
  return out;
}

void check_keys(const json& doc, const std::string& path, std::initializer_list<const char*> known) {
  if (!doc.is_object()) fail(path, "expected an object");
  for (const auto& item : doc.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) fail(path + "/" + item.key(), "unknown key");
  }
}

EventSpec parse_event(const json& doc, const std::string& path) {
  check_keys(doc, path, {"boxes", "detectors", "exact"});
  EventSpec e;
  if (doc.contains("boxes")) {
    const json& boxes = doc["boxes"];
    if (!boxes.is_array()) fail(path + "/boxes", "expected a list of [lo, hi] pairs");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const std::string p = path + "/boxes/" + std::to_string(i);
      const auto pair = get_numbers(boxes[i], p);
      if (pair.size() != 2) fail(p, "expected a [lo, hi] pair");
      e.boxes.push_back({pair[0], pair[1]});
    }
  }
  e.detectors = doc.contains("detectors") ? get_indices(doc["detectors"], path + "/detectors")
                                          : std::vector<int>(e.boxes.size(), 1);
  if (e.detectors.size() != e.boxes.size()) fail(path + "/detectors", "need one detector per box");
  if (doc.contains("exact")) {
    if (!doc["exact"].is_boolean()) fail(path + "/exact", "expected true or false");
    e.exact = doc["exact"].get<bool>();
  }
  return e;
}

json event_to_json(const EventSpec& e) {
  json boxes = json::array();
  for (const auto& b : e.boxes) boxes.push_back({b.lo, b.hi});
  return {{"boxes", boxes}, {"detectors", e.detectors}, {"exact", e.exact}};
}

}  // namespace

bool operator==(const EventSpec& a, const EventSpec& b) {
  if (a.boxes.size() != b.boxes.size()) return false;
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    if (a.boxes[i].lo != b.boxes[i].lo || a.boxes[i].hi != b.boxes[i].hi) return false;
  }
  return a.detectors == b.detectors && a.exact == b.exact;
}

ResponseFunction ResponseSpec::build() const {
  if (kind == "exponential") return ResponseFunction::exponential(amplitude, scale);
  if (kind == "rectangular") return ResponseFunction::rectangular(amplitude, scale);
  throw ConfigError("/response/kind: expected \"exponential\" or \"rectangular\"");
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults = {
      {"normalisation", 1e-10}, {"unraveling", 1e-12}, {"markov", 1e-5},
      {"quadrature", 1e-6},     {"z", 3.0},            {"chi2_p", 1e-3},
      {"antibunching_ratio", 0.05}};
  return defaults;
}

double ExperimentConfig::tolerance(const std::string& name) const {
  if (auto it = tolerances.find(name); it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

ExperimentConfig config_from_json(const json& doc) {
  check_keys(doc, "", {"model", "initial_state", "response", "horizon", "tau", "burn_in", "dt",
                       "dt_int", "n_traj", "n_max", "quad_nodes", "seed", "times", "epsilon",
                       "lags", "tolerances", "markov", "kraus"});
  ExperimentConfig c;
  if (!doc.contains("model")) fail("/model", "missing model document");
  c.model = doc["model"];
  if (!c.model.is_object()) fail("/model", "expected an object");
  if (!c.has_lindblad() && !c.has_kraus()) {
    fail("/model", "needs \"jump_operators\" or \"kraus_operators\"");
  }
  // Parse now so malformed models are reported before any work starts.
  if (c.has_lindblad()) parse_lindblad_model(c.model, "/model");
  if (c.has_kraus()) parse_kraus_operators(c.model, "/model");
  if (doc.contains("initial_state")) {
    c.initial_state = doc["initial_state"];
    if (!c.initial_state.is_string() && !c.initial_state.is_array()) {
      fail("/initial_state", "expected a state name or a matrix");
    }
  }
  if (doc.contains("response")) {
    const json& r = doc["response"];
    check_keys(r, "/response", {"kind", "amplitude", "scale"});
    if (r.contains("kind")) {
      if (!r["kind"].is_string()) fail("/response/kind", "expected a string");
      c.response.kind = r["kind"].get<std::string>();
      if (c.response.kind != "exponential" && c.response.kind != "rectangular") {
        fail("/response/kind", "expected \"exponential\" or \"rectangular\"");
      }
    }
    if (r.contains("amplitude")) {
      c.response.amplitude = get_number(r["amplitude"], "/response/amplitude");
      if (c.response.amplitude < 0.0) fail("/response/amplitude", "must be nonnegative");
    }
    if (r.contains("scale")) c.response.scale = get_positive(r["scale"], "/response/scale");
  }
  if (doc.contains("horizon")) c.horizon = get_positive(doc["horizon"], "/horizon");
  if (doc.contains("tau")) c.tau = get_positive(doc["tau"], "/tau");
  if (doc.contains("burn_in")) {
    c.burn_in = get_number(doc["burn_in"], "/burn_in");
    if (*c.burn_in < 0.0) fail("/burn_in", "must be nonnegative");
  }
  if (doc.contains("dt")) c.dt = get_positive(doc["dt"], "/dt");
  if (doc.contains("dt_int")) c.dt_int = get_positive(doc["dt_int"], "/dt_int");
  if (doc.contains("n_traj")) {
    c.n_traj = get_count(doc["n_traj"], "/n_traj");
    if (c.n_traj == 0) fail("/n_traj", "must be positive");
  }
  if (doc.contains("n_max")) c.n_max = static_cast<int>(get_count(doc["n_max"], "/n_max"));
  if (doc.contains("quad_nodes")) {
    c.quad_nodes = static_cast<int>(get_count(doc["quad_nodes"], "/quad_nodes"));
    if (c.quad_nodes < 1) fail("/quad_nodes", "must be positive");
  }
  if (doc.contains("seed")) c.seed = get_count(doc["seed"], "/seed");
  if (doc.contains("times")) {
    c.times = get_numbers(doc["times"], "/times");
    if (c.times.empty()) fail("/times", "need at least one time");
    for (std::size_t j = 0; j < c.times.size(); ++j) {
      if (c.times[j] < 0.0 || (j > 0 && c.times[j] < c.times[j - 1])) {
        fail("/times/" + std::to_string(j), "times must be nonnegative and sorted");
      }
    }
  }
  if (doc.contains("epsilon")) c.epsilon = get_positive(doc["epsilon"], "/epsilon");
  if (doc.contains("lags")) c.lags = get_numbers(doc["lags"], "/lags");
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) fail("/tolerances", "expected an object");
    for (const auto& item : t.items()) {
      const std::string p = "/tolerances/" + item.key();
      if (item.key() != "ks" && !default_tolerances().contains(item.key())) fail(p, "unknown tolerance");
      c.tolerances[item.key()] = get_number(item.value(), p);
    }
  }
  if (doc.contains("markov")) {
    const json& m = doc["markov"];
    if (!m.is_array()) fail("/markov", "expected a list of event pairs");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string p = "/markov/" + std::to_string(i);
      check_keys(m[i], p, {"s", "t", "e", "f"});
      MarkovPair pair;
      if (m[i].contains("s")) pair.s = get_positive(m[i]["s"], p + "/s");
      if (m[i].contains("t")) pair.t = get_positive(m[i]["t"], p + "/t");
      if (m[i].contains("e")) pair.e = parse_event(m[i]["e"], p + "/e");
      if (m[i].contains("f")) pair.f = parse_event(m[i]["f"], p + "/f");
      c.markov.push_back(pair);
    }
  }
  if (doc.contains("kraus")) {
    const json& k = doc["kraus"];
    check_keys(k, "/kraus", {"sequence_length", "pattern", "n_steps"});
    if (k.contains("sequence_length")) {
      c.kraus.sequence_length = static_cast<int>(get_count(k["sequence_length"], "/kraus/sequence_length"));
      if (c.kraus.sequence_length < 1) fail("/kraus/sequence_length", "must be positive");
    }
    if (k.contains("pattern")) {
      c.kraus.pattern = get_indices(k["pattern"], "/kraus/pattern");
      if (c.kraus.pattern.empty()) fail("/kraus/pattern", "need at least one outcome");
    }
    if (k.contains("n_steps")) c.kraus.n_steps = get_count(k["n_steps"], "/kraus/n_steps");
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["model"] = c.model;
  doc["initial_state"] = c.initial_state;
  doc["response"] = {{"kind", c.response.kind}, {"amplitude", c.response.amplitude},
                     {"scale", c.response.scale}};
  doc["horizon"] = c.horizon;
  doc["tau"] = c.tau;
  if (c.burn_in) doc["burn_in"] = *c.burn_in;
  doc["dt"] = c.dt;
  if (c.dt_int) doc["dt_int"] = *c.dt_int;
  doc["n_traj"] = c.n_traj;
  doc["n_max"] = c.n_max;
  doc["quad_nodes"] = c.quad_nodes;
  doc["seed"] = c.seed;
  doc["times"] = c.times;
  doc["epsilon"] = c.epsilon;
  doc["lags"] = c.lags;
  doc["tolerances"] = json::object();
  for (const auto& [k, v] : c.tolerances) doc["tolerances"][k] = v;
  doc["markov"] = json::array();
  for (const auto& p : c.markov) {
    doc["markov"].push_back({{"s", p.s}, {"t", p.t}, {"e", event_to_json(p.e)}, {"f", event_to_json(p.f)}});
  }
  doc["kraus"] = {{"sequence_length", c.kraus.sequence_length},
                  {"pattern", c.kraus.pattern},
                  {"n_steps", c.kraus.n_steps}};
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace ergodic::cli
