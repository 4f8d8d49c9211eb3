// Copyright 2026 The nvdetect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nvdetect/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include "nvdetect/errors.hpp"

namespace nvdetect::cli {

using nlohmann::json;

namespace {

// View of a JSON object that rejects keys outside the allowed set.
class Object {
 public:
  Object(const json& j, std::string path, std::initializer_list<const char*> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
      if (!ok.count(item.key())) throw ConfigError(path_ + ": unknown key '" + item.key() + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& at(const char* key) const {
    if (!j_.contains(key)) throw ConfigError(path_ + ": missing key '" + key + "'");
    return j_.at(key);
  }

  double number(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(name(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(name(key) + ": must be finite");
    return d;
  }

  double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const char* key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(name(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::string string(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(name(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::string name(const char* key) const { return path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
};

std::string type_of(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError(path + ": expected an object with a string 'type'");
  }
  return j.at("type").get<std::string>();
}

FieldHypothesis parse_field(const json& j) {
  const std::string path = "scenario.field";
  const std::string type = type_of(j, path);
  if (type == "dc_known") {
    Object o(j, path, {"type", "b"});
    return DcKnown{o.number("b")};
  }
  if (type == "dc_gaussian") {
    Object o(j, path, {"type", "b0", "sigma_b"});
    return DcGaussian{o.number("b0"), o.number("sigma_b")};
  }
  if (type == "ac_cosine") {
    Object o(j, path, {"type", "b0", "sigma_b", "f", "sigma_f"});
    return AcCosine{o.number("b0"), o.number_or("sigma_b", 0.0), o.number("f"), o.number_or("sigma_f", 0.0)};
  }
  if (type == "multi_tone") {
    Object o(j, path, {"type", "terms"});
    const json& terms = o.at("terms");
    if (!terms.is_array()) throw ConfigError(path + ".terms: expected an array");
    MultiTone wave;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      Object t(terms[i], path + ".terms[" + std::to_string(i) + "]", {"amplitude", "frequency", "phase"});
      wave.terms.push_back(Tone{t.number("amplitude"), t.number("frequency"), t.number_or("phase", 0.0)});
    }
    return wave;
  }
  throw ConfigError(path + ".type: unknown field type '" + type + "'");
}

Protocol parse_protocol(const json& j) {
  const std::string path = "scenario.protocol";
  const std::string type = type_of(j, path);
  if (type == "free_evolution") {
    Object o(j, path, {"type", "dephasing"});
    FreeEvolution p;
    if (o.has("dephasing")) {
      const std::string d = o.string("dephasing");
      if (d == "quasi_static") p.dephasing = Dephasing::QuasiStatic;
      else if (d == "exact") p.dephasing = Dephasing::Exact;
      else throw ConfigError(path + ".dephasing: expected 'quasi_static' or 'exact'");
    }
    return p;
  }
  if (type == "cpmg") {
    Object o(j, path, {"type", "tau"});
    Cpmg p;
    if (o.has("tau")) p.tau = o.number("tau");
    return p;
  }
  if (type == "node_locked") {
    Object o(j, path, {"type"});
    return NodeLocked{};
  }
  throw ConfigError(path + ".type: unknown protocol '" + type + "'");
}

SweepVariable parse_variable(const std::string& s) {
  if (s == "T") return SweepVariable::T;
  if (s == "N") return SweepVariable::N;
  if (s == "M") return SweepVariable::M;
  if (s == "eta") return SweepVariable::Eta;
  if (s == "sigma_b") return SweepVariable::SigmaB;
  throw ConfigError("sweep.variable: expected one of T, N, M, eta, sigma_b");
}

int pulse_bound(std::int64_t n, const std::string& name) {
  if (n < 0 || n > 1000000) throw ConfigError(name + ": must lie in [0, 1e6]");
  return static_cast<int>(n);
}

}  // namespace

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::T: return "T";
    case SweepVariable::N: return "N";
    case SweepVariable::M: return "M";
    case SweepVariable::Eta: return "eta";
    case SweepVariable::SigmaB: return "sigma_b";
  }
  return "?";
}

Config parse_config(const json& doc) {
  Config cfg;
  Object root(doc, "config", {"scenario", "sweep", "simulation", "seed"});
  try {
    Object sc(root.at("scenario"), "scenario",
              {"noise", "gamma", "priors", "eta", "field", "protocol", "operating_point", "search"});
    Object noise(sc.at("noise"), "scenario.noise", {"kappa", "tau_c"});
    cfg.scenario.noise = NoiseModel(noise.number("kappa"), noise.number("tau_c"));
    if (sc.has("gamma")) cfg.scenario.gamma = Gyromagnetic(sc.number("gamma"));
    if (sc.has("priors")) {
      Object pr(sc.at("priors"), "scenario.priors", {"p0", "p1"});
      if (pr.has("p0") && pr.has("p1")) cfg.scenario.priors = Priors(pr.number("p0"), pr.number("p1"));
      else if (pr.has("p1")) cfg.scenario.priors = Priors::from_present(pr.number("p1"));
      else cfg.scenario.priors = Priors(pr.number("p0"), 1.0 - pr.number("p0"));
    }
    cfg.scenario.eta = sc.number_or("eta", 1.0);
    cfg.scenario.field = parse_field(sc.at("field"));
    cfg.scenario.protocol = parse_protocol(sc.at("protocol"));
    cfg.scenario.validate();

    if (sc.has("operating_point")) {
      const double op = sc.number("operating_point");
      if (cfg.scenario.uses_pulse_count() && (op != std::round(op) || op < 2 || static_cast<long long>(op) % 2 != 0)) {
        throw ConfigError("scenario.operating_point: CPMG pulse count must be an even integer >= 2");
      }
      if (!(op >= 0.0)) throw ConfigError("scenario.operating_point: must be non-negative");
      cfg.operating_point = op;
    }
    if (sc.has("search")) {
      Object s(sc.at("search"), "scenario.search", {"t_min", "t_max", "n_min", "n_max"});
      cfg.search.t_min = s.number_or("t_min", cfg.search.t_min);
      cfg.search.t_max = s.number_or("t_max", cfg.search.t_max);
      if (s.has("n_min")) cfg.search.n_min = pulse_bound(s.integer("n_min"), "scenario.search.n_min");
      if (s.has("n_max")) cfg.search.n_max = pulse_bound(s.integer("n_max"), "scenario.search.n_max");
    }
    if (!(cfg.search.t_min >= 0.0 && cfg.search.t_max > cfg.search.t_min)) {
      throw ConfigError("scenario.search: need 0 <= t_min < t_max");
    }
    if (cfg.search.n_min < 2 || cfg.search.n_min % 2 || cfg.search.n_max % 2 || cfg.search.n_max < cfg.search.n_min) {
      throw ConfigError("scenario.search: need even 2 <= n_min <= n_max");
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }

  if (root.has("sweep")) {
    Object sw(root.at("sweep"), "sweep", {"variable", "from", "to", "step", "count"});
    SweepSpec spec{parse_variable(sw.string("variable")), sw.number("from"), sw.number("to"), std::nullopt, std::nullopt};
    if (sw.has("step") == sw.has("count")) throw ConfigError("sweep: give exactly one of 'step' or 'count'");
    if (sw.has("step")) {
      spec.step = sw.number("step");
      if (!(*spec.step > 0.0)) throw ConfigError("sweep.step: must be positive");
    } else {
      const auto count = sw.integer("count");
      if (count < 1 || count > 10000000) throw ConfigError("sweep.count: must lie in [1, 1e7]");
      spec.count = static_cast<int>(count);
    }
    if (!(spec.to >= spec.from)) throw ConfigError("sweep: range is empty (to < from)");
    cfg.sweep = spec;
  }

  if (root.has("simulation")) {
    Object sim(root.at("simulation"), "simulation", {"shots", "copies"});
    if (sim.has("shots")) {
      const auto shots = sim.integer("shots");
      if (shots < 1) throw ConfigError("simulation.shots: must be >= 1");
      cfg.simulation.shots = static_cast<std::uint64_t>(shots);
    }
    if (sim.has("copies")) {
      const auto copies = sim.integer("copies");
      if (copies < 1 || copies > 100000) throw ConfigError("simulation.copies: must lie in [1, 1e5]");
      cfg.simulation.copies = static_cast<int>(copies);
    }
  }
  if (root.has("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("config.seed: expected a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace nvdetect::cli
