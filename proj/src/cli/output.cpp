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

#include "nvdetect/cli/output.hpp"

#include <cstdio>
#include <string>

namespace nvdetect::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json row_json(const OutputRow& r, const std::string& variable) {
  json j;
  j[variable] = r.value;
  j["p_error"] = r.p_error;
  j["chi"] = r.chi ? json(*r.chi) : json(nullptr);
  j["nu"] = r.nu;
  j["mu_abs"] = r.mu_abs;
  j["mu_arg"] = r.mu_arg;
  j["regime"] = std::string(to_string(r.regime));
  return j;
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  out << to_string(table.variable) << ",p_error,chi,nu,mu_abs,mu_arg,regime\n";
  for (const OutputRow& r : table.rows) {
    out << num(r.value) << ',' << num(r.p_error) << ',' << (r.chi ? num(*r.chi) : std::string()) << ','
        << num(r.nu) << ',' << num(r.mu_abs) << ',' << num(r.mu_arg) << ',' << to_string(r.regime) << '\n';
  }
}

json to_json(const Table& table, const Config& cfg) {
  const std::string var = to_string(table.variable);
  json rows = json::array();
  for (const OutputRow& r : table.rows) rows.push_back(row_json(r, var));
  json doc;
  doc["command"] = table.command;
  doc["variable"] = var;
  doc["rows"] = std::move(rows);
  doc["optimum"] = row_json(table.optimum(), var);
  doc["metadata"] = {{"seed", cfg.seed}, {"row_count", table.rows.size()}};
  return doc;
}

void write_simulation_csv(std::ostream& out, const SimulationReport& r) {
  out << "argument,copies,n_shots,error_rate,standard_error,closed_form,z_score,seed\n";
  out << num(r.argument) << ',' << r.copies << ',' << r.empirical.n_shots << ',' << num(r.empirical.error_rate)
      << ',' << num(r.empirical.standard_error) << ',' << num(r.closed_form) << ',' << num(r.z_score) << ','
      << r.empirical.seed << '\n';
}

json to_json(const SimulationReport& r, const Config& cfg) {
  return json{{"command", "simulate"},
              {"argument", r.argument},
              {"copies", r.copies},
              {"n_shots", r.empirical.n_shots},
              {"error_rate", r.empirical.error_rate},
              {"standard_error", r.empirical.standard_error},
              {"closed_form", r.closed_form},
              {"z_score", r.z_score},
              {"metadata", {{"seed", cfg.seed}}}};
}

}  // namespace nvdetect::cli
