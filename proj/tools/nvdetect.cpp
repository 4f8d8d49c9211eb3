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

// nvdetect: sweeps, optimisation and Monte Carlo validation for detecting weak
// magnetic fields with a dephasing NV-center qubit.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nvdetect/cli/commands.hpp"
#include "nvdetect/cli/config.hpp"
#include "nvdetect/cli/output.hpp"
#include "nvdetect/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

void add_flags(CLI::App* cmd, Flags& flags, bool needs_config) {
  auto* opt = cmd->add_option("--config", flags.config, "JSON config with 'scenario' and 'sweep' objects");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "Output path (default: standard output)");
  cmd->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", flags.seed, "Override the config seed");
  cmd->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nvdetect;
  using namespace nvdetect::cli;

  CLI::App app{"Detect weak magnetic fields with a dephasing NV-center qubit"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"dc", "Error vs time (or vs sigma_b) for a DC field under free evolution"},
      {"ac", "Error vs CPMG pulse count (or vs sigma_b) for an AC cosine field"},
      {"waveform", "Error vs time for a multi-tone field with node-locked pulses"},
      {"multicopy", "Majority-vote error vs number of copies M"},
      {"efficiency", "Error vs photon detection efficiency eta"},
      {"optimize", "Optimal interrogation time or pulse count"},
      {"simulate", "Monte Carlo check of the closed-form error"},
      {"selftest", "Run the oracle battery"},
  };
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags, name != "selftest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();

  std::ofstream file;
  if (!flags.out.empty()) {
    file.open(flags.out);
    if (!file) {
      std::cerr << "nvdetect: error: cannot open output file '" << flags.out << "'\n";
      return kExitConfig;
    }
  }
  std::ostream& out = flags.out.empty() ? std::cout : file;

  if (command == "selftest") {
    try {
      const bool ok = run_selftest(out, flags.seed.value_or(1), flags.threads);
      return ok ? 0 : kExitNumerical;
    } catch (const std::exception& e) {
      std::cerr << "nvdetect: error: " << e.what() << '\n';
      return kExitNumerical;
    }
  }

  Config cfg;
  try {
    cfg = load_config(flags.config);
    if (flags.seed) cfg.seed = *flags.seed;
  } catch (const ConfigError& e) {
    std::cerr << "nvdetect: config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (command == "simulate") {
      const SimulationReport report = run_simulation(cfg, flags.threads);
      if (flags.format == "json") out << to_json(report, cfg).dump(2) << '\n';
      else write_simulation_csv(out, report);
      return 0;
    }
    Table table;
    if (command == "dc") table = run_dc_sweep(cfg, flags.threads);
    else if (command == "ac") table = run_ac_sweep(cfg, flags.threads);
    else if (command == "waveform") table = run_waveform(cfg, flags.threads);
    else if (command == "multicopy") table = run_multicopy(cfg, flags.threads);
    else if (command == "efficiency") table = run_efficiency(cfg, flags.threads);
    else table = run_optimize(cfg);
    if (flags.format == "json") out << to_json(table, cfg).dump(2) << '\n';
    else write_csv(out, table);
  } catch (const ConfigError& e) {
    std::cerr << "nvdetect: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "nvdetect: numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ContractError& e) {
    std::cerr << "nvdetect: contract violation: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
