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

#include "nvdetect/cli/commands.hpp"

#include <algorithm>
#include <bit>
#include <numbers>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <thread>

#include "nvdetect/errors.hpp"
#include "nvdetect/rng.hpp"
#include "nvdetect/validation.hpp"

namespace nvdetect::cli {

namespace {

// Evaluates fn(values[i]) for every i, possibly concurrently; output keeps
// sweep order.
std::vector<OutputRow> map_rows(const std::vector<double>& values,
                                const std::function<OutputRow(double)>& fn, unsigned threads) {
  std::vector<OutputRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size() && !failed; i = next++) {
      try {
        rows[i] = fn(values[i]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(values.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

const SweepSpec& require_sweep(const Config& cfg, const char* command) {
  if (!cfg.sweep) throw ConfigError(std::string(command) + ": config needs a 'sweep' object");
  return *cfg.sweep;
}

[[noreturn]] void bad_variable(const char* command, SweepVariable v) {
  throw ConfigError(std::string(command) + ": cannot sweep '" + to_string(v) + "'");
}

void require_non_negative(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!(v >= 0.0)) throw ConfigError(std::string("sweep: ") + what + " values must be non-negative");
  }
}

Optimum optimum_of(const Scenario& s, const SearchRange& search) {
  return s.uses_pulse_count() ? optimize_pulses(s, search.n_min, search.n_max)
                              : optimize_time(s, search.t_min, search.t_max);
}

bool is_dc(const FieldHypothesis& f) {
  return std::holds_alternative<DcKnown>(f) || std::holds_alternative<DcGaussian>(f);
}

}  // namespace

const OutputRow& Table::optimum() const {
  if (rows.empty()) throw ContractError("table has no rows");
  return *std::min_element(rows.begin(), rows.end(),
                           [](const OutputRow& a, const OutputRow& b) { return a.p_error < b.p_error; });
}

OutputRow make_row(double value, const Evaluation& e) {
  const Complex mu = e.coherence.mu();
  return OutputRow{value, e.p_error, e.outcome.chi, e.coherence.nu(), std::abs(mu), std::arg(mu), e.outcome.regime};
}

OutputRow make_row(double value, const Optimum& o) {
  return OutputRow{value, o.p_error, o.chi, o.nu, std::abs(o.mu), std::arg(o.mu), o.regime};
}

std::vector<double> sweep_values(const SweepSpec& spec) {
  std::vector<double> values;
  if (spec.count) {
    const int n = *spec.count;
    if (n == 1) return {spec.from};
    for (int i = 0; i < n; ++i) {
      values.push_back(i + 1 == n ? spec.to : spec.from + (spec.to - spec.from) * i / (n - 1));
    }
  } else {
    const double step = *spec.step;
    const auto n = static_cast<std::size_t>(std::floor((spec.to - spec.from) / step + 1e-9)) + 1;
    if (n > 10000000) throw ConfigError("sweep: too many points");
    for (std::size_t i = 0; i < n; ++i) values.push_back(spec.from + step * static_cast<double>(i));
  }
  if (spec.variable == SweepVariable::N || spec.variable == SweepVariable::M) {
    for (double& v : values) {
      const double r = std::round(v);
      if (std::abs(v - r) > 1e-9) throw ConfigError("sweep: " + to_string(spec.variable) + " values must be integers");
      if (std::abs(r) > 1e6) throw ConfigError("sweep: " + to_string(spec.variable) + " values must not exceed 1e6");
      v = r;
    }
  }
  return values;
}

double base_argument(const Config& cfg) {
  if (cfg.operating_point) return *cfg.operating_point;
  return optimum_of(cfg.scenario, cfg.search).argument;
}

Table run_dc_sweep(const Config& cfg, unsigned threads) {
  const Scenario& s = cfg.scenario;
  if (!std::holds_alternative<FreeEvolution>(s.protocol) || !is_dc(s.field)) {
    throw ConfigError("dc: needs a dc_known or dc_gaussian field with the free_evolution protocol");
  }
  const SweepSpec& spec = require_sweep(cfg, "dc");
  const auto values = sweep_values(spec);
  require_non_negative(values, to_string(spec.variable).c_str());
  Table table{"dc", spec.variable, {}};
  if (spec.variable == SweepVariable::T) {
    table.rows = map_rows(values, [&](double t) { return make_row(t, evaluate_at_time(s, t)); }, threads);
  } else if (spec.variable == SweepVariable::SigmaB) {
    const double b0 = std::holds_alternative<DcKnown>(s.field) ? std::get<DcKnown>(s.field).b
                                                               : std::get<DcGaussian>(s.field).b0;
    table.rows = map_rows(values, [&](double sigma) {
      Scenario local = s;
      local.field = DcGaussian{b0, sigma};
      return make_row(sigma, optimize_time(local, cfg.search.t_min, cfg.search.t_max));
    }, threads);
  } else {
    bad_variable("dc", spec.variable);
  }
  return table;
}

Table run_ac_sweep(const Config& cfg, unsigned threads) {
  const Scenario& s = cfg.scenario;
  if (!s.uses_pulse_count()) throw ConfigError("ac: needs an ac_cosine field with the cpmg protocol");
  const SweepSpec& spec = require_sweep(cfg, "ac");
  const auto values = sweep_values(spec);
  Table table{"ac", spec.variable, {}};
  if (spec.variable == SweepVariable::N) {
    for (double n : values) {
      if (n < 2 || static_cast<long long>(n) % 2 != 0) throw ConfigError("ac: N values must be even and >= 2");
    }
    table.rows = map_rows(values, [&](double n) {
      return make_row(n, evaluate_at_pulses(s, static_cast<int>(n)));
    }, threads);
  } else if (spec.variable == SweepVariable::SigmaB) {
    require_non_negative(values, "sigma_b");
    table.rows = map_rows(values, [&](double sigma) {
      Scenario local = s;
      std::get<AcCosine>(local.field).sigma_b = sigma;
      return make_row(sigma, optimize_pulses(local, cfg.search.n_min, cfg.search.n_max));
    }, threads);
  } else {
    bad_variable("ac", spec.variable);
  }
  return table;
}

Table run_waveform(const Config& cfg, unsigned threads) {
  const Scenario& s = cfg.scenario;
  if (!std::holds_alternative<NodeLocked>(s.protocol)) {
    throw ConfigError("waveform: needs a multi_tone field with the node_locked protocol");
  }
  const SweepSpec& spec = require_sweep(cfg, "waveform");
  if (spec.variable != SweepVariable::T) bad_variable("waveform", spec.variable);
  const auto values = sweep_values(spec);
  require_non_negative(values, "T");
  return Table{"waveform", spec.variable,
               map_rows(values, [&](double t) { return make_row(t, evaluate_at_time(s, t)); }, threads)};
}

Table run_multicopy(const Config& cfg, unsigned threads) {
  const SweepSpec& spec = require_sweep(cfg, "multicopy");
  if (spec.variable != SweepVariable::M) bad_variable("multicopy", spec.variable);
  const auto values = sweep_values(spec);
  for (double m : values) {
    if (m < 1) throw ConfigError("multicopy: M values must be >= 1");
  }
  const Scenario& s = cfg.scenario;
  const double base = base_argument(cfg);
  const Evaluation e = evaluate(s, base);
  ConditionalErrors c = e.outcome.conditionals();
  if (e.outcome.regime == Regime::Measure) c = with_detection_efficiency(c, s.eta);
  return Table{"multicopy", spec.variable, map_rows(values, [&](double m) {
    OutputRow row = make_row(m, e);
    row.p_error = multicopy_error(s.priors, c, static_cast<int>(m));
    return row;
  }, threads)};
}

Table run_efficiency(const Config& cfg, unsigned threads) {
  const SweepSpec& spec = require_sweep(cfg, "efficiency");
  if (spec.variable != SweepVariable::Eta) bad_variable("efficiency", spec.variable);
  const auto values = sweep_values(spec);
  for (double eta : values) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("efficiency: eta values must lie in [0, 1]");
  }
  // The optimal interrogation and measurement do not depend on eta.
  Config ideal = cfg;
  ideal.scenario.eta = 1.0;
  const double base = base_argument(ideal);
  return Table{"efficiency", spec.variable, map_rows(values, [&](double eta) {
    Scenario local = ideal.scenario;
    local.eta = eta;
    return make_row(eta, evaluate(local, base));
  }, threads)};
}

Table run_optimize(const Config& cfg) {
  const Optimum o = optimum_of(cfg.scenario, cfg.search);
  const SweepVariable v = cfg.scenario.uses_pulse_count() ? SweepVariable::N : SweepVariable::T;
  return Table{"optimize", v, {make_row(o.argument, o)}};
}

SimulationReport run_simulation(const Config& cfg, unsigned threads) {
  const double base = base_argument(cfg);
  const int copies = cfg.simulation.copies;
  const double closed = closed_form_error(cfg.scenario, base, copies);
  const SimulationOptions opts{cfg.simulation.shots, cfg.seed, threads};
  const EmpiricalResult r = simulate_multicopy(cfg.scenario, base, copies, opts);
  const double se = std::sqrt(closed * (1.0 - closed) / static_cast<double>(r.n_shots));
  const double diff = r.error_rate - closed;
  const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : INFINITY);
  return SimulationReport{base, copies, closed, r, z};
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Check {
  std::string name;
  bool passed;
  std::string detail;
};

double enumerate_majority(const Priors& priors, const ConditionalErrors& c, int m) {
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    const int wrong = std::popcount(mask);
    double p_wrong_given_1 = 1.0;
    double p_wrong_given_0 = 1.0;
    for (int k = 0; k < m; ++k) {
      const bool w = (mask >> k) & 1u;
      p_wrong_given_1 *= w ? c.c_0_given_1 : 1.0 - c.c_0_given_1;
      p_wrong_given_0 *= w ? c.c_1_given_0 : 1.0 - c.c_1_given_0;
    }
    if (2 * wrong > m) total += priors.p1() * p_wrong_given_1 + priors.p0() * p_wrong_given_0;
    else if (2 * wrong == m) total += 0.5 * (priors.p1() * p_wrong_given_1 + priors.p0() * p_wrong_given_0);
  }
  return total;
}

}  // namespace

bool run_selftest(std::ostream& out, std::uint64_t seed, unsigned threads) {
  std::vector<Check> checks;

  {
    double worst = 0.0;
    for (int n : {2, 4, 8, 16, 32}) {
      for (double tau : {0.1, 0.25, 0.5, 1.0, 2.0}) {
        for (double r : {0.01, 0.04, 0.2}) {
          const double a = w_cpmg_analytic(n, tau, r);
          const double b = w_numeric(cpmg_sequence(n, tau), r);
          worst = std::max(worst, std::abs(a - b) / b);
        }
      }
    }
    checks.push_back({"cpmg closed form vs filter integral", worst < 1e-8, "max rel err " + fmt(worst)});
  }
  {
    Engine eng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Priors pr = Priors::from_present(u(eng));
      const CoherencePair coh(u(eng), std::polar(u(eng), 2.0 * std::numbers::pi * u(eng)));
      const GeneralHelstrom g = helstrom_general(rho_absent(coh), rho_present(coh), pr);
      worst = std::max(worst, std::abs(g.p_error - helstrom_error(pr, coh)));
    }
    checks.push_back({"helstrom closed form vs eigendecomposition", worst < 1e-12, "max abs err " + fmt(worst)});
  }
  {
    Engine eng(seed + 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Priors pr = Priors::from_present(u(eng));
      const ConditionalErrors c{u(eng), u(eng)};
      for (int m = 1; m <= 9; ++m) worst = std::max(worst, std::abs(multicopy_error(pr, c, m) - enumerate_majority(pr, c, m)));
    }
    checks.push_back({"majority vote vs enumeration", worst < 1e-14, "max abs err " + fmt(worst)});
  }
  {
    Scenario s;
    s.field = AcCosine{1.0, 0.0, 1.0};
    s.protocol = Cpmg{0.5};
    const Optimum o = optimize_pulses(s, 2, 400);
    checks.push_back({"cpmg anchor (min error ~0.124)", std::abs(o.p_error - 0.124) <= 0.01,
                      "P_e=" + fmt(o.p_error) + " at N=" + std::to_string(static_cast<int>(o.argument))});
  }
  {
    Scenario s;
    s.field = DcKnown{50.0};
    const Optimum o = optimize_time(s, 0.0, 3.0);
    checks.push_back({"dc anchor (min error ~0.2)", std::abs(o.p_error - 0.2) <= 0.02,
                      "P_e=" + fmt(o.p_error) + " at T=" + fmt(o.argument)});
  }
  for (const ValidationOutcome& v : run_validation_battery(validation_battery(), 100000, seed, threads)) {
    checks.push_back({"monte carlo " + v.validation_case.name, v.passed,
                      "empirical=" + fmt(v.empirical.error_rate) + " closed=" +
                          fmt(v.validation_case.closed_form) + " z=" + fmt(v.z_score)});
  }

  bool all = true;
  for (const Check& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
    all = all && c.passed;
  }
  return all;
}

}  // namespace nvdetect::cli
