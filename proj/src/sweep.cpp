// Copyright 2026 The etech Authors
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

#include "etech/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include "etech/engine.hpp"
#include "etech/errors.hpp"

namespace etech {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double round_decimal(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

bool dominates(const TimeOrCutoff& a, const TimeOrCutoff& b) {
  if (!a) return b.has_value();
  return b && *a > *b;
}

bool same_policy(const PolicyKind& a, const PolicyKind& b) { return a == b; }

struct Cell {
  std::size_t eps_index;
  std::size_t policy_index;
  std::size_t param_index;
  std::size_t replication;
};

}  // namespace

Scenario parse_scenario(std::string_view name) {
  if (name == "s1") return Scenario::kS1;
  if (name == "s2") return Scenario::kS2;
  if (name == "s3") return Scenario::kS3;
  if (name == "custom") return Scenario::kCustom;
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kS1:
      return "s1";
    case Scenario::kS2:
      return "s2";
    case Scenario::kS3:
      return "s3";
    case Scenario::kCustom:
      return "custom";
  }
  return "custom";
}

std::vector<double> make_grid(double lo, double step, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || !(hi >= lo)) {
    throw ConfigError("grid needs finite lo <= hi and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) grid.push_back(round_decimal(lo + static_cast<double>(i) * step));
  return grid;
}

std::vector<double> parse_grid(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw ConfigError("grid must be lo:step:hi, got '" + std::string(text) + "'");
  }
  return make_grid(parse_number(text.substr(0, c1), "grid lo"),
                   parse_number(text.substr(c1 + 1, c2 - c1 - 1), "grid step"),
                   parse_number(text.substr(c2 + 1), "grid hi"));
}

SweepSpec scenario_preset(Scenario s) {
  SweepSpec spec;
  spec.scenario = s;
  const auto all = std::vector<PolicyKind>{PolicyKind::robust(), PolicyKind::estimation(1.0),
                                           PolicyKind::estimation(kModifiedEstimationScale),
                                           PolicyKind::greedy()};
  switch (s) {
    case Scenario::kS1:
      spec.param_grid = make_grid(0.0, 0.05, 2.0);
      spec.policies = all;
      spec.epsilons = {0.05};
      spec.base = {1.0, 1.0, 3.0, 1e-4, 50.0};
      break;
    case Scenario::kS2:
      spec.param_grid = make_grid(0.0, 0.1, 5.0);
      spec.policies = all;
      spec.epsilons = {0.01, 0.2};
      spec.base = {0.2, 1.0, 3.0, 1e-4, 50.0};
      break;
    case Scenario::kS3:
      spec.param_grid = make_grid(0.0, 0.25, 5.0);
      spec.policies = {all[0], all[1], all[2]};
      spec.epsilons = {0.01, 0.05};
      spec.base = {1.0, 1.0, 3.0, 1e-4, 50.0};
      spec.replications = 200;
      spec.master_seed = 1;
      break;
    case Scenario::kCustom:
      spec.policies = all;
      break;
  }
  return spec;
}

void validate(const SweepSpec& spec) {
  if (spec.param_grid.empty()) throw ConfigError("param_grid must not be empty");
  if (!std::is_sorted(spec.param_grid.begin(), spec.param_grid.end()) ||
      std::adjacent_find(spec.param_grid.begin(), spec.param_grid.end()) != spec.param_grid.end()) {
    throw ConfigError("param_grid must be strictly ascending");
  }
  for (double p : spec.param_grid) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("param_grid values must be nonnegative");
  }
  if (spec.policies.empty()) throw ConfigError("policies must not be empty");
  if (spec.epsilons.empty()) throw ConfigError("epsilons must not be empty");
  for (double eps : spec.epsilons) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("epsilons must be positive");
  }
  if (spec.replications < 1) throw ConfigError("replications must be at least 1");
  if (spec.scenario == Scenario::kCustom && !spec.custom_profile) {
    throw ConfigError("custom scenario requires a profile");
  }
  SimConfig probe;
  probe.e0 = spec.base.e0;
  probe.q0 = spec.base.q0;
  probe.dt = spec.base.dt;
  probe.t_cutoff = spec.base.t_cutoff;
  probe.epsilon = spec.epsilons.front();
  validate(probe);
  if (!(spec.base.p_max > 0.0) || !std::isfinite(spec.base.p_max)) {
    throw ConfigError("p_max must be positive");
  }
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t param_index, std::size_t replication) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(param_index));
  return splitmix64(h ^ (static_cast<std::uint64_t>(replication) << 20));
}

HarvestProfile cell_profile(const SweepSpec& spec, std::size_t param_index, std::size_t replication) {
  const double x = spec.param_grid.at(param_index);
  switch (spec.scenario) {
    case Scenario::kS1:
      return HarvestProfile::piecewise_constant({{0.0, x}, {0.2, x / 10.0}});
    case Scenario::kS2:
      return HarvestProfile::windowed_abs_sin(x, 1.0);
    case Scenario::kS3:
      return HarvestProfile::compound_poisson_sin(x, 2.0, 1.0,
                                                  cell_seed(spec.master_seed, param_index, replication));
    case Scenario::kCustom:
      break;
  }
  using P = HarvestProfile;
  const P::Spec& tmpl = spec.custom_profile->spec();
  if (const auto* pc = std::get_if<P::PiecewiseConstant>(&tmpl)) {
    auto bps = pc->breakpoints;
    for (auto& bp : bps) bp.rate *= x;
    return P::piecewise_constant(std::move(bps));
  }
  if (const auto* ws = std::get_if<P::WindowedAbsSin>(&tmpl)) return P::windowed_abs_sin(x, ws->window_end);
  if (const auto* cp = std::get_if<P::CompoundPoissonSin>(&tmpl)) {
    return P::compound_poisson_sin(x, cp->poisson_rate, cp->mark_variance,
                                   cell_seed(spec.master_seed, param_index, replication));
  }
  return P::zero();
}

std::size_t worker_count_from_env() {
  const char* env = std::getenv("ETECH_WORKERS");
  if (env == nullptr || *env == '\0') {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  const std::string_view text(env);
  std::size_t n = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), n);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || n == 0) {
    throw ConfigError("ETECH_WORKERS must be a positive integer, got '" + std::string(text) + "'");
  }
  return n;
}

SweepResult run_sweep(const SweepSpec& spec, std::size_t workers) {
  validate(spec);
  if (workers == 0) workers = worker_count_from_env();

  const bool stochastic = spec.scenario == Scenario::kS3 ||
                          (spec.custom_profile && spec.custom_profile->kind() == "compound_poisson_sin");
  const std::size_t reps = stochastic ? spec.replications : 1;

  std::vector<Cell> cells;
  cells.reserve(spec.epsilons.size() * spec.policies.size() * spec.param_grid.size() * reps);
  for (std::size_t ie = 0; ie < spec.epsilons.size(); ++ie) {
    for (std::size_t ip = 0; ip < spec.policies.size(); ++ip) {
      for (std::size_t ix = 0; ix < spec.param_grid.size(); ++ix) {
        for (std::size_t r = 0; r < reps; ++r) cells.push_back({ie, ip, ix, r});
      }
    }
  }

  struct CellOutcome {
    TimeOrCutoff time;
    std::size_t events = 0;
  };
  std::vector<CellOutcome> outcomes(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size() || failed.load()) return;
      const Cell& c = cells[i];
      try {
        SimConfig cfg;
        cfg.e0 = spec.base.e0;
        cfg.q0 = spec.base.q0;
        cfg.budget = PowerBudget(spec.base.p_max);
        cfg.dt = spec.base.dt;
        cfg.t_cutoff = spec.base.t_cutoff;
        cfg.epsilon = spec.epsilons[c.eps_index];
        cfg.policy = spec.policies[c.policy_index];
        cfg.profile = cell_profile(spec, c.param_index, c.replication);
        const SimOutcome out = simulate(std::move(cfg));
        outcomes[i] = {out.transmission_time, out.events.size()};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const std::size_t n_threads = std::min(workers, std::max<std::size_t>(1, cells.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  // Cells of one (epsilon, policy, param) are contiguous, replications last.
  SweepResult result;
  for (std::size_t i = 0; i < cells.size(); i += reps) {
    const Cell& c = cells[i];
    SweepRow row{spec.epsilons[c.eps_index], spec.policies[c.policy_index],
                 spec.param_grid[c.param_index], outcomes[i].time, outcomes[i].events};
    for (std::size_t r = 1; r < reps; ++r) {
      if (dominates(outcomes[i + r].time, row.transmission_time)) {
        row.transmission_time = outcomes[i + r].time;
        row.events = outcomes[i + r].events;
      }
    }
    result.rows.push_back(std::move(row));
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    const auto an = a.policy.name();
    const auto bn = b.policy.name();
    return std::tie(a.epsilon, an, a.param) < std::tie(b.epsilon, bn, b.param);
  });
  return result;
}

TimeOrCutoff SweepResult::worst_case(double epsilon, const PolicyKind& policy) const {
  bool found = false;
  TimeOrCutoff worst = 0.0;
  for (const auto& r : rows) {
    if (r.epsilon != epsilon || !same_policy(r.policy, policy)) continue;
    if (!found || dominates(r.transmission_time, worst)) worst = r.transmission_time;
    found = true;
  }
  if (!found) throw LookupError("no sweep rows for policy " + policy.name());
  return worst;
}

std::vector<double> SweepResult::finite_region(double epsilon, const PolicyKind& policy) const {
  bool found = false;
  std::vector<double> region;
  for (const auto& r : rows) {
    if (r.epsilon != epsilon || !same_policy(r.policy, policy)) continue;
    found = true;
    if (r.transmission_time) region.push_back(r.param);
  }
  if (!found) throw LookupError("no sweep rows for policy " + policy.name());
  return region;
}

const SweepRow& SweepResult::at(double epsilon, const PolicyKind& policy, double param) const {
  for (const auto& r : rows) {
    if (r.epsilon == epsilon && same_policy(r.policy, policy) && r.param == param) return r;
  }
  throw LookupError("no sweep row for policy " + policy.name());
}

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << "epsilon,policy,param,transmission_time,events\n";
  char line[256];
  for (const auto& r : result.rows) {
    char time[64];
    if (r.transmission_time) {
      std::snprintf(time, sizeof time, "%.9f", *r.transmission_time);
    } else {
      std::snprintf(time, sizeof time, "INF");
    }
    std::snprintf(line, sizeof line, "%.10g,%s,%.10g,%s,%zu\n", r.epsilon, r.policy.name().c_str(),
                  r.param, time, r.events);
    out << line;
  }
  if (!out) throw IoError("failed writing sweep rows");
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open output file '" + path + "'");
  try {
    emit_csv(result, file);
  } catch (const IoError&) {
    throw IoError("failed writing output file '" + path + "'");
  }
  file.close();
  if (!file) throw IoError("failed closing output file '" + path + "'");
}

}  // namespace etech
