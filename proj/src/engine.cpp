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

#include "etech/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "etech/errors.hpp"

namespace etech {

namespace {

// Residual queue (relative to q0) treated as cleared. Plans that empty the
// queue exactly leave O(ulp) residue after thousands of steps.
constexpr double kQueueClearedTolerance = 1e-12;

// Neumaier-compensated running sum; keeps the queue exact to O(ulp) over
// the hundreds of thousands of steps of a long plan.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }
  void reset(double x) {
    sum_ = x;
    comp_ = 0.0;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void validate(const SimConfig& c) {
  require(c.e0 >= 0.0 && std::isfinite(c.e0), "e0 must be nonnegative and finite");
  require(c.q0 > 0.0 && std::isfinite(c.q0), "q0 must be positive and finite");
  require(c.epsilon > 0.0 && std::isfinite(c.epsilon), "epsilon must be positive");
  require(c.dt > 0.0 && std::isfinite(c.dt), "dt must be positive");
  require(c.t_cutoff > 0.0 && std::isfinite(c.t_cutoff), "t_cutoff must be positive");
  require(c.dt <= c.t_cutoff, "dt must not exceed t_cutoff");
  require(c.trajectory_stride >= 1, "trajectory_stride must be at least 1");
}

bool trigger_check(double harvested_since_event, double epsilon) {
  return harvested_since_event >= epsilon;
}

SimOutcome simulate(SimConfig config) {
  validate(config);
  const HarvestProfile& profile = config.profile;
  const double dt = config.dt;
  const double q_tol = kQueueClearedTolerance * config.q0;
  const auto steps = static_cast<long long>(std::ceil(config.t_cutoff / dt - 1e-9));
  const std::optional<double> harvest_free = profile.harvest_free_after();

  SimOutcome out;
  double e = config.e0;
  CompensatedSum battery;
  battery.add(config.e0);
  double q = config.q0;
  CompensatedSum sent_total;
  double spent_total = 0.0;

  // Current event bookkeeping.
  double t_n = 0.0;
  double e_n = e;
  long long k_n = 0;
  double spent_since = 0.0;
  bool depleted = false;
  std::optional<PreviousEvent> prev;

  auto make_plan = [&](double t) {
    PolicyContext ctx{t, e, q, prev, config.budget, config.epsilon};
    return plan(config.policy, ctx);
  };

  PlannedTransmission current = make_plan(0.0);
  out.events.push_back({0, 0.0, e, q, current});
  if (config.record_trajectory) out.trajectory.push_back({0.0, e, q, current.power, 0, 0.0});

  double c_prev = profile.cumulative(0.0);
  for (long long k = 0; k < steps; ++k) {
    const double t_a = static_cast<double>(k) * dt;
    const double t_b = static_cast<double>(k + 1) * dt;
    const double c_start = c_prev;
    const double c_next = profile.cumulative(t_b);
    const double harvested = std::max(c_next - c_start, 0.0);
    c_prev = c_next;

    const double elapsed = static_cast<double>(k - k_n) * dt;
    const double active = depleted ? 0.0 : std::clamp(current.duration - elapsed, 0.0, dt);
    double use = current.power * active;
    const double available = e + harvested;
    bool floored = false;
    if (use > available) {
      use = available;
      depleted = true;
      floored = true;
    }
    const double applied = active > 0.0 ? use / active : 0.0;
    const double sent = rate(applied) * active;

    if (sent > 0.0 && sent >= q - q_tol) {
      const double frac = std::min(1.0, q / sent);
      const double t_done = t_a + active * frac;
      out.transmission_time = t_done;
      if (config.record_trajectory) {
        const double partial = std::max(profile.cumulative(t_done) - c_start, 0.0);
        out.trajectory.push_back({t_done, std::max(e + partial - use * frac, 0.0), 0.0, applied,
                                  out.events.size() - 1, spent_total + use * frac});
      }
      return out;
    }

    sent_total.add(sent);
    q = config.q0 - sent_total.value();
    if (floored) {
      battery.reset(0.0);
    } else {
      battery.add(harvested);
      battery.add(-use);
    }
    e = std::max(battery.value(), 0.0);
    spent_since += use;
    spent_total += use;

    const std::size_t governing = out.events.size() - 1;
    bool triggered = false;
    if (trigger_check(e - e_n + spent_since, config.epsilon)) {
      prev = PreviousEvent{t_n, e_n, spent_since};
      t_n = t_b;
      e_n = e;
      k_n = k + 1;
      spent_since = 0.0;
      depleted = false;
      current = make_plan(t_b);
      out.events.push_back({out.events.size(), t_b, e, q, current});
      triggered = true;
    }

    if (config.record_trajectory &&
        (triggered || (k + 1) % static_cast<long long>(config.trajectory_stride) == 0)) {
      out.trajectory.push_back({t_b, e, q, applied, governing, spent_total});
    }

    // Nothing can change once harvesting has stopped and the plan is spent.
    if (harvest_free && t_b >= *harvest_free && !triggered) {
      const bool idle = depleted || current.power <= 0.0 ||
                        static_cast<double>(k + 1 - k_n) * dt >= current.duration;
      if (idle) break;
    }
  }
  if (config.record_trajectory &&
      (out.trajectory.empty() || out.trajectory.back().q != q || out.trajectory.back().e != e)) {
    out.trajectory.push_back({static_cast<double>(steps) * dt, e, q, 0.0,
                              out.events.size() - 1, spent_total});
  }
  return out;
}

std::optional<double> first_trigger_time(const HarvestProfile& profile, double t_start,
                                         double epsilon, double dt, double horizon) {
  if (!(epsilon > 0.0)) throw DomainError("first_trigger_time: epsilon must be positive");
  if (!(dt > 0.0)) throw DomainError("first_trigger_time: dt must be positive");
  const double base = profile.cumulative(t_start);
  const std::optional<double> harvest_free = profile.harvest_free_after();
  const auto steps = static_cast<long long>(std::ceil(horizon / dt - 1e-9));
  for (long long k = 1; k <= steps; ++k) {
    const double t = t_start + static_cast<double>(k) * dt;
    if (trigger_check(profile.cumulative(t) - base, epsilon)) return t;
    if (harvest_free && t >= *harvest_free) break;
  }
  return std::nullopt;
}

void write_trajectory_csv(const std::vector<TrajectorySample>& rows, std::ostream& out) {
  out << "t,e,q,p,event\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.9f,%.9f,%.9f,%.9f,%zu\n", r.t, r.e, r.q, r.p, r.event);
    out << line;
  }
  if (!out) throw IoError("failed writing trajectory rows");
}

void write_trajectory_csv(const std::vector<TrajectorySample>& rows, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open trajectory file '" + path + "'");
  try {
    write_trajectory_csv(rows, file);
  } catch (const IoError&) {
    throw IoError("failed writing trajectory file '" + path + "'");
  }
  file.close();
  if (!file) throw IoError("failed closing trajectory file '" + path + "'");
}

}  // namespace etech
