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

// Parameter sweeps over a one-parameter family of harvesting profiles.
//
// Worst cases and finite-time regions are certified only on the swept
// family, never over all harvesting rates.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "etech/harvest.hpp"
#include "etech/policies.hpp"

namespace etech {

enum class Scenario { kS1, kS2, kS3, kCustom };

/// `s1`, `s2`, `s3` or `custom`; throws ConfigError otherwise.
Scenario parse_scenario(std::string_view name);
std::string scenario_name(Scenario s);

/// Simulation fields shared by every cell of a sweep.
struct SweepBase {
  double e0 = 1.0;
  double q0 = 1.0;
  double p_max = 3.0;
  double dt = 1e-4;
  double t_cutoff = 50.0;
};

struct SweepSpec {
  Scenario scenario = Scenario::kS1;
  /// Ascending sweep values: h for S1, amplitude a for S2/S3.
  std::vector<double> param_grid;
  std::vector<PolicyKind> policies;
  std::vector<double> epsilons;
  SweepBase base;
  /// Sample paths per grid point; only stochastic profiles use more than one.
  std::size_t replications = 1;
  std::uint64_t master_seed = 1;
  /// Custom scenarios only. The swept parameter sets `amplitude` for the
  /// sinusoidal kinds and multiplies every rate for piecewise_constant.
  std::optional<HarvestProfile> custom_profile;
};

/// Default spec of a preset scenario (S1 h in 0:0.05:2, S2 a in 0:0.1:5,
/// S3 a in 0:0.25:5 with 200 replications).
SweepSpec scenario_preset(Scenario s);

/// Throws ConfigError describing the first violated constraint.
void validate(const SweepSpec& spec);

/// `lo:step:hi` inclusive, values rounded to 12 significant digits so grid
/// points print and compare as their decimal spelling.
std::vector<double> parse_grid(std::string_view text);
std::vector<double> make_grid(double lo, double step, double hi);

/// Profile of one sweep cell. Stochastic profiles draw their seed from
/// (master_seed, param_index, replication) only, so all policies and
/// thresholds see the same sample paths.
HarvestProfile cell_profile(const SweepSpec& spec, std::size_t param_index, std::size_t replication);

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t param_index, std::size_t replication);

/// nullopt encodes CUTOFF (queue not cleared within t_cutoff).
using TimeOrCutoff = std::optional<double>;

struct SweepRow {
  double epsilon = 0.0;
  PolicyKind policy = PolicyKind::robust();
  double param = 0.0;
  TimeOrCutoff transmission_time;
  std::size_t events = 0;
};

struct SweepResult {
  /// Sorted by (epsilon, policy name, param).
  std::vector<SweepRow> rows;

  /// Max over the grid, CUTOFF dominating any finite value. Throws
  /// LookupError when no row matches.
  TimeOrCutoff worst_case(double epsilon, const PolicyKind& policy) const;
  /// Grid values whose transmission time is finite.
  std::vector<double> finite_region(double epsilon, const PolicyKind& policy) const;
  /// Row at one grid value; throws LookupError when absent.
  const SweepRow& at(double epsilon, const PolicyKind& policy, double param) const;
};

/// Worker count from ETECH_WORKERS, defaulting to the hardware concurrency.
/// Throws ConfigError for a non-positive or malformed value.
std::size_t worker_count_from_env();

/// Runs every (epsilon x policy x param x replication) cell on `workers`
/// threads (0 = worker_count_from_env()). Replications aggregate by their
/// maximum; the row keeps the event count of the worst replication.
SweepResult run_sweep(const SweepSpec& spec, std::size_t workers = 0);

/// Header `epsilon,policy,param,transmission_time,events`; CUTOFF as `INF`.
void emit_csv(const SweepResult& result, std::ostream& out);
/// Throws IoError naming `path` on failure.
void emit_csv(const SweepResult& result, const std::string& path);

}  // namespace etech
