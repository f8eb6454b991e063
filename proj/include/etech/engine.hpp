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

// Event-triggered closed loop: fixed-step integration of battery and queue,
// an event detector on harvested energy, and re-planning at every trigger.
//
// Rules the loop follows on each step of length dt:
//   * harvest enters as the exact profile integral over the step;
//   * the current plan's power applies while time-in-plan < duration, and
//     only up to the point where the plan ends inside the step;
//   * if the battery would go negative the step consumes exactly what is
//     left and power stays at zero until the next event;
//   * an event fires at the step boundary where E(t) - E(t_n) + \int p
//     (the energy harvested since t_n) reaches epsilon;
//   * the queue-zero crossing is interpolated linearly within its step.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "etech/harvest.hpp"
#include "etech/policies.hpp"
#include "etech/rate_math.hpp"

namespace etech {

struct SystemState {
  double t = 0.0;
  double e = 0.0;
  double q = 0.0;
};

struct SimConfig {
  double e0 = 1.0;
  double q0 = 1.0;
  PowerBudget budget{3.0};
  double epsilon = 0.05;
  double dt = 1e-4;
  double t_cutoff = 50.0;
  PolicyKind policy = PolicyKind::robust();
  HarvestProfile profile = HarvestProfile::zero();
  bool record_trajectory = false;
  /// Record one trajectory row every `trajectory_stride` steps (event rows
  /// and the final row are always recorded).
  std::size_t trajectory_stride = 100;
};

/// Throws ConfigError describing the first violated field.
void validate(const SimConfig& config);

struct EventRecord {
  std::size_t index = 0;
  double t = 0.0;
  double e = 0.0;
  double q = 0.0;
  PlannedTransmission plan;
};

struct TrajectorySample {
  double t = 0.0;
  double e = 0.0;
  double q = 0.0;
  /// Power applied over the step ending at t (planned power for t = 0).
  double p = 0.0;
  /// Index of the event governing the step ending at t; an event triggered
  /// at t takes effect on the next step.
  std::size_t event = 0;
  /// \int_0^t p: energy spent transmitting so far.
  double spent = 0.0;
};

struct SimOutcome {
  /// Transmission time, or nullopt when the queue was still nonempty at
  /// the cutoff.
  std::optional<double> transmission_time;
  std::vector<EventRecord> events;
  std::vector<TrajectorySample> trajectory;

  bool finished() const { return transmission_time.has_value(); }
};

/// Runs the closed loop until the queue clears or t exceeds t_cutoff.
SimOutcome simulate(SimConfig config);

/// Event-detector comparison, inclusive at the threshold.
bool trigger_check(double harvested_since_event, double epsilon);

/// Smallest grid time t_start + k dt (k >= 1) at which the energy
/// harvested since t_start reaches epsilon, or nullopt within `horizon`.
std::optional<double> first_trigger_time(const HarvestProfile& profile, double t_start,
                                         double epsilon, double dt = 1e-4,
                                         double horizon = 50.0);

/// Writes `t,e,q,p,event` rows with fixed nine-digit precision. Throws
/// IoError on stream failure.
void write_trajectory_csv(const std::vector<TrajectorySample>& rows, std::ostream& out);
void write_trajectory_csv(const std::vector<TrajectorySample>& rows, const std::string& path);

}  // namespace etech
