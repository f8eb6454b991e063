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

// Transmission planners. At every triggered event a planner sees only the
// battery and queue at that instant (plus, for the estimation baselines,
// bookkeeping of the previous event) and returns a constant-power plan.

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "etech/rate_math.hpp"

namespace etech {

/// Constant transmit power held for `duration` time units after an event.
/// duration == 0 implies power == 0.
struct PlannedTransmission {
  double power = 0.0;
  double duration = 0.0;

  friend bool operator==(const PlannedTransmission&, const PlannedTransmission&) = default;
};

/// Observations from the previous event, all available to the transmitter
/// without knowledge of the harvesting rate.
struct PreviousEvent {
  double t = 0.0;  ///< t_{n-1}
  double e = 0.0;  ///< E(t_{n-1})
  /// Energy spent transmitting over (t_{n-1}, t_n].
  double energy_spent = 0.0;
};

struct PolicyContext {
  double t_n = 0.0;
  double e_n = 0.0;
  double q_n = 0.0;
  std::optional<PreviousEvent> prev;
  PowerBudget budget{1.0};
  double epsilon = 0.0;

  /// q_n / e_n, or +inf when the battery is empty.
  double balanced_slope() const;
};

class PolicyKind {
 public:
  enum class Family { kRobustOptimal, kEstimationBased, kGreedy };

  static PolicyKind robust() { return PolicyKind(Family::kRobustOptimal, 1.0); }
  /// Throws DomainError for scale <= 0.
  static PolicyKind estimation(double scale);
  static PolicyKind greedy() { return PolicyKind(Family::kGreedy, 1.0); }

  /// One of `robust`, `estimation`, `estimation-modified`, `greedy`.
  /// Throws ConfigError for anything else.
  static PolicyKind parse(std::string_view name);

  Family family() const { return family_; }
  double scale() const { return scale_; }
  /// Configuration name; estimation scales other than 1 and 0.25 print as
  /// `estimation(<scale>)`.
  std::string name() const;

  friend bool operator==(const PolicyKind&, const PolicyKind&) = default;

 private:
  PolicyKind(Family family, double scale) : family_(family), scale_(scale) {}

  Family family_;
  double scale_;
};

inline constexpr double kModifiedEstimationScale = 0.25;

PlannedTransmission plan_robust(const PolicyContext& ctx);

/// Robust structure with the balanced power raised by scale * dp, where dp
/// is the average harvesting rate over the previous inter-event interval
/// (zero at the first event) and the result is capped at p_max.
PlannedTransmission plan_estimation(const PolicyContext& ctx, double scale);

/// Average harvesting rate over (t_{n-1}, t_n] recovered from battery
/// readings and spent energy; zero without a previous event.
double estimated_harvest_rate(const PolicyContext& ctx);

PlannedTransmission plan_greedy(const PolicyContext& ctx);

PlannedTransmission plan(const PolicyKind& kind, const PolicyContext& ctx);

}  // namespace etech
