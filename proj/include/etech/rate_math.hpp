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

// Closed-form mathematics of the AWGN energy-harvesting link: the rate
// function r(p) = log2(1 + p), the lower real branch of Lambert W, the
// rate-power equilibrium (RPE) and the one-event reachable set.
//
// Slopes K = (data sent) / (energy spent) classify every planning problem:
// an RPE with power in (0, p_max] exists iff K_min <= K < K_max, where
// K_min = r(p_max) / p_max and K_max = 1 / ln 2.

#pragma once

#include <numbers>
#include <optional>

namespace etech {

inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kSlopeMax = 1.0 / std::numbers::ln2;

/// Maximum transmit power. Construction validates p_max > 0.
class PowerBudget {
 public:
  explicit PowerBudget(double p_max);

  double p_max() const { return p_max_; }
  /// r(p_max) / p_max: the smallest slope with an RPE.
  double k_min() const { return k_min_; }
  /// 1 / ln 2: the supremum of slopes with an RPE (not attained).
  double k_max() const { return kSlopeMax; }

 private:
  double p_max_;
  double k_min_;
};

/// Slope of a rate-power line r = k p. Construction validates k > 0.
class SlopeK {
 public:
  explicit SlopeK(double k);
  double value() const { return k_; }

 private:
  double k_;
};

struct SlopeBand {
  double k_min;
  double k_max;
};

/// log2(1 + p); throws DomainError for p < 0.
double rate(double power);

/// W_{-1}(x) for x in [-1/e, 0): the solution w <= -1 of w e^w = x.
double lambert_w_m1(double x);

/// W_{-1} evaluated from log(-x), for x = -exp(log_neg_x). Accepts
/// log_neg_x <= -1 and avoids the rounding of forming x explicitly.
double lambert_w_m1_from_log(double log_neg_x);

SlopeBand k_constants(const PowerBudget& budget);

/// Power of the RPE for slope k, or nullopt when k is outside
/// [K_min, K_max). Throws DomainError for k <= 0.
std::optional<double> rpe_power(double k, const PowerBudget& budget);
std::optional<double> rpe_power(SlopeK k, const PowerBudget& budget);

/// Membership of (e_end, q_end) in the reachable set from (e_start, q_start).
bool reachable(double e_start, double q_start, double e_end, double q_end,
               const PowerBudget& budget);

/// Minimum planned time to move from start to a reachable end point,
/// attained by transmitting at the RPE power. Zero for end == start.
/// Throws DomainError for unreachable end points.
double optimal_duration(double e_start, double q_start, double e_end,
                        double q_end, const PowerBudget& budget);

/// RPE power at the energy-balanced slope q / e: transmitting at it for
/// e / p time units empties battery and queue together. Throws DomainError
/// when q / e is outside [K_min, K_max).
double balanced_power(double e, double q, const PowerBudget& budget);

}  // namespace etech
