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

#include "etech/rate_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "etech/errors.hpp"

namespace etech {

namespace {

constexpr double kMinusInvE = -1.0 / std::numbers::e;
constexpr double kBranchSnap = 1e-14;

// Writes W_{-1} as w = -1 - s and solves s - log1p(s) = gap for s >= 0,
// where gap = -1 - log(-x) is the distance from the branch point in log
// space. The offset form is well conditioned near the branch point, where
// w itself carries no information beyond -1.
//
// Safeguarded Halley iteration on [sqrt(2 gap), 2 gap + 2]; the lower end
// follows from log1p(s) >= s - s^2 / 2.
double branch_offset(double gap) {
  if (gap <= 0.0) return 0.0;

  double lo = std::sqrt(2.0 * gap);
  double hi = 2.0 * gap + 2.0;
  double s = gap < 1.0 ? lo + 2.0 * gap / 3.0 : gap + std::log1p(gap);
  if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double f = s - std::log1p(s) - gap;
    if (f == 0.0) return s;
    if (f > 0.0) {
      hi = s;
    } else {
      lo = s;
    }

    const double d1 = s / (1.0 + s);
    const double d2 = 1.0 / ((1.0 + s) * (1.0 + s));
    double next = s - 2.0 * f * d1 / (2.0 * d1 * d1 - f * d2);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);

    if (std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * s) {
      return next;
    }
    s = next;
  }
  return s;
}

// a b - c d with one rounding (Kahan); exact zero when a b == c d, so its
// sign decides slope comparisons without forming either quotient.
double diff_of_products(double a, double b, double c, double d) {
  const double w = c * d;
  const double err = std::fma(-c, d, w);
  return std::fma(a, b, -w) + err;
}

void require_power(double power) {
  if (!(power >= 0.0)) {
    throw DomainError("rate: power must be nonnegative, got " + std::to_string(power));
  }
}

}  // namespace

PowerBudget::PowerBudget(double p_max) : p_max_(p_max), k_min_(0.0) {
  if (!(p_max > 0.0) || !std::isfinite(p_max)) {
    throw DomainError("PowerBudget: p_max must be positive and finite");
  }
  k_min_ = rate(p_max) / p_max;
}

SlopeK::SlopeK(double k) : k_(k) {
  if (!(k > 0.0)) throw DomainError("SlopeK: slope must be positive");
}

double rate(double power) {
  require_power(power);
  return std::log1p(power) / kLn2;
}

double lambert_w_m1(double x) {
  if (!(x >= kMinusInvE - kBranchSnap) || !(x < 0.0)) {
    throw DomainError("lambert_w_m1: argument outside [-1/e, 0)");
  }
  if (x - kMinusInvE < kBranchSnap) return -1.0;
  // gap = -1 - log(-x) = -log(-e x). Near the branch point -e x - 1 is
  // formed with one fma; further out log(-x) is the accurate route.
  const double ex = -std::numbers::e * x;
  const double gap = ex > 0.5 ? -std::log1p(std::fma(-std::numbers::e, x, -1.0)) : -1.0 - std::log(-x);
  return -1.0 - branch_offset(gap);
}

double lambert_w_m1_from_log(double log_neg_x) {
  if (!(log_neg_x <= -1.0)) {
    throw DomainError("lambert_w_m1_from_log: log(-x) must be <= -1");
  }
  return -1.0 - branch_offset(-1.0 - log_neg_x);
}

SlopeBand k_constants(const PowerBudget& budget) {
  return {budget.k_min(), budget.k_max()};
}

std::optional<double> rpe_power(double k, const PowerBudget& budget) {
  if (!(k > 0.0)) throw DomainError("rpe_power: slope must be positive");
  if (k < budget.k_min() || !(k < budget.k_max())) return std::nullopt;
  if (k == budget.k_min()) return budget.p_max();

  // With y = k ln 2 the RPE solves y (1 + p) = -W_{-1}(-y e^{-y}). Writing
  // W_{-1} = -1 - s gives p = (s + 1 - y) / y without cancellation, and the
  // branch gap is (y - 1) - log(y).
  const double y = k * kLn2;
  const double u = 1.0 - y;
  const double gap = -u - std::log1p(-u);
  const double s = branch_offset(gap);
  const double p = (s + u) / y;
  return p < budget.p_max() ? p : budget.p_max();
}

std::optional<double> rpe_power(SlopeK k, const PowerBudget& budget) {
  return rpe_power(k.value(), budget);
}

bool reachable(double e_start, double q_start, double e_end, double q_end,
               const PowerBudget& budget) {
  if (!(e_start >= 0.0) || !(q_start >= 0.0) || !(e_end >= 0.0) || !(q_end >= 0.0)) {
    throw DomainError("reachable: energies and queue lengths must be nonnegative");
  }
  if (e_end == e_start && q_end == q_start) return true;
  if (!(e_end < e_start) || !(q_end < q_start)) return false;
  const double de = e_start - e_end;
  const double dq = q_start - q_end;
  // K_min <= dq / de  <=>  r(p_max) de <= p_max dq;  dq / de < 1 / ln 2.
  const bool above_min = diff_of_products(budget.p_max(), dq, rate(budget.p_max()), de) >= 0.0;
  const bool below_max = diff_of_products(dq, kLn2, de, 1.0) < 0.0;
  return above_min && below_max;
}

double optimal_duration(double e_start, double q_start, double e_end,
                        double q_end, const PowerBudget& budget) {
  if (!reachable(e_start, q_start, e_end, q_end, budget)) {
    throw DomainError("optimal_duration: end point is not reachable");
  }
  if (e_end == e_start && q_end == q_start) return 0.0;
  // The quotient may round one ulp outside the band the exact test accepted.
  const double k = std::clamp((q_start - q_end) / (e_start - e_end), budget.k_min(),
                              std::nextafter(budget.k_max(), 0.0));
  return (e_start - e_end) / *rpe_power(k, budget);
}

double balanced_power(double e, double q, const PowerBudget& budget) {
  if (!(e > 0.0) || !(q > 0.0)) {
    throw DomainError("balanced_power: requires e > 0 and q > 0");
  }
  const auto p = rpe_power(q / e, budget);
  if (!p) throw DomainError("balanced_power: q / e outside [K_min, K_max)");
  return *p;
}

}  // namespace etech
