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

#include "etech/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "etech/errors.hpp"

namespace etech {

namespace {

enum class Regime { kEnergyAbundant, kEnergyBalanced, kEnergyScarce };

Regime classify(const PolicyContext& ctx) {
  const double k = ctx.balanced_slope();
  if (k < ctx.budget.k_min()) return Regime::kEnergyAbundant;
  if (k < ctx.budget.k_max()) return Regime::kEnergyBalanced;
  return Regime::kEnergyScarce;
}

PlannedTransmission full_power(const PolicyContext& ctx) {
  const double p = ctx.budget.p_max();
  return {p, ctx.q_n / rate(p)};
}

}  // namespace

double PolicyContext::balanced_slope() const {
  if (e_n <= 0.0) return std::numeric_limits<double>::infinity();
  return q_n / e_n;
}

PolicyKind PolicyKind::estimation(double scale) {
  if (!(scale > 0.0)) throw DomainError("estimation policy scale must be positive");
  return PolicyKind(Family::kEstimationBased, scale);
}

PolicyKind PolicyKind::parse(std::string_view name) {
  if (name == "robust") return robust();
  if (name == "estimation") return estimation(1.0);
  if (name == "estimation-modified") return estimation(kModifiedEstimationScale);
  if (name == "greedy") return greedy();
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

std::string PolicyKind::name() const {
  switch (family_) {
    case Family::kRobustOptimal:
      return "robust";
    case Family::kGreedy:
      return "greedy";
    case Family::kEstimationBased:
      break;
  }
  if (scale_ == 1.0) return "estimation";
  if (scale_ == kModifiedEstimationScale) return "estimation-modified";
  std::ostringstream os;
  os << "estimation(" << scale_ << ")";
  return os.str();
}

PlannedTransmission plan_robust(const PolicyContext& ctx) {
  if (ctx.q_n <= 0.0) return {};
  switch (classify(ctx)) {
    case Regime::kEnergyAbundant:
      return full_power(ctx);
    case Regime::kEnergyBalanced: {
      const double p = balanced_power(ctx.e_n, ctx.q_n, ctx.budget);
      return {p, ctx.e_n / p};
    }
    case Regime::kEnergyScarce:
      break;
  }
  return {};
}

double estimated_harvest_rate(const PolicyContext& ctx) {
  if (!ctx.prev) return 0.0;
  const double interval = ctx.t_n - ctx.prev->t;
  if (!(interval > 0.0)) {
    throw DomainError("estimation policy: previous event must precede the current one");
  }
  // Harvested energy = E(t_n) - E(t_{n-1}) + energy spent in between.
  const double harvested = ctx.e_n - ctx.prev->e + ctx.prev->energy_spent;
  return std::max(harvested, 0.0) / interval;
}

PlannedTransmission plan_estimation(const PolicyContext& ctx, double scale) {
  const double extra = scale * estimated_harvest_rate(ctx);
  if (ctx.q_n <= 0.0) return {};
  switch (classify(ctx)) {
    case Regime::kEnergyAbundant:
      return full_power(ctx);
    case Regime::kEnergyBalanced: {
      const double p_bal = balanced_power(ctx.e_n, ctx.q_n, ctx.budget);
      const double p = std::min(p_bal + extra, ctx.budget.p_max());
      return {p, ctx.e_n / p};
    }
    case Regime::kEnergyScarce:
      break;
  }
  return {};
}

PlannedTransmission plan_greedy(const PolicyContext& ctx) {
  if (!(ctx.e_n > 0.0) || !(ctx.q_n > 0.0)) return {};
  const double p = ctx.budget.p_max();
  return {p, std::min(ctx.e_n / p, ctx.q_n / rate(p))};
}

PlannedTransmission plan(const PolicyKind& kind, const PolicyContext& ctx) {
  switch (kind.family()) {
    case PolicyKind::Family::kRobustOptimal:
      return plan_robust(ctx);
    case PolicyKind::Family::kEstimationBased:
      return plan_estimation(ctx, kind.scale());
    case PolicyKind::Family::kGreedy:
      return plan_greedy(ctx);
  }
  return {};
}

}  // namespace etech
