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

// Energy-harvesting rate profiles H: [0, inf) -> [0, inf).
//
// Every profile is integrated in closed form through its cumulative
// energy C(t) = \int_0^t H, so integrate(a, b) = C(b) - C(a) is additive
// over adjacent intervals by construction.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace etech {

struct RateBreakpoint {
  double t_start = 0.0;
  double rate = 0.0;
};

class HarvestProfile {
 public:
  struct Zero {};

  /// Rate `rate` from each t_start until the next breakpoint; zero before
  /// the first one.
  struct PiecewiseConstant {
    std::vector<RateBreakpoint> breakpoints;
  };

  /// amplitude * |sin t| on [0, window_end], zero afterwards.
  struct WindowedAbsSin {
    double amplitude = 0.0;
    double window_end = 0.0;
  };

  /// Arrivals of a Poisson process with rate `poisson_rate`; at arrival tau
  /// a mark D ~ Normal(amplitude |sin tau|, mark_variance) is drawn and the
  /// rate max(D, 0) is held until the next arrival. Zero before the first
  /// arrival. The sample path is a pure function of `seed`.
  struct CompoundPoissonSin {
    double amplitude = 0.0;
    double poisson_rate = 1.0;
    double mark_variance = 1.0;
    std::uint64_t seed = 0;
  };

  using Spec = std::variant<Zero, PiecewiseConstant, WindowedAbsSin, CompoundPoissonSin>;

  /// Validates `spec`; throws DomainError on negative rates, non-increasing
  /// breakpoints, negative amplitude or non-positive Poisson rate.
  explicit HarvestProfile(Spec spec);

  static HarvestProfile zero() { return HarvestProfile(Zero{}); }
  static HarvestProfile piecewise_constant(std::vector<RateBreakpoint> breakpoints) {
    return HarvestProfile(PiecewiseConstant{std::move(breakpoints)});
  }
  static HarvestProfile windowed_abs_sin(double amplitude, double window_end) {
    return HarvestProfile(WindowedAbsSin{amplitude, window_end});
  }
  static HarvestProfile compound_poisson_sin(double amplitude, double poisson_rate,
                                             double mark_variance, std::uint64_t seed) {
    return HarvestProfile(CompoundPoissonSin{amplitude, poisson_rate, mark_variance, seed});
  }

  HarvestProfile(const HarvestProfile& other);
  HarvestProfile& operator=(const HarvestProfile& other);
  HarvestProfile(HarvestProfile&&) noexcept;
  HarvestProfile& operator=(HarvestProfile&&) noexcept;
  ~HarvestProfile();

  const Spec& spec() const { return spec_; }
  /// `zero`, `piecewise_constant`, `windowed_abs_sin` or `compound_poisson_sin`.
  std::string kind() const;

  /// H(t) for t >= 0.
  double rate_at(double t) const;
  /// \int_0^t H for t >= 0.
  double cumulative(double t) const;
  /// \int_{t_a}^{t_b} H; throws DomainError unless 0 <= t_a <= t_b.
  double integrate(double t_a, double t_b) const;

  /// A time after which H is identically zero, when one is known.
  std::optional<double> harvest_free_after() const;

  /// Supremum of H over [t_a, t_b]; used for step-granularity error bounds.
  double max_rate(double t_a, double t_b) const;

 private:
  struct PoissonPath;

  Spec spec_;
  // Lazily extended sample path of the stochastic variant. Mutated from
  // const accessors: one profile instance must not be shared across threads.
  std::unique_ptr<PoissonPath> path_;
};

}  // namespace etech
