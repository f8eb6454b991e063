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

#include "etech/harvest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "etech/errors.hpp"

namespace etech {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// \int_0^t |sin| for t >= 0.
double abs_sin_integral(double t) {
  const double half_periods = std::floor(t / std::numbers::pi);
  const double rem = t - half_periods * std::numbers::pi;
  return 2.0 * half_periods + (1.0 - std::cos(rem));
}

void require_time(double t) {
  if (!(t >= 0.0)) throw DomainError("harvest profile evaluated before t0 = 0");
}

void validate(const HarvestProfile::Spec& spec) {
  std::visit(
      Overloaded{
          [](const HarvestProfile::Zero&) {},
          [](const HarvestProfile::PiecewiseConstant& pc) {
            double last = -1.0;
            for (const auto& bp : pc.breakpoints) {
              if (!(bp.t_start >= 0.0) || !(bp.t_start > last)) {
                throw DomainError("piecewise_constant: breakpoints must be nonnegative and strictly increasing");
              }
              if (!(bp.rate >= 0.0) || !std::isfinite(bp.rate)) {
                throw DomainError("piecewise_constant: rates must be nonnegative and finite");
              }
              last = bp.t_start;
            }
          },
          [](const HarvestProfile::WindowedAbsSin& ws) {
            if (!(ws.amplitude >= 0.0) || !std::isfinite(ws.amplitude)) {
              throw DomainError("windowed_abs_sin: amplitude must be nonnegative");
            }
            if (!(ws.window_end >= 0.0)) {
              throw DomainError("windowed_abs_sin: window_end must be nonnegative");
            }
          },
          [](const HarvestProfile::CompoundPoissonSin& cp) {
            if (!(cp.amplitude >= 0.0) || !std::isfinite(cp.amplitude)) {
              throw DomainError("compound_poisson_sin: amplitude must be nonnegative");
            }
            if (!(cp.poisson_rate > 0.0) || !std::isfinite(cp.poisson_rate)) {
              throw DomainError("compound_poisson_sin: poisson_rate must be positive");
            }
            if (!(cp.mark_variance >= 0.0) || !std::isfinite(cp.mark_variance)) {
              throw DomainError("compound_poisson_sin: mark_variance must be nonnegative");
            }
          },
      },
      spec);
}

// Index of the last breakpoint with start <= t, or -1.
template <class Starts>
std::ptrdiff_t segment_index(const Starts& starts, double t) {
  const auto it = std::upper_bound(starts.begin(), starts.end(), t);
  return static_cast<std::ptrdiff_t>(it - starts.begin()) - 1;
}

}  // namespace

// Piecewise-constant sample path: arrival times, held rates and cumulative
// energy at each arrival. Also reused, fully materialized, for the
// deterministic piecewise-constant variant.
struct HarvestProfile::PoissonPath {
  std::vector<double> starts;
  std::vector<double> rates;
  std::vector<double> cum;

  std::mt19937_64 rng;
  double next_arrival = 0.0;
  bool stochastic = false;
  HarvestProfile::CompoundPoissonSin params;

  void push(double t, double r) {
    double c = 0.0;
    if (!starts.empty()) c = cum.back() + rates.back() * (t - starts.back());
    starts.push_back(t);
    rates.push_back(r);
    cum.push_back(c);
  }

  double draw_gap() {
    std::exponential_distribution<double> gap(params.poisson_rate);
    return gap(rng);
  }

  // Extends the path until an arrival beyond t is known, so that the
  // segment containing t is final.
  void extend_past(double t) {
    if (!stochastic) return;
    while (next_arrival <= t) {
      const double mean = params.amplitude * std::abs(std::sin(next_arrival));
      std::normal_distribution<double> mark(mean, std::sqrt(params.mark_variance));
      const double d = params.mark_variance > 0.0 ? mark(rng) : mean;
      push(next_arrival, std::max(d, 0.0));
      next_arrival += draw_gap();
    }
  }

  double rate_at(double t) {
    extend_past(t);
    const auto i = segment_index(starts, t);
    return i < 0 ? 0.0 : rates[static_cast<std::size_t>(i)];
  }

  double cumulative(double t) {
    extend_past(t);
    const auto i = segment_index(starts, t);
    if (i < 0) return 0.0;
    const auto k = static_cast<std::size_t>(i);
    return cum[k] + rates[k] * (t - starts[k]);
  }

  double max_rate(double a, double b) {
    extend_past(b);
    auto i = segment_index(starts, a);
    double m = 0.0;
    if (i < 0) i = 0;
    for (auto k = static_cast<std::size_t>(i); k < starts.size() && starts[k] <= b; ++k) {
      m = std::max(m, rates[k]);
    }
    return m;
  }
};

HarvestProfile::HarvestProfile(Spec spec) : spec_(std::move(spec)) {
  validate(spec_);
  if (const auto* pc = std::get_if<PiecewiseConstant>(&spec_)) {
    path_ = std::make_unique<PoissonPath>();
    for (const auto& bp : pc->breakpoints) path_->push(bp.t_start, bp.rate);
  } else if (const auto* cp = std::get_if<CompoundPoissonSin>(&spec_)) {
    path_ = std::make_unique<PoissonPath>();
    path_->stochastic = true;
    path_->params = *cp;
    path_->rng.seed(cp->seed);
    path_->next_arrival = path_->draw_gap();
  }
}

HarvestProfile::HarvestProfile(const HarvestProfile& other)
    : spec_(other.spec_),
      path_(other.path_ ? std::make_unique<PoissonPath>(*other.path_) : nullptr) {}

HarvestProfile& HarvestProfile::operator=(const HarvestProfile& other) {
  if (this != &other) {
    spec_ = other.spec_;
    path_ = other.path_ ? std::make_unique<PoissonPath>(*other.path_) : nullptr;
  }
  return *this;
}

HarvestProfile::HarvestProfile(HarvestProfile&&) noexcept = default;
HarvestProfile& HarvestProfile::operator=(HarvestProfile&&) noexcept = default;
HarvestProfile::~HarvestProfile() = default;

std::string HarvestProfile::kind() const {
  return std::visit(Overloaded{
                        [](const Zero&) { return std::string("zero"); },
                        [](const PiecewiseConstant&) { return std::string("piecewise_constant"); },
                        [](const WindowedAbsSin&) { return std::string("windowed_abs_sin"); },
                        [](const CompoundPoissonSin&) { return std::string("compound_poisson_sin"); },
                    },
                    spec_);
}

double HarvestProfile::rate_at(double t) const {
  require_time(t);
  return std::visit(Overloaded{
                        [](const Zero&) { return 0.0; },
                        [&](const WindowedAbsSin& ws) {
                          return t <= ws.window_end ? ws.amplitude * std::abs(std::sin(t)) : 0.0;
                        },
                        [&](const auto&) { return path_->rate_at(t); },
                    },
                    spec_);
}

double HarvestProfile::cumulative(double t) const {
  require_time(t);
  return std::visit(Overloaded{
                        [](const Zero&) { return 0.0; },
                        [&](const WindowedAbsSin& ws) {
                          return ws.amplitude * abs_sin_integral(std::min(t, ws.window_end));
                        },
                        [&](const auto&) { return path_->cumulative(t); },
                    },
                    spec_);
}

double HarvestProfile::integrate(double t_a, double t_b) const {
  require_time(t_a);
  if (!(t_b >= t_a)) throw DomainError("integrate: t_b must not precede t_a");
  if (t_b == t_a) return 0.0;
  return std::max(cumulative(t_b) - cumulative(t_a), 0.0);
}

std::optional<double> HarvestProfile::harvest_free_after() const {
  return std::visit(
      Overloaded{
          [](const Zero&) -> std::optional<double> { return 0.0; },
          [](const PiecewiseConstant& pc) -> std::optional<double> {
            if (pc.breakpoints.empty()) return 0.0;
            if (pc.breakpoints.back().rate == 0.0) return pc.breakpoints.back().t_start;
            return std::nullopt;
          },
          [](const WindowedAbsSin& ws) -> std::optional<double> {
            return ws.amplitude == 0.0 ? 0.0 : ws.window_end;
          },
          [](const CompoundPoissonSin&) -> std::optional<double> { return std::nullopt; },
      },
      spec_);
}

double HarvestProfile::max_rate(double t_a, double t_b) const {
  require_time(t_a);
  if (!(t_b >= t_a)) throw DomainError("max_rate: t_b must not precede t_a");
  return std::visit(Overloaded{
                        [](const Zero&) { return 0.0; },
                        [&](const WindowedAbsSin& ws) {
                          if (t_a > ws.window_end) return 0.0;
                          const double hi = std::min(t_b, ws.window_end);
                          // |sin| peaks at odd multiples of pi/2.
                          const double peak = std::ceil((t_a - std::numbers::pi / 2) / std::numbers::pi);
                          const double t_peak = std::numbers::pi / 2 + peak * std::numbers::pi;
                          double m = std::max(std::abs(std::sin(t_a)), std::abs(std::sin(hi)));
                          if (t_peak <= hi) m = 1.0;
                          return ws.amplitude * m;
                        },
                        [&](const auto&) { return path_->max_rate(t_a, t_b); },
                    },
                    spec_);
}

}  // namespace etech
