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


#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "etech/errors.hpp"
#include "etech/rate_math.hpp"
#include "oracles.hpp"

using Catch::Approx;
using namespace etech;

TEST_CASE("rate is log2(1 + p)") {
  CHECK(rate(0.0) == 0.0);
  CHECK(rate(1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(rate(3.0) == Approx(2.0).epsilon(1e-15));
  CHECK(rate(1e-20) == Approx(1e-20 / std::numbers::ln2));
  CHECK_THROWS_AS(rate(-0.1), DomainError);
}

TEST_CASE("lambert_w_m1 on known points") {
  CHECK(lambert_w_m1(-1.0 / std::numbers::e) == -1.0);
  CHECK(lambert_w_m1(-std::numbers::ln2 / 2.0) == Approx(-2.0 * std::numbers::ln2).epsilon(1e-14));
  CHECK(lambert_w_m1(-0.1) == Approx(-3.577152).margin(1e-6));
  CHECK(lambert_w_m1(-0.1) == Approx(oracle::lambert_w_m1(-0.1)).epsilon(1e-12));
  CHECK_THROWS_AS(lambert_w_m1(0.0), DomainError);
  CHECK_THROWS_AS(lambert_w_m1(-0.5), DomainError);
}

TEST_CASE("lambert_w_m1 agrees with bisection across the branch") {
  for (int i = 1; i < 400; ++i) {
    const double x = -std::exp(-1.0 - 0.05 * i);
    const double w = lambert_w_m1(x);
    CHECK(w == Approx(oracle::lambert_w_m1(x)).epsilon(1e-11));
    // w e^w itself carries a relative rounding error of about |w| ulp.
    CHECK(w * std::exp(w) == Approx(x).epsilon(1e-15 * std::abs(w) * 100));
  }
}

TEST_CASE("lambert_w_m1 near the branch point") {
  const double branch = -1.0 / std::numbers::e;
  CHECK(lambert_w_m1(branch + 5e-15) == -1.0);
  const double w = lambert_w_m1(branch + 1e-10);
  CHECK(w < -1.0);
  CHECK(w == Approx(-1.0 - std::sqrt(2.0 * std::numbers::e * 1e-10)).epsilon(1e-4));
}

TEST_CASE("lambert_w_m1_from_log matches the direct form") {
  for (double l : {-1.0, -1.5, -3.0, -10.0, -100.0}) {
    CHECK(lambert_w_m1_from_log(l) == Approx(oracle::lambert_w_m1(-std::exp(l), -200.0)).epsilon(1e-11));
  }
  // Far beyond double range of x itself.
  const double w = lambert_w_m1_from_log(-1000.0);
  CHECK(w + std::log(-w) == Approx(-1000.0).epsilon(1e-14));
}

TEST_CASE("k_constants") {
  const auto b3 = k_constants(PowerBudget(3.0));
  CHECK(b3.k_min == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(b3.k_max == Approx(1.442695).margin(1e-6));
  const auto b1 = k_constants(PowerBudget(1.0));
  CHECK(b1.k_min == Approx(1.0).epsilon(1e-15));
  const auto tiny = k_constants(PowerBudget(1e-9));
  CHECK(tiny.k_min == Approx(tiny.k_max).epsilon(1e-8));
  CHECK_THROWS_AS(PowerBudget(0.0), DomainError);
  CHECK_THROWS_AS(PowerBudget(-1.0), DomainError);
}

TEST_CASE("rpe_power examples") {
  const PowerBudget b(3.0);
  CHECK(*rpe_power(1.0, b) == Approx(1.0).epsilon(1e-13));
  CHECK(*rpe_power(b.k_min(), b) == 3.0);
  CHECK(*rpe_power(1.2, b) == Approx(0.4300).margin(1e-4));
  CHECK(*rpe_power(1.2, b) == Approx(oracle::rpe_power(1.2, 3.0)).epsilon(1e-11));
  CHECK(*rpe_power(SlopeK(1.2), b) == *rpe_power(1.2, b));
}

TEST_CASE("rpe_power outside the band") {
  const PowerBudget b(3.0);
  CHECK_FALSE(rpe_power(0.5, b).has_value());
  CHECK_FALSE(rpe_power(kSlopeMax, b).has_value());
  CHECK_FALSE(rpe_power(2.0, b).has_value());
  CHECK(rpe_power(std::nextafter(kSlopeMax, 0.0), b).has_value());
  CHECK_THROWS_AS(rpe_power(0.0, b), DomainError);
  CHECK_THROWS_AS(SlopeK(-1.0), DomainError);
}

TEST_CASE("rpe_power solves the rate-power line") {
  for (double p_max : {0.5, 1.0, 3.0, 10.0, 100.0}) {
    const PowerBudget b(p_max);
    for (int i = 0; i < 200; ++i) {
      const double k = b.k_min() + (b.k_max() - b.k_min()) * i / 200.0;
      const double p = *rpe_power(k, b);
      CHECK(p > 0.0);
      CHECK(p <= p_max);
      CHECK(std::abs(k * p - std::log2(1.0 + p)) <= 1e-12 * std::max(1.0, p));
    }
  }
}

TEST_CASE("reachable examples") {
  const PowerBudget b(3.0);
  CHECK(reachable(1, 1, 0, 0, b));
  CHECK_FALSE(reachable(1, 1, 0.9, 0.99, b));
  CHECK(reachable(1, 1, 1, 1, b));
  CHECK_FALSE(reachable(1, 1, 1, 0.5, b));
  CHECK_FALSE(reachable(1, 1, 0.5, 1, b));
  CHECK_FALSE(reachable(1, 1, 1.2, 0.5, b));
  CHECK_THROWS_AS(reachable(1, 1, -0.1, 0.5, b), DomainError);
}

TEST_CASE("optimal_duration examples") {
  const PowerBudget b(3.0);
  CHECK(optimal_duration(1, 1, 0, 0, b) == Approx(1.0).epsilon(1e-13));
  CHECK(optimal_duration(1, 1, 1, 1, b) == 0.0);
  const double t = optimal_duration(1, 1, 0.355, 0.226, b);
  CHECK(t == Approx(0.645 / oracle::rpe_power(1.2, 3.0)).epsilon(1e-10));
  CHECK(t == Approx(1.5).margin(0.01));
  CHECK_THROWS_AS(optimal_duration(1, 1, 0.9, 0.99, b), DomainError);
}

TEST_CASE("optimal_duration energy and data forms agree") {
  const PowerBudget b(3.0);
  for (int i = 1; i < 40; ++i) {
    for (int j = 1; j < 40; ++j) {
      const double de = i / 40.0;
      const double dq = j / 40.0;
      if (!reachable(1, 1, 1 - de, 1 - dq, b)) continue;
      const double t = optimal_duration(1, 1, 1 - de, 1 - dq, b);
      const double p = de / t;
      CHECK(dq / rate(p) == Approx(t).epsilon(1e-10));
    }
  }
}

TEST_CASE("balanced_power examples") {
  const PowerBudget b(3.0);
  CHECK(balanced_power(1, 1, b) == Approx(1.0).epsilon(1e-13));
  CHECK(balanced_power(1, 2.0 / 3.0, b) == Approx(3.0).epsilon(1e-12));
  CHECK(balanced_power(1, 1.2, b) == Approx(oracle::rpe_power(1.2, 3.0)).epsilon(1e-11));
  CHECK_THROWS_AS(balanced_power(1, 5, b), DomainError);
  CHECK_THROWS_AS(balanced_power(0, 1, b), DomainError);
}
