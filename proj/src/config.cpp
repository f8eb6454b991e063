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


#include "etech/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "etech/errors.hpp"

namespace etech {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto name : allowed) known = known || item.key() == name;
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + std::string(where));
  }
}

double number(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_int(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError(std::string("'") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

void maybe(const json& obj, const char* key, double& out) {
  if (obj.contains(key)) out = number(obj, key);
}

HarvestProfile profile_from(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("profile needs a string 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "zero") {
      reject_unknown(j, {"kind"}, "zero profile");
      return HarvestProfile::zero();
    }
    if (kind == "piecewise_constant") {
      reject_unknown(j, {"kind", "breakpoints"}, "piecewise_constant profile");
      const json& bps = j.at("breakpoints");
      if (!bps.is_array()) throw ConfigError("'breakpoints' must be an array of [t, rate]");
      std::vector<RateBreakpoint> out;
      for (const auto& bp : bps) {
        if (!bp.is_array() || bp.size() != 2 || !bp[0].is_number() || !bp[1].is_number()) {
          throw ConfigError("each breakpoint must be [t_start, rate]");
        }
        out.push_back({bp[0].get<double>(), bp[1].get<double>()});
      }
      return HarvestProfile::piecewise_constant(std::move(out));
    }
    if (kind == "windowed_abs_sin") {
      reject_unknown(j, {"kind", "amplitude", "window_end"}, "windowed_abs_sin profile");
      return HarvestProfile::windowed_abs_sin(number(j, "amplitude"), number(j, "window_end"));
    }
    if (kind == "compound_poisson_sin") {
      reject_unknown(j, {"kind", "amplitude", "poisson_rate", "mark_variance", "seed"},
                     "compound_poisson_sin profile");
      return HarvestProfile::compound_poisson_sin(number(j, "amplitude"), number(j, "poisson_rate"),
                                                  number(j, "mark_variance"), unsigned_int(j, "seed"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const json::out_of_range& e) {
    throw ConfigError(std::string(kind) + " profile is missing a field: " + e.what());
  }
  throw ConfigError("unknown profile kind '" + kind + "'");
}

PolicyKind policy_from(const json& j) {
  if (!j.is_string()) throw ConfigError("policy must be a string");
  return PolicyKind::parse(j.get<std::string>());
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading config file '" + path + "'");
  return ss.str();
}

}  // namespace

SimConfig parse_sim_config(std::string_view json_text) {
  const json j = parse_text(json_text);
  reject_unknown(j,
                 {"e0", "q0", "p_max", "epsilon", "dt", "t_cutoff", "policy", "profile",
                  "record_trajectory", "trajectory_stride"},
                 "config");
  SimConfig c;
  maybe(j, "e0", c.e0);
  maybe(j, "q0", c.q0);
  maybe(j, "epsilon", c.epsilon);
  maybe(j, "dt", c.dt);
  maybe(j, "t_cutoff", c.t_cutoff);
  if (j.contains("p_max")) {
    const double p = number(j, "p_max");
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("p_max must be positive");
    c.budget = PowerBudget(p);
  }
  if (j.contains("policy")) c.policy = policy_from(j.at("policy"));
  if (j.contains("profile")) c.profile = profile_from(j.at("profile"));
  if (j.contains("record_trajectory")) {
    if (!j.at("record_trajectory").is_boolean()) throw ConfigError("'record_trajectory' must be a boolean");
    c.record_trajectory = j.at("record_trajectory").get<bool>();
  }
  if (j.contains("trajectory_stride")) c.trajectory_stride = unsigned_int(j, "trajectory_stride");
  validate(c);
  return c;
}

SimConfig load_sim_config(const std::string& path) { return parse_sim_config(read_file(path)); }

HarvestProfile parse_profile(std::string_view json_text) { return profile_from(parse_text(json_text)); }

SweepSpec parse_sweep_spec(std::string_view json_text) {
  const json j = parse_text(json_text);
  reject_unknown(j,
                 {"scenario", "param_grid", "policies", "epsilons", "base", "replications",
                  "master_seed", "profile"},
                 "sweep config");
  if (!j.contains("scenario") || !j.at("scenario").is_string()) {
    throw ConfigError("sweep config needs a string 'scenario'");
  }
  SweepSpec spec = scenario_preset(parse_scenario(j.at("scenario").get<std::string>()));

  if (j.contains("param_grid")) {
    const json& g = j.at("param_grid");
    if (g.is_string()) {
      spec.param_grid = parse_grid(g.get<std::string>());
    } else if (g.is_array()) {
      spec.param_grid.clear();
      for (const auto& v : g) {
        if (!v.is_number()) throw ConfigError("param_grid entries must be numbers");
        spec.param_grid.push_back(v.get<double>());
      }
    } else {
      throw ConfigError("param_grid must be an array or a lo:step:hi string");
    }
  }
  if (j.contains("policies")) {
    if (!j.at("policies").is_array()) throw ConfigError("policies must be an array");
    spec.policies.clear();
    for (const auto& p : j.at("policies")) spec.policies.push_back(policy_from(p));
  }
  if (j.contains("epsilons")) {
    if (!j.at("epsilons").is_array()) throw ConfigError("epsilons must be an array");
    spec.epsilons.clear();
    for (const auto& e : j.at("epsilons")) {
      if (!e.is_number()) throw ConfigError("epsilons entries must be numbers");
      spec.epsilons.push_back(e.get<double>());
    }
  }
  if (j.contains("base")) {
    const json& b = j.at("base");
    reject_unknown(b, {"e0", "q0", "p_max", "dt", "t_cutoff"}, "base");
    maybe(b, "e0", spec.base.e0);
    maybe(b, "q0", spec.base.q0);
    maybe(b, "p_max", spec.base.p_max);
    maybe(b, "dt", spec.base.dt);
    maybe(b, "t_cutoff", spec.base.t_cutoff);
  }
  if (j.contains("replications")) spec.replications = unsigned_int(j, "replications");
  if (j.contains("master_seed")) spec.master_seed = unsigned_int(j, "master_seed");
  if (j.contains("profile")) {
    if (spec.scenario != Scenario::kCustom) throw ConfigError("'profile' is only allowed for custom sweeps");
    spec.custom_profile = profile_from(j.at("profile"));
  }
  validate(spec);
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) { return parse_sweep_spec(read_file(path)); }

}  // namespace etech
