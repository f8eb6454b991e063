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


// etech: run one closed-loop simulation or a scenario sweep.
//
//   etech run --config sim.json [--trajectory traj.csv]
//   etech sweep --scenario s1 [--epsilon E]... [--grid lo:step:hi] [--seed N] --out s1.csv
//   etech sweep --config sweep.json --out sweep.csv

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "etech/config.hpp"
#include "etech/engine.hpp"
#include "etech/errors.hpp"
#include "etech/sweep.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& trajectory_path) {
  etech::SimConfig config = etech::load_sim_config(config_path);
  if (!trajectory_path.empty()) config.record_trajectory = true;
  const etech::SimOutcome out = etech::simulate(config);
  if (out.transmission_time) {
    std::printf("transmission_time %.9f\n", *out.transmission_time);
  } else {
    std::printf("transmission_time INF\n");
  }
  std::printf("events %zu\n", out.events.size());
  if (!trajectory_path.empty()) etech::write_trajectory_csv(out.trajectory, trajectory_path);
  return 0;
}

int sweep_command(const std::string& config_path, const std::string& scenario,
                  const std::vector<double>& epsilons, const std::string& grid,
                  const std::vector<std::uint64_t>& seed, const std::string& out_path) {
  etech::SweepSpec spec;
  if (!config_path.empty()) {
    if (!scenario.empty() || !epsilons.empty() || !grid.empty() || !seed.empty()) {
      throw etech::ConfigError("--config cannot be combined with scenario overrides");
    }
    spec = etech::load_sweep_spec(config_path);
  } else {
    if (scenario.empty()) throw etech::ConfigError("sweep needs --scenario or --config");
    const etech::Scenario s = etech::parse_scenario(scenario);
    if (s == etech::Scenario::kCustom) throw etech::ConfigError("custom sweeps need --config");
    spec = etech::scenario_preset(s);
    if (!epsilons.empty()) spec.epsilons = epsilons;
    if (!grid.empty()) spec.param_grid = etech::parse_grid(grid);
    if (!seed.empty()) spec.master_seed = seed.front();
  }
  const etech::SweepResult result = etech::run_sweep(spec);
  etech::emit_csv(result, out_path);
  for (double eps : spec.epsilons) {
    for (const auto& policy : spec.policies) {
      const auto worst = result.worst_case(eps, policy);
      if (worst) {
        std::printf("epsilon=%g %s worst=%.6f\n", eps, policy.name().c_str(), *worst);
      } else {
        std::printf("epsilon=%g %s worst=INF\n", eps, policy.name().c_str());
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-triggered transmission simulator for energy-harvesting links"};
  app.require_subcommand(1);

  std::string run_config;
  std::string trajectory;
  auto* run = app.add_subcommand("run", "Simulate one configuration");
  run->add_option("--config", run_config, "SimConfig JSON file")->required();
  run->add_option("--trajectory", trajectory, "Write the trajectory CSV here");

  std::string sweep_config;
  std::string scenario;
  std::vector<double> epsilons;
  std::string grid;
  std::vector<std::uint64_t> seed;
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "Sweep a scenario grid");
  sweep->add_option("--config", sweep_config, "SweepSpec JSON file");
  sweep->add_option("--scenario", scenario, "s1, s2 or s3");
  sweep->add_option("--epsilon", epsilons, "Triggering threshold (repeatable)");
  sweep->add_option("--grid", grid, "Parameter grid lo:step:hi");
  sweep->add_option("--seed", seed, "Master seed")->expected(1);
  sweep->add_option("--out", out_path, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return run_command(run_config, trajectory);
    return sweep_command(sweep_config, scenario, epsilons, grid, seed, out_path);
  } catch (const etech::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const etech::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const etech::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 1;
  }
}
