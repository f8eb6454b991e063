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


// JSON configuration documents. Field names mirror SimConfig and SweepSpec;
// unknown keys and ill-typed values are rejected with ConfigError.
//
//   {"e0": 1, "q0": 1, "p_max": 3, "epsilon": 0.05, "policy": "robust",
//    "profile": {"kind": "windowed_abs_sin", "amplitude": 2.5, "window_end": 1}}

#pragma once

#include <string>
#include <string_view>

#include "etech/engine.hpp"
#include "etech/harvest.hpp"
#include "etech/sweep.hpp"

namespace etech {

SimConfig parse_sim_config(std::string_view json_text);
/// Throws IoError when the file cannot be read.
SimConfig load_sim_config(const std::string& path);

/// Starts from the scenario preset (when `scenario` names one) and
/// overrides every field present in the document.
SweepSpec parse_sweep_spec(std::string_view json_text);
SweepSpec load_sweep_spec(const std::string& path);

/// `{"kind": ..., ...}` profile object on its own.
HarvestProfile parse_profile(std::string_view json_text);

}  // namespace etech
