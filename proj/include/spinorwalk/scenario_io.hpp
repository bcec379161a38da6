// Copyright 2026 The spinorwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinorwalk/scenario.hpp"

namespace spinorwalk {

/// Fully materialised config; output_dir is left out.
nlohmann::json config_to_json(const ScenarioConfig& config);

/// Overlays the keys of `j` onto `base`. A "preset" key selects the base
/// from the preset table first. Unknown keys are a ConfigError.
ScenarioConfig config_from_json(const nlohmann::json& j, ScenarioConfig base = {});

ScenarioConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64 of the canonical JSON text, as "fnv1a64:<16 hex digits>".
std::string config_hash(const ScenarioConfig& config);

struct RunInfo {
  unsigned threads = 1;
  std::string kernels;
};

/// Writes observables.csv, density_{up,down,total}.csv, dirac_map.csv (Dirac
/// and step runs), summary.json, config.json and manifest.json into `dir`.
/// Returns the file names written.
std::vector<std::string> write_outputs(const ScenarioResult& result,
                                       const std::filesystem::path& dir, const RunInfo& info);

/// Densities at the last finite sample of an aborted run.
void write_diagnostic_snapshot(const ScenarioConfig& config, const DensitySnapshot& snap,
                               const std::filesystem::path& dir);

nlohmann::json metrics_to_json(const ScenarioResult& result);

struct SweepRow {
  double value = 0.0;
  std::string status;  // "ok" or "error:<kind>"
  std::string message;
  std::optional<ScenarioResult> result;
  std::string run_dir;
};

void write_sweep_summary(const std::string& parameter, const std::vector<SweepRow>& rows,
                         const ScenarioConfig& base, const std::filesystem::path& path);

/// Body lines of a CSV file, i.e. everything after the '#' header block.
std::string csv_body(const std::filesystem::path& path);

}  // namespace spinorwalk
