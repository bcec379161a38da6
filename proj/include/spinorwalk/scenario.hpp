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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinorwalk/analysis.hpp"
#include "spinorwalk/drive.hpp"
#include "spinorwalk/errors.hpp"
#include "spinorwalk/grid.hpp"
#include "spinorwalk/initial_state.hpp"
#include "spinorwalk/open_system.hpp"
#include "spinorwalk/units.hpp"

namespace spinorwalk {

enum class ScenarioKind { bloch, transport, walk, dirac, klein, walk_dephasing, dirac_dephasing };

ScenarioKind parse_scenario_kind(std::string_view name);
std::string_view to_string(ScenarioKind kind);

enum class Waveform { constant, sine, cosine };

/// Everything needed to reproduce one run. Physical inputs are in the units
/// an experimentalist would quote; the runner converts to lattice units.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::bloch;
  std::string preset;

  // Lattice and atom.
  double atom_mass_u = 132.905451961;
  double wavelength_nm = 1064.0;
  double depth_er = 1.0;

  // Grid.
  std::size_t grid_points = 4096;
  int grid_periods = 256;

  // Initial wave packet.
  double sigma_lambda = 6.0;
  double kappa0 = 0.0;
  int band = 0;
  SpinWeights spin = SpinWeights::pure_up();
  double offset_periods = 0.0;

  // Drive. force_accel is F/m on |up> in m/s^2; its sign sets the direction.
  Waveform waveform = Waveform::constant;
  double force_accel = 0.42;
  double force_ratio_down = -1.0;
  /// Drive period. Ignored for bloch, which runs in units of the Bloch time.
  double period_ms = 10.0;
  int n_periods = 3;

  // Coin pulse after every period.
  double theta = 0.0;  // radians
  PulseMode pulse_mode = PulseMode::instantaneous;
  double pulse_duration_ms = 0.0;

  // Potential step, centred step_center_periods downstream of the packet.
  double step_height_er = 0.0;
  double step_center_periods = 15.0;
  double step_width_periods = 2.0;

  // Dephasing.
  double kappa_per_s = 0.0;
  int n_trajectories = 100;
  std::uint64_t seed = 0x5eed5eedULL;
  JumpAlgorithm jump_algorithm = JumpAlgorithm::poisson;

  // Numerics.
  int steps_per_period = 2048;
  int samples_per_period = 1;
  int snapshot_every_periods = 1;
  double fit_t_min_periods = 3.0;

  /// Not part of the config hash.
  std::string output_dir;
};

/// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& config);

bool is_dephasing(ScenarioKind kind);
bool is_dirac_regime(ScenarioKind kind);
bool has_coin(ScenarioKind kind);

/// Derived run geometry shared by the runner and the reports.
struct ResolvedScenario {
  PhysicalParams params;
  Grid grid;
  double period = 0.0;  // drive period or Bloch time, lattice units
  double force = 0.0;   // lattice units
  double dt = 0.0;
  double kappa = 0.0;
  Protocol protocol;
  WavePacketSpec packet;
  std::optional<StepPotential> step;
};

ResolvedScenario resolve(const ScenarioConfig& config);

struct ScenarioMetrics {
  std::optional<double> step_displacement;  // d_step, lattice units
  std::optional<double> velocity_bound;     // v_max, lattice units
  std::optional<double> band_width;
  std::optional<double> bloch_period;
  std::optional<double> max_displacement;   // Delta / F0
  std::optional<double> measured_period;    // first two maxima of <x>
  std::optional<double> peak_to_peak;
  std::optional<double> mean_velocity;
  std::optional<ExponentFit> exponent;
  std::optional<double> oscillation_period;
  std::size_t n_extrema = 0;
  std::optional<double> detrended_amplitude;
  std::optional<double> dirac_map_final_x;
  double path_length = 0.0;
  double max_norm_error = 0.0;
  std::vector<std::string> notes;  // analyses that could not be evaluated
};

struct ScenarioResult {
  ScenarioConfig config;
  ResolvedScenario resolved;
  ObservableSeries series;
  std::vector<DensitySnapshot> snapshots;
  /// Standard errors, present for dephasing runs.
  std::optional<TrajectoryEnsemble> errors;
  std::optional<ObservableSeries> dirac_map;
  ScenarioMetrics metrics;
};

struct RunContext {
  unsigned threads = 1;
};

/// A deterministic run hit a numerical failure; carries the densities at
/// the last sample that was still finite.
class ScenarioAborted : public NumericalError {
 public:
  ScenarioAborted(const std::string& what, DensitySnapshot last_good)
      : NumericalError(what), last_good_(std::move(last_good)) {}
  const DensitySnapshot& last_good() const { return last_good_; }

 private:
  DensitySnapshot last_good_;
};

ScenarioResult run_scenario(const ScenarioConfig& config, const RunContext& context = {});

// Presets ------------------------------------------------------------------

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
};

struct Preset {
  std::string name;
  std::string description;
  ScenarioConfig config;
  std::optional<SweepSpec> sweep;
};

const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);
/// Preset used by `run <kind>` without --preset.
const Preset& default_preset(ScenarioKind kind);

/// Parameters accepted by overrides and sweeps: kappa [1/s], vs [E_R],
/// theta [units of pi], v0 [E_R], sigma [wavelengths], force [m/s^2],
/// period [ms].
void apply_override(ScenarioConfig& config, std::string_view parameter, double value);
bool is_sweep_parameter(std::string_view parameter);

}  // namespace spinorwalk
