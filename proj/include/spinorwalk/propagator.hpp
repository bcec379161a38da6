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

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "spinorwalk/aligned.hpp"
#include "spinorwalk/analysis.hpp"
#include "spinorwalk/drive.hpp"
#include "spinorwalk/fft.hpp"
#include "spinorwalk/simd/kernels.hpp"
#include "spinorwalk/spinor_state.hpp"

namespace spinorwalk {

/// Per-run hooks for the stepping loop.
struct StepControl {
  /// Synchronise (and call on_sync) every `sync_stride` global steps; 0 only
  /// synchronises at segment ends.
  std::size_t sync_stride = 0;
  /// Called with the state in position space at every sync point.
  std::function<void(SpinorState&, const GaugeRecord&)> on_sync;
  /// Sorted protocol times of sigma_z phase flips.
  std::span<const double> jump_times;
  /// Uniform non-Hermitian loss rate (norm decays as exp(-rate t)).
  double loss_rate = 0.0;

  // Bookkeeping owned by the caller across segments.
  std::size_t global_step = 0;
  std::size_t next_jump = 0;
};

/// Strang split-step integrator for
///   H = (k - A_s(t))^2 + V0 cos^2 x + V_step(x) + Omega(t)/2 sigma_x
/// in the gauged frame of each spin component, on a periodic grid.
///
/// The object is immutable after construction; concurrent runs on distinct
/// states may share it.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const Grid& grid, double depth, double dt,
                      std::optional<StepPotential> step = std::nullopt,
                      const simd::KernelTable* kernels = nullptr);

  const Grid& grid() const { return grid_; }
  double dt() const { return dt_; }
  double depth() const { return depth_; }
  const std::optional<StepPotential>& step_potential() const { return step_; }
  const simd::KernelTable& kernels() const { return *kernels_; }
  const FftPlan& fft() const { return fft_; }

  /// Number of steps in `duration`; ConfigError unless dt divides it.
  std::size_t steps_in(double duration) const;

  /// Advances state and gauge over one segment. NumericalError on norm drift
  /// above 1e-8 or a non-finite norm.
  void evolve_segment(SpinorState& state, const DriveSegment& segment, GaugeRecord& gauge,
                      StepControl& control) const;
  void evolve_segment(SpinorState& state, const DriveSegment& segment, GaugeRecord& gauge) const;

  /// Instantaneous exp(-i angle sigma_x / 2) expressed in the gauged frame.
  void apply_pulse(SpinorState& state, double angle, const GaugeRecord& gauge) const;

  /// Free evolution (no force, no coupling) for a signed number of steps;
  /// negative counts run backwards in time.
  void evolve_free(SpinorState& state, long steps) const;

 private:
  void kinetic(SpinorState& state, double t0, double t1, const DriveSegment& segment,
               const GaugeRecord& start, bool full_step) const;
  void apply_jumps_before(SpinorState& state, double t, StepControl& control) const;

  Grid grid_;
  double depth_;
  double dt_;
  std::optional<StepPotential> step_;
  const simd::KernelTable* kernels_;
  FftPlan fft_;
  ComplexArray kinetic_half_;  // exp(-i k^2 dt/2) / N
  ComplexArray kinetic_full_;  // exp(-i k^2 dt) / N
  ComplexArray potential_;     // exp(-i V(x) dt)
};

/// Gauge impulses of a segment at local time t, given those at its start.
GaugeRecord gauge_at(const GaugeRecord& start, const DriveSegment& segment, double t_local);

/// Lab-frame state exp(-i A_s x) psi_s; inverse of to_gauged.
SpinorState to_lab_frame(const SpinorState& gauged, const GaugeRecord& gauge);
SpinorState to_gauged_frame(const SpinorState& lab, const GaugeRecord& gauge);

struct RunOptions {
  /// Observable cadence; must be a multiple of dt. Non-positive: only the
  /// initial and final samples.
  double sample_interval = 0.0;
  bool record_snapshots = true;
  std::vector<double> jump_times;
  double loss_rate = 0.0;
  /// Finer synchronisation grid in steps (must divide the sample stride);
  /// on_sync runs at each of these points before any sample is recorded.
  std::size_t sync_every_steps = 0;
  std::function<void(SpinorState&, const GaugeRecord&)> on_sync;
  /// Extra hook at every sample point (after recording).
  std::function<void(SpinorState&, const GaugeRecord&)> on_sample;
};

struct ProtocolResult {
  ObservableSeries series;
  SpinorState final_state;
  GaugeRecord final_gauge;
  std::vector<DensitySnapshot> snapshots;  // initial state and every segment end
};

/// Runs segments and pulses in order; deterministic for fixed inputs.
ProtocolResult run_protocol(const SplitStepPropagator& propagator, const SpinorState& initial,
                            const Protocol& protocol, const RunOptions& options = {});

/// <x> after minus <x> before one drive period for a pure spin-up copy of
/// the initial spatial profile under force_up. The spin-down copy must move
/// by the opposite amount within 1% (NumericalError otherwise).
double measure_step_displacement(const SplitStepPropagator& propagator,
                                 const DriveSegment& segment, const SpinorState& initial);

}  // namespace spinorwalk
