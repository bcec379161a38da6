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
#include <random>
#include <vector>

#include "spinorwalk/analysis.hpp"
#include "spinorwalk/propagator.hpp"

namespace spinorwalk {

enum class JumpAlgorithm {
  /// Jumps drawn up front as a Poisson process (exact for sigma_z dephasing).
  poisson,
  /// Generic waiting-time unravelling with norm decay and renormalisation.
  /// Only used to cross-check the Poisson shortcut.
  waiting_time,
};

struct DephasingConfig {
  double kappa = 0.0;  // units E_R/hbar
  int n_trajectories = 100;
  std::uint64_t master_seed = 0x5eed5eedULL;
  JumpAlgorithm algorithm = JumpAlgorithm::poisson;
  unsigned threads = 1;
};

/// Random stream of trajectory k: a pure function of (master_seed, k).
std::mt19937_64 trajectory_stream(std::uint64_t master_seed, std::uint64_t trajectory);

/// Ordered jump times on [0, t_total) of a rate-kappa Poisson process.
std::vector<double> sample_jump_times(double kappa, double t_total, std::mt19937_64& stream);

struct TrajectoryResult {
  ObservableSeries series;
  std::vector<DensitySnapshot> snapshots;
  std::size_t n_jumps = 0;
};

/// The deterministic protocol with a sigma_z flip at every jump time.
TrajectoryResult run_trajectory(const SplitStepPropagator& propagator, const Protocol& protocol,
                                const SpinorState& initial, const std::vector<double>& jumps,
                                const RunOptions& options);

/// Waiting-time unravelling: norm decays as exp(-kappa t) between jumps; a
/// jump happens when |psi|^2 falls below a uniform draw, then sigma_z and
/// renormalisation. Synchronises every step, so meant for small grids.
TrajectoryResult run_trajectory_waiting_time(const SplitStepPropagator& propagator,
                                             const Protocol& protocol, const SpinorState& initial,
                                             double kappa, std::mt19937_64& stream,
                                             const RunOptions& options);

struct TrajectoryEnsemble {
  std::size_t n_trajectories = 0;
  /// Ensemble means; x_std from the averaged first and second moments.
  ObservableSeries mean;
  // Standard errors of the mean, per sample.
  std::vector<double> x_mean_se;
  std::vector<double> x_std_se;
  std::vector<double> pop_up_se;
  std::vector<double> pop_down_se;
  std::vector<Complex> coherence_se;  // separate errors of re and im
  std::vector<double> norm_se;
  std::vector<DensitySnapshot> mean_snapshots;
  std::vector<ObservableSeries> trajectories;
};

/// Mean and standard error per observable and density bin, reduced in
/// trajectory order with pairwise summation. ConfigError when time grids or
/// snapshot grids disagree.
TrajectoryEnsemble average_ensemble(const std::vector<ObservableSeries>& trajectories,
                                    const std::vector<std::vector<DensitySnapshot>>& snapshots,
                                    const Grid& grid);

/// Runs n_trajectories quantum-jump trajectories (concurrently when
/// config.threads > 1) and averages them. Identical config and seed give
/// identical ensembles for any thread count.
TrajectoryEnsemble run_ensemble(const SplitStepPropagator& propagator, const Protocol& protocol,
                                const SpinorState& initial, const DephasingConfig& config,
                                const RunOptions& options);

}  // namespace spinorwalk
