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

#include <optional>
#include <span>
#include <vector>

#include "spinorwalk/aligned.hpp"
#include "spinorwalk/grid.hpp"
#include "spinorwalk/spinor_state.hpp"

namespace spinorwalk {

/// Position moments, spin populations and inter-spin coherence of a state.
struct Moments {
  double norm = 0.0;
  double pop_up = 0.0;
  double pop_down = 0.0;
  double x_mean = 0.0;
  double x2_mean = 0.0;
  double x_std = 0.0;
  /// Mean position of one spin component on its own normalised density;
  /// empty when that component carries no weight.
  std::optional<double> x_mean_up;
  std::optional<double> x_mean_down;
  Complex coherence{0.0, 0.0};  // integral conj(psi_up) psi_down dx
};

/// Uniform-grid moments of a state. chi = A_up - A_down converts the
/// coherence from the gauged frame to the lab frame (zero when not gauged).
Moments moments(const SpinorState& state, double chi = 0.0);

/// Moments of (possibly ensemble-averaged) spin densities.
Moments moments_from_density(const Grid& grid, std::span<const double> density_up,
                             std::span<const double> density_down, Complex coherence = {});

struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> x_mean_total;
  std::vector<std::optional<double>> x_mean_up;
  std::vector<std::optional<double>> x_mean_down;
  std::vector<double> x_std;
  std::vector<double> x2_mean;
  std::vector<double> pop_up;
  std::vector<double> pop_down;
  std::vector<Complex> coherence;
  std::vector<double> norm;

  void push(double t, const Moments& m);
  std::size_t size() const { return times.size(); }
  Moments at(std::size_t i) const;
};

struct DensitySnapshot {
  double time = 0.0;
  RealArray up;
  RealArray down;
};

DensitySnapshot snapshot(const SpinorState& state, double time);

struct ExponentFit {
  double alpha = 0.0;
  double stderr_alpha = 0.0;
  std::size_t n_samples = 0;
};

/// Least-squares slope of log(x_std) against log(t) over samples with
/// t > t_min. FitError with fewer than 8 such samples, or when a used sample
/// does not exceed the initial width.
ExponentFit fit_diffusion_exponent(const ObservableSeries& series, double t_min);
ExponentFit fit_diffusion_exponent(std::span<const double> times, std::span<const double> widths,
                                   double t_min);

/// sum min(a_i, b_i) dx. Symmetric, 1 for identical normalised densities.
double compare_densities(std::span<const double> a, std::span<const double> b, double dx);
double compare_densities(const Grid& grid_a, std::span<const double> a, const Grid& grid_b,
                         std::span<const double> b);

/// Indices of strict local extrema of a sampled signal, ignoring wiggles
/// smaller than `min_prominence` (hysteresis on the running extreme).
std::vector<std::size_t> find_extrema(std::span<const double> values, double min_prominence);

/// Twice the mean spacing between consecutive extrema; nullopt with fewer
/// than two extrema.
std::optional<double> oscillation_period(std::span<const double> times,
                                         std::span<const double> values, double min_prominence);

/// Peak-to-trough of the residual after removing a least-squares polynomial
/// trend of the given degree.
double detrended_peak_to_trough(std::span<const double> times, std::span<const double> values,
                                int degree);

/// Least-squares polynomial coefficients (lowest order first).
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree);

}  // namespace spinorwalk
