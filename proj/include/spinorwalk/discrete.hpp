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

#include <array>
#include <optional>
#include <vector>

#include "spinorwalk/aligned.hpp"
#include "spinorwalk/analysis.hpp"
#include "spinorwalk/drive.hpp"
#include "spinorwalk/spinor_state.hpp"
#include "spinorwalk/units.hpp"

namespace spinorwalk {

/// Coined walk on sites -half_width..half_width.
class WalkState {
 public:
  explicit WalkState(int half_width);

  static WalkState localized(int half_width, int site, Complex up, Complex down);

  int half_width() const { return half_width_; }
  int n_sites() const { return 2 * half_width_ + 1; }

  Complex& at(int site, Spin s);
  Complex at(int site, Spin s) const;

  double norm() const;
  double mean() const;
  double stddev() const;
  /// Largest |j| with non-zero amplitude (-1 if empty).
  int support_radius() const;

  std::vector<std::array<Complex, 2>>& amplitudes() { return amps_; }
  const std::vector<std::array<Complex, 2>>& amplitudes() const { return amps_; }

 private:
  int half_width_;
  std::vector<std::array<Complex, 2>> amps_;  // [site + half_width][spin]
};

struct WalkResult {
  WalkState final_state;
  std::vector<double> mean;    // <j> after 0..n steps
  std::vector<double> stddev;  // Delta j after 0..n steps
};

/// n steps of U2 U1: shift (up -> j+1, down -> j-1) then the coin
/// exp(-i theta sigma_x / 2). PreconditionError if the walk could reach the
/// edge of the segment.
WalkResult walk_run(const WalkState& initial, double theta, int n_steps);

struct DiracMapConfig {
  double d_step = 0.0;  // per-period translation, units 1/k0
  double theta = 0.0;
  double period = 0.0;  // drive period, units hbar/E_R
  std::optional<StepPotential> step;
};

struct DiracMapResult {
  SpinorState final_state;
  ObservableSeries series;  // one sample per period, times n T
};

/// (U3 U2 U1)^n on the continuum grid: U1 spectral translation by +-d_step,
/// U2 the coin, U3 = exp(-i V_step(x) T).
DiracMapResult dirac_map_run(const SpinorState& initial, const DiracMapConfig& config, int n_steps);

struct DiracSpectrum {
  double e_plus = 0.0;   // phase per step
  double e_minus = 0.0;
  double zitter_frequency = 0.0;  // (E+ - E-) / T
  double effective_mass = 0.0;    // theta / (2 d)
};

/// Eigenvalues of H_eff = d p sigma_z + (theta/2) sigma_x.
DiracSpectrum effective_dirac_spectrum(double p, const DiracMapConfig& config);

/// v_max = (d Delta / 2) J_n(d F1 / omega) in lattice units (hbar = 1).
/// d_lattice is the lattice period.
double transport_velocity_bound(double d_lattice, double band_width, double f1, double omega,
                                int order);

struct BlochScales {
  double period_si = 0.0;          // s
  double period = 0.0;             // hbar/E_R
  double max_displacement_si = 0.0;  // m, Delta / F0
  double max_displacement = 0.0;     // 1/k0
  double band_width = 0.0;           // E_R
};

/// Bloch period 4 pi hbar / (lambda F0) and displacement Delta / F0.
/// F0 in newtons; zero is a PreconditionError.
BlochScales bloch_scales(const PhysicalParams& params, double force_si);

}  // namespace spinorwalk
