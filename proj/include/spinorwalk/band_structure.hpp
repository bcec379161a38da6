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

#include <vector>

#include <Eigen/Dense>

#include "spinorwalk/units.hpp"

namespace spinorwalk {

inline constexpr int kDefaultPlaneWaves = 41;

/// Eigen-decomposition of the Bloch Hamiltonian of V0 cos^2(x) at one
/// quasimomentum. Plane wave m has wavenumber kappa + 2m, m in [-m_max, m_max].
struct BlochSolution {
  double kappa = 0.0;
  int m_max = 0;
  std::vector<double> energies;          // ascending, units E_R
  Eigen::MatrixXd coefficients;          // column n = band n, row m + m_max

  double coefficient(int band, int m) const;
};

/// Diagonalises the truncated plane-wave Hamiltonian. The basis starts at
/// n_plane_waves and is enlarged until six more plane waves change E_0 by
/// less than 1e-10 E_R; NumericalError if that never happens.
BlochSolution solve_bloch(double depth, double kappa, int n_bands,
                          int n_plane_waves = kDefaultPlaneWaves);

/// Same diagonalisation without the convergence loop. Used by oracles.
BlochSolution solve_bloch_fixed(double depth, double kappa, int n_bands, int n_plane_waves);

struct BandStructure {
  double depth = 0.0;
  int n_plane_waves = kDefaultPlaneWaves;
  std::vector<double> kappa;                  // [-1, 1), units k0
  std::vector<std::vector<double>> energies;  // energies[band][i_kappa]
  std::vector<BlochSolution> solutions;       // one per kappa
  double band_width = 0.0;                    // ground band, units E_R

  int n_bands() const { return static_cast<int>(energies.size()); }
};

/// Samples n_kappa quasimomenta kappa_i = -1 + 2i/n_kappa. The ground-band
/// width also includes kappa = 0 and the zone edge, where the extrema of the
/// cos^2 lattice sit.
BandStructure compute_band_structure(const PhysicalParams& params, int n_bands, int n_kappa,
                                     int n_plane_waves = kDefaultPlaneWaves);

/// Ground band width for a depth in E_R.
double ground_band_width(double depth);

}  // namespace spinorwalk
