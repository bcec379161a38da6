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

#include "spinorwalk/band_structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinorwalk/errors.hpp"

namespace spinorwalk {

namespace {

constexpr double kConvergenceTolerance = 1e-10;
constexpr int kMaxPlaneWaves = 401;

}  // namespace

double BlochSolution::coefficient(int band, int m) const {
  if (m < -m_max || m > m_max) return 0.0;
  return coefficients(m + m_max, band);
}

BlochSolution solve_bloch_fixed(double depth, double kappa, int n_bands, int n_plane_waves) {
  if (n_plane_waves < 1 || n_plane_waves % 2 == 0) {
    throw ConfigError("plane-wave count must be odd and positive");
  }
  if (n_bands < 1 || n_bands > n_plane_waves) throw ConfigError("invalid band count");

  const int m_max = n_plane_waves / 2;
  // cos^2 x = 1/2 + (e^{2ix} + e^{-2ix}) / 4 couples m to m +- 1.
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_plane_waves, n_plane_waves);
  for (int i = 0; i < n_plane_waves; ++i) {
    const double k = kappa + 2.0 * (i - m_max);
    h(i, i) = k * k + 0.5 * depth;
    if (i + 1 < n_plane_waves) {
      h(i, i + 1) = 0.25 * depth;
      h(i + 1, i) = 0.25 * depth;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("Bloch eigen-solver failed");

  BlochSolution out;
  out.kappa = kappa;
  out.m_max = m_max;
  out.energies.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n_bands);
  out.coefficients = solver.eigenvectors().leftCols(n_bands);
  for (int b = 0; b < n_bands; ++b) {
    Eigen::Index imax = 0;
    out.coefficients.col(b).cwiseAbs().maxCoeff(&imax);
    if (out.coefficients(imax, b) < 0.0) out.coefficients.col(b) *= -1.0;
  }
  return out;
}

BlochSolution solve_bloch(double depth, double kappa, int n_bands, int n_plane_waves) {
  for (int n = n_plane_waves; n <= kMaxPlaneWaves; n += 10) {
    auto base = solve_bloch_fixed(depth, kappa, n_bands, n);
    const auto bigger = solve_bloch_fixed(depth, kappa, 1, n + 6);
    if (std::abs(bigger.energies[0] - base.energies[0]) < kConvergenceTolerance) return base;
  }
  throw NumericalError("plane-wave expansion did not converge for V0 = " + std::to_string(depth) +
                       " E_R at kappa = " + std::to_string(kappa));
}

BandStructure compute_band_structure(const PhysicalParams& params, int n_bands, int n_kappa,
                                     int n_plane_waves) {
  if (n_bands < 1) throw ConfigError("n_bands must be >= 1");
  if (n_kappa < 3) throw ConfigError("n_kappa must be >= 3");

  BandStructure bands;
  bands.depth = params.depth();
  bands.energies.assign(n_bands, std::vector<double>(n_kappa));
  bands.kappa.resize(n_kappa);
  bands.solutions.reserve(n_kappa);

  double e_min = solve_bloch(bands.depth, 0.0, 1, n_plane_waves).energies[0];
  double e_max = solve_bloch(bands.depth, 1.0, 1, n_plane_waves).energies[0];
  for (int i = 0; i < n_kappa; ++i) {
    const double kappa = -1.0 + 2.0 * i / n_kappa;
    bands.kappa[i] = kappa;
    auto sol = solve_bloch(bands.depth, kappa, n_bands, n_plane_waves);
    bands.n_plane_waves = std::max(bands.n_plane_waves, 2 * sol.m_max + 1);
    for (int b = 0; b < n_bands; ++b) bands.energies[b][i] = sol.energies[b];
    e_min = std::min(e_min, sol.energies[0]);
    e_max = std::max(e_max, sol.energies[0]);
    bands.solutions.push_back(std::move(sol));
  }
  bands.band_width = e_max - e_min;
  return bands;
}

double ground_band_width(double depth) {
  const double e0 = solve_bloch(depth, 0.0, 1).energies[0];
  const double e1 = solve_bloch(depth, 1.0, 1).energies[0];
  return e1 - e0;
}

}  // namespace spinorwalk
