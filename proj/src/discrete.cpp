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

#include "spinorwalk/discrete.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spinorwalk/band_structure.hpp"
#include "spinorwalk/errors.hpp"
#include "spinorwalk/fft.hpp"

namespace spinorwalk {

namespace {

std::size_t site_count(int half_width) {
  if (half_width < 0) throw PreconditionError("negative walk half-width");
  return static_cast<std::size_t>(2 * half_width + 1);
}

}  // namespace

WalkState::WalkState(int half_width) : half_width_(half_width), amps_(site_count(half_width)) {}

WalkState WalkState::localized(int half_width, int site, Complex up, Complex down) {
  WalkState w(half_width);
  w.at(site, Spin::up) = up;
  w.at(site, Spin::down) = down;
  return w;
}

Complex& WalkState::at(int site, Spin s) {
  if (site < -half_width_ || site > half_width_) throw PreconditionError("site outside the walk");
  return amps_[static_cast<std::size_t>(site + half_width_)][s == Spin::up ? 0 : 1];
}

Complex WalkState::at(int site, Spin s) const {
  if (site < -half_width_ || site > half_width_) return {};
  return amps_[static_cast<std::size_t>(site + half_width_)][s == Spin::up ? 0 : 1];
}

double WalkState::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a[0]) + std::norm(a[1]);
  return s;
}

double WalkState::mean() const {
  double s = 0.0;
  double n = 0.0;
  for (int j = -half_width_; j <= half_width_; ++j) {
    const auto& a = amps_[static_cast<std::size_t>(j + half_width_)];
    const double p = std::norm(a[0]) + std::norm(a[1]);
    s += j * p;
    n += p;
  }
  return s / n;
}

double WalkState::stddev() const {
  const double m = mean();
  double s = 0.0;
  double n = 0.0;
  for (int j = -half_width_; j <= half_width_; ++j) {
    const auto& a = amps_[static_cast<std::size_t>(j + half_width_)];
    const double p = std::norm(a[0]) + std::norm(a[1]);
    s += (j - m) * (j - m) * p;
    n += p;
  }
  return std::sqrt(s / n);
}

int WalkState::support_radius() const {
  int r = -1;
  for (int j = -half_width_; j <= half_width_; ++j) {
    const auto& a = amps_[static_cast<std::size_t>(j + half_width_)];
    if (a[0] != Complex{} || a[1] != Complex{}) r = std::max(r, std::abs(j));
  }
  return r;
}

WalkResult walk_run(const WalkState& initial, double theta, int n_steps) {
  if (n_steps < 0) throw PreconditionError("negative step count");
  if (initial.support_radius() + n_steps >= initial.half_width()) {
    throw PreconditionError("walk of " + std::to_string(n_steps) +
                            " steps would reach the lattice boundary");
  }
  const double c = std::cos(0.5 * theta);
  const Complex mis{0.0, -std::sin(0.5 * theta)};
  WalkResult out{initial, {initial.mean()}, {initial.stddev()}};
  auto& amps = out.final_state.amplitudes();
  const std::size_t n = amps.size();
  std::vector<std::array<Complex, 2>> next(n);
  for (int step = 0; step < n_steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      next[i][0] = i > 0 ? amps[i - 1][0] : Complex{};
      next[i][1] = i + 1 < n ? amps[i + 1][1] : Complex{};
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Complex u = next[i][0];
      const Complex d = next[i][1];
      amps[i][0] = c * u + mis * d;
      amps[i][1] = c * d + mis * u;
    }
    out.mean.push_back(out.final_state.mean());
    out.stddev.push_back(out.final_state.stddev());
  }
  return out;
}

DiracMapResult dirac_map_run(const SpinorState& initial, const DiracMapConfig& config,
                             int n_steps) {
  if (n_steps < 0) throw PreconditionError("negative step count");
  const Grid& grid = initial.grid;
  const std::size_t n = grid.size();
  const FftPlan fft(n);

  // U1: psi_up(x) -> psi_up(x - d), psi_down(x) -> psi_down(x + d).
  ComplexArray shift_up(n);
  ComplexArray shift_down(n);
  ComplexArray u3(n, Complex{1.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) {
    const double k = grid.k(j);
    shift_up[j] = std::polar(1.0, -k * config.d_step) / static_cast<double>(n);
    shift_down[j] = std::polar(1.0, k * config.d_step) / static_cast<double>(n);
    if (config.step) u3[j] = std::polar(1.0, -(*config.step)(grid.x(j)) * config.period);
  }
  const double c = std::cos(0.5 * config.theta);
  const Complex mis{0.0, -std::sin(0.5 * config.theta)};

  DiracMapResult out{initial, {}};
  auto& st = out.final_state;
  out.series.push(0.0, moments(st));
  for (int step = 1; step <= n_steps; ++step) {
    fft.forward(st.up.data());
    fft.forward(st.down.data());
    for (std::size_t j = 0; j < n; ++j) {
      st.up[j] *= shift_up[j];
      st.down[j] *= shift_down[j];
    }
    fft.backward(st.up.data());
    fft.backward(st.down.data());
    for (std::size_t j = 0; j < n; ++j) {
      const Complex u = st.up[j];
      const Complex d = st.down[j];
      st.up[j] = u3[j] * (c * u + mis * d);
      st.down[j] = u3[j] * (c * d + mis * u);
    }
    out.series.push(step * config.period, moments(st));
  }
  return out;
}

DiracSpectrum effective_dirac_spectrum(double p, const DiracMapConfig& config) {
  DiracSpectrum s;
  const double dp = config.d_step * p;
  const double half_theta = 0.5 * config.theta;
  s.e_plus = std::sqrt(dp * dp + half_theta * half_theta);
  s.e_minus = -s.e_plus;
  s.zitter_frequency = config.period > 0.0 ? (s.e_plus - s.e_minus) / config.period : 0.0;
  s.effective_mass = config.d_step != 0.0 ? config.theta / (2.0 * config.d_step) : INFINITY;
  return s;
}

double transport_velocity_bound(double d_lattice, double band_width, double f1, double omega,
                                int order) {
  if (!(omega > 0.0)) throw PreconditionError("drive frequency must be positive");
  const double arg = d_lattice * f1 / omega;
  // J_n(-x) = (-1)^n J_n(x); the standard function only takes x >= 0.
  double bessel = std::cyl_bessel_j(static_cast<double>(std::abs(order)), std::abs(arg));
  if (arg < 0.0 && std::abs(order) % 2 == 1) bessel = -bessel;
  if (order < 0 && std::abs(order) % 2 == 1) bessel = -bessel;
  return 0.5 * d_lattice * band_width * bessel;
}

BlochScales bloch_scales(const PhysicalParams& params, double force_si) {
  if (force_si == 0.0) throw PreconditionError("Bloch scales need a non-zero force");
  BlochScales s;
  s.band_width = ground_band_width(params.depth());
  s.period_si = 4.0 * std::numbers::pi * constants::hbar / (params.wavelength() * std::abs(force_si));
  s.period = to_dimensionless(params, s.period_si, QuantityKind::time);
  s.max_displacement_si = s.band_width * params.recoil_energy() / std::abs(force_si);
  s.max_displacement = to_dimensionless(params, s.max_displacement_si, QuantityKind::length);
  return s;
}

}  // namespace spinorwalk
