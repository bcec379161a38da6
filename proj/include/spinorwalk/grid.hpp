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
#include <numbers>

namespace spinorwalk {

/// Lattice period of V0 cos^2(x) in units of 1/k0.
inline constexpr double kLatticePeriod = std::numbers::pi;

/// Uniform periodic grid on [x_min, x_max) with its FFT-ordered conjugate
/// wavenumbers. The span is always a whole number of lattice periods.
class Grid {
 public:
  Grid(std::size_t n_points, double x_min, double x_max);

  /// Grid of n_points spanning n_periods lattice periods, centred on x = 0.
  static Grid centered(std::size_t n_points, std::size_t n_periods);

  std::size_t size() const { return n_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double length() const { return x_max_ - x_min_; }
  double dx() const { return length() / static_cast<double>(n_); }
  double dk() const { return 2.0 * std::numbers::pi / length(); }
  double center() const { return 0.5 * (x_min_ + x_max_); }
  std::size_t n_periods() const;

  double x(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx(); }
  /// Wavenumber of FFT bin j: j dk for j < N/2, (j - N) dk otherwise.
  double k(std::size_t j) const;
  double k_max() const { return std::numbers::pi / dx(); }

  bool operator==(const Grid& other) const = default;

 private:
  std::size_t n_;
  double x_min_;
  double x_max_;
};

}  // namespace spinorwalk
