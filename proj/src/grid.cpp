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

#include "spinorwalk/grid.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "spinorwalk/errors.hpp"

namespace spinorwalk {

Grid::Grid(std::size_t n_points, double x_min, double x_max)
    : n_(n_points), x_min_(x_min), x_max_(x_max) {
  if (n_ < 2 || !std::has_single_bit(n_)) {
    throw ConfigError("grid size must be a power of two >= 2, got " + std::to_string(n_));
  }
  if (!(x_max_ > x_min_)) throw ConfigError("grid requires x_max > x_min");
  const double periods = length() / kLatticePeriod;
  if (std::abs(periods - std::round(periods)) > 1e-9 * periods || std::round(periods) < 1.0) {
    throw ConfigError("grid span must be a whole number of lattice periods");
  }
}

Grid Grid::centered(std::size_t n_points, std::size_t n_periods) {
  const double half = 0.5 * static_cast<double>(n_periods) * kLatticePeriod;
  return Grid(n_points, -half, half);
}

std::size_t Grid::n_periods() const {
  return static_cast<std::size_t>(std::llround(length() / kLatticePeriod));
}

double Grid::k(std::size_t j) const {
  const auto n = static_cast<long long>(n_);
  auto i = static_cast<long long>(j);
  if (i >= n / 2) i -= n;
  return static_cast<double>(i) * dk();
}

}  // namespace spinorwalk
