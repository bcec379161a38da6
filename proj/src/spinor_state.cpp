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

#include "spinorwalk/spinor_state.hpp"

#include <cmath>

#include "spinorwalk/errors.hpp"

namespace spinorwalk {

namespace {

double sum_abs2(const ComplexArray& a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return s;
}

}  // namespace

double SpinorState::population(Spin s) const { return sum_abs2(component(s)) * grid.dx(); }

double SpinorState::norm() const { return (sum_abs2(up) + sum_abs2(down)) * grid.dx(); }

void SpinorState::normalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalise a zero state");
  const double scale = 1.0 / std::sqrt(n);
  for (auto& z : up) z *= scale;
  for (auto& z : down) z *= scale;
}

double distance(const SpinorState& a, const SpinorState& b) {
  if (!(a.grid == b.grid)) throw ConfigError("states live on different grids");
  double s = 0.0;
  for (std::size_t j = 0; j < a.up.size(); ++j) {
    s += std::norm(a.up[j] - b.up[j]) + std::norm(a.down[j] - b.down[j]);
  }
  return std::sqrt(s * a.grid.dx());
}

}  // namespace spinorwalk
