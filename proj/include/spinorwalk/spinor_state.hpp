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

#include "spinorwalk/aligned.hpp"
#include "spinorwalk/grid.hpp"

namespace spinorwalk {

enum class Spin { up, down };

/// Two-component wave function on a shared grid, normalised so that
/// sum(|up|^2 + |down|^2) dx = 1.
struct SpinorState {
  explicit SpinorState(const Grid& g) : grid(g), up(g.size()), down(g.size()) {}

  Grid grid;
  ComplexArray up;
  ComplexArray down;

  ComplexArray& component(Spin s) { return s == Spin::up ? up : down; }
  const ComplexArray& component(Spin s) const { return s == Spin::up ? up : down; }

  double norm() const;
  double population(Spin s) const;
  void normalize();
};

/// sqrt(sum |a - b|^2 dx) over both components; grids must match.
double distance(const SpinorState& a, const SpinorState& b);

}  // namespace spinorwalk
