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

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "spinorwalk/aligned.hpp"
#include "spinorwalk/grid.hpp"
#include "spinorwalk/spinor_state.hpp"

namespace spinorwalk::test {

/// Normalised spinor Gaussian exp(-(x-x0)^2/4s^2 + i k0 x) with the given spin weights.
inline SpinorState gaussian(const Grid& g, double x0, double s, double k0, Complex up,
                            Complex down) {
  SpinorState st(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    const Complex e = std::exp(Complex{-(x - x0) * (x - x0) / (4.0 * s * s), k0 * x});
    st.up[j] = up * e;
    st.down[j] = down * e;
  }
  st.normalize();
  return st;
}

inline SpinorState random_state(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  SpinorState st(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    st.up[j] = {n(rng), n(rng)};
    st.down[j] = {n(rng), n(rng)};
  }
  st.normalize();
  return st;
}

/// Fresh empty directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("spinorwalk_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace spinorwalk::test
