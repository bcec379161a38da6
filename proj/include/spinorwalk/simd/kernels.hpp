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
#include <string_view>

#include "spinorwalk/aligned.hpp"

namespace spinorwalk::simd {

/// Raw sums over a grid; callers multiply by dx.
struct MomentSums {
  double norm_up = 0.0;
  double norm_down = 0.0;
  double x_up = 0.0;     // sum x |up|^2
  double x_down = 0.0;   // sum x |down|^2
  double x2_total = 0.0; // sum x^2 (|up|^2 + |down|^2)
  Complex coherence{0.0, 0.0};  // sum exp(i chi x) conj(up) down
};

/// Inner loops of the split-step integrator. Every implementation computes
/// the same mathematical result; the reference table is plain scalar C++.
struct KernelTable {
  std::string_view name;

  /// data[j] *= factors[j]
  void (*multiply)(Complex* data, const Complex* factors, std::size_t n);

  /// data[j] *= scale * factors[j] * exp(i shift (k_start + j dk))
  void (*multiply_chirp)(Complex* data, const Complex* factors, std::size_t n, Complex scale,
                         double k_start, double dk, double shift);

  /// Pointwise cos(a) - i sin(a) [[0, e^{i chi x}], [e^{-i chi x}, 0]] with
  /// x = x_start + j dx.
  void (*rotate_spin)(Complex* up, Complex* down, std::size_t n, double cos_a, double sin_a,
                      double x_start, double dx, double chi);

  MomentSums (*moments)(const Complex* up, const Complex* down, std::size_t n, double x_start,
                        double dx, double chi);

  /// acc[j] += |psi[j]|^2
  void (*accumulate_density)(double* acc, const Complex* psi, std::size_t n);
};

const KernelTable& scalar_kernels();

/// AVX2+FMA table, or nullptr when not compiled in or unsupported by the CPU.
const KernelTable* avx2_kernels();

/// Best table for this CPU. SPINORWALK_KERNELS=scalar forces the reference.
const KernelTable& active_kernels();

}  // namespace spinorwalk::simd
