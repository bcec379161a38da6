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

#include "spinorwalk/simd/kernels.hpp"

#include <cmath>

namespace spinorwalk::simd {

namespace {

void multiply(Complex* data, const Complex* factors, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) data[j] *= factors[j];
}

void multiply_chirp(Complex* data, const Complex* factors, std::size_t n, Complex scale,
                    double k_start, double dk, double shift) {
  for (std::size_t j = 0; j < n; ++j) {
    const double k = k_start + static_cast<double>(j) * dk;
    data[j] *= scale * factors[j] * std::polar(1.0, shift * k);
  }
}

void rotate_spin(Complex* up, Complex* down, std::size_t n, double cos_a, double sin_a,
                 double x_start, double dx, double chi) {
  const Complex mi_sin{0.0, -sin_a};
  for (std::size_t j = 0; j < n; ++j) {
    const Complex phase = std::polar(1.0, chi * (x_start + static_cast<double>(j) * dx));
    const Complex u = up[j];
    const Complex d = down[j];
    up[j] = cos_a * u + mi_sin * phase * d;
    down[j] = cos_a * d + mi_sin * std::conj(phase) * u;
  }
}

MomentSums moments(const Complex* up, const Complex* down, std::size_t n, double x_start,
                   double dx, double chi) {
  MomentSums s;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = x_start + static_cast<double>(j) * dx;
    const double pu = std::norm(up[j]);
    const double pd = std::norm(down[j]);
    s.norm_up += pu;
    s.norm_down += pd;
    s.x_up += x * pu;
    s.x_down += x * pd;
    s.x2_total += x * x * (pu + pd);
    s.coherence += std::conj(up[j]) * down[j] * std::polar(1.0, chi * x);
  }
  return s;
}

void accumulate_density(double* acc, const Complex* psi, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) acc[j] += std::norm(psi[j]);
}

constexpr KernelTable kScalar{
    "scalar", &multiply, &multiply_chirp, &rotate_spin, &moments, &accumulate_density,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace spinorwalk::simd
