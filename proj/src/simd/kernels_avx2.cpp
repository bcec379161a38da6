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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "spinorwalk/simd/kernels.hpp"

namespace spinorwalk::simd {

namespace {

// A __m256d holds two interleaved complex numbers [re0, im0, re1, im1].
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_swap, b_im));
}

// conj(a) * b
inline __m256d cmul_conj(__m256d a, __m256d b) {
  const __m256d sign = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  return cmul(_mm256_xor_pd(a, sign), b);
}

inline __m256d load2(const Complex* p) { return _mm256_load_pd(reinterpret_cast<const double*>(p)); }
inline __m256d loadu2(const Complex* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}
inline void storeu2(Complex* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d pair(Complex a, Complex b) { return _mm256_set_pd(b.imag(), b.real(), a.imag(), a.real()); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Phases exp(i theta_j) with theta_j = theta0 + j step are produced by
// complex recurrence, resynchronised exactly every kBlock points.
constexpr std::size_t kBlock = 64;

void multiply(Complex* data, const Complex* factors, std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    storeu2(data + j, cmul(loadu2(data + j), loadu2(factors + j)));
  }
  for (; j < n; ++j) data[j] *= factors[j];
}

void multiply_chirp(Complex* data, const Complex* factors, std::size_t n, Complex scale,
                    double k_start, double dk, double shift) {
  const Complex z = std::polar(1.0, shift * dk);
  const __m256d z2 = pair(z * z, z * z);
  std::size_t j = 0;
  while (j + 2 <= n) {
    const std::size_t end = std::min(n, j + kBlock) & ~std::size_t{1};
    const double k = k_start + static_cast<double>(j) * dk;
    const Complex w0 = scale * std::polar(1.0, shift * k);
    __m256d w = pair(w0, w0 * z);
    for (; j < end; j += 2) {
      const __m256d f = cmul(loadu2(factors + j), w);
      storeu2(data + j, cmul(loadu2(data + j), f));
      w = cmul(w, z2);
    }
  }
  for (; j < n; ++j) {
    const double k = k_start + static_cast<double>(j) * dk;
    data[j] *= scale * factors[j] * std::polar(1.0, shift * k);
  }
}

void rotate_spin(Complex* up, Complex* down, std::size_t n, double cos_a, double sin_a,
                 double x_start, double dx, double chi) {
  const __m256d c = _mm256_set1_pd(cos_a);
  const __m256d mis = pair({0.0, -sin_a}, {0.0, -sin_a});
  const Complex z = std::polar(1.0, chi * dx);
  const __m256d z2 = pair(z * z, z * z);
  const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t j = 0;
  while (j + 2 <= n) {
    const std::size_t end = std::min(n, j + kBlock) & ~std::size_t{1};
    const Complex p0 = std::polar(1.0, chi * (x_start + static_cast<double>(j) * dx));
    __m256d p = pair(p0, p0 * z);
    for (; j < end; j += 2) {
      const __m256d u = loadu2(up + j);
      const __m256d d = loadu2(down + j);
      const __m256d pc = _mm256_xor_pd(p, conj_mask);
      const __m256d new_u = _mm256_fmadd_pd(c, u, cmul(mis, cmul(p, d)));
      const __m256d new_d = _mm256_fmadd_pd(c, d, cmul(mis, cmul(pc, u)));
      storeu2(up + j, new_u);
      storeu2(down + j, new_d);
      p = cmul(p, z2);
    }
  }
  for (; j < n; ++j) {
    const Complex phase = std::polar(1.0, chi * (x_start + static_cast<double>(j) * dx));
    const Complex u = up[j];
    const Complex d = down[j];
    up[j] = cos_a * u + Complex{0.0, -sin_a} * phase * d;
    down[j] = cos_a * d + Complex{0.0, -sin_a} * std::conj(phase) * u;
  }
}

MomentSums moments(const Complex* up, const Complex* down, std::size_t n, double x_start,
                   double dx, double chi) {
  __m256d nu = _mm256_setzero_pd();
  __m256d nd = _mm256_setzero_pd();
  __m256d xu = _mm256_setzero_pd();
  __m256d xd = _mm256_setzero_pd();
  __m256d x2 = _mm256_setzero_pd();
  __m256d coh = _mm256_setzero_pd();
  const Complex z = std::polar(1.0, chi * dx);
  const __m256d z2 = pair(z * z, z * z);
  const __m256d two_dx = _mm256_set1_pd(2.0 * dx);
  std::size_t j = 0;
  while (j + 2 <= n) {
    const std::size_t end = std::min(n, j + kBlock) & ~std::size_t{1};
    const double xj = x_start + static_cast<double>(j) * dx;
    const Complex p0 = std::polar(1.0, chi * xj);
    __m256d p = pair(p0, p0 * z);
    __m256d x = _mm256_set_pd(xj + dx, xj + dx, xj, xj);
    for (; j < end; j += 2) {
      const __m256d u = loadu2(up + j);
      const __m256d d = loadu2(down + j);
      const __m256d pu = _mm256_mul_pd(u, u);
      const __m256d pd = _mm256_mul_pd(d, d);
      nu = _mm256_add_pd(nu, pu);
      nd = _mm256_add_pd(nd, pd);
      xu = _mm256_fmadd_pd(x, pu, xu);
      xd = _mm256_fmadd_pd(x, pd, xd);
      x2 = _mm256_fmadd_pd(_mm256_mul_pd(x, x), _mm256_add_pd(pu, pd), x2);
      coh = _mm256_add_pd(coh, cmul(cmul_conj(u, d), p));
      p = cmul(p, z2);
      x = _mm256_add_pd(x, two_dx);
    }
  }
  MomentSums s;
  s.norm_up = hsum(nu);
  s.norm_down = hsum(nd);
  s.x_up = hsum(xu);
  s.x_down = hsum(xd);
  s.x2_total = hsum(x2);
  alignas(32) double c[4];
  _mm256_store_pd(c, coh);
  s.coherence = Complex{c[0] + c[2], c[1] + c[3]};
  for (; j < n; ++j) {
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
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = loadu2(psi + j);
    const __m256d b = loadu2(psi + j + 2);
    // hadd gives [|p0|^2, |p2|^2, |p1|^2, |p3|^2]; restore order.
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    const __m256d ordered = _mm256_permute4x64_pd(h, 0xD8);
    _mm256_storeu_pd(acc + j, _mm256_add_pd(_mm256_loadu_pd(acc + j), ordered));
  }
  for (; j < n; ++j) acc[j] += std::norm(psi[j]);
}

constexpr KernelTable kAvx2{
    "avx2", &multiply, &multiply_chirp, &rotate_spin, &moments, &accumulate_density,
};

}  // namespace

const KernelTable* avx2_kernels_unchecked() { return &kAvx2; }

}  // namespace spinorwalk::simd
