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

#include "spinorwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "spinorwalk/errors.hpp"
#include "spinorwalk/simd/kernels.hpp"

namespace spinorwalk {

namespace {

Moments finish(const simd::MomentSums& s, double dx) {
  Moments m;
  m.pop_up = s.norm_up * dx;
  m.pop_down = s.norm_down * dx;
  m.norm = m.pop_up + m.pop_down;
  m.coherence = s.coherence * dx;
  if (!(m.norm > 0.0)) return m;
  const double total = s.norm_up + s.norm_down;
  m.x_mean = (s.x_up + s.x_down) / total;
  m.x2_mean = s.x2_total / total;
  m.x_std = std::sqrt(std::max(0.0, m.x2_mean - m.x_mean * m.x_mean));
  if (s.norm_up > 0.0) m.x_mean_up = s.x_up / s.norm_up;
  if (s.norm_down > 0.0) m.x_mean_down = s.x_down / s.norm_down;
  return m;
}

}  // namespace

Moments moments(const SpinorState& state, double chi) {
  const auto& g = state.grid;
  const auto sums = simd::active_kernels().moments(state.up.data(), state.down.data(), g.size(),
                                                   g.x_min(), g.dx(), chi);
  return finish(sums, g.dx());
}

Moments moments_from_density(const Grid& grid, std::span<const double> density_up,
                             std::span<const double> density_down, Complex coherence) {
  if (density_up.size() != grid.size() || density_down.size() != grid.size()) {
    throw ConfigError("density size does not match grid");
  }
  simd::MomentSums s;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    s.norm_up += density_up[j];
    s.norm_down += density_down[j];
    s.x_up += x * density_up[j];
    s.x_down += x * density_down[j];
    s.x2_total += x * x * (density_up[j] + density_down[j]);
  }
  auto m = finish(s, grid.dx());
  m.coherence = coherence;
  return m;
}

void ObservableSeries::push(double t, const Moments& m) {
  times.push_back(t);
  x_mean_total.push_back(m.x_mean);
  x_mean_up.push_back(m.x_mean_up);
  x_mean_down.push_back(m.x_mean_down);
  x_std.push_back(m.x_std);
  x2_mean.push_back(m.x2_mean);
  pop_up.push_back(m.pop_up);
  pop_down.push_back(m.pop_down);
  coherence.push_back(m.coherence);
  norm.push_back(m.norm);
}

Moments ObservableSeries::at(std::size_t i) const {
  Moments m;
  m.norm = norm.at(i);
  m.pop_up = pop_up.at(i);
  m.pop_down = pop_down.at(i);
  m.x_mean = x_mean_total.at(i);
  m.x2_mean = x2_mean.at(i);
  m.x_std = x_std.at(i);
  m.x_mean_up = x_mean_up.at(i);
  m.x_mean_down = x_mean_down.at(i);
  m.coherence = coherence.at(i);
  return m;
}

DensitySnapshot snapshot(const SpinorState& state, double time) {
  DensitySnapshot s{time, RealArray(state.grid.size(), 0.0), RealArray(state.grid.size(), 0.0)};
  const auto& k = simd::active_kernels();
  k.accumulate_density(s.up.data(), state.up.data(), state.grid.size());
  k.accumulate_density(s.down.data(), state.down.data(), state.grid.size());
  return s;
}

ExponentFit fit_diffusion_exponent(const ObservableSeries& series, double t_min) {
  return fit_diffusion_exponent(series.times, series.x_std, t_min);
}

ExponentFit fit_diffusion_exponent(std::span<const double> times, std::span<const double> widths,
                                   double t_min) {
  if (times.size() != widths.size() || times.empty()) {
    throw FitError("time and width series differ in length");
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > t_min)) continue;
    if (!(widths[i] > widths[0])) {
      throw FitError("width at t = " + std::to_string(times[i]) + " does not exceed the initial width");
    }
    lx.push_back(std::log(times[i]));
    ly.push_back(std::log(widths[i]));
  }
  const std::size_t n = lx.size();
  if (n < 8) throw FitError("need at least 8 samples after t_min, have " + std::to_string(n));

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("degenerate time samples");
  ExponentFit fit;
  fit.alpha = sxy / sxx;
  fit.n_samples = n;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (my + fit.alpha * (lx[i] - mx));
    ssr += r * r;
  }
  fit.stderr_alpha = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return fit;
}

double compare_densities(std::span<const double> a, std::span<const double> b, double dx) {
  if (a.size() != b.size()) throw ConfigError("densities live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::min(a[i], b[i]);
  return std::clamp(s * dx, 0.0, 1.0);
}

double compare_densities(const Grid& grid_a, std::span<const double> a, const Grid& grid_b,
                         std::span<const double> b) {
  if (!(grid_a == grid_b)) throw ConfigError("densities live on different grids");
  return compare_densities(a, b, grid_a.dx());
}

std::vector<std::size_t> find_extrema(std::span<const double> values, double min_prominence) {
  std::vector<std::size_t> out;
  if (values.size() < 3) return out;
  int direction = 0;  // +1 looking for a maximum, -1 for a minimum
  std::size_t candidate = 0;
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double v = values[i];
    if (direction == 0) {
      if (v > values[hi]) hi = i;
      if (v < values[lo]) lo = i;
      if (v - values[lo] > min_prominence) {
        direction = +1;
        candidate = i;
      } else if (values[hi] - v > min_prominence) {
        direction = -1;
        candidate = i;
      }
    } else if (direction > 0) {
      if (v >= values[candidate]) {
        candidate = i;
      } else if (values[candidate] - v > min_prominence) {
        out.push_back(candidate);
        direction = -1;
        candidate = i;
      }
    } else {
      if (v <= values[candidate]) {
        candidate = i;
      } else if (v - values[candidate] > min_prominence) {
        out.push_back(candidate);
        direction = +1;
        candidate = i;
      }
    }
  }
  return out;
}

std::optional<double> oscillation_period(std::span<const double> times,
                                         std::span<const double> values, double min_prominence) {
  const auto ext = find_extrema(values, min_prominence);
  if (ext.size() < 2) return std::nullopt;
  const double span = times[ext.back()] - times[ext.front()];
  return 2.0 * span / static_cast<double>(ext.size() - 1);
}

std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  if (x.size() != y.size() || x.size() < static_cast<std::size_t>(degree + 1) || degree < 0) {
    throw FitError("not enough points for a polynomial fit");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  // Fit in a rescaled variable for conditioning, then expand.
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const double mid = 0.5 * (*xmin_it + *xmax_it);
  const double half = std::max(0.5 * (*xmax_it - *xmin_it), 1e-300);
  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = (x[i] - mid) / half;
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      a(i, d) = p;
      p *= u;
    }
    b(i) = y[i];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  // c_d u^d with u = (x - mid)/half; expand into powers of x.
  std::vector<double> out(degree + 1, 0.0);
  for (int d = 0; d <= degree; ++d) {
    // (x - mid)^d / half^d = sum_k binom(d,k) x^k (-mid)^{d-k} / half^d
    double binom = 1.0;
    for (int k = 0; k <= d; ++k) {
      out[k] += c(d) * binom * std::pow(-mid, d - k) / std::pow(half, d);
      binom = binom * (d - k) / (k + 1);
    }
  }
  return out;
}

double detrended_peak_to_trough(std::span<const double> times, std::span<const double> values,
                                int degree) {
  const auto c = polyfit(times, values, degree);
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double trend = 0.0;
    for (int d = degree; d >= 0; --d) trend = trend * times[i] + c[d];
    const double r = values[i] - trend;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi - lo;
}

}  // namespace spinorwalk
