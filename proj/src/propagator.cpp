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

#include "spinorwalk/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "spinorwalk/errors.hpp"

namespace spinorwalk {

namespace {

constexpr double kNormDriftLimit = 1e-8;

// 4-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 4> kGlNodes{-0.8611363115940526, -0.3399810435848563,
                                         0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGlWeights{0.3478548451374538, 0.6521451548625461,
                                           0.6521451548625461, 0.3478548451374538};

struct ImpulseIntegrals {
  double first = 0.0;   // integral A ds
  double second = 0.0;  // integral A^2 ds
};

ImpulseIntegrals integrate_impulse(double a_start, const ForceLaw& force, double t0, double t1) {
  ImpulseIntegrals out;
  const double half = 0.5 * (t1 - t0);
  const double mid = 0.5 * (t1 + t0);
  if (force.kind == ForceLaw::Kind::none) {
    out.first = a_start * (t1 - t0);
    out.second = a_start * a_start * (t1 - t0);
    return out;
  }
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
    const double a = a_start - force.impulse(mid + half * kGlNodes[i]);
    out.first += kGlWeights[i] * a;
    out.second += kGlWeights[i] * a * a;
  }
  out.first *= half;
  out.second *= half;
  return out;
}

bool all_ones(const ComplexArray& a) {
  return std::all_of(a.begin(), a.end(), [](const Complex& z) { return z == Complex{1.0, 0.0}; });
}

void check_finite(double norm) {
  if (!std::isfinite(norm)) throw NumericalError("non-finite norm during propagation");
}

}  // namespace

GaugeRecord gauge_at(const GaugeRecord& start, const DriveSegment& segment, double t_local) {
  return {start.time + t_local, start.a_up - segment.force_up.impulse(t_local),
          start.a_down - segment.force_down.impulse(t_local)};
}

SplitStepPropagator::SplitStepPropagator(const Grid& grid, double depth, double dt,
                                         std::optional<StepPotential> step,
                                         const simd::KernelTable* kernels)
    : grid_(grid),
      depth_(depth),
      dt_(dt),
      step_(step),
      kernels_(kernels ? kernels : &simd::active_kernels()),
      fft_(grid.size()),
      kinetic_half_(grid.size()),
      kinetic_full_(grid.size()),
      potential_(grid.size()) {
  if (!(dt_ > 0.0)) throw ConfigError("time step must be positive");
  if (step_ && !(step_->width > 0.0)) throw ConfigError("step width must be positive");
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double k = grid.k(j);
    kinetic_half_[j] = inv_n * std::polar(1.0, -k * k * 0.5 * dt_);
    kinetic_full_[j] = inv_n * std::polar(1.0, -k * k * dt_);
    const double x = grid.x(j);
    const double c = std::cos(x);
    double v = depth_ * c * c;
    if (step_) v += (*step_)(x);
    potential_[j] = std::polar(1.0, -v * dt_);
  }
}

std::size_t SplitStepPropagator::steps_in(double duration) const {
  const double ratio = duration / dt_;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("time step " + std::to_string(dt_) + " does not divide duration " +
                      std::to_string(duration));
  }
  return static_cast<std::size_t>(n);
}

void SplitStepPropagator::kinetic(SpinorState& state, double t0, double t1,
                                  const DriveSegment& segment, const GaugeRecord& start,
                                  bool full_step) const {
  const ComplexArray& factors = full_step ? kinetic_full_ : kinetic_half_;
  const std::size_t n = grid_.size();
  const std::size_t half = n / 2;
  const double dk = grid_.dk();
  const auto apply = [&](ComplexArray& psi, double a_start, const ForceLaw& force) {
    const auto integrals = integrate_impulse(a_start, force, t0, t1);
    // exp(-i (k - A)^2) integrated over [t0, t1].
    const Complex scale = std::polar(1.0, -integrals.second);
    const double shift = 2.0 * integrals.first;
    kernels_->multiply_chirp(psi.data(), factors.data(), half, scale, 0.0, dk, shift);
    kernels_->multiply_chirp(psi.data() + half, factors.data() + half, n - half, scale,
                             -static_cast<double>(half) * dk, dk, shift);
  };
  apply(state.up, start.a_up, segment.force_up);
  apply(state.down, start.a_down, segment.force_down);
}

void SplitStepPropagator::apply_jumps_before(SpinorState& state, double t,
                                             StepControl& control) const {
  bool flip = false;
  while (control.next_jump < control.jump_times.size() &&
         control.jump_times[control.next_jump] < t) {
    flip = !flip;
    ++control.next_jump;
  }
  if (flip) {
    for (auto& z : state.down) z = -z;
  }
}

void SplitStepPropagator::evolve_segment(SpinorState& state, const DriveSegment& segment,
                                         GaugeRecord& gauge, StepControl& control) const {
  if (!(state.grid == grid_)) throw ConfigError("state grid differs from propagator grid");
  const std::size_t n_steps = steps_in(segment.duration);
  const GaugeRecord start = gauge;
  const bool has_potential = !all_ones(potential_);
  const bool has_rabi = !segment.rabi.empty();
  const double loss = control.loss_rate > 0.0 ? std::exp(-0.5 * control.loss_rate * dt_) : 1.0;
  const std::size_t n = grid_.size();

  const auto forward = [&] {
    fft_.forward(state.up.data());
    fft_.forward(state.down.data());
  };
  const auto backward = [&] {
    fft_.backward(state.up.data());
    fft_.backward(state.down.data());
  };

  std::size_t s = 0;
  while (s < n_steps) {
    std::size_t e = n_steps;
    if (control.sync_stride > 0) {
      const std::size_t to_next = control.sync_stride - control.global_step % control.sync_stride;
      e = std::min(n_steps, s + to_next);
    }
    const double norm_before = state.norm();

    forward();
    kinetic(state, s * dt_, (s + 0.5) * dt_, segment, start, false);
    for (std::size_t step = s; step < e; ++step) {
      backward();
      const double t_mid = (static_cast<double>(step) + 0.5) * dt_;
      apply_jumps_before(state, start.time + t_mid, control);
      if (has_potential) {
        kernels_->multiply(state.up.data(), potential_.data(), n);
        kernels_->multiply(state.down.data(), potential_.data(), n);
      }
      if (has_rabi) {
        const double angle = segment.rabi_angle(t_mid - 0.5 * dt_, t_mid + 0.5 * dt_);
        if (angle != 0.0) {
          const double chi = gauge_at(start, segment, t_mid).chi();
          kernels_->rotate_spin(state.up.data(), state.down.data(), n, std::cos(0.5 * angle),
                                std::sin(0.5 * angle), grid_.x_min(), grid_.dx(), chi);
        }
      }
      if (loss != 1.0) {
        for (auto& z : state.up) z *= loss;
        for (auto& z : state.down) z *= loss;
      }
      forward();
      if (step + 1 < e) {
        kinetic(state, t_mid, t_mid + dt_, segment, start, true);
      } else {
        kinetic(state, t_mid, (step + 1.0) * dt_, segment, start, false);
      }
    }
    backward();

    control.global_step += e - s;
    s = e;
    gauge = gauge_at(start, segment, s * dt_);
    if (s == n_steps) gauge.time = start.time + segment.duration;

    const double norm_after = state.norm();
    check_finite(norm_after);
    if (control.loss_rate == 0.0 && std::abs(norm_after - norm_before) > kNormDriftLimit) {
      throw NumericalError("norm drifted by " + std::to_string(norm_after - norm_before) +
                           " within a segment");
    }
    if (s == n_steps) {
      apply_jumps_before(state, std::nextafter(gauge.time, INFINITY), control);
    }
    if (control.on_sync) control.on_sync(state, gauge);
  }
}

void SplitStepPropagator::evolve_segment(SpinorState& state, const DriveSegment& segment,
                                         GaugeRecord& gauge) const {
  StepControl control;
  evolve_segment(state, segment, gauge, control);
}

void SplitStepPropagator::apply_pulse(SpinorState& state, double angle,
                                      const GaugeRecord& gauge) const {
  kernels_->rotate_spin(state.up.data(), state.down.data(), grid_.size(), std::cos(0.5 * angle),
                        std::sin(0.5 * angle), grid_.x_min(), grid_.dx(), gauge.chi());
}

void SplitStepPropagator::evolve_free(SpinorState& state, long steps) const {
  if (steps == 0) return;
  const bool backwards = steps < 0;
  const auto count = static_cast<std::size_t>(backwards ? -steps : steps);
  auto pick = [&](const ComplexArray& a) {
    ComplexArray out(a);
    if (backwards) {
      for (auto& z : out) z = std::conj(z);
    }
    return out;
  };
  const ComplexArray half = pick(kinetic_half_);
  const ComplexArray full = pick(kinetic_full_);
  const ComplexArray pot = pick(potential_);
  const std::size_t n = grid_.size();
  auto each = [&](auto&& fn) {
    fn(state.up);
    fn(state.down);
  };
  each([&](ComplexArray& psi) {
    fft_.forward(psi.data());
    kernels_->multiply(psi.data(), half.data(), n);
  });
  for (std::size_t step = 0; step < count; ++step) {
    each([&](ComplexArray& psi) {
      fft_.backward(psi.data());
      kernels_->multiply(psi.data(), pot.data(), n);
      fft_.forward(psi.data());
      kernels_->multiply(psi.data(), step + 1 < count ? full.data() : half.data(), n);
    });
  }
  each([&](ComplexArray& psi) { fft_.backward(psi.data()); });
}

SpinorState to_lab_frame(const SpinorState& gauged, const GaugeRecord& gauge) {
  SpinorState out = gauged;
  for (std::size_t j = 0; j < out.grid.size(); ++j) {
    const double x = out.grid.x(j);
    out.up[j] *= std::polar(1.0, -gauge.a_up * x);
    out.down[j] *= std::polar(1.0, -gauge.a_down * x);
  }
  return out;
}

SpinorState to_gauged_frame(const SpinorState& lab, const GaugeRecord& gauge) {
  SpinorState out = lab;
  for (std::size_t j = 0; j < out.grid.size(); ++j) {
    const double x = out.grid.x(j);
    out.up[j] *= std::polar(1.0, gauge.a_up * x);
    out.down[j] *= std::polar(1.0, gauge.a_down * x);
  }
  return out;
}

namespace {

// Finite pulses become Rabi windows on the segments they overlap.
std::vector<TimelineItem> resolve_finite_pulses(const Protocol& protocol) {
  std::vector<Pulse> finite;
  std::vector<TimelineItem> items;
  for (const auto& item : protocol.timeline) {
    const auto* p = std::get_if<Pulse>(&item);
    if (p && p->mode == PulseMode::finite) {
      finite.push_back(*p);
    } else {
      items.push_back(item);
    }
  }
  if (finite.empty()) return items;
  double clock = 0.0;
  for (auto& item : items) {
    auto* seg = std::get_if<DriveSegment>(&item);
    if (!seg) continue;
    const double end = clock + seg->duration;
    for (const auto& p : finite) {
      const double lo = std::max(clock, p.time);
      const double hi = std::min(end, p.time + p.duration);
      if (hi > lo) seg->rabi.push_back({lo - clock, hi - clock, p.angle / p.duration});
    }
    clock = end;
  }
  return items;
}

}  // namespace

ProtocolResult run_protocol(const SplitStepPropagator& propagator, const SpinorState& initial,
                            const Protocol& protocol, const RunOptions& options) {
  protocol.validate();
  const auto items = resolve_finite_pulses(protocol);

  ProtocolResult result{ObservableSeries{}, initial, GaugeRecord{}, {}};
  SpinorState& state = result.final_state;
  GaugeRecord& gauge = result.final_gauge;

  const std::size_t stride =
      options.sample_interval > 0.0 ? propagator.steps_in(options.sample_interval) : 0;
  std::vector<double> jumps = options.jump_times;
  std::sort(jumps.begin(), jumps.end());

  std::size_t sync = stride;
  if (options.sync_every_steps > 0) {
    if (stride > 0 && stride % options.sync_every_steps != 0) {
      throw ConfigError("sync interval must divide the sample interval");
    }
    sync = options.sync_every_steps;
  }
  // With a loss rate the stored state is not normalised; observables are
  // reported for the normalised state.
  const auto observe = [&](const SpinorState& s, const GaugeRecord& g) {
    Moments m = moments(s, g.chi());
    if (options.loss_rate > 0.0 && m.norm > 0.0) {
      m.pop_up /= m.norm;
      m.pop_down /= m.norm;
      m.coherence /= m.norm;
      m.norm = 1.0;
    }
    return m;
  };

  StepControl control;
  control.sync_stride = sync;
  control.jump_times = jumps;
  control.loss_rate = options.loss_rate;
  double last_sample = 0.0;
  control.on_sync = [&](SpinorState& s, const GaugeRecord& g) {
    if (options.on_sync) options.on_sync(s, g);
    if (stride > 0 && control.global_step % stride == 0) {
      result.series.push(g.time, observe(s, g));
      last_sample = g.time;
      if (options.on_sample) options.on_sample(s, g);
    }
  };

  result.series.push(0.0, observe(state, gauge));
  if (options.on_sample) options.on_sample(state, gauge);
  if (options.record_snapshots) result.snapshots.push_back(snapshot(state, 0.0));

  for (const auto& item : items) {
    if (const auto* seg = std::get_if<DriveSegment>(&item)) {
      propagator.evolve_segment(state, *seg, gauge, control);
      if (options.record_snapshots) result.snapshots.push_back(snapshot(state, gauge.time));
    } else {
      propagator.apply_pulse(state, std::get<Pulse>(item).angle, gauge);
    }
  }
  if (result.series.times.back() < gauge.time && last_sample < gauge.time) {
    result.series.push(gauge.time, observe(state, gauge));
  }
  return result;
}

double measure_step_displacement(const SplitStepPropagator& propagator,
                                 const DriveSegment& segment, const SpinorState& initial) {
  const bool use_up = initial.population(Spin::up) >= initial.population(Spin::down);
  const ComplexArray& profile = initial.component(use_up ? Spin::up : Spin::down);

  auto displacement = [&](Spin s) {
    SpinorState st(initial.grid);
    st.component(s) = profile;
    st.normalize();
    const double before = moments(st).x_mean;
    GaugeRecord gauge;
    propagator.evolve_segment(st, segment, gauge);
    return moments(st).x_mean - before;
  };
  const double d_up = displacement(Spin::up);
  const double d_down = displacement(Spin::down);
  const double scale = std::max(std::abs(d_up), 1e-9);
  const double mirror = segment.force_down.amplitude == -segment.force_up.amplitude &&
                                segment.force_down.kind == segment.force_up.kind
                            ? 0.01
                            : INFINITY;
  if (std::abs(d_up + d_down) > mirror * scale) {
    throw NumericalError("spin-down displacement " + std::to_string(d_down) +
                         " is not the mirror of " + std::to_string(d_up));
  }
  return d_up;
}

}  // namespace spinorwalk
