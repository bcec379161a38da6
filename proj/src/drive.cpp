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

#include "spinorwalk/drive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spinorwalk/errors.hpp"

namespace spinorwalk {

double ForceLaw::operator()(double t) const {
  switch (kind) {
    case Kind::none: return 0.0;
    case Kind::constant: return amplitude;
    case Kind::cosine: return amplitude * std::cos(2.0 * std::numbers::pi * t / period);
    case Kind::sine: return amplitude * std::sin(2.0 * std::numbers::pi * t / period);
  }
  return 0.0;
}

double ForceLaw::impulse(double t) const {
  switch (kind) {
    case Kind::none: return 0.0;
    case Kind::constant: return amplitude * t;
    case Kind::cosine: {
      const double omega = 2.0 * std::numbers::pi / period;
      return amplitude * std::sin(omega * t) / omega;
    }
    case Kind::sine: {
      const double omega = 2.0 * std::numbers::pi / period;
      const double s = std::sin(0.5 * omega * t);
      return amplitude * 2.0 * s * s / omega;  // (1 - cos wt) / w
    }
  }
  return 0.0;
}

double DriveSegment::rabi_angle(double t0, double t1) const {
  double angle = 0.0;
  for (const auto& w : rabi) {
    const double lo = std::max(t0, w.start);
    const double hi = std::min(t1, w.end);
    if (hi > lo) angle += w.omega * (hi - lo);
  }
  return angle;
}

double StepPotential::operator()(double x) const {
  return 0.5 * height * (std::tanh((x - center) / width) + 1.0);
}

double Protocol::total_duration() const {
  double t = 0.0;
  for (const auto& item : timeline) {
    if (const auto* seg = std::get_if<DriveSegment>(&item)) t += seg->duration;
  }
  return t;
}

void Protocol::validate() const {
  const double total = total_duration();
  if (!(total > 0.0)) throw ConfigError("protocol duration must be positive");
  double clock = 0.0;
  double last_pulse_end = -1.0;
  const double tol = 1e-9 * std::max(1.0, total);
  for (const auto& item : timeline) {
    if (const auto* seg = std::get_if<DriveSegment>(&item)) {
      if (!(seg->duration > 0.0)) throw ConfigError("segment duration must be positive");
      for (const auto& w : seg->rabi) {
        if (w.start < -tol || w.end > seg->duration + tol || w.end < w.start) {
          throw ConfigError("Rabi window outside its segment");
        }
      }
      for (ForceLaw f : {seg->force_up, seg->force_down}) {
        if ((f.kind == ForceLaw::Kind::cosine || f.kind == ForceLaw::Kind::sine) &&
            !(f.period > 0.0)) {
          throw ConfigError("sinusoidal force needs a positive period");
        }
      }
      clock += seg->duration;
      continue;
    }
    const auto& p = std::get<Pulse>(item);
    if (p.mode == PulseMode::instantaneous) {
      if (std::abs(p.time - clock) > tol) {
        throw ConfigError("instantaneous pulse at t = " + std::to_string(p.time) +
                          " does not coincide with a segment boundary");
      }
      continue;
    }
    if (!(p.duration > 0.0)) throw ConfigError("finite pulse needs a positive duration");
    if (p.time < clock - tol) throw ConfigError("timeline is not time-ordered");
    if (p.time < last_pulse_end - tol) throw ConfigError("overlapping finite pulses");
    if (p.time + p.duration > total + tol) throw ConfigError("finite pulse extends past the end");
    last_pulse_end = p.time + p.duration;
  }
}

Protocol make_periodic_protocol(const ForceLaw& force_up, const ForceLaw& force_down,
                                double period, int n_periods, std::optional<double> angle,
                                PulseMode mode, double pulse_duration) {
  if (n_periods < 1) throw ConfigError("protocol needs at least one period");
  Protocol p;
  DriveSegment seg;
  seg.duration = period;
  seg.force_up = force_up;
  seg.force_down = force_down;
  for (int n = 1; n <= n_periods; ++n) {
    if (angle && mode == PulseMode::finite && n > 1) {
      // The window of the pulse after period n-1 opens at the start of period n.
      p.timeline.emplace_back(Pulse{(n - 1) * period, *angle, PulseMode::finite, pulse_duration});
    }
    p.timeline.emplace_back(seg);
    if (angle && mode == PulseMode::instantaneous) {
      p.timeline.emplace_back(Pulse{n * period, *angle, PulseMode::instantaneous, 0.0});
    }
  }
  return p;
}

Protocol make_walk_protocol(double force_amplitude, double period, int n_periods, double angle,
                            PulseMode mode, double pulse_duration, double force_ratio_down) {
  return make_periodic_protocol(ForceLaw::sine(force_amplitude, period),
                                ForceLaw::sine(force_ratio_down * force_amplitude, period), period,
                                n_periods, angle, mode, pulse_duration);
}

}  // namespace spinorwalk
