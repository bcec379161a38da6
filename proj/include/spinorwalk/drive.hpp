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

#include <optional>
#include <variant>
#include <vector>

namespace spinorwalk {

/// Force on one spin component as a function of the time since the start
/// of its segment. Positive forces push towards +x.
struct ForceLaw {
  enum class Kind { none, constant, cosine, sine };

  Kind kind = Kind::none;
  double amplitude = 0.0;
  double period = 0.0;  // drive period, used by cosine and sine

  static ForceLaw none() { return {}; }
  static ForceLaw constant(double f) { return {Kind::constant, f, 0.0}; }
  static ForceLaw cosine(double f, double period) { return {Kind::cosine, f, period}; }
  static ForceLaw sine(double f, double period) { return {Kind::sine, f, period}; }

  ForceLaw negated() const { return {kind, -amplitude, period}; }

  double operator()(double t) const;
  /// Closed-form integral of the force over [0, t].
  double impulse(double t) const;
};

/// Microwave coupling Omega switched on over [start, end) of a segment.
struct RabiWindow {
  double start = 0.0;
  double end = 0.0;
  double omega = 0.0;
};

struct DriveSegment {
  double duration = 0.0;
  ForceLaw force_up;
  ForceLaw force_down;
  std::vector<RabiWindow> rabi;

  /// integral of Omega over [t0, t1] (segment-local times).
  double rabi_angle(double t0, double t1) const;
};

enum class PulseMode { instantaneous, finite };

/// Coin rotation exp(-i angle sigma_x / 2) at protocol time `time`. A finite
/// pulse instead drives Omega = angle / duration over [time, time + duration).
struct Pulse {
  double time = 0.0;
  double angle = 0.0;
  PulseMode mode = PulseMode::instantaneous;
  double duration = 0.0;
};

/// V_s/2 (tanh((x - x_s)/w) + 1).
struct StepPotential {
  double height = 0.0;
  double center = 0.0;
  double width = 1.0;

  double operator()(double x) const;
};

/// Accumulated impulse A_s(t) = -integral_0^t F_s per spin component on the
/// protocol clock. The lab-frame wave function is exp(-i A_s x) times the
/// stored (gauged) one.
struct GaugeRecord {
  double time = 0.0;
  double a_up = 0.0;
  double a_down = 0.0;

  double chi() const { return a_up - a_down; }
};

using TimelineItem = std::variant<DriveSegment, Pulse>;

struct Protocol {
  std::vector<TimelineItem> timeline;

  double total_duration() const;
  /// Time-ordering and boundary checks; ConfigError on violation.
  void validate() const;
};

/// `n_periods` identical segments of length `period`, each followed by a coin
/// pulse of `angle` when one is given.
Protocol make_periodic_protocol(const ForceLaw& force_up, const ForceLaw& force_down,
                                double period, int n_periods, std::optional<double> angle,
                                PulseMode mode = PulseMode::instantaneous,
                                double pulse_duration = 0.0);

/// `n_periods` drive periods with opposite forces +-F sin(2 pi t / T) on the
/// two spin components, and a pulse of `angle` after every period.
Protocol make_walk_protocol(double force_amplitude, double period, int n_periods, double angle,
                            PulseMode mode = PulseMode::instantaneous, double pulse_duration = 0.0,
                            double force_ratio_down = -1.0);

}  // namespace spinorwalk
