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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spinorwalk/analysis.hpp"
#include "spinorwalk/band_structure.hpp"
#include "spinorwalk/errors.hpp"
#include "spinorwalk/fft.hpp"
#include "spinorwalk/initial_state.hpp"
#include "spinorwalk/propagator.hpp"
#include "support.hpp"

using namespace spinorwalk;

namespace {

BandStructure bands_for(double depth) {
  return compute_band_structure(PhysicalParams::cesium(1064e-9, depth), 2, 8);
}

SpinorState bloch_packet(const Grid& g, double depth, double sigma_lambda, SpinWeights spin,
                         double kappa0 = 0.0, int band = 0) {
  WavePacketSpec spec;
  spec.sigma_lambda = sigma_lambda;
  spec.spin = spin;
  spec.kappa0 = kappa0;
  spec.band_index = band;
  return prepare_bloch_gaussian(g, bands_for(depth), spec);
}

// <H> and <H^2> - <H>^2 of one component for k^2 + V0 cos^2 x, straight from
// the definitions.
std::pair<double, double> energy_moments(const Grid& g, const ComplexArray& psi, double depth) {
  const std::size_t n = g.size();
  const FftPlan fft(n);
  ComplexArray hpsi = psi;
  fft.forward(hpsi.data());
  for (std::size_t j = 0; j < n; ++j) hpsi[j] *= g.k(j) * g.k(j);
  fft.backward_normalized(hpsi.data());
  for (std::size_t j = 0; j < n; ++j) {
    const double c = std::cos(g.x(j));
    hpsi[j] += depth * c * c * psi[j];
  }
  double norm = 0.0;
  Complex e{};
  double h2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    norm += std::norm(psi[j]);
    e += std::conj(psi[j]) * hpsi[j];
    h2 += std::norm(hpsi[j]);
  }
  const double mean = e.real() / norm;
  return {mean, h2 / norm - mean * mean};
}

// Direct split-step for k^2 + V0 cos^2 x - F x on a padded grid.
SpinorState direct_linear_run(const SpinorState& lab0, double depth, double force, double dt,
                              std::size_t steps) {
  const Grid& g = lab0.grid;
  const std::size_t n = g.size();
  const FftPlan fft(n);
  ComplexArray half_v(n);
  ComplexArray kin(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.x(j);
    const double c = std::cos(x);
    half_v[j] = std::polar(1.0, -0.5 * dt * (depth * c * c - force * x));
    kin[j] = std::polar(1.0, -dt * g.k(j) * g.k(j)) / static_cast<double>(n);
  }
  SpinorState st = lab0;
  for (auto* psi : {&st.up, &st.down}) {
    for (std::size_t s = 0; s < steps; ++s) {
      for (std::size_t j = 0; j < n; ++j) (*psi)[j] *= half_v[j];
      fft.forward(psi->data());
      for (std::size_t j = 0; j < n; ++j) (*psi)[j] *= kin[j];
      fft.backward(psi->data());
      for (std::size_t j = 0; j < n; ++j) (*psi)[j] *= half_v[j];
    }
  }
  return st;
}

}  // namespace

TEST_CASE("Bloch-Gaussian packet has the requested width and band") {
  const auto g = Grid::centered(4096, 256);
  const auto st = bloch_packet(g, 1.0, 6.0, SpinWeights::pure_up());
  const auto m = moments(st);
  CHECK(m.norm == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m.pop_down == 0.0);
  CHECK(std::abs(m.x_mean) < 1e-8);
  CHECK(m.x_std == doctest::Approx(6.0 * 2.0 * std::numbers::pi).epsilon(1e-3));

  const double e0 = solve_bloch(1.0, 0.0, 2).energies[0];
  const double gap = solve_bloch(1.0, 0.0, 2).energies[1] - e0;
  const auto [mean, var] = energy_moments(g, st.up, 1.0);
  CHECK(mean == doctest::Approx(e0).epsilon(1e-3));
  CHECK(std::sqrt(var) < 1e-2 * gap);

  const auto excited = bloch_packet(g, 1.0, 6.0, SpinWeights::pure_down(), 0.0, 1);
  const double e1 = solve_bloch(1.0, 0.0, 2).energies[1];
  CHECK(energy_moments(g, excited.down, 1.0).first == doctest::Approx(e1).epsilon(1e-3));
}

TEST_CASE("packet preparation preconditions") {
  const auto g = Grid::centered(512, 32);
  CHECK_THROWS_AS(bloch_packet(g, 1.0, 6.0, SpinWeights::pure_up()), PreconditionError);
  CHECK_THROWS_AS(bloch_packet(g, 1.0, -1.0, SpinWeights::pure_up()), PreconditionError);
  CHECK_THROWS_AS(bloch_packet(g, 1.0, 1.0, SpinWeights{{0, 0}, {0, 0}}), PreconditionError);
  CHECK_THROWS_AS(bloch_packet(g, 1.0, 1.0, SpinWeights::pure_up(), 0.0, 5), PreconditionError);
}

TEST_CASE("free evolution runs backwards to the start") {
  const auto g = Grid::centered(1024, 64);
  const SplitStepPropagator prop(g, 2.0, 0.01);
  const auto st0 = test::gaussian(g, 3.0, 8.0, 0.7, {0.8, 0.0}, {0.0, 0.6});
  auto st = st0;
  prop.evolve_free(st, 2000);
  CHECK(std::abs(st.norm() - 1.0) < 1e-10);
  CHECK(distance(st, st0) > 0.1);
  prop.evolve_free(st, -2000);
  CHECK(distance(st, st0) < 1e-10);
}

TEST_CASE("driven segment conserves the norm") {
  const auto g = Grid::centered(1024, 64);
  const double period = 40.0;
  const SplitStepPropagator prop(g, 1.0, period / 1024);
  auto st = bloch_packet(g, 1.0, 2.0, SpinWeights{{1.0, 0.0}, {0.0, 1.0}});
  DriveSegment seg{period, ForceLaw::sine(0.05, period), ForceLaw::sine(-0.05, period), {}};
  GaugeRecord gauge;
  for (int i = 0; i < 5; ++i) prop.evolve_segment(st, seg, gauge);
  CHECK(std::abs(st.norm() - 1.0) < 1e-10);
  CHECK(gauge.time == doctest::Approx(5 * period));
  CHECK(std::abs(gauge.a_up) < 1e-12);
  CHECK_THROWS_AS(prop.steps_in(period + 0.3 * prop.dt()), ConfigError);
}

TEST_CASE("split-step error is second order in dt") {
  const auto g = Grid::centered(512, 32);
  const double period = 20.0;
  const auto st0 = bloch_packet(g, 1.0, 1.0, SpinWeights::pure_up(), 0.3);
  const DriveSegment seg{period, ForceLaw::sine(0.2, period), ForceLaw::sine(-0.2, period), {}};
  auto run = [&](int steps) {
    const SplitStepPropagator prop(g, 1.0, period / steps);
    auto st = st0;
    GaugeRecord gauge;
    prop.evolve_segment(st, seg, gauge);
    return st;
  };
  const auto ref = run(8192);
  const double e1 = distance(run(128), ref);
  const double e2 = distance(run(256), ref);
  const double e3 = distance(run(512), ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("gauge frame matches a direct linear potential over one Bloch period") {
  // The direct method sees the ramp's jump at the box edge, so it runs on a
  // grid four times wider than the packet excursion needs.
  const auto g = Grid::centered(4096, 256);
  const double depth = 1.0;
  const double force = 0.05;
  const double tb = 2.0 / force;
  const int chunks = 8;
  const double dt = tb / 4096;
  const SplitStepPropagator prop(g, depth, dt);
  const auto st0 = bloch_packet(g, depth, 2.0, SpinWeights::pure_up());
  auto gauged = st0;
  auto direct = st0;
  GaugeRecord gauge;
  const DriveSegment seg{tb / chunks, ForceLaw::constant(force), ForceLaw::constant(force), {}};
  double xmin = 0.0;
  double xmax = 0.0;
  double worst_dx = 0.0;
  double worst_overlap = 1.0;
  for (int c = 0; c < chunks; ++c) {
    prop.evolve_segment(gauged, seg, gauge);
    direct = direct_linear_run(direct, depth, force, dt, 4096 / chunks);
    const auto lab = to_lab_frame(gauged, gauge);
    const auto a = moments(lab);
    const auto b = moments(direct);
    xmin = std::min(xmin, b.x_mean);
    xmax = std::max(xmax, b.x_mean);
    worst_dx = std::max(worst_dx, std::abs(a.x_mean - b.x_mean));
    const auto sa = snapshot(lab, 0.0);
    const auto sb = snapshot(direct, 0.0);
    worst_overlap = std::min(worst_overlap, compare_densities(sa.up, sb.up, g.dx()));
  }
  const double ptp = xmax - xmin;
  REQUIRE(ptp > 1.0);
  CHECK(worst_dx < 0.01 * ptp);
  CHECK(worst_overlap > 0.99);
  // Independent of the density check, the full lab-frame amplitudes agree.
  CHECK(distance(to_lab_frame(gauged, gauge), direct) < 0.01);
}

TEST_CASE("opposite forces mirror the two spin components") {
  const auto g = Grid::centered(2048, 128);
  const double period = 83.0;
  const SplitStepPropagator prop(g, 1.0, period / 1024);
  auto st = bloch_packet(g, 1.0, 3.0, SpinWeights{{1.0, 0.0}, {1.0, 0.0}});
  const DriveSegment seg{period, ForceLaw::sine(0.0134, period), ForceLaw::sine(-0.0134, period),
                         {}};
  GaugeRecord gauge;
  prop.evolve_segment(st, seg, gauge);
  const auto m = moments(st);
  REQUIRE(m.x_mean_up.has_value());
  CHECK(std::abs(*m.x_mean_up) > 1.0);
  CHECK(std::abs(*m.x_mean_up + *m.x_mean_down) < 1e-8 * std::abs(*m.x_mean_up));
  CHECK(m.pop_up == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("step displacement follows the semiclassical band velocity") {
  const auto g = Grid::centered(4096, 256);
  const double depth = 1.0;
  const double period = 83.32;
  const double f = 0.0134;
  const SplitStepPropagator prop(g, depth, period / 2048);
  const auto st = bloch_packet(g, depth, 3.0, SpinWeights::pure_up());
  const DriveSegment seg{period, ForceLaw::sine(f, period), ForceLaw::sine(-f, period), {}};
  const double d = measure_step_displacement(prop, seg, st);

  // x(T) = integral of dE0/dq along q(t) = impulse(t).
  auto velocity = [&](double q) {
    const double h = 1e-4;
    return (solve_bloch(depth, q + h, 1).energies[0] - solve_bloch(depth, q - h, 1).energies[0]) /
           (2.0 * h);
  };
  const int n = 400;
  double d_sc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) * period / n;
    double q = seg.force_up.impulse(t);
    q -= 2.0 * std::round(q / 2.0);
    d_sc += velocity(q) * period / n;
  }
  CHECK(d == doctest::Approx(d_sc).epsilon(0.02));
}

TEST_CASE("coin pulses") {
  const auto g = Grid::centered(256, 16);
  const SplitStepPropagator prop(g, 1.0, 0.1);
  const auto st0 = test::gaussian(g, 0.0, 4.0, 0.0, {1.0, 0.0}, {0.0, 0.0});
  const GaugeRecord none;
  auto a = st0;
  prop.apply_pulse(a, 0.0, none);
  CHECK(distance(a, st0) == 0.0);
  a = st0;
  prop.apply_pulse(a, std::numbers::pi, none);
  CHECK(a.population(Spin::down) == doctest::Approx(1.0).epsilon(1e-14));
  a = st0;
  prop.apply_pulse(a, 0.5 * std::numbers::pi, none);
  CHECK(a.population(Spin::up) == doctest::Approx(0.5).epsilon(1e-14));
  a = st0;
  prop.apply_pulse(a, 2.0 * std::numbers::pi, none);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(a.up[j] + st0.up[j]) < 1e-14);
}

TEST_CASE("a gauged pulse equals the lab-frame rotation") {
  const auto g = Grid::centered(512, 32);
  const SplitStepPropagator prop(g, 1.0, 0.1);
  const auto st = test::random_state(g, 11);
  const GaugeRecord gauge{12.0, 0.37, -1.91};
  const double angle = 0.7;
  auto via_gauge = st;
  prop.apply_pulse(via_gauge, angle, gauge);
  const auto lhs = to_lab_frame(via_gauge, gauge);

  auto rhs = to_lab_frame(st, gauge);
  const double c = std::cos(0.5 * angle);
  const Complex s{0.0, -std::sin(0.5 * angle)};
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Complex u = rhs.up[j];
    const Complex d = rhs.down[j];
    rhs.up[j] = c * u + s * d;
    rhs.down[j] = c * d + s * u;
  }
  CHECK(distance(lhs, rhs) < 1e-12);
  CHECK(distance(to_gauged_frame(to_lab_frame(st, gauge), gauge), st) < 1e-13);
}

TEST_CASE("finite pulse without force commutes with the spatial motion") {
  const auto g = Grid::centered(512, 32);
  const double tau = 8.0;
  const SplitStepPropagator prop(g, 1.0, tau / 256);
  const auto st0 = test::gaussian(g, 0.0, 6.0, 0.4, {1.0, 0.0}, {0.0, 0.0});
  const double angle = 0.5 * std::numbers::pi;
  DriveSegment with_pulse{tau, ForceLaw::none(), ForceLaw::none(), {{0.0, tau, angle / tau}}};
  DriveSegment bare{tau, ForceLaw::none(), ForceLaw::none(), {}};
  CHECK(with_pulse.rabi_angle(0.0, tau) == doctest::Approx(angle));
  auto a = st0;
  GaugeRecord ga;
  prop.evolve_segment(a, with_pulse, ga);
  auto b = st0;
  GaugeRecord gb;
  prop.apply_pulse(b, angle, gb);
  prop.evolve_segment(b, bare, gb);
  CHECK(distance(a, b) < 1e-9);
}

TEST_CASE("protocol runner samples and snapshots") {
  const auto g = Grid::centered(512, 32);
  const double period = 10.0;
  const SplitStepPropagator prop(g, 1.0, period / 128);
  const auto st0 = test::gaussian(g, 0.0, 6.0, 0.0, {1.0, 0.0}, {0.0, 0.0});
  const auto protocol = make_walk_protocol(0.05, period, 3, std::numbers::pi);
  RunOptions opts;
  opts.sample_interval = period / 4;
  int hook_calls = 0;
  opts.on_sample = [&](SpinorState&, const GaugeRecord&) { ++hook_calls; };
  const auto r = run_protocol(prop, st0, protocol, opts);
  CHECK(r.series.size() == 13);
  CHECK(hook_calls == 13);
  CHECK(r.series.times.back() == doctest::Approx(3 * period));
  CHECK(r.snapshots.size() == 4);
  // Three pi pulses leave the population in the other spin state.
  CHECK(r.final_state.population(Spin::down) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.final_gauge.time == doctest::Approx(3 * period));

  RunOptions bad;
  bad.sample_interval = 0.3 * prop.dt();
  CHECK_THROWS_AS(run_protocol(prop, st0, protocol, bad), ConfigError);
}

TEST_CASE("protocol validation") {
  Protocol p;
  p.timeline.push_back(DriveSegment{-1.0, {}, {}, {}});
  CHECK_THROWS_AS(p.validate(), ConfigError);
  const auto walk = make_walk_protocol(0.1, 5.0, 4, 0.3);
  CHECK(walk.total_duration() == doctest::Approx(20.0));
  CHECK(walk.timeline.size() == 8);
  const auto plain = make_periodic_protocol(ForceLaw::sine(0.1, 5.0), ForceLaw::sine(-0.1, 5.0),
                                            5.0, 4, std::nullopt);
  CHECK(plain.timeline.size() == 4);
}

TEST_CASE("force laws integrate in closed form") {
  for (const auto& law : {ForceLaw::constant(0.3), ForceLaw::sine(0.3, 7.0),
                          ForceLaw::cosine(-0.2, 7.0)}) {
    const int n = 20000;
    const double t = 5.3;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += law((i + 0.5) * t / n) * t / n;
    CHECK(law.impulse(t) == doctest::Approx(sum).epsilon(1e-8));
    CHECK(law.negated().impulse(t) == doctest::Approx(-sum).epsilon(1e-8));
  }
  const StepPotential step{0.4, 10.0, 2.0};
  CHECK(step(10.0) == doctest::Approx(0.2));
  CHECK(step(100.0) == doctest::Approx(0.4));
  CHECK(step(-100.0) == doctest::Approx(0.0).epsilon(1e-12));
}
