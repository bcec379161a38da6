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

#include "spinorwalk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spinorwalk/band_structure.hpp"
#include "spinorwalk/discrete.hpp"
#include "spinorwalk/propagator.hpp"

namespace spinorwalk {

namespace {

constexpr double kPi = std::numbers::pi;

struct KindName {
  ScenarioKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ScenarioKind::bloch, "bloch"},
    {ScenarioKind::transport, "transport"},
    {ScenarioKind::walk, "walk"},
    {ScenarioKind::dirac, "dirac"},
    {ScenarioKind::klein, "klein"},
    {ScenarioKind::walk_dephasing, "walk_dephasing"},
    {ScenarioKind::dirac_dephasing, "dirac_dephasing"},
};

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError(field + ": " + why);
}

bool finite(double v) { return std::isfinite(v); }

ForceLaw force_law(Waveform w, double amplitude, double period) {
  switch (w) {
    case Waveform::constant: return ForceLaw::constant(amplitude);
    case Waveform::sine: return ForceLaw::sine(amplitude, period);
    case Waveform::cosine: return ForceLaw::cosine(amplitude, period);
  }
  throw ConfigError("unknown waveform");
}

double max_norm_error(const ObservableSeries& s) {
  double e = 0.0;
  for (double n : s.norm) e = std::max(e, std::abs(n - 1.0));
  return e;
}

double path_length(std::span<const double> x) {
  double l = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) l += std::abs(x[i] - x[i - 1]);
  return l;
}

// Vertex of the parabola through three equally spaced samples around i.
double refine_extremum(std::span<const double> t, std::span<const double> v, std::size_t i) {
  if (i == 0 || i + 1 >= v.size()) return t[i];
  const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
  if (denom == 0.0) return t[i];
  const double shift = 0.5 * (v[i - 1] - v[i + 1]) / denom;
  return t[i] + shift * (t[i + 1] - t[i]);
}

std::vector<DensitySnapshot> thin_snapshots(std::vector<DensitySnapshot> all, int every) {
  if (every <= 1) return all;
  std::vector<DensitySnapshot> kept;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i % static_cast<std::size_t>(every) == 0 || i + 1 == all.size()) {
      kept.push_back(std::move(all[i]));
    }
  }
  return kept;
}

// Probability within 5% of either end of the periodic box.
double edge_weight(const Grid& grid, const DensitySnapshot& snap) {
  const std::size_t n = grid.size();
  const std::size_t band = std::max<std::size_t>(1, n / 20);
  double w = 0.0;
  for (std::size_t j = 0; j < band; ++j) {
    w += snap.up[j] + snap.down[j] + snap.up[n - 1 - j] + snap.down[n - 1 - j];
  }
  return w * grid.dx();
}

void compute_metrics(ScenarioResult& r) {
  const auto& c = r.config;
  const auto& rs = r.resolved;
  auto& m = r.metrics;
  const auto& x = r.series.x_mean_total;
  const auto& t = r.series.times;

  m.max_norm_error = max_norm_error(r.series);
  for (const auto& snap : r.snapshots) {
    const double edge = edge_weight(rs.grid, snap);
    if (edge > 1e-6) {
      m.notes.push_back("density within 5% of the box edge reached " + std::to_string(edge) +
                        " at t = " + std::to_string(snap.time));
      break;
    }
  }
  m.path_length = path_length(x);
  m.band_width = ground_band_width(c.depth_er);

  if (c.kind == ScenarioKind::bloch) {
    m.bloch_period = 2.0 / std::abs(rs.force);
    m.max_displacement = *m.band_width / std::abs(rs.force);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    m.peak_to_peak = *hi - *lo;
    // Maxima for a positive force, minima otherwise.
    const double sign = rs.force > 0.0 ? 1.0 : -1.0;
    std::vector<double> signed_x(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) signed_x[i] = sign * x[i];
    const auto ext = find_extrema(signed_x, 0.25 * *m.peak_to_peak);
    std::vector<double> peaks;
    for (auto i : ext) {
      const bool is_max = (i == 0 || signed_x[i] >= signed_x[i - 1]) &&
                          (i + 1 == signed_x.size() || signed_x[i] >= signed_x[i + 1]);
      if (is_max && i > 0) peaks.push_back(refine_extremum(t, signed_x, i));
    }
    if (peaks.size() >= 2) {
      m.measured_period = peaks[1] - peaks[0];
    } else {
      m.notes.push_back("fewer than two maxima of <x>");
    }
    return;
  }

  const double omega = 2.0 * kPi / rs.period;
  m.velocity_bound = transport_velocity_bound(kPi, *m.band_width, std::abs(rs.force), omega, 0);
  if (t.back() > 0.0) m.mean_velocity = (x.back() - x.front()) / t.back();
  if (c.kind == ScenarioKind::transport) return;

  if (c.kind == ScenarioKind::walk || c.kind == ScenarioKind::walk_dephasing) {
    try {
      m.exponent = fit_diffusion_exponent(r.series, c.fit_t_min_periods * rs.period);
    } catch (const FitError& e) {
      m.notes.push_back(std::string("diffusion exponent: ") + e.what());
    }
    return;
  }

  // Dirac regime: stroboscopic analysis of <x>.
  std::vector<double> ts;
  std::vector<double> xs;
  const auto stride = static_cast<std::size_t>(c.samples_per_period);
  for (std::size_t i = 0; i < t.size(); i += stride) {
    ts.push_back(t[i]);
    xs.push_back(x[i]);
  }
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double prominence = 0.1 * (*hi - *lo);
  m.n_extrema = find_extrema(xs, prominence).size();
  m.oscillation_period = oscillation_period(ts, xs, prominence);
  if (xs.size() > 3) m.detrended_amplitude = detrended_peak_to_trough(ts, xs, 2);
  if (r.dirac_map) m.dirac_map_final_x = r.dirac_map->x_mean_total.back();
}

}  // namespace

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (const auto& k : kKindNames) {
    if (k.name == name) return k.kind;
  }
  throw ConfigError("unknown scenario kind '" + std::string(name) + "'");
}

std::string_view to_string(ScenarioKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

bool is_dephasing(ScenarioKind kind) {
  return kind == ScenarioKind::walk_dephasing || kind == ScenarioKind::dirac_dephasing;
}

bool is_dirac_regime(ScenarioKind kind) {
  return kind == ScenarioKind::dirac || kind == ScenarioKind::klein ||
         kind == ScenarioKind::dirac_dephasing;
}

bool has_coin(ScenarioKind kind) {
  return kind != ScenarioKind::bloch && kind != ScenarioKind::transport;
}

void validate(const ScenarioConfig& c) {
  require(c.atom_mass_u > 0.0 && finite(c.atom_mass_u), "atom_mass_u", "must be positive");
  require(c.wavelength_nm > 0.0 && finite(c.wavelength_nm), "wavelength_nm", "must be positive");
  require(c.depth_er >= 0.0 && finite(c.depth_er), "depth_er", "must be non-negative");
  require(c.grid_points >= 16 && (c.grid_points & (c.grid_points - 1)) == 0, "grid_points",
          "must be a power of two >= 16");
  require(c.grid_periods >= 1, "grid_periods", "must be positive");
  require(c.sigma_lambda > 0.0 && finite(c.sigma_lambda), "sigma_lambda", "must be positive");
  require(std::abs(c.kappa0) <= 1.0, "kappa0", "must lie in the Brillouin zone [-1, 1]");
  require(c.band >= 0 && c.band < 8, "band", "must be in 0..7");
  require(std::norm(c.spin.up) + std::norm(c.spin.down) > 0.0, "spin", "weights are zero");
  require(finite(c.offset_periods), "offset_periods", "must be finite");

  require(finite(c.force_accel) && c.force_accel != 0.0, "force_accel", "must be non-zero");
  require(finite(c.force_ratio_down), "force_ratio_down", "must be finite");
  require(c.n_periods >= 1, "n_periods", "must be positive");
  if (c.kind == ScenarioKind::bloch) {
    require(c.waveform == Waveform::constant, "waveform", "bloch needs a constant force");
  } else {
    require(c.waveform != Waveform::constant, "waveform", "driven kinds need sine or cosine");
    require(c.period_ms > 0.0 && finite(c.period_ms), "period_ms", "must be positive");
  }

  require(finite(c.theta), "theta", "must be finite");
  if (!has_coin(c.kind)) require(c.theta == 0.0, "theta", "this kind has no coin pulse");
  if (c.pulse_mode == PulseMode::finite) {
    require(c.pulse_duration_ms > 0.0 && c.pulse_duration_ms < c.period_ms, "pulse_duration_ms",
            "finite pulses need 0 < duration < period");
  }

  require(finite(c.step_height_er), "step_height_er", "must be finite");
  if (c.kind != ScenarioKind::klein) {
    require(c.step_height_er == 0.0, "step_height_er", "only klein runs carry a step");
  }
  require(c.step_width_periods > 0.0, "step_width_periods", "must be positive");
  require(finite(c.step_center_periods), "step_center_periods", "must be finite");

  require(c.kappa_per_s >= 0.0 && finite(c.kappa_per_s), "kappa_per_s", "must be non-negative");
  if (!is_dephasing(c.kind)) {
    require(c.kappa_per_s == 0.0, "kappa_per_s", "only dephasing kinds take a rate");
  }
  require(c.n_trajectories >= 1, "n_trajectories", "must be positive");

  require(c.steps_per_period >= 1, "steps_per_period", "must be positive");
  require(c.samples_per_period >= 1 && c.steps_per_period % c.samples_per_period == 0,
          "samples_per_period", "must divide steps_per_period");
  require(c.snapshot_every_periods >= 1, "snapshot_every_periods", "must be positive");
  require(c.fit_t_min_periods >= 0.0, "fit_t_min_periods", "must be non-negative");
}

ResolvedScenario resolve(const ScenarioConfig& c) {
  validate(c);
  const PhysicalParams params(c.atom_mass_u * constants::atomic_mass_unit,
                              c.wavelength_nm * 1e-9, c.depth_er);
  const double force =
      to_dimensionless(params, c.force_accel * params.atom_mass(), QuantityKind::force);
  const double period = c.kind == ScenarioKind::bloch
                            ? 2.0 / std::abs(force)
                            : to_dimensionless(params, c.period_ms * 1e-3, QuantityKind::time);

  const ForceLaw up = force_law(c.waveform, force, period);
  const ForceLaw down = force_law(c.waveform, c.force_ratio_down * force, period);
  std::optional<double> angle;
  if (has_coin(c.kind)) angle = c.theta;
  const double pulse_duration =
      to_dimensionless(params, c.pulse_duration_ms * 1e-3, QuantityKind::time);
  Protocol protocol =
      make_periodic_protocol(up, down, period, c.n_periods, angle, c.pulse_mode, pulse_duration);
  protocol.validate();

  WavePacketSpec packet;
  packet.band_index = c.band;
  packet.kappa0 = c.kappa0;
  packet.sigma_lambda = c.sigma_lambda;
  packet.spin = c.spin;
  packet.offset = c.offset_periods * kLatticePeriod;

  std::optional<StepPotential> step;
  if (c.kind == ScenarioKind::klein && c.step_height_er != 0.0) {
    step = StepPotential{c.step_height_er, packet.offset + c.step_center_periods * kLatticePeriod,
                         c.step_width_periods * kLatticePeriod};
  }

  return ResolvedScenario{params,
                          Grid::centered(c.grid_points, static_cast<std::size_t>(c.grid_periods)),
                          period,
                          force,
                          period / c.steps_per_period,
                          rate_to_dimensionless(params, c.kappa_per_s),
                          std::move(protocol),
                          packet,
                          step};
}

ScenarioResult run_scenario(const ScenarioConfig& config, const RunContext& context) {
  ScenarioResult r{config, resolve(config), {}, {}, std::nullopt, std::nullopt, {}};
  const auto& rs = r.resolved;
  const auto& c = r.config;

  const int n_bands = std::max(c.band + 1, 1);
  const BandStructure bands = compute_band_structure(rs.params, n_bands, 8);
  const SpinorState initial = prepare_bloch_gaussian(rs.grid, bands, rs.packet);
  const SplitStepPropagator propagator(rs.grid, c.depth_er, rs.dt, rs.step);

  RunOptions options;
  options.sample_interval = rs.period / c.samples_per_period;
  options.record_snapshots = true;

  if (is_dephasing(c.kind)) {
    DephasingConfig dc;
    dc.kappa = rs.kappa;
    // Without jumps every trajectory is the same deterministic run.
    dc.n_trajectories = rs.kappa > 0.0 ? c.n_trajectories : 1;
    dc.master_seed = c.seed;
    dc.algorithm = c.jump_algorithm;
    dc.threads = std::max(1u, context.threads);
    auto ensemble = run_ensemble(propagator, rs.protocol, initial, dc, options);
    r.series = ensemble.mean;
    r.snapshots = thin_snapshots(std::move(ensemble.mean_snapshots), c.snapshot_every_periods);
    ensemble.trajectories.clear();
    ensemble.mean_snapshots.clear();
    r.errors = std::move(ensemble);
  } else {
    DensitySnapshot last_good = snapshot(initial, 0.0);
    options.on_sample = [&](SpinorState& s, const GaugeRecord& g) {
      if (std::isfinite(s.norm())) last_good = snapshot(s, g.time);
    };
    auto pr = [&] {
      try {
        return run_protocol(propagator, initial, rs.protocol, options);
      } catch (const NumericalError& e) {
        throw ScenarioAborted(e.what(), std::move(last_good));
      }
    }();
    r.series = std::move(pr.series);
    r.snapshots = thin_snapshots(std::move(pr.snapshots), c.snapshot_every_periods);
  }

  if (has_coin(c.kind)) {
    // Per-period displacement on the bare lattice, without step or coin.
    const SplitStepPropagator lattice(rs.grid, c.depth_er, rs.dt);
    const auto& seg = std::get<DriveSegment>(rs.protocol.timeline.front());
    const double d = measure_step_displacement(lattice, seg, initial);
    r.metrics.step_displacement = d;
    if (c.kind == ScenarioKind::dirac || c.kind == ScenarioKind::klein) {
      DiracMapConfig mc{d, c.theta, rs.period, rs.step};
      r.dirac_map = dirac_map_run(initial, mc, c.n_periods).series;
    }
  }

  compute_metrics(r);
  return r;
}

// Presets --------------------------------------------------------------------

namespace {

// Gradient force at which the per-period gauge excursion pi * F T / (2 pi)
// reaches pi/2: the common (spin-independent) band dispersion then averages
// out over one period and the two spin components move rigidly.
double rigid_transport_accel(const ScenarioConfig& c) {
  const PhysicalParams p(c.atom_mass_u * constants::atomic_mass_unit, c.wavelength_nm * 1e-9,
                         c.depth_er);
  const double period = to_dimensionless(p, c.period_ms * 1e-3, QuantityKind::time);
  const double force = kPi / period;
  return to_si(p, force, QuantityKind::force) / p.atom_mass();
}

ScenarioConfig bloch_base() {
  ScenarioConfig c;
  c.kind = ScenarioKind::bloch;
  c.depth_er = 1.0;
  c.sigma_lambda = 6.0;
  c.spin = SpinWeights::pure_up();
  c.waveform = Waveform::constant;
  c.force_accel = 0.42;
  c.n_periods = 3;
  c.samples_per_period = 64;
  return c;
}

ScenarioConfig transport_base() {
  ScenarioConfig c = bloch_base();
  c.kind = ScenarioKind::transport;
  // About 570 units of travel: start left of centre on a doubled box.
  c.grid_points = 8192;
  c.grid_periods = 512;
  c.offset_periods = -90.0;
  c.waveform = Waveform::sine;
  c.period_ms = 10.0;
  c.n_periods = 15;
  c.samples_per_period = 16;
  return c;
}

ScenarioConfig walk_base() {
  ScenarioConfig c;
  c.kind = ScenarioKind::walk;
  c.depth_er = 1.0;
  c.sigma_lambda = 3.0;
  c.spin = SpinWeights::pure_down();
  c.waveform = Waveform::sine;
  c.force_accel = 0.75 * 0.42;
  c.period_ms = 10.0;
  c.n_periods = 15;
  c.theta = kPi / 2.0;
  c.samples_per_period = 16;
  return c;
}

ScenarioConfig dirac_base(double theta_over_pi) {
  ScenarioConfig c;
  c.kind = ScenarioKind::dirac;
  c.depth_er = 5.0;
  c.sigma_lambda = 10.0;
  c.spin = SpinWeights::pure_down();
  c.grid_points = 8192;
  c.grid_periods = 512;
  c.waveform = Waveform::sine;
  c.period_ms = 150.0 / 39.0;
  c.n_periods = 39;
  // Negative on |up| so that the initially occupied |down> moves towards +x.
  c.force_accel = -rigid_transport_accel(c);
  c.theta = theta_over_pi * kPi;
  c.samples_per_period = 1;
  return c;
}

ScenarioConfig klein_base(double vs) {
  ScenarioConfig c = dirac_base(0.1);
  c.kind = ScenarioKind::klein;
  c.step_height_er = vs;
  c.step_center_periods = 15.0;
  c.step_width_periods = 2.0;
  return c;
}

Preset make(std::string name, std::string description, ScenarioConfig c,
            std::optional<SweepSpec> sweep = std::nullopt) {
  c.preset = name;
  return Preset{std::move(name), std::move(description), std::move(c), std::move(sweep)};
}

std::vector<Preset> build_presets() {
  std::vector<Preset> p;
  p.push_back(make("fig1a", "Bloch oscillation, V0 = 1 E_R, F0/m = 0.42 m/s^2, 3 Bloch periods",
                   bloch_base()));
  p.push_back(make("fig1b", "directed transport, F1/m = 0.42 m/s^2 sine drive, T = 10 ms, 15 periods",
                   transport_base()));
  p.push_back(make("fig2", "coherent quantum walk, V0 = 1 E_R, sigma = 3 wavelengths, pi/2 coin",
                   walk_base()));
  const std::pair<const char*, double> thetas[] = {
      {"fig3a", 0.0}, {"fig3b", 0.05}, {"fig3c", 0.1}, {"fig3d", 0.2}};
  for (const auto& [name, th] : thetas) {
    p.push_back(make(name, "Dirac regime, V0 = 5 E_R, sigma = 10 wavelengths, theta = " +
                               std::to_string(th).substr(0, 4) + " pi",
                     dirac_base(th)));
  }
  p.push_back(make("fig4a", "Dirac regime with step, V_s = 0", klein_base(0.0)));
  p.push_back(make("fig4b", "Dirac regime with step, V_s = 0.015 E_R", klein_base(0.015)));
  p.push_back(make("fig4c", "Dirac regime with step, V_s = 0.1 E_R", klein_base(0.1)));
  {
    SweepSpec s{"vs", {}};
    for (int i = 0; i <= 10; ++i) s.values.push_back(0.01 * i);
    p.push_back(make("fig4d", "final <x> against step height 0..0.1 E_R", klein_base(0.015), s));
  }
  {
    ScenarioConfig c = walk_base();
    c.kind = ScenarioKind::walk_dephasing;
    c.kappa_per_s = 100.0;
    p.push_back(make("fig5", "dephased quantum walk, kappa = 100 1/s, 100 trajectories", c,
                     SweepSpec{"kappa", {0.0, 20.0, 40.0, 60.0, 80.0, 100.0}}));
  }
  {
    ScenarioConfig c = dirac_base(0.2);
    c.kind = ScenarioKind::dirac_dephasing;
    c.grid_points = 4096;
    c.grid_periods = 256;
    c.kappa_per_s = 20.0;
    p.push_back(make("fig6", "dephased Dirac dynamics, theta = 0.2 pi, kappa = 20 1/s", c,
                     SweepSpec{"kappa", {0.0, 20.0, 100.0}}));
  }
  return p;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

const Preset& default_preset(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::bloch: return find_preset("fig1a");
    case ScenarioKind::transport: return find_preset("fig1b");
    case ScenarioKind::walk: return find_preset("fig2");
    case ScenarioKind::dirac: return find_preset("fig3c");
    case ScenarioKind::klein: return find_preset("fig4b");
    case ScenarioKind::walk_dephasing: return find_preset("fig5");
    case ScenarioKind::dirac_dephasing: return find_preset("fig6");
  }
  throw ConfigError("unknown scenario kind");
}

bool is_sweep_parameter(std::string_view parameter) {
  constexpr std::string_view names[] = {"kappa", "vs", "theta", "v0", "sigma", "force", "period"};
  return std::find(std::begin(names), std::end(names), parameter) != std::end(names);
}

void apply_override(ScenarioConfig& c, std::string_view parameter, double value) {
  if (parameter == "kappa") {
    c.kappa_per_s = value;
  } else if (parameter == "vs") {
    c.step_height_er = value;
  } else if (parameter == "theta") {
    c.theta = value * kPi;
  } else if (parameter == "v0") {
    c.depth_er = value;
  } else if (parameter == "sigma") {
    c.sigma_lambda = value;
  } else if (parameter == "force") {
    c.force_accel = value;
  } else if (parameter == "period") {
    c.period_ms = value;
  } else {
    throw ConfigError("unknown parameter '" + std::string(parameter) + "'");
  }
}

}  // namespace spinorwalk
