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

#include "spinorwalk/scenario_io.hpp"

#include <Eigen/Core>

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "spinorwalk/errors.hpp"
#include "spinorwalk/fft.hpp"

#ifndef SPINORWALK_VERSION
#define SPINORWALK_VERSION "0.0.0"
#endif

namespace spinorwalk {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string_view waveform_name(Waveform w) {
  switch (w) {
    case Waveform::constant: return "constant";
    case Waveform::sine: return "sine";
    case Waveform::cosine: return "cosine";
  }
  return "constant";
}

Waveform parse_waveform(const std::string& s) {
  if (s == "constant") return Waveform::constant;
  if (s == "sine") return Waveform::sine;
  if (s == "cosine") return Waveform::cosine;
  throw ConfigError("waveform: unknown value '" + s + "'");
}

PulseMode parse_pulse_mode(const std::string& s) {
  if (s == "instantaneous") return PulseMode::instantaneous;
  if (s == "finite") return PulseMode::finite;
  throw ConfigError("pulse_mode: unknown value '" + s + "'");
}

JumpAlgorithm parse_jump_algorithm(const std::string& s) {
  if (s == "poisson") return JumpAlgorithm::poisson;
  if (s == "waiting_time") return JumpAlgorithm::waiting_time;
  throw ConfigError("jump_algorithm: unknown value '" + s + "'");
}

json spin_to_json(const SpinWeights& w) {
  const Complex one{1.0, 0.0};
  const Complex zero{0.0, 0.0};
  if (w.up == one && w.down == zero) return "up";
  if (w.up == zero && w.down == one) return "down";
  return json{{"up", {w.up.real(), w.up.imag()}}, {"down", {w.down.real(), w.down.imag()}}};
}

SpinWeights spin_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "up") return SpinWeights::pure_up();
    if (s == "down") return SpinWeights::pure_down();
    throw ConfigError("spin: expected \"up\", \"down\" or an amplitude object");
  }
  SpinWeights w{{0.0, 0.0}, {0.0, 0.0}};
  auto amp = [&](const char* key) {
    if (!j.contains(key)) return Complex{0.0, 0.0};
    const auto& a = j.at(key);
    if (a.is_number()) return Complex{a.get<double>(), 0.0};
    return Complex{a.at(0).get<double>(), a.at(1).get<double>()};
  };
  w.up = amp("up");
  w.down = amp("down");
  return w;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_header(std::ostream& out, const ScenarioConfig& c, std::string_view what) {
  out << "# spinorwalk " << SPINORWALK_VERSION << "\n";
  out << "# scenario: " << to_string(c.kind);
  if (!c.preset.empty()) out << " (preset " << c.preset << ")";
  out << "\n# config_hash: " << config_hash(c) << "\n";
  out << "# content: " << what << "\n";
}

struct Scales {
  double ms;  // per lattice time unit
  double um;  // per lattice length unit
};

Scales scales_of(const ResolvedScenario& rs) {
  return {rs.params.time_unit() * 1e3, rs.params.length_unit() * 1e6};
}

void write_observables(const std::filesystem::path& path, const ScenarioConfig& c,
                       const ObservableSeries& s, const Scales& u,
                       const TrajectoryEnsemble* errors, std::string_view what) {
  auto out = open_out(path);
  write_header(out, c, what);
  out << "# lengths in um and in units of 1/k0; times in ms and in units of hbar/E_R\n";
  out << "t_si_ms,t_dimless,x_mean_um,x_mean_dimless,x_std_um,x_std_dimless,pop_up,pop_down,"
         "coherence_re,coherence_im,norm";
  if (errors) {
    out << ",x_mean_se_um,x_mean_se_dimless,x_std_se_um,x_std_se_dimless,pop_up_se,pop_down_se,"
           "coherence_re_se,coherence_im_se,norm_se";
  }
  out << "\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << fmt(s.times[i] * u.ms) << ',' << fmt(s.times[i]) << ',' << fmt(s.x_mean_total[i] * u.um)
        << ',' << fmt(s.x_mean_total[i]) << ',' << fmt(s.x_std[i] * u.um) << ','
        << fmt(s.x_std[i]) << ',' << fmt(s.pop_up[i]) << ',' << fmt(s.pop_down[i]) << ','
        << fmt(s.coherence[i].real()) << ',' << fmt(s.coherence[i].imag()) << ','
        << fmt(s.norm[i]);
    if (errors) {
      out << ',' << fmt(errors->x_mean_se[i] * u.um) << ',' << fmt(errors->x_mean_se[i]) << ','
          << fmt(errors->x_std_se[i] * u.um) << ',' << fmt(errors->x_std_se[i]) << ','
          << fmt(errors->pop_up_se[i]) << ',' << fmt(errors->pop_down_se[i]) << ','
          << fmt(errors->coherence_se[i].real()) << ',' << fmt(errors->coherence_se[i].imag())
          << ',' << fmt(errors->norm_se[i]);
    }
    out << "\n";
  }
}

enum class DensityPart { up, down, total };

void write_density(const std::filesystem::path& path, const ScenarioConfig& c, const Grid& grid,
                   const std::vector<DensitySnapshot>& snaps, const Scales& u, DensityPart part) {
  auto out = open_out(path);
  const char* name = part == DensityPart::up     ? "spin-up density"
                     : part == DensityPart::down ? "spin-down density"
                                                 : "total density";
  write_header(out, c, name);
  out << "# first row: x positions in um (x_dimless = x_um / " << fmt(u.um)
      << "); densities per unit dimensionless length\n";
  out << "t_si_ms,t_dimless";
  for (std::size_t j = 0; j < grid.size(); ++j) out << ',' << fmt(grid.x(j) * u.um);
  out << "\n";
  for (const auto& s : snaps) {
    out << fmt(s.time * u.ms) << ',' << fmt(s.time);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double v = part == DensityPart::up     ? s.up[j]
                       : part == DensityPart::down ? s.down[j]
                                                   : s.up[j] + s.down[j];
      out << ',' << fmt(v);
    }
    out << "\n";
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["kind"] = std::string(to_string(c.kind));
  j["preset"] = c.preset;
  j["atom_mass_u"] = c.atom_mass_u;
  j["wavelength_nm"] = c.wavelength_nm;
  j["depth_er"] = c.depth_er;
  j["grid_points"] = c.grid_points;
  j["grid_periods"] = c.grid_periods;
  j["sigma_lambda"] = c.sigma_lambda;
  j["kappa0"] = c.kappa0;
  j["band"] = c.band;
  j["spin"] = spin_to_json(c.spin);
  j["offset_periods"] = c.offset_periods;
  j["waveform"] = std::string(waveform_name(c.waveform));
  j["force_accel"] = c.force_accel;
  j["force_ratio_down"] = c.force_ratio_down;
  j["period_ms"] = c.period_ms;
  j["n_periods"] = c.n_periods;
  j["theta_rad"] = c.theta;
  j["pulse_mode"] = c.pulse_mode == PulseMode::finite ? "finite" : "instantaneous";
  j["pulse_duration_ms"] = c.pulse_duration_ms;
  j["step_height_er"] = c.step_height_er;
  j["step_center_periods"] = c.step_center_periods;
  j["step_width_periods"] = c.step_width_periods;
  j["kappa_per_s"] = c.kappa_per_s;
  j["n_trajectories"] = c.n_trajectories;
  j["seed"] = c.seed;
  j["jump_algorithm"] = c.jump_algorithm == JumpAlgorithm::poisson ? "poisson" : "waiting_time";
  j["steps_per_period"] = c.steps_per_period;
  j["samples_per_period"] = c.samples_per_period;
  j["snapshot_every_periods"] = c.snapshot_every_periods;
  j["fit_t_min_periods"] = c.fit_t_min_periods;
  return j;
}

ScenarioConfig config_from_json(const json& j, ScenarioConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ScenarioConfig c = std::move(base);
  if (j.contains("preset") && !j.at("preset").get<std::string>().empty()) {
    const auto name = j.at("preset").get<std::string>();
    c = find_preset(name).config;
  }
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "preset") {
        c.preset = v.get<std::string>();
      } else if (key == "kind") {
        c.kind = parse_scenario_kind(v.get<std::string>());
      } else if (key == "atom_mass_u") {
        c.atom_mass_u = v.get<double>();
      } else if (key == "wavelength_nm") {
        c.wavelength_nm = v.get<double>();
      } else if (key == "depth_er") {
        c.depth_er = v.get<double>();
      } else if (key == "grid_points") {
        c.grid_points = v.get<std::size_t>();
      } else if (key == "grid_periods") {
        c.grid_periods = v.get<int>();
      } else if (key == "sigma_lambda") {
        c.sigma_lambda = v.get<double>();
      } else if (key == "kappa0") {
        c.kappa0 = v.get<double>();
      } else if (key == "band") {
        c.band = v.get<int>();
      } else if (key == "spin") {
        c.spin = spin_from_json(v);
      } else if (key == "offset_periods") {
        c.offset_periods = v.get<double>();
      } else if (key == "waveform") {
        c.waveform = parse_waveform(v.get<std::string>());
      } else if (key == "force_accel") {
        c.force_accel = v.get<double>();
      } else if (key == "force_ratio_down") {
        c.force_ratio_down = v.get<double>();
      } else if (key == "period_ms") {
        c.period_ms = v.get<double>();
      } else if (key == "n_periods") {
        c.n_periods = v.get<int>();
      } else if (key == "theta_rad") {
        c.theta = v.get<double>();
      } else if (key == "pulse_mode") {
        c.pulse_mode = parse_pulse_mode(v.get<std::string>());
      } else if (key == "pulse_duration_ms") {
        c.pulse_duration_ms = v.get<double>();
      } else if (key == "step_height_er") {
        c.step_height_er = v.get<double>();
      } else if (key == "step_center_periods") {
        c.step_center_periods = v.get<double>();
      } else if (key == "step_width_periods") {
        c.step_width_periods = v.get<double>();
      } else if (key == "kappa_per_s") {
        c.kappa_per_s = v.get<double>();
      } else if (key == "n_trajectories") {
        c.n_trajectories = v.get<int>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "jump_algorithm") {
        c.jump_algorithm = parse_jump_algorithm(v.get<std::string>());
      } else if (key == "steps_per_period") {
        c.steps_per_period = v.get<int>();
      } else if (key == "samples_per_period") {
        c.samples_per_period = v.get<int>();
      } else if (key == "snapshot_every_periods") {
        c.snapshot_every_periods = v.get<int>();
      } else if (key == "fit_t_min_periods") {
        c.fit_t_min_periods = v.get<double>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ScenarioConfig& config) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, fnv1a64(config_to_json(config).dump()));
  return buf;
}

json metrics_to_json(const ScenarioResult& r) {
  const auto& m = r.metrics;
  const Scales u = scales_of(r.resolved);
  json j;
  j["t_final_ms"] = r.series.times.back() * u.ms;
  j["t_final_dimless"] = r.series.times.back();
  j["x_mean_final_um"] = r.series.x_mean_total.back() * u.um;
  j["x_mean_final_dimless"] = r.series.x_mean_total.back();
  j["x_std_final_um"] = r.series.x_std.back() * u.um;
  j["x_std_final_dimless"] = r.series.x_std.back();
  j["max_norm_error"] = m.max_norm_error;
  j["path_length_dimless"] = m.path_length;
  j["band_width_er"] = optional_json(m.band_width);
  j["step_displacement_dimless"] = optional_json(m.step_displacement);
  j["velocity_bound_dimless"] = optional_json(m.velocity_bound);
  j["mean_velocity_dimless"] = optional_json(m.mean_velocity);
  j["bloch_period_dimless"] = optional_json(m.bloch_period);
  if (m.bloch_period) j["bloch_period_ms"] = *m.bloch_period * u.ms;
  j["max_displacement_dimless"] = optional_json(m.max_displacement);
  j["measured_period_dimless"] = optional_json(m.measured_period);
  j["peak_to_peak_dimless"] = optional_json(m.peak_to_peak);
  if (m.exponent) {
    j["alpha"] = m.exponent->alpha;
    j["alpha_stderr"] = m.exponent->stderr_alpha;
    j["alpha_samples"] = m.exponent->n_samples;
  } else {
    j["alpha"] = nullptr;
  }
  j["n_extrema"] = m.n_extrema;
  j["oscillation_period_dimless"] = optional_json(m.oscillation_period);
  j["detrended_amplitude_dimless"] = optional_json(m.detrended_amplitude);
  j["dirac_map_x_final_dimless"] = optional_json(m.dirac_map_final_x);
  j["notes"] = m.notes;
  return j;
}

std::vector<std::string> write_outputs(const ScenarioResult& r, const std::filesystem::path& dir,
                                       const RunInfo& info) {
  std::filesystem::create_directories(dir);
  const auto& c = r.config;
  const Scales u = scales_of(r.resolved);
  std::vector<std::string> files;

  const TrajectoryEnsemble* errors = r.errors ? &*r.errors : nullptr;
  write_observables(dir / "observables.csv", c, r.series, u, errors, "observables");
  files.emplace_back("observables.csv");
  if (r.dirac_map) {
    write_observables(dir / "dirac_map.csv", c, *r.dirac_map, u, nullptr,
                      "discrete Dirac map observables");
    files.emplace_back("dirac_map.csv");
  }
  const std::pair<const char*, DensityPart> parts[] = {{"density_up.csv", DensityPart::up},
                                                       {"density_down.csv", DensityPart::down},
                                                       {"density_total.csv", DensityPart::total}};
  for (const auto& [name, part] : parts) {
    write_density(dir / name, c, r.resolved.grid, r.snapshots, u, part);
    files.emplace_back(name);
  }

  {
    auto out = open_out(dir / "summary.json");
    json s = metrics_to_json(r);
    s["config_hash"] = config_hash(c);
    out << s.dump(2) << "\n";
    files.emplace_back("summary.json");
  }
  {
    auto out = open_out(dir / "config.json");
    out << config_to_json(c).dump(2) << "\n";
    files.emplace_back("config.json");
  }
  {
    json m;
    m["format"] = "spinorwalk-manifest/1";
    m["version"] = SPINORWALK_VERSION;
    m["config_hash"] = config_hash(c);
    m["config"] = config_to_json(c);
    m["libraries"] = {{"fftw", fft_library_version()},
                      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)},
                      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    m["kernels"] = info.kernels;
    m["threads"] = info.threads;
    m["created_utc"] = utc_timestamp();
    files.emplace_back("manifest.json");
    m["files"] = files;
    auto out = open_out(dir / "manifest.json");
    out << m.dump(2) << "\n";
  }
  return files;
}

void write_diagnostic_snapshot(const ScenarioConfig& c, const DensitySnapshot& snap,
                               const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const ResolvedScenario rs = resolve(c);
  write_density(dir / "diagnostic_snapshot.csv", c, rs.grid, {snap}, scales_of(rs),
                DensityPart::total);
}

void write_sweep_summary(const std::string& parameter, const std::vector<SweepRow>& rows,
                         const ScenarioConfig& base, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_header(out, base, "sweep over " + parameter);
  out << "parameter,value,status,t_final_ms,x_mean_final_um,x_mean_final_dimless,"
         "x_std_final_um,x_std_final_dimless,dirac_map_x_final_um,dirac_map_x_final_dimless,"
         "alpha,run_dir\n";
  for (const auto& row : rows) {
    out << parameter << ',' << fmt(row.value) << ',' << row.status;
    if (row.result) {
      const auto& r = *row.result;
      const Scales u = scales_of(r.resolved);
      const double t = r.series.times.back();
      const double x = r.series.x_mean_total.back();
      const double w = r.series.x_std.back();
      out << ',' << fmt(t * u.ms) << ',' << fmt(x * u.um) << ',' << fmt(x) << ','
          << fmt(w * u.um) << ',' << fmt(w);
      if (r.metrics.dirac_map_final_x) {
        out << ',' << fmt(*r.metrics.dirac_map_final_x * u.um) << ','
            << fmt(*r.metrics.dirac_map_final_x);
      } else {
        out << ",,";
      }
      out << ',' << (r.metrics.exponent ? fmt(r.metrics.exponent->alpha) : std::string());
    } else {
      out << ",,,,,,,,";
    }
    out << ',' << row.run_dir << "\n";
  }
}

std::string csv_body(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream body;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    body << line << '\n';
  }
  return body.str();
}

}  // namespace spinorwalk
