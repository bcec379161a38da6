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

// Command-line front end: run, sweep, presets, validate.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "spinorwalk/band_structure.hpp"
#include "spinorwalk/errors.hpp"
#include "spinorwalk/initial_state.hpp"
#include "spinorwalk/scenario.hpp"
#include "spinorwalk/scenario_io.hpp"
#include "spinorwalk/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace spinorwalk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string kind;
  std::string config_path;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<int> trajectories;
  std::optional<double> kappa;
  std::optional<double> vs;
  std::optional<double> theta;
  std::optional<double> v0;
  std::optional<double> sigma;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("kind", a.kind,
                  "scenario kind: bloch, transport, walk, dirac, klein, walk_dephasing, "
                  "dirac_dephasing");
  cmd->add_option("--config", a.config_path, "JSON scenario config");
  cmd->add_option("--preset", a.preset, "named preset (see `presets`)");
  cmd->add_option("--out", a.out, "output directory");
  cmd->add_option("--seed", a.seed, "master seed of the jump trajectories");
  cmd->add_option("--threads", a.threads, "worker threads (default: SPINOR_SIM_THREADS or all cores)");
  cmd->add_option("--trajectories", a.trajectories, "number of quantum-jump trajectories");
  cmd->add_option("--kappa", a.kappa, "dephasing rate [1/s]");
  cmd->add_option("--vs", a.vs, "step height [E_R]");
  cmd->add_option("--theta", a.theta, "coin angle [units of pi]");
  cmd->add_option("--v0", a.v0, "lattice depth [E_R]");
  cmd->add_option("--sigma", a.sigma, "packet width [wavelengths]");
}

unsigned resolve_threads(const CommonArgs& a) {
  if (a.threads) return std::max(1u, *a.threads);
  if (const char* env = std::getenv("SPINOR_SIM_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    throw ConfigError("SPINOR_SIM_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ScenarioConfig resolve_config(const CommonArgs& a) {
  ScenarioConfig c;
  if (!a.config_path.empty()) {
    c = load_config(a.config_path);
  } else if (!a.preset.empty()) {
    c = find_preset(a.preset).config;
  } else if (!a.kind.empty()) {
    c = default_preset(parse_scenario_kind(a.kind)).config;
  } else {
    throw ConfigError("give a scenario kind, --preset or --config");
  }
  if (!a.kind.empty() && parse_scenario_kind(a.kind) != c.kind) {
    throw ConfigError("kind '" + a.kind + "' does not match the selected config (" +
                      std::string(to_string(c.kind)) + ")");
  }
  if (a.kappa) apply_override(c, "kappa", *a.kappa);
  if (a.vs) apply_override(c, "vs", *a.vs);
  if (a.theta) apply_override(c, "theta", *a.theta);
  if (a.v0) apply_override(c, "v0", *a.v0);
  if (a.sigma) apply_override(c, "sigma", *a.sigma);
  if (a.seed) c.seed = *a.seed;
  if (a.trajectories) c.n_trajectories = *a.trajectories;
  c.output_dir = a.out.empty() ? (fs::path("runs") / (c.preset.empty() ? std::string(to_string(c.kind))
                                                                         : c.preset))
                                     .string()
                               : a.out;
  validate(c);
  return c;
}

struct Failure {
  int code;
  std::string category;
  std::string message;
};

Failure classify(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    return {kExitValidation, "validation", e.what()};
  } catch (const PreconditionError& e) {
    return {kExitValidation, "validation", e.what()};
  } catch (const NumericalError& e) {
    return {kExitNumerical, "numerical", e.what()};
  } catch (const FitError& e) {
    return {kExitNumerical, "numerical", e.what()};
  } catch (const std::exception& e) {
    return {kExitNumerical, "internal", e.what()};
  }
}

int report_failure(const Failure& f, const std::string& out_dir) {
  nlohmann::json j{{"status", "error"},
                   {"category", f.category},
                   {"exit_code", f.code},
                   {"message", f.message}};
  std::cerr << j.dump() << "\n";
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    std::ofstream(fs::path(out_dir) / "error.json") << j.dump(2) << "\n";
  }
  return f.code;
}

RunInfo run_info(unsigned threads) { return {threads, std::string(simd::active_kernels().name)}; }

int cmd_run(const CommonArgs& a) {
  std::string out_dir = a.out;
  try {
    const ScenarioConfig c = resolve_config(a);
    out_dir = c.output_dir;
    const unsigned threads = resolve_threads(a);
    try {
      const ScenarioResult r = run_scenario(c, {threads});
      write_outputs(r, c.output_dir, run_info(threads));
      std::cout << metrics_to_json(r).dump(2) << "\n";
      std::cout << "wrote " << c.output_dir << "\n";
    } catch (const ScenarioAborted& e) {
      write_diagnostic_snapshot(c, e.last_good(), c.output_dir);
      throw;
    }
    return kExitOk;
  } catch (...) {
    return report_failure(classify(std::current_exception()), out_dir);
  }
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--values: cannot parse '" + item + "'");
    }
  }
  if (v.empty()) throw ConfigError("--values is empty");
  return v;
}

int cmd_sweep(const CommonArgs& a, std::string parameter, const std::string& values_text) {
  std::string out_dir = a.out;
  try {
    const ScenarioConfig base = resolve_config(a);
    out_dir = base.output_dir;
    std::vector<double> values;
    if (!values_text.empty()) {
      values = parse_values(values_text);
    } else {
      const auto& preset = find_preset(base.preset);
      if (!preset.sweep) throw ConfigError("preset '" + base.preset + "' has no default sweep");
      if (parameter.empty()) parameter = preset.sweep->parameter;
      values = preset.sweep->values;
    }
    if (!is_sweep_parameter(parameter)) {
      throw ConfigError("unknown sweep parameter '" + parameter + "'");
    }

    const unsigned threads = resolve_threads(a);
    const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(values.size()));
    const unsigned per_run = std::max(1u, threads / workers);

    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto work = [&] {
      for (std::size_t i = next++; i < values.size(); i = next++) {
        SweepRow& row = rows[i];
        row.value = values[i];
        std::ostringstream name;
        name << parameter << "_" << values[i];
        row.run_dir = name.str();
        try {
          ScenarioConfig c = base;
          apply_override(c, parameter, values[i]);
          c.output_dir = (fs::path(base.output_dir) / row.run_dir).string();
          validate(c);
          ScenarioResult r = run_scenario(c, {per_run});
          write_outputs(r, c.output_dir, run_info(per_run));
          r.snapshots.clear();
          row.result = std::move(r);
          row.status = "ok";
        } catch (...) {
          const Failure f = classify(std::current_exception());
          row.status = "error:" + f.category;
          row.message = f.message;
        }
        std::lock_guard lock(log_mutex);
        std::cout << parameter << " = " << values[i] << ": " << row.status
                  << (row.message.empty() ? "" : " (" + row.message + ")") << "\n";
      }
    };
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
      work();
    }
    fs::create_directories(base.output_dir);
    write_sweep_summary(parameter, rows, base, fs::path(base.output_dir) / "sweep_summary.csv");
    std::cout << "wrote " << (fs::path(base.output_dir) / "sweep_summary.csv").string() << "\n";
    int code = kExitOk;
    for (const auto& row : rows) {
      if (row.status == "error:validation") code = std::max(code, kExitValidation);
      if (row.status != "ok" && row.status != "error:validation") code = kExitNumerical;
    }
    return code;
  } catch (...) {
    return report_failure(classify(std::current_exception()), out_dir);
  }
}

int cmd_presets(bool as_json) {
  if (as_json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : presets()) {
      nlohmann::json e{{"name", p.name}, {"description", p.description},
                       {"config", config_to_json(p.config)}};
      if (p.sweep) e["sweep"] = {{"parameter", p.sweep->parameter}, {"values", p.sweep->values}};
      j.push_back(e);
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& p : presets()) {
    std::cout << p.name << "\t" << to_string(p.config.kind) << "\t" << p.description;
    if (p.sweep) std::cout << " [sweep " << p.sweep->parameter << "]";
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_validate(const CommonArgs& a) {
  try {
    const ScenarioConfig c = resolve_config(a);
    const ResolvedScenario rs = resolve(c);
    const BandStructure bands = compute_band_structure(rs.params, c.band + 1, 8);
    (void)prepare_bloch_gaussian(rs.grid, bands, rs.packet);
    nlohmann::json j{{"status", "ok"},
                     {"config_hash", config_hash(c)},
                     {"config", config_to_json(c)},
                     {"period_dimless", rs.period},
                     {"dt_dimless", rs.dt},
                     {"force_dimless", rs.force}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  } catch (...) {
    return report_failure(classify(std::current_exception()), "");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spinor atoms in driven optical lattices: Bloch oscillations, quantum walks "
               "and Dirac dynamics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SPINORWALK_VERSION_STRING);

  CommonArgs run_args;
  auto* run = app.add_subcommand("run", "run one scenario and write its outputs");
  add_common(run, run_args);

  CommonArgs sweep_args;
  std::string sweep_param;
  std::string sweep_values;
  auto* sweep = app.add_subcommand("sweep", "run a scenario over a list of parameter values");
  add_common(sweep, sweep_args);
  sweep->add_option("--param", sweep_param, "kappa, vs, theta, v0, sigma, force or period");
  sweep->add_option("--values", sweep_values, "comma-separated values");

  bool presets_json = false;
  auto* list = app.add_subcommand("presets", "list the built-in presets");
  list->add_flag("--json", presets_json, "print the full configs as JSON");

  CommonArgs validate_args;
  auto* check = app.add_subcommand("validate", "check a config without running it");
  add_common(check, validate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (*run) return cmd_run(run_args);
  if (*sweep) return cmd_sweep(sweep_args, sweep_param, sweep_values);
  if (*list) return cmd_presets(presets_json);
  if (*check) return cmd_validate(validate_args);
  return kExitValidation;
}
