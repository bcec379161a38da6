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

#include "spinorwalk/open_system.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "spinorwalk/errors.hpp"

namespace spinorwalk {

namespace {

double uniform01(std::mt19937_64& stream) {
  return static_cast<double>(stream() >> 11) * 0x1.0p-53;
}

// Pairwise summation: order-fixed and with O(log n) error growth.
template <class T>
T pairwise_sum(const T* v, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T s = v[0];
    for (std::size_t i = 1; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

struct Stat {
  double mean = 0.0;
  double se = 0.0;
};

Stat mean_se(const std::vector<double>& v) {
  const std::size_t n = v.size();
  Stat s;
  s.mean = pairwise_sum(v.data(), n) / static_cast<double>(n);
  if (n > 1) {
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (v[i] - s.mean) * (v[i] - s.mean);
    s.se = std::sqrt(pairwise_sum(sq.data(), n) / static_cast<double>(n - 1) /
                     static_cast<double>(n));
  }
  return s;
}

}  // namespace

std::mt19937_64 trajectory_stream(std::uint64_t master_seed, std::uint64_t trajectory) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trajectory),
                    static_cast<std::uint32_t>(trajectory >> 32), 0x51u};
  return std::mt19937_64(seq);
}

std::vector<double> sample_jump_times(double kappa, double t_total, std::mt19937_64& stream) {
  if (kappa < 0.0) throw PreconditionError("dephasing rate must be >= 0");
  if (!(t_total > 0.0)) throw PreconditionError("jump window must be positive");
  std::vector<double> times;
  if (kappa == 0.0) return times;
  // Exponential gaps: Poisson count with mean kappa t, uniform order statistics.
  double t = 0.0;
  while (true) {
    t += -std::log1p(-uniform01(stream)) / kappa;
    if (t >= t_total) break;
    times.push_back(t);
  }
  return times;
}

TrajectoryResult run_trajectory(const SplitStepPropagator& propagator, const Protocol& protocol,
                                const SpinorState& initial, const std::vector<double>& jumps,
                                const RunOptions& options) {
  const double total = protocol.total_duration();
  for (double t : jumps) {
    if (t < 0.0 || t > total) throw PreconditionError("jump time outside the protocol");
  }
  RunOptions opts = options;
  opts.jump_times = jumps;
  auto r = run_protocol(propagator, initial, protocol, opts);
  return {std::move(r.series), std::move(r.snapshots), jumps.size()};
}

TrajectoryResult run_trajectory_waiting_time(const SplitStepPropagator& propagator,
                                             const Protocol& protocol, const SpinorState& initial,
                                             double kappa, std::mt19937_64& stream,
                                             const RunOptions& options) {
  if (kappa < 0.0) throw PreconditionError("dephasing rate must be >= 0");
  RunOptions opts = options;
  opts.jump_times.clear();
  if (kappa == 0.0) {
    auto r = run_protocol(propagator, initial, protocol, opts);
    return {std::move(r.series), std::move(r.snapshots), 0};
  }
  std::size_t n_jumps = 0;
  double threshold = 1.0 - uniform01(stream);
  opts.loss_rate = kappa;
  opts.sync_every_steps = 1;
  opts.on_sync = [&](SpinorState& s, const GaugeRecord&) {
    if (s.norm() >= threshold) return;
    for (auto& z : s.down) z = -z;
    s.normalize();
    ++n_jumps;
    threshold = 1.0 - uniform01(stream);
  };
  auto r = run_protocol(propagator, initial, protocol, opts);
  return {std::move(r.series), std::move(r.snapshots), n_jumps};
}

TrajectoryEnsemble average_ensemble(const std::vector<ObservableSeries>& trajectories,
                                    const std::vector<std::vector<DensitySnapshot>>& snapshots,
                                    const Grid& grid) {
  if (trajectories.empty()) throw ConfigError("no trajectories to average");
  const std::size_t n_traj = trajectories.size();
  const std::size_t n_samples = trajectories.front().size();
  for (const auto& s : trajectories) {
    if (s.size() != n_samples) throw ConfigError("trajectories have different time grids");
    for (std::size_t i = 0; i < n_samples; ++i) {
      if (s.times[i] != trajectories.front().times[i]) {
        throw ConfigError("trajectories have different time grids");
      }
    }
  }

  TrajectoryEnsemble ens;
  ens.n_trajectories = n_traj;
  ens.trajectories = trajectories;
  std::vector<double> v(n_traj);
  std::vector<double> w(n_traj);
  auto gather = [&](auto&& get) {
    for (std::size_t k = 0; k < n_traj; ++k) v[k] = get(trajectories[k]);
    return mean_se(v);
  };

  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto x1 = gather([&](const ObservableSeries& s) { return s.x_mean_total[i]; });
    const auto x2 = gather([&](const ObservableSeries& s) { return s.x2_mean[i]; });
    const auto pu = gather([&](const ObservableSeries& s) { return s.pop_up[i]; });
    const auto pd = gather([&](const ObservableSeries& s) { return s.pop_down[i]; });
    const auto cr = gather([&](const ObservableSeries& s) { return s.coherence[i].real(); });
    const auto ci = gather([&](const ObservableSeries& s) { return s.coherence[i].imag(); });
    const auto nm = gather([&](const ObservableSeries& s) { return s.norm[i]; });

    Moments m;
    m.norm = nm.mean;
    m.pop_up = pu.mean;
    m.pop_down = pd.mean;
    m.x_mean = x1.mean;
    m.x2_mean = x2.mean;
    m.x_std = std::sqrt(std::max(0.0, x2.mean - x1.mean * x1.mean));
    m.coherence = {cr.mean, ci.mean};
    // Spin-resolved means weighted by population.
    for (Spin spin : {Spin::up, Spin::down}) {
      double num = 0.0;
      double den = 0.0;
      for (const auto& s : trajectories) {
        const auto& xm = spin == Spin::up ? s.x_mean_up[i] : s.x_mean_down[i];
        const double p = spin == Spin::up ? s.pop_up[i] : s.pop_down[i];
        if (xm) {
          num += p * *xm;
          den += p;
        }
      }
      if (den > 0.0) (spin == Spin::up ? m.x_mean_up : m.x_mean_down) = num / den;
    }
    ens.mean.push(trajectories.front().times[i], m);

    // Delta method for sigma = sqrt(<x^2> - <x>^2).
    double sigma_se = 0.0;
    if (n_traj > 1 && m.x_std > 0.0) {
      for (std::size_t k = 0; k < n_traj; ++k) {
        w[k] = (trajectories[k].x2_mean[i] - 2.0 * x1.mean * trajectories[k].x_mean_total[i]) /
               (2.0 * m.x_std);
      }
      v = w;
      sigma_se = mean_se(v).se;
    }
    ens.x_mean_se.push_back(x1.se);
    ens.x_std_se.push_back(sigma_se);
    ens.pop_up_se.push_back(pu.se);
    ens.pop_down_se.push_back(pd.se);
    ens.coherence_se.push_back({cr.se, ci.se});
    ens.norm_se.push_back(nm.se);
  }

  if (!snapshots.empty()) {
    if (snapshots.size() != n_traj) throw ConfigError("snapshot count differs from trajectories");
    const std::size_t n_snap = snapshots.front().size();
    for (const auto& s : snapshots) {
      if (s.size() != n_snap) throw ConfigError("trajectories have different snapshot grids");
      for (const auto& d : s) {
        if (d.up.size() != grid.size() || d.down.size() != grid.size()) {
          throw ConfigError("snapshot does not match the grid");
        }
      }
    }
    for (std::size_t i = 0; i < n_snap; ++i) {
      DensitySnapshot avg{snapshots.front()[i].time, RealArray(grid.size()), RealArray(grid.size())};
      for (std::size_t j = 0; j < grid.size(); ++j) {
        for (std::size_t k = 0; k < n_traj; ++k) v[k] = snapshots[k][i].up[j];
        avg.up[j] = pairwise_sum(v.data(), n_traj) / static_cast<double>(n_traj);
        for (std::size_t k = 0; k < n_traj; ++k) v[k] = snapshots[k][i].down[j];
        avg.down[j] = pairwise_sum(v.data(), n_traj) / static_cast<double>(n_traj);
      }
      ens.mean_snapshots.push_back(std::move(avg));
    }
  }
  return ens;
}

TrajectoryEnsemble run_ensemble(const SplitStepPropagator& propagator, const Protocol& protocol,
                                const SpinorState& initial, const DephasingConfig& config,
                                const RunOptions& options) {
  if (config.n_trajectories < 1) throw ConfigError("need at least one trajectory");
  if (config.kappa < 0.0) throw ConfigError("dephasing rate must be >= 0");
  protocol.validate();
  const auto n = static_cast<std::size_t>(config.n_trajectories);
  const double total = protocol.total_duration();

  std::vector<ObservableSeries> series(n);
  std::vector<std::vector<DensitySnapshot>> snaps(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n) return;
      try {
        auto stream = trajectory_stream(config.master_seed, k);
        TrajectoryResult r;
        if (config.algorithm == JumpAlgorithm::poisson) {
          const auto jumps = sample_jump_times(config.kappa, total, stream);
          r = run_trajectory(propagator, protocol, initial, jumps, options);
        } else {
          r = run_trajectory_waiting_time(propagator, protocol, initial, config.kappa, stream,
                                          options);
        }
        series[k] = std::move(r.series);
        snaps[k] = std::move(r.snapshots);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  if (!options.record_snapshots) snaps.clear();
  return average_ensemble(series, snaps, initial.grid);
}

}  // namespace spinorwalk
