// Copyright 2026 The sc2feel Authors
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

// Round-by-round FEEL simulation under an allocation and a batch schedule.
//
// Training itself is replaced by a surrogate loss recursion
//   F_{r+1} = max(F_floor, (1 - gamma) F_r + beta_noise / b + sigma_sim z / sqrt(K b))
// whose 1/b floor mirrors the variance terms of the convergence bound: larger
// batches settle lower.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sc2feel/allocator.hpp"
#include "sc2feel/batch_scheduler.hpp"
#include "sc2feel/cost_model.hpp"

namespace sc2feel {

struct SurrogateLossModel {
  double gamma = 0.02;
  double beta_noise = 0.5;
  double sigma_sim = 0.1;
  double F1 = 1.6;
  double F_floor = 0.0;

  void validate() const
  {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("SurrogateLossModel: need 0 < gamma < 1");
    if (!(beta_noise >= 0.0) || !(sigma_sim >= 0.0))
      throw std::invalid_argument("SurrogateLossModel: beta_noise and sigma_sim must be >= 0");
    if (!(F_floor >= 0.0 && F1 > F_floor))
      throw std::invalid_argument("SurrogateLossModel: need F1 > F_floor >= 0");
  }

  bool operator==(const SurrogateLossModel&) const = default;
};

using Rng = std::mt19937_64;

inline double step_loss(const SurrogateLossModel& model, double F_r, Samples b, int K, Rng& rng)
{
  if (b < 1) throw std::invalid_argument("step_loss: batch must be >= 1");
  const double bd = static_cast<double>(b);
  double next = (1.0 - model.gamma) * F_r + model.beta_noise / bd;
  if (model.sigma_sim > 0.0) {
    std::normal_distribution<double> z(0.0, 1.0);
    next += model.sigma_sim * z(rng) / std::sqrt(static_cast<double>(K) * bd);
  }
  return std::max(model.F_floor, next);
}

enum class StopReason { none, energy_exhausted, time_exhausted };

inline const char* to_string(StopReason r)
{
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::energy_exhausted: return "energy_exhausted";
    case StopReason::time_exhausted: return "time_exhausted";
  }
  return "?";
}

struct RoundRecord {
  int r = 0;
  Samples batch = 0;
  double latency_s = 0.0;
  double cum_time_s = 0.0;
  std::vector<double> energy_j;      ///< per device, this round
  std::vector<double> cum_energy_j;  ///< per device
  double loss = 0.0;
  bool terminated = false;
  StopReason reason = StopReason::none;

  double max_cum_energy() const
  {
    return cum_energy_j.empty() ? 0.0 : *std::max_element(cum_energy_j.begin(), cum_energy_j.end());
  }

  bool operator==(const RoundRecord&) const = default;
};

struct SimulationRun {
  std::vector<RoundRecord> records;
  int completed_rounds = 0;
  double final_loss = 0.0;
  bool terminated = false;
  StopReason reason = StopReason::none;
};

/// Execute the schedule round by round. A round whose latency or energy would
/// push any budget past its limit is not started: it is emitted as a
/// terminated record with unchanged cumulative totals and the run stops.
inline SimulationRun run_simulation(const SystemParams& sys,
                                    const std::vector<DeviceProfile>& devices,
                                    const AllocationSolution& sol, const BatchSchedule& sched,
                                    const SurrogateLossModel& model, std::uint64_t seed,
                                    double tolerance = 1e-9)
{
  sys.validate();
  model.validate();
  if (sol.devices.size() != devices.size())
    throw std::invalid_argument("run_simulation: allocation does not match the device list");

  std::vector<double> t_up;
  for (const auto& a : sol.devices) t_up.push_back(a.t_cm);

  Rng rng(seed);
  SimulationRun run;
  double loss = model.F1;
  double cum_time = 0.0;
  std::vector<double> cum_energy(devices.size(), 0.0);

  for (int r = 1; r <= sched.rounds(); ++r) {
    const Samples b = sched.b[static_cast<std::size_t>(r - 1)];
    RoundRecord rec;
    rec.r = r;
    rec.batch = b;
    rec.latency_s = round_latency(b, t_up, sys);
    for (const auto& a : sol.devices)
      rec.energy_j.push_back(round_energy(b, a.p_s, a.p_c, a.t_cm, sys).total_energy());

    bool out_of_energy = false;
    for (std::size_t k = 0; k < devices.size(); ++k)
      out_of_energy |= cum_energy[k] + rec.energy_j[k] > sys.E_max + tolerance;
    const bool out_of_time = cum_time + rec.latency_s > sys.T_max + tolerance;
    if (out_of_energy || out_of_time) {
      rec.terminated = true;
      rec.reason = out_of_energy ? StopReason::energy_exhausted : StopReason::time_exhausted;
      rec.cum_time_s = cum_time;
      rec.cum_energy_j = cum_energy;
      rec.loss = loss;
      run.records.push_back(std::move(rec));
      run.terminated = true;
      run.reason = run.records.back().reason;
      break;
    }

    cum_time += rec.latency_s;
    for (std::size_t k = 0; k < devices.size(); ++k) cum_energy[k] += rec.energy_j[k];
    loss = step_loss(model, loss, b, sys.K, rng);
    rec.cum_time_s = cum_time;
    rec.cum_energy_j = cum_energy;
    rec.loss = loss;
    run.records.push_back(std::move(rec));
    ++run.completed_rounds;
  }
  run.final_loss = loss;
  return run;
}

/// Full resource-management schemes compared in the experiments.
enum class Scheme {
  proposed,    ///< optimized powers, increasing sqrt(r) batches
  maxpower,    ///< peak communication power, latency-only budget, sqrt(r) batches
  equal,       ///< optimized powers, equal batches
  decreasing,  ///< optimized powers, decreasing sqrt batches
};

inline const char* to_string(Scheme s)
{
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::maxpower: return "maxpower";
    case Scheme::equal: return "equal";
    case Scheme::decreasing: return "decreasing";
  }
  return "?";
}

inline Scheme scheme_from_string(const std::string& s)
{
  if (s == "proposed") return Scheme::proposed;
  if (s == "maxpower") return Scheme::maxpower;
  if (s == "equal") return Scheme::equal;
  if (s == "decreasing") return Scheme::decreasing;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected proposed, maxpower, equal, decreasing)");
}

struct SchemePlan {
  AllocationSolution allocation;
  BatchSchedule schedule;
};

/// Allocation and schedule for one scheme. b0 = b0_frac * b_sum / R.
inline SchemePlan plan_scheme(Scheme scheme, const SystemParams& sys,
                              const std::vector<DeviceProfile>& devices, double b0_frac = 0.5,
                              const AllocatorOptions& opt = {})
{
  SchemePlan plan;
  plan.allocation = scheme == Scheme::maxpower ? max_power_allocation(sys, devices)
                                               : solve_allocation(sys, devices, opt);
  const Samples b_sum = plan.allocation.b_sum;
  switch (scheme) {
    case Scheme::proposed:
    case Scheme::maxpower:
      plan.schedule = adaptive_sqrt_schedule(b_sum, sys.R, b0_from_fraction(b_sum, sys.R, b0_frac));
      break;
    case Scheme::equal:
      plan.schedule = baseline_schedule(ScheduleScheme::equal, b_sum, sys.R, 1);
      break;
    case Scheme::decreasing:
      plan.schedule = baseline_schedule(ScheduleScheme::decreasing_sqrt, b_sum, sys.R,
                                        b0_from_fraction(b_sum, sys.R, b0_frac));
      break;
  }
  return plan;
}

struct TrajectoryPoint {
  int r = 0;
  double cum_time_s = 0.0;
  double mean_loss = 0.0;
};

struct SchemeSummary {
  Scheme scheme = Scheme::proposed;
  Samples b_sum = 0;
  double mean_final_loss = 0.0;
  double std_final_loss = 0.0;
  double mean_completed_rounds = 0.0;
  int terminated_runs = 0;
  std::vector<double> final_losses;  ///< one per seed, seed order
  std::vector<TrajectoryPoint> trajectory;
};

/// Run every scheme on every seed (the same seed list for all schemes, so
/// comparisons are paired). Trajectories average the completed rounds of all
/// seeds, sampled at most `max_points` times.
inline std::vector<SchemeSummary> compare_schemes(const SystemParams& sys,
                                                  const std::vector<DeviceProfile>& devices,
                                                  const std::vector<Scheme>& schemes,
                                                  const SurrogateLossModel& model,
                                                  const std::vector<std::uint64_t>& seeds,
                                                  double b0_frac = 0.5, std::size_t max_points = 100)
{
  if (schemes.empty()) throw std::invalid_argument("compare_schemes: no schemes");
  if (seeds.empty()) throw std::invalid_argument("compare_schemes: no seeds");
  std::vector<SchemeSummary> out;
  for (Scheme scheme : schemes) {
    const SchemePlan plan = plan_scheme(scheme, sys, devices, b0_frac);
    SchemeSummary sum;
    sum.scheme = scheme;
    sum.b_sum = plan.allocation.b_sum;
    std::vector<double> loss_acc(static_cast<std::size_t>(sys.R), 0.0);
    std::vector<int> loss_cnt(static_cast<std::size_t>(sys.R), 0);
    std::vector<double> time_at(static_cast<std::size_t>(sys.R), 0.0);
    for (auto seed : seeds) {
      const auto run = run_simulation(sys, devices, plan.allocation, plan.schedule, model, seed);
      sum.final_losses.push_back(run.final_loss);
      sum.mean_completed_rounds += run.completed_rounds;
      sum.terminated_runs += run.terminated ? 1 : 0;
      for (const auto& rec : run.records) {
        if (rec.terminated) continue;
        const auto i = static_cast<std::size_t>(rec.r - 1);
        loss_acc[i] += rec.loss;
        ++loss_cnt[i];
        time_at[i] = rec.cum_time_s;
      }
    }
    const double n = static_cast<double>(seeds.size());
    sum.mean_completed_rounds /= n;
    for (double v : sum.final_losses) sum.mean_final_loss += v / n;
    if (seeds.size() > 1) {
      double ss = 0.0;
      for (double v : sum.final_losses) ss += (v - sum.mean_final_loss) * (v - sum.mean_final_loss);
      sum.std_final_loss = std::sqrt(ss / (n - 1.0));
    }
    const std::size_t stride = std::max<std::size_t>(1, (loss_acc.size() + max_points - 1) / max_points);
    for (std::size_t i = 0; i < loss_acc.size(); ++i) {
      if (loss_cnt[i] == 0) break;
      if (i % stride != 0 && i + 1 != loss_acc.size() && loss_cnt[i + 1] != 0) continue;
      sum.trajectory.push_back({static_cast<int>(i + 1), time_at[i], loss_acc[i] / loss_cnt[i]});
    }
    out.push_back(std::move(sum));
  }
  return out;
}

}  // namespace sc2feel
