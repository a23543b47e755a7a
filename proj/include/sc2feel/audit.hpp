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

// Post-hoc check of an allocation plus schedule against the full constraint
// set: upload completion, total latency, per-device energy, power limits,
// and the aggregated per-device forms the allocator optimizes.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sc2feel/allocator.hpp"
#include "sc2feel/batch_scheduler.hpp"
#include "sc2feel/channel.hpp"
#include "sc2feel/cost_model.hpp"

namespace sc2feel {

struct AuditEntry {
  std::string name;
  int device = -1;  ///< -1 for system-wide constraints
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  ///< >= 0 when satisfied (up to tolerance)
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditEntry> entries;

  bool passed() const
  {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
  }

  std::vector<AuditEntry> failures() const
  {
    std::vector<AuditEntry> out;
    std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
                 [](const auto& e) { return !e.pass; });
    return out;
  }
};

struct AuditTolerance {
  double seconds = 1e-9;
  double joules = 1e-9;
  double watts = 1e-12;
  double bits_relative = 1e-9;
};

namespace detail {

inline AuditEntry upper(std::string name, int dev, double lhs, double rhs, double tol)
{
  return {std::move(name), dev, lhs, rhs, rhs - lhs, rhs - lhs >= -tol};
}

inline AuditEntry lower(std::string name, int dev, double lhs, double rhs, double tol)
{
  return {std::move(name), dev, lhs, rhs, lhs - rhs, lhs - rhs >= -tol};
}

}  // namespace detail

/// Throws std::invalid_argument when the solution, schedule and devices do
/// not line up (device count or ids, schedule length != R).
inline AuditReport audit_constraints(const AllocationSolution& sol, const BatchSchedule& sched,
                                     const SystemParams& sys,
                                     const std::vector<DeviceProfile>& devices,
                                     const AuditTolerance& tol = {})
{
  if (sol.devices.size() != devices.size() || devices.size() != static_cast<std::size_t>(sys.K))
    throw std::invalid_argument("audit: device count mismatch");
  for (std::size_t k = 0; k < devices.size(); ++k)
    if (sol.devices[k].id != devices[k].id)
      throw std::invalid_argument("audit: device id mismatch at index " + std::to_string(k));
  if (sched.rounds() != sys.R)
    throw std::invalid_argument("audit: schedule has " + std::to_string(sched.rounds()) +
                                " rounds, expected R = " + std::to_string(sys.R));

  const ChannelParams ch = sys.channel();
  const double R = static_cast<double>(sys.R);
  const Samples total = sched.total();
  std::vector<double> t_up;
  for (const auto& a : sol.devices) t_up.push_back(a.t_cm);

  AuditReport rep;
  rep.entries.push_back(detail::upper("sample_budget", -1, static_cast<double>(total),
                                      static_cast<double>(sol.b_sum), 0.0));
  const Samples smallest = sched.b.empty() ? 0 : *std::min_element(sched.b.begin(), sched.b.end());
  rep.entries.push_back(detail::lower("min_batch", -1, static_cast<double>(smallest), 1.0, 0.0));

  double time = 0.0;
  for (Samples b : sched.b) time += round_latency(b, t_up, sys);
  rep.entries.push_back(detail::upper("total_latency", -1, time, sys.T_max, tol.seconds));

  for (std::size_t k = 0; k < devices.size(); ++k) {
    const auto& a = sol.devices[k];
    const auto& dev = devices[k];
    const int id = dev.id;

    const double bits = a.t_cm * ergodic_capacity(a.p_c, dev, ch);
    rep.entries.push_back(detail::lower("upload_bits", id, bits, sys.D_b, tol.bits_relative * sys.D_b));

    double energy = 0.0;
    for (Samples b : sched.b) energy += round_energy(b, a.p_s, a.p_c, a.t_cm, sys).total_energy();
    rep.entries.push_back(detail::upper("device_energy", id, energy, sys.E_max, tol.joules));

    rep.entries.push_back(detail::lower("p_c_nonnegative", id, a.p_c, 0.0, tol.watts));
    rep.entries.push_back(detail::upper("p_c_max", id, a.p_c, dev.P_c_max, tol.watts));
    rep.entries.push_back(detail::lower("p_s_min", id, a.p_s, dev.P_s_min, tol.watts));
    rep.entries.push_back(detail::upper("p_s_max", id, a.p_s, dev.P_s_max, tol.watts));

    const double n = static_cast<double>(total);
    rep.entries.push_back(detail::upper("latency_per_device", id,
                                        n * sys.time_per_sample() + R * a.t_cm, sys.T_max,
                                        tol.seconds));
    rep.entries.push_back(detail::upper(
        "energy_per_device", id,
        n * (sys.T0 * a.p_s + sys.compute_energy_per_sample()) + R * a.t_cm * a.p_c, sys.E_max,
        tol.joules));
  }
  return rep;
}

}  // namespace sc2feel
