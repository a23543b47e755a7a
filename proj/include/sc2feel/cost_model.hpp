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

// Per-round latency and energy accounting for one FEEL round.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "sc2feel/channel.hpp"

namespace sc2feel {

using Samples = std::int64_t;

/// Global deployment constants. Defaults follow the reference simulation
/// table; D_b assumes 4,900,677 float32 parameters.
struct SystemParams {
  int K = 6;
  double B0 = 0.5e6;                   ///< [Hz]
  double N0 = dbm_to_watts(-174.0);   ///< [W/Hz]
  double D_b = 4900677.0 * 32.0;       ///< bits per model upload
  double T0 = 0.5;                     ///< unit sensing time [s]
  double nu = 2.5e7;                   ///< CPU cycles per sample
  int tau = 10;                        ///< local SGD steps per round
  double f_cpu = 5e8;                  ///< [cycles/s]
  double theta = 1e-27;                ///< effective switched capacitance
  int R = 300;                         ///< communication rounds
  double T_max = 20000.0;              ///< [s]
  double E_max = 1500.0;               ///< [J]

  void validate() const
  {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw std::invalid_argument(std::string("SystemParams: ") + what);
    };
    require(K >= 1, "K must be >= 1");
    require(R >= 1, "R must be >= 1");
    require(tau >= 1, "tau must be >= 1");
    require(B0 > 0 && N0 > 0 && D_b > 0 && T0 > 0 && nu > 0 && f_cpu > 0 && theta > 0,
            "physical constants must be positive");
    require(T_max > 0 && E_max > 0, "budgets must be positive");
  }

  ChannelParams channel() const { return ChannelParams{B0, N0}; }

  /// Seconds of sensing plus local computation per sample.
  double time_per_sample() const { return T0 + nu * tau / f_cpu; }

  /// Joules of local computation per sample.
  double compute_energy_per_sample() const { return tau * theta * nu * f_cpu * f_cpu; }

  bool operator==(const SystemParams&) const = default;
};

struct RoundCosts {
  double t_sense = 0.0;
  double t_compute = 0.0;
  double t_upload = 0.0;
  double e_sense = 0.0;
  double e_compute = 0.0;
  double e_upload = 0.0;

  double total_time() const { return t_sense + t_compute + t_upload; }
  double total_energy() const { return e_sense + e_compute + e_upload; }
};

namespace detail {
inline void require_batch(Samples b)
{
  if (b < 0) throw std::invalid_argument("batch size must be non-negative");
}
}  // namespace detail

inline double sensing_time(Samples b, const SystemParams& sys)
{
  detail::require_batch(b);
  return sys.T0 * static_cast<double>(b);
}

inline double compute_time(Samples b, const SystemParams& sys)
{
  detail::require_batch(b);
  return static_cast<double>(b) * sys.nu * sys.tau / sys.f_cpu;
}

/// Synchronous round: the server waits for the slowest upload. Sensing and
/// computation are common to all devices.
inline double round_latency(Samples b, std::span<const double> t_upload, const SystemParams& sys)
{
  if (t_upload.size() != static_cast<std::size_t>(sys.K))
    throw std::invalid_argument("round_latency: need one upload time per device");
  const double common = sensing_time(b, sys) + compute_time(b, sys);
  double worst = 0.0;
  for (double t : t_upload) worst = std::max(worst, common + t);
  return worst;
}

inline RoundCosts round_energy(Samples b, double p_s, double p_c, double t_upload,
                               const SystemParams& sys)
{
  detail::require_batch(b);
  if (p_s < 0 || p_c < 0 || t_upload < 0)
    throw std::invalid_argument("round_energy: powers and times must be non-negative");
  RoundCosts c;
  c.t_sense = sensing_time(b, sys);
  c.t_compute = compute_time(b, sys);
  c.t_upload = t_upload;
  c.e_sense = sys.T0 * static_cast<double>(b) * p_s;
  c.e_compute = sys.tau * sys.theta * sys.nu * sys.f_cpu * sys.f_cpu * static_cast<double>(b);
  c.e_upload = t_upload * p_c;
  return c;
}

}  // namespace sc2feel
