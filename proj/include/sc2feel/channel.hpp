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

// Uplink channel: large-scale gain, ergodic Rayleigh capacity in closed form
// and a Monte-Carlo estimate of the same expectation.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sc2feel/numerics.hpp"
#include "sc2feel/units.hpp"

namespace sc2feel {

struct ChannelParams {
  double B0 = 0.5e6;                 ///< subcarrier bandwidth [Hz]
  double N0 = dbm_to_watts(-174.0);  ///< noise PSD [W/Hz]

  void validate() const
  {
    if (!(B0 > 0.0) || !(N0 > 0.0))
      throw std::invalid_argument("ChannelParams: B0 and N0 must be positive");
  }
};

struct DeviceProfile {
  int id = 0;
  double dist_km = 0.1;
  double shadowing_db = 0.0;
  double phi = 0.0;       ///< linear large-scale power gain
  double P_c_max = 0.1;   ///< [W]
  double P_s_min = 0.1;   ///< [W]
  double P_s_max = 1.0;   ///< [W]

  void validate() const
  {
    std::ostringstream msg;
    msg << "device " << id << ": ";
    if (!(phi > 0.0) || !std::isfinite(phi)) msg << "large-scale gain must be positive";
    else if (!(P_c_max > 0.0)) msg << "P_c_max must be positive";
    else if (!(P_s_min > 0.0) || !(P_s_min <= P_s_max)) msg << "require 0 < P_s_min <= P_s_max";
    else return;
    throw std::invalid_argument(msg.str());
  }

  bool operator==(const DeviceProfile&) const = default;
};

/// phi = 10^(-(PL + shadowing)/10), PL = 128.1 + 37.6 log10(d [km]).
inline double large_scale_gain(double dist_km, double shadowing_db)
{
  if (!(dist_km > 0.0) || !std::isfinite(dist_km))
    throw std::domain_error("large_scale_gain: distance must be positive");
  const double loss_db = 128.1 + 37.6 * std::log10(dist_km) + shadowing_db;
  return std::pow(10.0, -loss_db / 10.0);
}

/// Build a device; `apply_shadowing` false keeps the drawn shadowing value
/// on record but computes phi from path loss alone.
inline DeviceProfile make_device(int id, double dist_km, double shadowing_db, double P_c_max,
                                 double P_s_min, double P_s_max, bool apply_shadowing = true)
{
  DeviceProfile dev;
  dev.id = id;
  dev.dist_km = dist_km;
  dev.shadowing_db = shadowing_db;
  dev.phi = large_scale_gain(dist_km, apply_shadowing ? shadowing_db : 0.0);
  dev.P_c_max = P_c_max;
  dev.P_s_min = P_s_min;
  dev.P_s_max = P_s_max;
  dev.validate();
  return dev;
}

/// Ergodic capacity over unit-mean Rayleigh fading with large-scale gain phi:
///   C = (B0/ln2) e^a E1(a),  a = B0 N0 / (p phi).
/// Zero at p = 0 by continuity.
inline double ergodic_capacity(double p_c, double phi, const ChannelParams& ch)
{
  if (!(p_c >= 0.0) || !std::isfinite(p_c))
    throw std::domain_error("ergodic_capacity: power must be finite and non-negative");
  if (p_c == 0.0) return 0.0;
  const double a = ch.B0 * ch.N0 / (p_c * phi);
  return ch.B0 / std::numbers::ln2 * exp_e1_scaled(a);
}

inline double ergodic_capacity(double p_c, const DeviceProfile& dev, const ChannelParams& ch)
{
  return ergodic_capacity(p_c, dev.phi, ch);
}

/// Mean of B0 log2(1 + p phi g / (B0 N0)) over the given channel-power draws g.
inline double mean_rate(double p_c, double phi, const ChannelParams& ch,
                        std::span<const double> gains)
{
  if (gains.empty()) throw std::invalid_argument("mean_rate: no channel draws");
  const double snr = p_c * phi / (ch.B0 * ch.N0);
  double acc = 0.0;
  for (double g : gains) acc += std::log2(1.0 + snr * g);
  return ch.B0 * acc / static_cast<double>(gains.size());
}

/// Monte-Carlo ergodic rate: i.i.d. Exp(1) channel-power draws, seeded.
inline double mc_capacity_oracle(double p_c, double phi, const ChannelParams& ch,
                                 std::size_t n_draws, std::uint64_t seed)
{
  if (n_draws < 1) throw std::invalid_argument("mc_capacity_oracle: n_draws must be >= 1");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> exp1(1.0);
  const double snr = p_c * phi / (ch.B0 * ch.N0);
  double acc = 0.0;
  for (std::size_t i = 0; i < n_draws; ++i) acc += std::log2(1.0 + snr * exp1(rng));
  return ch.B0 * acc / static_cast<double>(n_draws);
}

inline double mc_capacity_oracle(double p_c, const DeviceProfile& dev, const ChannelParams& ch,
                                 std::size_t n_draws, std::uint64_t seed)
{
  return mc_capacity_oracle(p_c, dev.phi, ch, n_draws, seed);
}

struct PlacementSpec {
  int count = 6;
  double radius_km = 0.5;
  double min_dist_km = 0.01;
  double shadowing_std_db = 8.0;
  std::uint64_t seed = 1;

  bool operator==(const PlacementSpec&) const = default;
};

/// Devices uniform over the annulus [min_dist, radius] around the server with
/// log-normal shadowing drawn once per device.
inline std::vector<DeviceProfile> generate_devices(const PlacementSpec& spec, double P_c_max,
                                                   double P_s_min, double P_s_max,
                                                   bool apply_shadowing = true)
{
  if (spec.count < 1) throw std::invalid_argument("generate_devices: count must be >= 1");
  if (!(spec.min_dist_km > 0.0) || !(spec.min_dist_km < spec.radius_km))
    throw std::invalid_argument("generate_devices: require 0 < min_dist_km < radius_km");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> area(spec.min_dist_km * spec.min_dist_km,
                                              spec.radius_km * spec.radius_km);
  std::normal_distribution<double> shadow(0.0, spec.shadowing_std_db);
  std::vector<DeviceProfile> devices;
  devices.reserve(static_cast<std::size_t>(spec.count));
  for (int k = 0; k < spec.count; ++k) {
    const double d = std::sqrt(area(rng));
    const double s = spec.shadowing_std_db > 0.0 ? shadow(rng) : 0.0;
    devices.push_back(make_device(k, d, s, P_c_max, P_s_min, P_s_max, apply_shadowing));
  }
  return devices;
}

}  // namespace sc2feel
