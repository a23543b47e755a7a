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

// Sensing power, communication power and upload time per device, and
// the largest total sample count every device can afford.
//
// With the upload constraint tight (t_cm C(p_c) = D_b) the latency and energy
// budgets each bound the total sample count as a function of p_c alone:
//
//   latency: (T_max - R D_b / C(p_c)) / (T0 + nu tau / f_cpu)
//   energy:  (E_max - R p_c D_b / C(p_c)) / (T0 P_s_min + tau theta nu f_cpu^2)
//
// The first is increasing in p_c, the second decreasing (p/C(p) grows with
// p), so each device's bound is unimodal and a 1-D grid search finds it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sc2feel/channel.hpp"
#include "sc2feel/cost_model.hpp"
#include "sc2feel/numerics.hpp"

namespace sc2feel {

enum class Regime { energy_limited, latency_limited, mixed };

inline const char* to_string(Regime r)
{
  switch (r) {
    case Regime::energy_limited: return "energy_limited";
    case Regime::latency_limited: return "latency_limited";
    case Regime::mixed: return "mixed";
  }
  return "?";
}

inline Regime regime_from_string(const std::string& s)
{
  if (s == "energy_limited") return Regime::energy_limited;
  if (s == "latency_limited") return Regime::latency_limited;
  if (s == "mixed") return Regime::mixed;
  throw std::invalid_argument("unknown regime '" + s + "'");
}

struct DeviceAllocation {
  int id = 0;
  double p_s = 0.0;   ///< sensing power [W]
  double p_c = 0.0;   ///< communication power [W]
  double t_cm = 0.0;  ///< upload time per round [s]

  bool operator==(const DeviceAllocation&) const = default;
};

struct AllocationSolution {
  std::vector<DeviceAllocation> devices;
  Samples b_sum = 0;
  Regime regime = Regime::mixed;

  bool operator==(const AllocationSolution&) const = default;
};

/// No power in [lo, P_c_max] lets some device sense a single sample.
class InfeasibleError : public std::runtime_error {
public:
  InfeasibleError(int device_id, double latency_bound, double energy_bound)
    : std::runtime_error(make_message(device_id, latency_bound, energy_bound)),
      device_id_(device_id), latency_bound_(latency_bound), energy_bound_(energy_bound) {}

  int device_id() const noexcept { return device_id_; }
  double latency_bound() const noexcept { return latency_bound_; }
  double energy_bound() const noexcept { return energy_bound_; }
  /// "latency" or "energy", whichever bound is smaller.
  const char* binding_constraint() const noexcept
  {
    return latency_bound_ <= energy_bound_ ? "latency" : "energy";
  }

private:
  static std::string make_message(int id, double lat, double en)
  {
    std::ostringstream msg;
    msg << "infeasible budgets: device " << id << " can sense fewer than one sample ("
        << (lat <= en ? "latency" : "energy") << " constraint binds; latency bound " << lat
        << ", energy bound " << en << ")";
    return msg.str();
  }

  int device_id_;
  double latency_bound_;
  double energy_bound_;
};

inline double optimal_sensing_power(const DeviceProfile& dev) { return dev.P_s_min; }

struct SampleBounds {
  double latency = 0.0;
  double energy = 0.0;

  double value() const { return std::min(latency, energy); }
};

/// Both sample-count bounds at communication power p_c and sensing power p_s,
/// with the upload time eliminated through t_cm = D_b / C(p_c). Negative
/// means infeasible.
inline SampleBounds sample_bounds(double p_c, double p_s, const DeviceProfile& dev,
                                  const SystemParams& sys)
{
  if (!(p_c > 0.0)) {
    const double inf = std::numeric_limits<double>::infinity();
    return {-inf, -inf};
  }
  const double capacity = ergodic_capacity(p_c, dev, sys.channel());
  const double t_cm = sys.D_b / capacity;
  const double R = static_cast<double>(sys.R);
  SampleBounds out;
  out.latency = (sys.T_max - R * t_cm) / sys.time_per_sample();
  out.energy = (sys.E_max - R * p_c * t_cm) /
               (sys.T0 * p_s + sys.compute_energy_per_sample());
  return out;
}

inline SampleBounds sample_bounds(double p_c, const DeviceProfile& dev, const SystemParams& sys)
{
  return sample_bounds(p_c, optimal_sensing_power(dev), dev, sys);
}

/// Largest total sample count device `dev` supports at power p_c.
inline double phi_k(double p_c, const DeviceProfile& dev, const SystemParams& sys)
{
  return sample_bounds(p_c, dev, sys).value();
}

struct AllocatorOptions {
  std::size_t grid_points = 2000;
  std::size_t refine_points = 200;
  double lower_fraction = 1e-6;  ///< grid starts at P_c_max * lower_fraction
  bool polish = true;            ///< golden-section step after the grid refinement

  bool operator==(const AllocatorOptions&) const = default;
};

struct DeviceOptimum {
  double p_c = 0.0;
  SampleBounds bounds;
  bool at_peak_power = false;
  /// Latency term binds at the peak power; otherwise the energy budget is
  /// what stops the power from rising.
  bool latency_bound() const { return at_peak_power && bounds.latency <= bounds.energy; }
};

inline DeviceOptimum optimize_device(const DeviceProfile& dev, const SystemParams& sys,
                                     const AllocatorOptions& opt = {})
{
  const GridSpec grid{dev.P_c_max * opt.lower_fraction, dev.P_c_max, opt.grid_points,
                      Spacing::logarithmic};
  const auto phi = [&](double p) { return phi_k(p, dev, sys); };
  auto best = argmax_refined(phi, grid, opt.refine_points);
  // phi is the minimum of an increasing and a single-peaked bound, so it is
  // unimodal and the kink can be located well below the grid spacing.
  if (opt.polish && best.x < dev.P_c_max) {
    const double step = std::pow(1.0 / opt.lower_fraction, 1.0 / static_cast<double>(opt.grid_points - 1));
    best = golden_section_polish(phi, std::max(grid.lo, best.x / step), std::min(grid.hi, best.x * step), best);
  }
  DeviceOptimum out;
  out.p_c = best.x;
  out.bounds = sample_bounds(best.x, dev, sys);
  out.at_peak_power = best.x == dev.P_c_max;
  return out;
}

inline Regime classify_regime(const std::vector<DeviceOptimum>& optima)
{
  const bool all_latency =
      std::all_of(optima.begin(), optima.end(), [](const auto& o) { return o.latency_bound(); });
  const bool all_energy =
      std::none_of(optima.begin(), optima.end(), [](const auto& o) { return o.latency_bound(); });
  if (all_latency) return Regime::latency_limited;
  if (all_energy) return Regime::energy_limited;
  return Regime::mixed;
}

/// Smallest double t with t * capacity >= bits.
inline double upload_time(double bits, double capacity)
{
  double t = bits / capacity;
  while (t * capacity < bits) t = std::nextafter(t, std::numeric_limits<double>::infinity());
  while (std::nextafter(t, 0.0) * capacity >= bits) t = std::nextafter(t, 0.0);
  return t;
}

namespace detail {

inline void validate_inputs(const SystemParams& sys, const std::vector<DeviceProfile>& devices)
{
  sys.validate();
  if (devices.empty()) throw std::invalid_argument("allocation needs at least one device");
  if (devices.size() != static_cast<std::size_t>(sys.K))
    throw std::invalid_argument("device count does not match SystemParams::K");
  for (const auto& d : devices) d.validate();
}

inline AllocationSolution assemble(const SystemParams& sys,
                                   const std::vector<DeviceProfile>& devices,
                                   const std::vector<DeviceOptimum>& optima)
{
  std::size_t worst = 0;
  for (std::size_t k = 1; k < optima.size(); ++k)
    if (optima[k].bounds.value() < optima[worst].bounds.value()) worst = k;
  const double bound = optima[worst].bounds.value();
  if (!(bound >= 1.0))
    throw InfeasibleError(devices[worst].id, optima[worst].bounds.latency,
                          optima[worst].bounds.energy);

  AllocationSolution sol;
  sol.b_sum = static_cast<Samples>(std::floor(bound));
  sol.regime = classify_regime(optima);
  const ChannelParams ch = sys.channel();
  for (std::size_t k = 0; k < devices.size(); ++k) {
    DeviceAllocation a;
    a.id = devices[k].id;
    a.p_s = optimal_sensing_power(devices[k]);
    a.p_c = optima[k].p_c;
    a.t_cm = upload_time(sys.D_b, ergodic_capacity(a.p_c, devices[k], ch));
    sol.devices.push_back(a);
  }
  return sol;
}

}  // namespace detail

/// Maximize min_k phi_k(p_c,k): the devices decouple, so each power is its
/// own grid argmax; b_sum is the floor of the smallest optimum.
inline AllocationSolution solve_allocation(const SystemParams& sys,
                                           const std::vector<DeviceProfile>& devices,
                                           const AllocatorOptions& opt = {})
{
  detail::validate_inputs(sys, devices);
  std::vector<DeviceOptimum> optima;
  optima.reserve(devices.size());
  for (const auto& dev : devices) optima.push_back(optimize_device(dev, sys, opt));
  return detail::assemble(sys, devices, optima);
}

/// Peak-power baseline: every device uploads at P_c_max and the sample budget
/// is sized from the latency budget alone, without consulting E_max.
inline AllocationSolution max_power_allocation(const SystemParams& sys,
                                               const std::vector<DeviceProfile>& devices)
{
  detail::validate_inputs(sys, devices);
  std::vector<DeviceOptimum> optima;
  for (const auto& dev : devices) {
    DeviceOptimum o;
    o.p_c = dev.P_c_max;
    o.bounds = sample_bounds(dev.P_c_max, dev, sys);
    o.at_peak_power = true;
    // Sizing ignores the energy side entirely.
    o.bounds.energy = std::numeric_limits<double>::infinity();
    optima.push_back(o);
  }
  return detail::assemble(sys, devices, optima);
}

}  // namespace sc2feel
