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

// Scenario configuration: JSON with unit-suffixed strings for physical
// quantities. A bare number is read in SI units. Unknown keys are rejected.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sc2feel/allocator.hpp"
#include "sc2feel/batch_scheduler.hpp"
#include "sc2feel/channel.hpp"
#include "sc2feel/cost_model.hpp"
#include "sc2feel/feel_sim.hpp"
#include "sc2feel/sensing.hpp"
#include "sc2feel/units.hpp"

namespace sc2feel {

/// Malformed document: bad JSON type, unknown key, unparsable quantity.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PowerLimits {
  double P_c_max = 0.1;  ///< 20 dBm
  double P_s_min = 0.1;  ///< 20 dBm
  double P_s_max = 1.0;  ///< 30 dBm

  bool operator==(const PowerLimits&) const = default;
};

struct ScheduleConfig {
  ScheduleScheme scheme = ScheduleScheme::adaptive_sqrt;
  double b0_frac = 0.5;

  bool operator==(const ScheduleConfig&) const = default;
};

struct SensingConfig {
  double clutter_psd = 8e-11;  ///< [W/Hz]
  int trials = 20;
  double epsilon = 0.02;
  std::uint64_t seed = 1;

  bool operator==(const SensingConfig&) const = default;
};

/// Placement used when a config names no devices.
inline PlacementSpec default_placement()
{
  PlacementSpec p;
  p.seed = 1;
  return p;
}

struct ScenarioConfig {
  SystemParams system;
  PowerLimits limits;
  bool shadowing = true;
  std::vector<DeviceProfile> devices;  ///< resolved, size == system.K
  AllocatorOptions allocator;
  BoundParams bound;
  SurrogateLossModel model;
  ScheduleConfig schedule;
  ChirpParams chirp;
  PrimitiveSet scene = default_scene();
  SensingConfig sensing;

  bool operator==(const ScenarioConfig&) const = default;

  /// Throws std::invalid_argument on an out-of-range value.
  void validate() const
  {
    system.validate();
    if (devices.size() != static_cast<std::size_t>(system.K))
      throw std::invalid_argument("device count does not match K");
    for (const auto& d : devices) d.validate();
    bound.validate();
    model.validate();
    chirp.validate();
    scene.validate();
    if (!(sensing.clutter_psd >= 0.0)) throw std::invalid_argument("clutter_psd must be >= 0");
    if (sensing.trials < 1) throw std::invalid_argument("sensing trials must be >= 1");
    if (!(sensing.epsilon > 0.0 && sensing.epsilon < 1.0))
      throw std::invalid_argument("sensing epsilon must lie in (0, 1)");
    if (allocator.grid_points < 2 || !(allocator.lower_fraction > 0.0 && allocator.lower_fraction < 1.0))
      throw std::invalid_argument("allocator grid settings out of range");
  }
};

inline const char* to_string(WindowKind w) { return w == WindowKind::hann ? "hann" : "rectangular"; }
inline const char* to_string(RangeIntegration r)
{
  return r == RangeIntegration::coherent ? "coherent" : "magnitude_first";
}
inline const char* to_string(ScatterOrder o) { return o == ScatterOrder::first ? "first" : "higher"; }

namespace detail {

using Json = nlohmann::json;

inline void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed)
{
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

inline double quantity(const Json& j, const char* key, Dimension dim, double fallback,
                       const std::string& where)
{
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_quantity(v.get<std::string>(), dim);
    } catch (const UnitError& e) {
      throw ConfigError(where + "." + key + ": " + e.what());
    }
  }
  throw ConfigError(where + "." + key + ": expected a number or a quantity string");
}

inline double number(const Json& j, const char* key, double fallback, const std::string& where)
{
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

template <class Int>
Int integer(const Json& j, const char* key, Int fallback, const std::string& where)
{
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (v.is_number_unsigned()) return static_cast<Int>(v.get<std::uint64_t>());
    const auto s = v.get<std::int64_t>();
    if (s < 0) throw ConfigError(where + "." + key + ": must be non-negative");
    return static_cast<Int>(s);
  } else {
    return static_cast<Int>(v.get<std::int64_t>());
  }
}

inline std::string text(const Json& j, const char* key, const std::string& fallback, const std::string& where)
{
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

inline bool on_off(const Json& j, const char* key, bool fallback, const std::string& where)
{
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    if (v == "on") return true;
    if (v == "off") return false;
  }
  throw ConfigError(where + "." + key + ": expected true/false or \"on\"/\"off\"");
}

inline const Json& section(const Json& root, const char* key)
{
  static const Json empty = Json::object();
  return root.contains(key) ? root.at(key) : empty;
}

inline SystemParams parse_system(const Json& j, PowerLimits& lim, bool& shadowing)
{
  const std::string w = "system";
  check_keys(j, w, {"K", "B0", "N0", "D_b", "model_params", "bits_per_param", "T0", "nu", "tau",
                    "f_cpu", "theta", "R", "T_max", "E_max", "P_c_max", "P_s_min", "P_s_max",
                    "shadowing"});
  SystemParams s;
  s.K = integer(j, "K", s.K, w);
  s.B0 = quantity(j, "B0", Dimension::frequency, s.B0, w);
  s.N0 = quantity(j, "N0", Dimension::power_density, s.N0, w);
  if (j.contains("D_b") && (j.contains("model_params") || j.contains("bits_per_param")))
    throw ConfigError("system: give either D_b or model_params/bits_per_param");
  s.D_b = number(j, "model_params", 4900677.0, w) * number(j, "bits_per_param", 32.0, w);
  s.D_b = number(j, "D_b", s.D_b, w);
  s.T0 = quantity(j, "T0", Dimension::time, s.T0, w);
  s.nu = number(j, "nu", s.nu, w);
  s.tau = integer(j, "tau", s.tau, w);
  s.f_cpu = quantity(j, "f_cpu", Dimension::frequency, s.f_cpu, w);
  s.theta = number(j, "theta", s.theta, w);
  s.R = integer(j, "R", s.R, w);
  s.T_max = quantity(j, "T_max", Dimension::time, s.T_max, w);
  s.E_max = quantity(j, "E_max", Dimension::energy, s.E_max, w);
  lim.P_c_max = quantity(j, "P_c_max", Dimension::power, lim.P_c_max, w);
  lim.P_s_min = quantity(j, "P_s_min", Dimension::power, lim.P_s_min, w);
  lim.P_s_max = quantity(j, "P_s_max", Dimension::power, lim.P_s_max, w);
  shadowing = on_off(j, "shadowing", shadowing, w);
  return s;
}

inline std::vector<DeviceProfile> parse_devices(const Json& j, bool k_given, SystemParams& sys,
                                                const PowerLimits& lim, bool shadowing)
{
  if (j.is_null() || j.is_object()) {
    const std::string w = "devices";
    const Json& g = j.is_null() ? Json::object() : j;
    check_keys(g, w, {"count", "radius_km", "min_dist_km", "shadowing_std_db", "seed"});
    PlacementSpec p = default_placement();
    p.count = sys.K;
    if (g.contains("count")) {
      p.count = integer(g, "count", p.count, w);
      if (k_given && p.count != sys.K) throw ConfigError("devices.count disagrees with system.K");
    }
    p.radius_km = number(g, "radius_km", p.radius_km, w);
    p.min_dist_km = number(g, "min_dist_km", p.min_dist_km, w);
    p.shadowing_std_db = number(g, "shadowing_std_db", p.shadowing_std_db, w);
    p.seed = integer(g, "seed", p.seed, w);
    sys.K = p.count;
    return generate_devices(p, lim.P_c_max, lim.P_s_min, lim.P_s_max, shadowing);
  }
  if (!j.is_array()) throw ConfigError("devices: expected a list or a generator object");
  if (k_given && j.size() != static_cast<std::size_t>(sys.K))
    throw ConfigError("devices: list length disagrees with system.K");
  std::vector<DeviceProfile> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = "devices[" + std::to_string(i) + "]";
    const Json& d = j[i];
    check_keys(d, w, {"id", "dist_km", "shadowing_db", "P_c_max", "P_s_min", "P_s_max"});
    if (!d.contains("dist_km")) throw ConfigError(w + ": dist_km is required");
    out.push_back(make_device(integer(d, "id", static_cast<int>(i), w), number(d, "dist_km", 0.0, w),
                              number(d, "shadowing_db", 0.0, w),
                              quantity(d, "P_c_max", Dimension::power, lim.P_c_max, w),
                              quantity(d, "P_s_min", Dimension::power, lim.P_s_min, w),
                              quantity(d, "P_s_max", Dimension::power, lim.P_s_max, w), shadowing));
  }
  sys.K = static_cast<int>(out.size());
  return out;
}

}  // namespace detail

inline ScenarioConfig parse_config(const nlohmann::json& root)
{
  using namespace detail;
  check_keys(root, "config", {"system", "devices", "allocator", "bound", "model", "schedule", "chirp",
                              "scene", "sensing"});
  ScenarioConfig c;
  try {
    const Json& sys = section(root, "system");
    c.system = parse_system(sys, c.limits, c.shadowing);
    c.devices = parse_devices(root.contains("devices") ? root.at("devices") : Json(), sys.contains("K"),
                              c.system, c.limits, c.shadowing);

    const Json& a = section(root, "allocator");
    check_keys(a, "allocator", {"grid_points", "refine_points", "lower_fraction", "polish"});
    c.allocator.grid_points = integer(a, "grid_points", c.allocator.grid_points, "allocator");
    c.allocator.refine_points = integer(a, "refine_points", c.allocator.refine_points, "allocator");
    c.allocator.lower_fraction = number(a, "lower_fraction", c.allocator.lower_fraction, "allocator");
    c.allocator.polish = on_off(a, "polish", c.allocator.polish, "allocator");

    const Json& b = section(root, "bound");
    check_keys(b, "bound", {"eta", "L", "sigma2", "beta", "tau", "K", "F1", "F_inf"});
    c.bound.eta = number(b, "eta", c.bound.eta, "bound");
    c.bound.L = number(b, "L", c.bound.L, "bound");
    c.bound.sigma2 = number(b, "sigma2", c.bound.sigma2, "bound");
    c.bound.beta = number(b, "beta", c.bound.beta, "bound");
    c.bound.tau = integer(b, "tau", c.system.tau, "bound");
    c.bound.K = integer(b, "K", c.system.K, "bound");
    c.bound.F1 = number(b, "F1", c.bound.F1, "bound");
    c.bound.F_inf = number(b, "F_inf", c.bound.F_inf, "bound");

    const Json& m = section(root, "model");
    check_keys(m, "model", {"gamma", "beta", "sigma", "F1", "F_floor"});
    c.model.gamma = number(m, "gamma", c.model.gamma, "model");
    c.model.beta_noise = number(m, "beta", c.model.beta_noise, "model");
    c.model.sigma_sim = number(m, "sigma", c.model.sigma_sim, "model");
    c.model.F1 = number(m, "F1", c.model.F1, "model");
    c.model.F_floor = number(m, "F_floor", c.model.F_floor, "model");

    const Json& s = section(root, "schedule");
    check_keys(s, "schedule", {"scheme", "b0_frac"});
    try {
      c.schedule.scheme = schedule_scheme_from_string(text(s, "scheme", "adaptive_sqrt", "schedule"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("schedule.scheme: ") + e.what());
    }
    c.schedule.b0_frac = number(s, "b0_frac", c.schedule.b0_frac, "schedule");

    const Json& ch = section(root, "chirp");
    const std::string w = "chirp";
    check_keys(ch, w, {"B_s", "T_p", "M", "f_s", "f_c", "T0", "W", "Q", "r_a", "r_b", "window", "integration"});
    c.chirp.T0 = c.system.T0;
    c.chirp.B_s = quantity(ch, "B_s", Dimension::frequency, c.chirp.B_s, w);
    c.chirp.T_p = quantity(ch, "T_p", Dimension::time, c.chirp.T_p, w);
    c.chirp.M = integer(ch, "M", c.chirp.M, w);
    c.chirp.f_s = quantity(ch, "f_s", Dimension::frequency, c.chirp.f_s, w);
    c.chirp.f_c = quantity(ch, "f_c", Dimension::frequency, c.chirp.f_c, w);
    c.chirp.T0 = quantity(ch, "T0", Dimension::time, c.chirp.T0, w);
    c.chirp.W = integer(ch, "W", c.chirp.W, w);
    c.chirp.Q = integer(ch, "Q", c.chirp.Q, w);
    c.chirp.r_a = integer(ch, "r_a", c.chirp.r_a, w);
    c.chirp.r_b = integer(ch, "r_b", c.chirp.r_b, w);
    const std::string win = text(ch, "window", "hann", w);
    if (win == "hann") c.chirp.window = WindowKind::hann;
    else if (win == "rectangular") c.chirp.window = WindowKind::rectangular;
    else throw ConfigError("chirp.window: expected hann or rectangular");
    const std::string integ = text(ch, "integration", "coherent", w);
    if (integ == "coherent") c.chirp.integration = RangeIntegration::coherent;
    else if (integ == "magnitude_first") c.chirp.integration = RangeIntegration::magnitude_first;
    else throw ConfigError("chirp.integration: expected coherent or magnitude_first");

    if (root.contains("scene")) {
      const Json& sc = root.at("scene");
      if (!sc.is_array()) throw ConfigError("scene: expected a list of primitives");
      c.scene.items.clear();
      for (std::size_t i = 0; i < sc.size(); ++i) {
        const std::string pw = "scene[" + std::to_string(i) + "]";
        check_keys(sc[i], pw, {"rcs_gain", "r0", "v", "a", "f_m", "phase", "order"});
        Primitive p;
        p.rcs_gain = number(sc[i], "rcs_gain", p.rcs_gain, pw);
        p.r0 = quantity(sc[i], "r0", Dimension::length, p.r0, pw);
        p.v = number(sc[i], "v", p.v, pw);
        p.a = quantity(sc[i], "a", Dimension::length, p.a, pw);
        p.f_m = quantity(sc[i], "f_m", Dimension::frequency, p.f_m, pw);
        p.phase = number(sc[i], "phase", p.phase, pw);
        const std::string ord = text(sc[i], "order", "first", pw);
        if (ord == "first") p.order = ScatterOrder::first;
        else if (ord == "higher") p.order = ScatterOrder::higher;
        else throw ConfigError(pw + ".order: expected first or higher");
        c.scene.items.push_back(p);
      }
    }

    const Json& se = section(root, "sensing");
    check_keys(se, "sensing", {"clutter_psd", "trials", "epsilon", "seed"});
    c.sensing.clutter_psd = quantity(se, "clutter_psd", Dimension::power_density, c.sensing.clutter_psd, "sensing");
    c.sensing.trials = integer(se, "trials", c.sensing.trials, "sensing");
    c.sensing.epsilon = number(se, "epsilon", c.sensing.epsilon, "sensing");
    c.sensing.seed = integer(se, "seed", c.sensing.seed, "sensing");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

/// Fully resolved form: devices listed explicitly, all values in SI units.
inline nlohmann::json to_json(const ScenarioConfig& c)
{
  using Json = nlohmann::json;
  Json devs = Json::array();
  for (const auto& d : c.devices)
    devs.push_back({{"id", d.id}, {"dist_km", d.dist_km}, {"shadowing_db", d.shadowing_db},
                    {"P_c_max", d.P_c_max}, {"P_s_min", d.P_s_min}, {"P_s_max", d.P_s_max}});
  Json scene = Json::array();
  for (const auto& p : c.scene.items)
    scene.push_back({{"rcs_gain", p.rcs_gain}, {"r0", p.r0}, {"v", p.v}, {"a", p.a}, {"f_m", p.f_m},
                     {"phase", p.phase}, {"order", to_string(p.order)}});
  const auto& s = c.system;
  return {
      {"system",
       {{"K", s.K}, {"B0", s.B0}, {"N0", s.N0}, {"D_b", s.D_b}, {"T0", s.T0}, {"nu", s.nu},
        {"tau", s.tau}, {"f_cpu", s.f_cpu}, {"theta", s.theta}, {"R", s.R}, {"T_max", s.T_max},
        {"E_max", s.E_max}, {"P_c_max", c.limits.P_c_max}, {"P_s_min", c.limits.P_s_min},
        {"P_s_max", c.limits.P_s_max}, {"shadowing", c.shadowing}}},
      {"devices", devs},
      {"allocator",
       {{"grid_points", c.allocator.grid_points}, {"refine_points", c.allocator.refine_points},
        {"lower_fraction", c.allocator.lower_fraction}, {"polish", c.allocator.polish}}},
      {"bound",
       {{"eta", c.bound.eta}, {"L", c.bound.L}, {"sigma2", c.bound.sigma2}, {"beta", c.bound.beta},
        {"tau", c.bound.tau}, {"K", c.bound.K}, {"F1", c.bound.F1}, {"F_inf", c.bound.F_inf}}},
      {"model",
       {{"gamma", c.model.gamma}, {"beta", c.model.beta_noise}, {"sigma", c.model.sigma_sim},
        {"F1", c.model.F1}, {"F_floor", c.model.F_floor}}},
      {"schedule", {{"scheme", to_string(c.schedule.scheme)}, {"b0_frac", c.schedule.b0_frac}}},
      {"chirp",
       {{"B_s", c.chirp.B_s}, {"T_p", c.chirp.T_p}, {"M", c.chirp.M}, {"f_s", c.chirp.f_s},
        {"f_c", c.chirp.f_c}, {"T0", c.chirp.T0}, {"W", c.chirp.W}, {"Q", c.chirp.Q},
        {"r_a", c.chirp.r_a}, {"r_b", c.chirp.r_b}, {"window", to_string(c.chirp.window)},
        {"integration", to_string(c.chirp.integration)}}},
      {"scene", scene},
      {"sensing",
       {{"clutter_psd", c.sensing.clutter_psd}, {"trials", c.sensing.trials},
        {"epsilon", c.sensing.epsilon}, {"seed", c.sensing.seed}}},
  };
}

inline ScenarioConfig default_config() { return parse_config(nlohmann::json::object()); }

/// Schedule for a config: the configured scheme at b0 = b0_frac * b_sum / R.
inline BatchSchedule schedule_from_config(const ScenarioConfig& c, Samples b_sum)
{
  const Samples b0 = b0_from_fraction(b_sum, c.system.R, c.schedule.b0_frac);
  if (c.schedule.scheme == ScheduleScheme::adaptive_sqrt) return adaptive_sqrt_schedule(b_sum, c.system.R, b0);
  return baseline_schedule(c.schedule.scheme, b_sum, c.system.R, b0);
}

}  // namespace sc2feel
