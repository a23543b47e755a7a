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

// Unit conversions. Everything inside the library is SI (W, s, J, Hz,
// W/Hz); decibel and prefixed units are only accepted at the config boundary.

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sc2feel {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

enum class Dimension { dimensionless, power, power_density, frequency, time, energy, length };

inline const char* to_string(Dimension d)
{
  switch (d) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::power: return "power";
    case Dimension::power_density: return "power spectral density";
    case Dimension::frequency: return "frequency";
    case Dimension::time: return "time";
    case Dimension::energy: return "energy";
    case Dimension::length: return "length";
  }
  return "?";
}

class UnitError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Parse "<number> [unit]" into the SI value of `dim`. A bare number is taken
/// as already being in SI units.
///
///   power          W, mW, dBm, dBW
///   power density  W/Hz, dBm/Hz, dBW/Hz
///   frequency      Hz, kHz, MHz, GHz
///   time           s, ms, us
///   energy         J, mJ, kJ
///   length         m, km
inline double parse_quantity(std::string_view text, Dimension dim)
{
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  const std::string_view s = trim(text);
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first)
    throw UnitError("cannot parse quantity '" + std::string(text) + "'");
  const std::string unit(trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr))));

  auto bad = [&]() -> double {
    throw UnitError("unit '" + unit + "' is not a " + to_string(dim) + " unit in '" +
                    std::string(text) + "'");
  };
  if (unit.empty()) return value;

  switch (dim) {
    case Dimension::dimensionless:
      return bad();
    case Dimension::power:
      if (unit == "W") return value;
      if (unit == "mW") return value / 1e3;
      if (unit == "dBm") return dbm_to_watts(value);
      if (unit == "dBW") return db_to_linear(value);
      return bad();
    case Dimension::power_density:
      if (unit == "W/Hz") return value;
      if (unit == "dBm/Hz") return dbm_to_watts(value);
      if (unit == "dBW/Hz") return db_to_linear(value);
      return bad();
    case Dimension::frequency:
      if (unit == "Hz") return value;
      if (unit == "kHz") return value * 1e3;
      if (unit == "MHz") return value * 1e6;
      if (unit == "GHz") return value * 1e9;
      return bad();
    case Dimension::time:
      if (unit == "s") return value;
      if (unit == "ms") return value / 1e3;
      if (unit == "us") return value / 1e6;
      return bad();
    case Dimension::energy:
      if (unit == "J") return value;
      if (unit == "mJ") return value / 1e3;
      if (unit == "kJ") return value * 1e3;
      return bad();
    case Dimension::length:
      if (unit == "m") return value;
      if (unit == "km") return value * 1e3;
      return bad();
  }
  return bad();
}

}  // namespace sc2feel
