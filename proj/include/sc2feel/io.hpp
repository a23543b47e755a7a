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

// File formats: JSON documents, locale-free CSV with 17 significant digits,
// and a raw float64 matrix format for spectrograms. Every file is written to
// a temporary sibling first and renamed into place.

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unistd.h>
#include <vector>

#include "json.hpp"

#include "sc2feel/allocator.hpp"
#include "sc2feel/audit.hpp"
#include "sc2feel/batch_scheduler.hpp"
#include "sc2feel/feel_sim.hpp"
#include "sc2feel/sensing.hpp"
#include "sc2feel/units.hpp"

namespace sc2feel {

using Json = nlohmann::json;

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shortest form is not used on purpose: always 17 significant digits.
inline std::string format_double(double v)
{
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw IoError("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents)
{
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json read_json(const std::filesystem::path& path)
{
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// --- allocation ------------------------------------------------------------

inline Json to_json(const AllocationSolution& sol)
{
  Json devs = Json::array();
  for (const auto& d : sol.devices)
    devs.push_back({{"id", d.id}, {"p_s_w", d.p_s}, {"p_c_w", d.p_c}, {"t_cm_s", d.t_cm}});
  return {{"devices", devs}, {"b_sum", sol.b_sum}, {"regime", to_string(sol.regime)}};
}

inline AllocationSolution allocation_from_json(const Json& j)
{
  try {
    AllocationSolution sol;
    for (const auto& d : j.at("devices"))
      sol.devices.push_back({d.at("id").get<int>(), d.at("p_s_w").get<double>(),
                             d.at("p_c_w").get<double>(), d.at("t_cm_s").get<double>()});
    sol.b_sum = j.at("b_sum").get<Samples>();
    sol.regime = regime_from_string(j.at("regime").get<std::string>());
    return sol;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed allocation JSON: ") + e.what());
  }
}

// --- audit -----------------------------------------------------------------

inline Json to_json(const AuditReport& rep)
{
  Json rows = Json::array();
  for (const auto& e : rep.entries) {
    Json row = {{"constraint", e.name}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"slack", e.slack},
                {"pass", e.pass}};
    if (e.device >= 0) row["device"] = e.device;
    rows.push_back(row);
  }
  return {{"passed", rep.passed()}, {"constraints", rows}};
}

// --- schedule --------------------------------------------------------------

inline std::string schedule_csv(const BatchSchedule& s)
{
  std::string out = "round,batch\n";
  for (std::size_t i = 0; i < s.b.size(); ++i)
    out += std::to_string(i + 1) + "," + std::to_string(s.b[i]) + "\n";
  return out;
}

inline std::vector<Samples> schedule_from_csv(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "round,batch") throw IoError("schedule CSV: bad header");
  std::vector<Samples> b;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("schedule CSV: bad row '" + line + "'");
    b.push_back(std::stoll(line.substr(comma + 1)));
  }
  return b;
}

// --- simulation ------------------------------------------------------------

inline std::string records_csv(const std::vector<RoundRecord>& recs)
{
  std::string out = "round,batch,latency_s,cum_time_s,max_cum_energy_j,loss,terminated\n";
  for (const auto& r : recs) {
    out += std::to_string(r.r) + "," + std::to_string(r.batch) + "," + format_double(r.latency_s) +
           "," + format_double(r.cum_time_s) + "," + format_double(r.max_cum_energy()) + "," +
           format_double(r.loss) + "," + (r.terminated ? "true" : "false") + "\n";
  }
  return out;
}

inline Json to_json(const SimulationRun& run, Scheme scheme, std::uint64_t seed, Samples b_sum)
{
  Json j = {{"scheme", to_string(scheme)},     {"seed", seed},
            {"b_sum", b_sum},                  {"completed_rounds", run.completed_rounds},
            {"final_loss", run.final_loss},    {"terminated", run.terminated},
            {"reason", to_string(run.reason)}};
  if (!run.records.empty()) {
    const auto& last = run.records.back();
    j["total_time_s"] = last.cum_time_s;
    j["cum_energy_j"] = last.cum_energy_j;
  }
  return j;
}

inline Json to_json(const std::vector<SchemeSummary>& sums)
{
  Json arr = Json::array();
  for (const auto& s : sums) {
    Json traj = Json::array();
    for (const auto& p : s.trajectory) traj.push_back({{"round", p.r}, {"cum_time_s", p.cum_time_s}, {"mean_loss", p.mean_loss}});
    arr.push_back({{"scheme", to_string(s.scheme)},
                   {"b_sum", s.b_sum},
                   {"mean_final_loss", s.mean_final_loss},
                   {"std_final_loss", s.std_final_loss},
                   {"mean_completed_rounds", s.mean_completed_rounds},
                   {"terminated_runs", s.terminated_runs},
                   {"final_losses", s.final_losses},
                   {"trajectory", traj}});
  }
  return arr;
}

// --- sensing ---------------------------------------------------------------

inline std::string quality_csv(const QualityCurve& c)
{
  std::string out = "power_dbm,ssim_mean,ssim_std\n";
  for (const auto& p : c.points)
    out += format_double(watts_to_dbm(p.p_s)) + "," + format_double(p.ssim_mean) + "," +
           format_double(p.ssim_std) + "\n";
  return out;
}

inline Json threshold_report(const QualityCurve& c, double epsilon)
{
  return {{"threshold_w", c.threshold_w},
          {"threshold_dbm", watts_to_dbm(c.threshold_w)},
          {"saturation_ssim", c.saturation_ssim},
          {"epsilon", epsilon}};
}

/// One JSON header line (shape, power, seed), then rows * cols little-endian
/// float64 values in row-major order.
inline std::string encode_spectrogram(const Spectrogram& s)
{
  static_assert(sizeof(double) == 8);
  if constexpr (std::endian::native != std::endian::little)
    throw IoError("spectrogram export assumes a little-endian host");
  const Json header = {{"rows", s.magnitude.rows()},  {"cols", s.magnitude.cols()},
                       {"dtype", "float64"},           {"order", "row-major"},
                       {"power_w", s.power_w},         {"seed", s.seed}};
  std::string out = header.dump() + "\n";
  for (Eigen::Index i = 0; i < s.magnitude.rows(); ++i)
    for (Eigen::Index j = 0; j < s.magnitude.cols(); ++j) {
      const double v = s.magnitude(i, j);
      out.append(reinterpret_cast<const char*>(&v), sizeof v);
    }
  return out;
}

inline Spectrogram decode_spectrogram(const std::string& bytes)
{
  const auto nl = bytes.find('\n');
  if (nl == std::string::npos) throw IoError("spectrogram: missing header");
  const Json header = Json::parse(bytes.substr(0, nl));
  const auto rows = header.at("rows").get<Eigen::Index>();
  const auto cols = header.at("cols").get<Eigen::Index>();
  if (bytes.size() - nl - 1 != static_cast<std::size_t>(rows * cols) * sizeof(double))
    throw IoError("spectrogram: payload size does not match header");
  Spectrogram s;
  s.power_w = header.at("power_w").get<double>();
  s.seed = header.at("seed").get<std::uint64_t>();
  s.magnitude.resize(rows, cols);
  const char* p = bytes.data() + nl + 1;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j, p += sizeof(double)) std::memcpy(&s.magnitude(i, j), p, sizeof(double));
  return s;
}

}  // namespace sc2feel
