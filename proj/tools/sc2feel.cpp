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

// sc2feel command-line front end.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 infeasible budgets or an
// invalid parameter value.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sc2feel/sc2feel.hpp"

namespace fs = std::filesystem;
using namespace sc2feel;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kInfeasible = 2 };

ScenarioConfig load_config(const std::string& path)
{
  if (path.empty()) return default_config();
  return parse_config(read_json(path));
}

fs::path sibling(const fs::path& out, const std::string& suffix)
{
  fs::path p = out;
  p.replace_extension(suffix);
  return p;
}

int cmd_allocate(const std::string& config, const std::string& out)
{
  const auto cfg = load_config(config);
  const auto sol = solve_allocation(cfg.system, cfg.devices, cfg.allocator);
  write_file_atomic(out, dump_json(to_json(sol)));
  std::cout << "b_sum " << sol.b_sum << ", regime " << to_string(sol.regime) << "\n";
  return kOk;
}

int cmd_schedule(const std::string& alloc, const std::string& config, const std::string& out)
{
  const auto cfg = load_config(config);
  const auto sol = allocation_from_json(read_json(alloc));
  const auto sched = schedule_from_config(cfg, sol.b_sum);
  if (sched.total() > sol.b_sum)
    throw std::logic_error("schedule exceeds the sample budget");
  write_file_atomic(out, schedule_csv(sched));
  std::cout << sched.rounds() << " rounds, " << sched.total() << " of " << sol.b_sum << " samples\n";
  return kOk;
}

int cmd_simulate(const std::string& config, const std::string& scheme_name, std::uint64_t seed,
                 const std::string& out)
{
  const auto cfg = load_config(config);
  const Scheme scheme = scheme_from_string(scheme_name);
  const auto plan = plan_scheme(scheme, cfg.system, cfg.devices, cfg.schedule.b0_frac, cfg.allocator);
  const auto run = run_simulation(cfg.system, cfg.devices, plan.allocation, plan.schedule, cfg.model, seed);
  write_file_atomic(out, records_csv(run.records));
  write_file_atomic(sibling(out, ".summary.json"),
                    dump_json(to_json(run, scheme, seed, plan.allocation.b_sum)));
  std::cout << run.completed_rounds << " rounds, final loss " << format_double(run.final_loss);
  if (run.terminated) std::cout << ", terminated (" << to_string(run.reason) << ")";
  std::cout << "\n";
  return kOk;
}

int cmd_sweep(const std::string& config, const std::string& param, const std::string& from,
              const std::string& to, int steps, const std::string& out)
{
  auto cfg = load_config(config);
  const bool emax = param == "emax";
  if (!emax && param != "tmax") throw std::invalid_argument("--param must be emax or tmax");
  if (steps < 1) throw std::invalid_argument("--steps must be >= 1");
  const Dimension dim = emax ? Dimension::energy : Dimension::time;
  const double lo = parse_quantity(from, dim);
  const double hi = parse_quantity(to, dim);

  std::string csv = "param_value,b_sum,regime";
  for (const auto& d : cfg.devices) csv += ",p_c_" + std::to_string(d.id);
  csv += "\n";
  for (int i = 0; i < steps; ++i) {
    const double v = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    SystemParams sys = cfg.system;
    (emax ? sys.E_max : sys.T_max) = v;
    csv += format_double(v);
    try {
      const auto sol = solve_allocation(sys, cfg.devices, cfg.allocator);
      csv += "," + std::to_string(sol.b_sum) + "," + to_string(sol.regime);
      for (const auto& d : sol.devices) csv += "," + format_double(d.p_c);
    } catch (const InfeasibleError&) {
      csv += ",0,infeasible";
      for (std::size_t k = 0; k < cfg.devices.size(); ++k) csv += ",";
    }
    csv += "\n";
  }
  write_file_atomic(out, csv);
  std::cout << steps << " sweep points\n";
  return kOk;
}

int cmd_sense_quality(const std::string& config, std::vector<double> powers_dbm,
                      std::optional<std::uint64_t> seed, const std::string& out,
                      const std::string& export_dir)
{
  auto cfg = load_config(config);
  if (seed) cfg.sensing.seed = *seed;
  if (powers_dbm.empty())
    for (int d = 0; d <= 30; d += 2) powers_dbm.push_back(d);
  std::vector<double> powers;
  for (double d : powers_dbm) powers.push_back(dbm_to_watts(d));
  const auto curve = quality_vs_power(cfg.scene, cfg.chirp, powers, cfg.sensing.clutter_psd,
                                      cfg.sensing.trials, cfg.sensing.seed, cfg.sensing.epsilon);
  write_file_atomic(out, quality_csv(curve));
  write_file_atomic(sibling(out, ".threshold.json"), dump_json(threshold_report(curve, cfg.sensing.epsilon)));
  if (!export_dir.empty()) {
    fs::create_directories(export_dir);
    for (std::size_t i = 0; i < powers.size(); ++i) {
      const auto s = trial_seed(cfg.sensing.seed, i, 0);
      auto spec = process_frame(
          synthesize_frame(cfg.scene, cfg.chirp, powers[i], cfg.sensing.clutter_psd, s).total(), cfg.chirp);
      spec.power_w = powers[i];
      spec.seed = s;
      write_file_atomic(fs::path(export_dir) / ("spectrogram_" + std::to_string(i) + ".f64"),
                        encode_spectrogram(spec));
    }
  }
  std::cout << "threshold " << format_double(watts_to_dbm(curve.threshold_w)) << " dBm, saturation SSIM "
            << format_double(curve.saturation_ssim) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Joint sensing, computation and communication planning for federated edge learning"};
  app.require_subcommand(1);

  std::string config, out, alloc, scheme = "proposed", param, from, to, export_dir;
  std::uint64_t seed = 1;
  int steps = 1;
  std::vector<double> powers_dbm;

  auto* allocate = app.add_subcommand("allocate", "Sensing and transmit powers plus the sample budget");
  allocate->add_option("--config", config, "Scenario JSON (defaults when omitted)");
  allocate->add_option("--out", out, "Allocation JSON")->required();

  auto* schedule = app.add_subcommand("schedule", "Per-round batch sizes for an allocation");
  schedule->add_option("--alloc", alloc, "Allocation JSON from 'allocate'")->required();
  schedule->add_option("--config", config, "Scenario JSON");
  schedule->add_option("--out", out, "Schedule CSV")->required();

  auto* simulate = app.add_subcommand("simulate", "Round-by-round training simulation");
  simulate->add_option("--config", config, "Scenario JSON");
  simulate->add_option("--scheme", scheme, "proposed, maxpower, equal or decreasing");
  simulate->add_option("--seed", seed, "Loss noise seed");
  simulate->add_option("--out", out, "Round-record CSV; the summary goes next to it")->required();

  auto* sweep = app.add_subcommand("sweep", "Sample budget across an energy or latency budget range");
  sweep->add_option("--config", config, "Scenario JSON");
  sweep->add_option("--param", param, "emax or tmax")->required();
  sweep->add_option("--from", from, "First value, e.g. '1000 J' or '2e4 s'")->required();
  sweep->add_option("--to", to, "Last value")->required();
  sweep->add_option("--steps", steps, "Number of sweep points");
  sweep->add_option("--out", out, "Sweep CSV")->required();

  std::optional<std::uint64_t> sense_seed;
  auto* sense = app.add_subcommand("sense-quality", "Spectrogram SSIM versus sensing power");
  sense->add_option("--config", config, "Scenario JSON");
  sense->add_option("--powers-dbm", powers_dbm, "Comma-separated powers in dBm")->delimiter(',');
  sense->add_option("--seed", sense_seed, "Clutter seed (overrides the config)");
  sense->add_option("--out", out, "Quality CSV; the threshold report goes next to it")->required();
  sense->add_option("--export-spectrograms", export_dir, "Directory for one spectrogram per power");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*allocate) return cmd_allocate(config, out);
    if (*schedule) return cmd_schedule(alloc, config, out);
    if (*simulate) return cmd_simulate(config, scheme, seed, out);
    if (*sweep) return cmd_sweep(config, param, from, to, steps, out);
    if (*sense) return cmd_sense_quality(config, powers_dbm, sense_seed, out, export_dir);
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid parameter: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::domain_error& e) {
    std::cerr << "error: invalid parameter: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
