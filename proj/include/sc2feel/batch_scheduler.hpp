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

// Error-bound evaluators and per-round batch schedules.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sc2feel/cost_model.hpp"

namespace sc2feel {

/// Constants of the smoothness / bounded-variance analysis. L, sigma2 and F1
/// are never estimated from data; the defaults are illustrative.
struct BoundParams {
  double eta = 0.1;
  double L = 1.0;
  double sigma2 = 1.0;
  double beta = 0.0;  ///< relative-variance coefficient (carried, unused by the bounds)
  int tau = 10;
  int K = 6;
  double F1 = 1.0;
  double F_inf = 0.0;

  void validate() const
  {
    if (!(eta > 0 && L > 0 && sigma2 > 0 && tau >= 1 && K >= 1 && F1 > 0))
      throw std::invalid_argument("BoundParams: eta, L, sigma2, tau, K, F1 must be positive");
    if (!(F_inf >= 0 && F1 > F_inf))
      throw std::invalid_argument("BoundParams: require 0 <= F_inf < F1");
  }

  /// eta L + eta^2 L^2 tau (tau - 1) <= 1
  bool learning_rate_ok() const
  {
    return eta * L + eta * eta * L * L * tau * (tau - 1) <= 1.0 + 1e-12;
  }

  bool operator==(const BoundParams&) const = default;
};

/// Average squared gradient norm bound after R rounds at fixed batch b.
inline double loss_bound_rounds(const BoundParams& bp, double b, double R)
{
  if (!(b >= 1.0) || !(R >= 1.0)) throw std::invalid_argument("loss_bound_rounds: need b, R >= 1");
  return 2.0 * (bp.F1 - bp.F_inf) / (bp.eta * R * bp.tau) + bp.eta * bp.L * bp.sigma2 / (bp.K * b) +
         bp.eta * bp.eta * bp.L * bp.L * bp.sigma2 * bp.tau / b;
}

/// The same bound with the round count replaced by b_sum / b.
inline double loss_bound_budget(const BoundParams& bp, double b, double b_sum)
{
  if (!(b >= 1.0) || !(b_sum >= 1.0))
    throw std::invalid_argument("loss_bound_budget: need b, b_sum >= 1");
  return 2.0 * (bp.F1 - bp.F_inf) * b / (bp.eta * bp.tau * b_sum) +
         bp.eta * bp.L * bp.sigma2 / (bp.K * b) +
         bp.eta * bp.eta * bp.L * bp.L * bp.sigma2 * bp.tau / b;
}

/// Continuous minimizer of loss_bound_budget over b.
inline double optimal_fixed_batch_continuous(const BoundParams& bp, double b_sum)
{
  const double num =
      bp.eta * bp.eta * bp.L * bp.sigma2 * bp.tau * b_sum * (1.0 + bp.eta * bp.K * bp.L * bp.tau);
  return std::sqrt(num / (2.0 * bp.K * (bp.F1 - bp.F_inf)));
}

/// Integer minimizer of loss_bound_budget on [1, b_sum]. The bound is a b + c / b,
/// so the answer is one of the two integers around the continuous optimum;
/// they are compared directly (plain rounding is off by one whenever the
/// optimum falls between sqrt(n(n+1)) and n + 1/2).
inline Samples optimal_fixed_batch(const BoundParams& bp, Samples b_sum)
{
  if (b_sum < 1) throw std::invalid_argument("optimal_fixed_batch: b_sum must be >= 1");
  const double star = optimal_fixed_batch_continuous(bp, static_cast<double>(b_sum));
  const auto clamp = [&](double v) {
    return std::clamp<Samples>(static_cast<Samples>(v), 1, b_sum);
  };
  const Samples lo = clamp(std::floor(star));
  const Samples hi = clamp(std::floor(star) + 1.0);
  const double bs = static_cast<double>(b_sum);
  return loss_bound_budget(bp, static_cast<double>(hi), bs) < loss_bound_budget(bp, static_cast<double>(lo), bs)
             ? hi
             : lo;
}

/// Batch-size update from the observed loss ratio, b_r = sqrt(F1 / F_r) b_1.
inline Samples loss_ratio_next_batch(Samples b1, double F1, double Fr)
{
  if (!(F1 > 0.0) || !(Fr > 0.0))
    throw std::invalid_argument("loss_ratio_next_batch: losses must be positive");
  const double b = std::round(std::sqrt(F1 / Fr) * static_cast<double>(b1));
  return std::max<Samples>(1, static_cast<Samples>(b));
}

enum class ScheduleScheme { adaptive_sqrt, equal, decreasing_sqrt, loss_ratio };

inline const char* to_string(ScheduleScheme s)
{
  switch (s) {
    case ScheduleScheme::adaptive_sqrt: return "adaptive_sqrt";
    case ScheduleScheme::equal: return "equal";
    case ScheduleScheme::decreasing_sqrt: return "decreasing_sqrt";
    case ScheduleScheme::loss_ratio: return "loss_ratio";
  }
  return "?";
}

inline ScheduleScheme schedule_scheme_from_string(const std::string& s)
{
  if (s == "adaptive_sqrt") return ScheduleScheme::adaptive_sqrt;
  if (s == "equal") return ScheduleScheme::equal;
  if (s == "decreasing_sqrt") return ScheduleScheme::decreasing_sqrt;
  if (s == "loss_ratio") return ScheduleScheme::loss_ratio;
  throw std::invalid_argument("unknown schedule scheme '" + s + "'");
}

struct BatchSchedule {
  std::vector<Samples> b;
  Samples b0 = 0;
  double alpha = 0.0;
  ScheduleScheme scheme = ScheduleScheme::adaptive_sqrt;

  Samples total() const { return std::accumulate(b.begin(), b.end(), Samples{0}); }
  int rounds() const { return static_cast<int>(b.size()); }
};

class InvalidHyperparameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// b0 = floor(frac * b_sum / R), at least 1. Rejects frac outside (0, 1].
inline Samples b0_from_fraction(Samples b_sum, int R, double frac)
{
  if (!(frac > 0.0) || frac > 1.0)
    throw InvalidHyperparameter("b0 fraction must lie in (0, 1], got " + std::to_string(frac));
  const double avg = static_cast<double>(b_sum) / static_cast<double>(R);
  return std::max<Samples>(1, static_cast<Samples>(std::floor(frac * avg)));
}

namespace detail {

inline void check_schedule_args(Samples b_sum, int R, Samples b0)
{
  if (R < 1) throw InvalidHyperparameter("schedule: R must be >= 1");
  if (b0 < 1) throw InvalidHyperparameter("schedule: b0 must be >= 1");
  if (b0 * static_cast<Samples>(R) > b_sum)
    throw InvalidHyperparameter("schedule: b0 = " + std::to_string(b0) +
                                " exceeds the average batch b_sum / R = " +
                                std::to_string(b_sum) + " / " + std::to_string(R));
}

inline double sqrt_sum(int R)
{
  double s = 0.0;
  for (int r = 1; r <= R; ++r) s += std::sqrt(static_cast<double>(r));
  return s;
}

}  // namespace detail

/// Unrounded sqrt-profile batches (b_sum - b0 R) sqrt(r') / sum sqrt + b0 with
/// r' = r (increasing) or R - r + 1 (decreasing).
inline std::vector<double> sqrt_profile(Samples b_sum, int R, Samples b0, bool decreasing = false)
{
  detail::check_schedule_args(b_sum, R, b0);
  const double alpha = static_cast<double>(b_sum - b0 * R) / detail::sqrt_sum(R);
  std::vector<double> v(static_cast<std::size_t>(R));
  for (int r = 1; r <= R; ++r) {
    const int idx = decreasing ? R - r + 1 : r;
    v[static_cast<std::size_t>(r - 1)] =
        alpha * std::sqrt(static_cast<double>(idx)) + static_cast<double>(b0);
  }
  return v;
}

/// Increasing schedule b_r = floor(alpha sqrt(r) + b0) with alpha chosen so the
/// unrounded batches sum to b_sum. The samples lost to flooring are handed
/// back one per round, largest fractional part first (ties to later rounds),
/// which keeps the schedule non-decreasing.
inline BatchSchedule adaptive_sqrt_schedule(Samples b_sum, int R, Samples b0)
{
  const auto v = sqrt_profile(b_sum, R, b0);
  BatchSchedule s;
  s.scheme = ScheduleScheme::adaptive_sqrt;
  s.b0 = b0;
  s.alpha = static_cast<double>(b_sum - b0 * R) / detail::sqrt_sum(R);
  s.b.resize(v.size());
  std::vector<double> frac(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = std::floor(v[i]);
    s.b[i] = static_cast<Samples>(f);
    frac[i] = v[i] - f;
  }
  Samples deficit = b_sum - s.total();
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (frac[a] != frac[b]) return frac[a] > frac[b];
    return a > b;
  });
  for (std::size_t i = 0; i < order.size() && deficit > 0; ++i, --deficit) ++s.b[order[i]];
  return s;
}

/// Reference schedules: equal floor(b_sum / R), or the sqrt profile run
/// backwards (no remainder pass for either).
inline BatchSchedule baseline_schedule(ScheduleScheme scheme, Samples b_sum, int R, Samples b0)
{
  BatchSchedule s;
  s.scheme = scheme;
  switch (scheme) {
    case ScheduleScheme::adaptive_sqrt:
      return adaptive_sqrt_schedule(b_sum, R, b0);
    case ScheduleScheme::equal: {
      if (R < 1) throw InvalidHyperparameter("schedule: R must be >= 1");
      const Samples each = b_sum / R;
      if (each < 1)
        throw InvalidHyperparameter("equal schedule: b_sum = " + std::to_string(b_sum) +
                                    " leaves rounds empty over R = " + std::to_string(R));
      s.b.assign(static_cast<std::size_t>(R), each);
      s.b0 = each;
      return s;
    }
    case ScheduleScheme::decreasing_sqrt: {
      const auto v = sqrt_profile(b_sum, R, b0, /*decreasing=*/true);
      s.b0 = b0;
      s.alpha = static_cast<double>(b_sum - b0 * R) / detail::sqrt_sum(R);
      s.b.reserve(v.size());
      for (double x : v) s.b.push_back(static_cast<Samples>(std::floor(x)));
      return s;
    }
    case ScheduleScheme::loss_ratio:
      break;
  }
  throw InvalidHyperparameter("loss_ratio is an online rule, not a precomputed schedule");
}

}  // namespace sc2feel
