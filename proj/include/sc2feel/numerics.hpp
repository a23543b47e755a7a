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

// Special functions and one-dimensional search utilities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sc2feel {

// ---------------------------------------------------------------------------
// Exponential integral, negative-argument branch
// ---------------------------------------------------------------------------

namespace detail {

/// Ei(x) = gamma + ln|x| + sum_{k>=1} x^k / (k k!).
///
/// Alternating for x < 0: each unit of |x| costs roughly 0.87 decimal digits
/// to cancellation, so in double precision this is only used for |x| <= 1.
/// Templated so the same recurrence can be run in extended precision.
template <typename Real>
Real ei_series(Real x, Real euler_gamma)
{
  using std::abs;
  using std::log;
  const Real eps = std::numeric_limits<Real>::epsilon();
  Real term = Real(1);  // x^k / k!
  Real sum = Real(0);
  for (int k = 1; k < 100000; ++k) {
    term *= x / Real(k);
    const Real contrib = term / Real(k);
    sum += contrib;
    if (abs(contrib) <= eps * abs(sum)) break;
  }
  return euler_gamma + log(abs(x)) + sum;
}

inline double ei_series(double x) { return ei_series<double>(x, std::numbers::egamma); }

/// Scaled exponential integral e^z E1(z) for z > 0, by the modified Lentz
/// evaluation of the continued fraction
///   E1(z) = e^-z ( 1/(z+1-) 1/(z+3-) 4/(z+5-) ... ).
/// Converges for every z > 0; cost grows like 1/z near the origin.
template <typename Real>
Real e1_scaled_continued_fraction(Real z)
{
  using std::abs;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real tiny = std::numeric_limits<Real>::min() / eps;
  Real b = z + Real(1);
  Real c = Real(1) / tiny;
  Real d = Real(1) / b;
  Real h = d;
  for (int i = 1; i < 100000; ++i) {
    const Real an = -Real(i) * Real(i);
    b += Real(2);
    d = an * d + b;
    if (abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (abs(c) < tiny) c = tiny;
    d = Real(1) / d;
    const Real del = c * d;
    h *= del;
    if (abs(del - Real(1)) <= eps) break;
  }
  return h;
}

inline constexpr double kEiSeriesCutoff = 1.0;

}  // namespace detail

/// Exponential integral Ei(x) = \int_{-inf}^{x} e^t / t dt for x < 0.
///
/// Throws std::domain_error for x >= 0 or non-finite x. Underflows to 0 as
/// x -> -inf.
inline double expint_ei(double x)
{
  if (!std::isfinite(x) || x >= 0.0) {
    std::ostringstream msg;
    msg << "expint_ei: argument must be finite and negative, got " << x;
    throw std::domain_error(msg.str());
  }
  const double z = -x;
  if (z <= detail::kEiSeriesCutoff) return detail::ei_series(x);
  // Ei(-z) = -E1(z) = -e^-z * (e^z E1(z))
  return -std::exp(-z) * detail::e1_scaled_continued_fraction(z);
}

/// e^z E1(z) = -e^z Ei(-z) for z > 0, without overflow for large z.
inline double exp_e1_scaled(double z)
{
  if (!std::isfinite(z) || z <= 0.0) {
    std::ostringstream msg;
    msg << "exp_e1_scaled: argument must be finite and positive, got " << z;
    throw std::domain_error(msg.str());
  }
  if (z <= detail::kEiSeriesCutoff) return -std::exp(z) * detail::ei_series(-z);
  return detail::e1_scaled_continued_fraction(z);
}

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

enum class Spacing { linear, logarithmic };

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 2;
  Spacing spacing = Spacing::linear;

  void validate() const
  {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw std::invalid_argument("GridSpec: require finite lo < hi");
    if (points < 2) throw std::invalid_argument("GridSpec: require at least 2 points");
    if (spacing == Spacing::logarithmic && !(lo > 0.0))
      throw std::invalid_argument("GridSpec: logarithmic spacing requires lo > 0");
  }
};

/// Grid abscissae; the endpoints are reproduced exactly.
inline std::vector<double> grid_points(const GridSpec& grid)
{
  grid.validate();
  std::vector<double> xs(grid.points);
  const double last = static_cast<double>(grid.points - 1);
  if (grid.spacing == Spacing::linear) {
    const double step = (grid.hi - grid.lo) / last;
    for (std::size_t i = 0; i < grid.points; ++i) xs[i] = grid.lo + step * static_cast<double>(i);
  } else {
    const double log_lo = std::log(grid.lo);
    const double log_span = std::log(grid.hi) - log_lo;
    for (std::size_t i = 0; i < grid.points; ++i)
      xs[i] = std::exp(log_lo + log_span * static_cast<double>(i) / last);
  }
  xs.front() = grid.lo;
  xs.back() = grid.hi;
  return xs;
}

/// Raised when the objective fails (throws or returns NaN) at a grid point.
class GridEvaluationError : public std::runtime_error {
public:
  GridEvaluationError(double x, const std::string& what)
    : std::runtime_error(make_message(x, what)), x_(x) {}

  double x() const noexcept { return x_; }

private:
  static std::string make_message(double x, const std::string& what)
  {
    std::ostringstream msg;
    msg.precision(17);
    msg << "objective evaluation failed at x = " << x << ": " << what;
    return msg.str();
  }

  double x_;
};

struct GridMaximum {
  double x = 0.0;
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

namespace detail {

template <typename F>
double evaluate_at(F& f, double x)
{
  double v = 0.0;
  try {
    v = static_cast<double>(f(x));
  } catch (const std::exception& e) {
    throw GridEvaluationError(x, e.what());
  }
  if (std::isnan(v)) throw GridEvaluationError(x, "objective returned NaN");
  return v;
}

template <typename F>
GridMaximum argmax_over(F& f, const std::vector<double>& xs)
{
  GridMaximum best;
  best.x = xs.front();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = evaluate_at(f, xs[i]);
    // Strict comparison: ties resolve to the earliest (smallest) abscissa.
    if (i == 0 || v > best.value) {
      best.x = xs[i];
      best.value = v;
      best.index = i;
    }
  }
  return best;
}

}  // namespace detail

/// Maximize f over the grid points. Ties go to the smallest x.
template <typename F>
GridMaximum argmax_on_grid(F&& f, const GridSpec& grid)
{
  const auto xs = grid_points(grid);
  return detail::argmax_over(f, xs);
}

/// Coarse grid maximum followed by one linear pass of `refine_points` points
/// spanning the two grid neighbours of the coarse optimum.
template <typename F>
GridMaximum argmax_refined(F&& f, const GridSpec& grid, std::size_t refine_points = 200)
{
  const auto xs = grid_points(grid);
  GridMaximum coarse = detail::argmax_over(f, xs);
  if (refine_points < 2) return coarse;
  const std::size_t i = coarse.index;
  const double lo = xs[i == 0 ? 0 : i - 1];
  const double hi = xs[i + 1 == xs.size() ? i : i + 1];
  auto fine_xs = grid_points(GridSpec{lo, hi, refine_points, Spacing::linear});
  GridMaximum fine = detail::argmax_over(f, fine_xs);
  if (fine.value > coarse.value || (fine.value == coarse.value && fine.x < coarse.x)) {
    fine.index = coarse.index;
    return fine;
  }
  return coarse;
}

/// Golden-section search for the maximum of a unimodal f on [lo, hi]. Returns
/// `start` unless some probed point is strictly better.
template <typename F>
GridMaximum golden_section_polish(F&& f, double lo, double hi, GridMaximum start, int iterations = 100)
{
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = detail::evaluate_at(f, x1), f2 = detail::evaluate_at(f, x2);
  GridMaximum best = start;
  for (int it = 0; it < iterations && x1 < x2; ++it) {
    if (f1 > best.value) best = {x1, f1, start.index};
    if (f2 > best.value) best = {x2, f2, start.index};
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = detail::evaluate_at(f, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = detail::evaluate_at(f, x1);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Isotonic regression
// ---------------------------------------------------------------------------

/// Least-squares non-decreasing fit (pool adjacent violators), equal weights.
inline std::vector<double> isotonic_fit(const std::vector<double>& ys)
{
  struct Block {
    double sum;
    std::size_t count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> blocks;
  blocks.reserve(ys.size());
  for (double y : ys) {
    blocks.push_back({y, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().count += top.count;
    }
  }
  std::vector<double> fitted;
  fitted.reserve(ys.size());
  for (const auto& b : blocks) fitted.insert(fitted.end(), b.count, b.mean());
  return fitted;
}

}  // namespace sc2feel
