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

// Desk-scale wireless sensing pipeline: FMCW echoes from point scatterers,
// SVD band filter, range-integrated STFT spectrogram, and SSIM against a
// clean first-order reference as a function of sensing power.
//
// Frame layout: rows are fast-time samples within a chirp (f_s T_p of them),
// columns are chirps. Chirps are spread evenly over the unit sensing time, so
// slow-time sampling is at M / T0. De-chirping is folded into the baseband
// model: each scatterer contributes sqrt(p G) / r^2 exp(-j 4 pi f_c r / c).

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sc2feel/numerics.hpp"

namespace sc2feel {

inline constexpr double kSpeedOfLight = 3e8;

enum class WindowKind { hann, rectangular };
enum class RangeIntegration { coherent, magnitude_first };

struct ChirpParams {
  double B_s = 10e6;   ///< sensing bandwidth [Hz]
  double T_p = 10e-6;  ///< chirp duration [s]
  int M = 25;          ///< chirps per frame
  double f_s = 10e6;   ///< fast-time sampling rate [Hz]
  double f_c = 60e9;   ///< carrier [Hz]
  double T0 = 0.5;     ///< unit sensing time [s]
  int W = 16;          ///< STFT window length (chirps)
  int Q = 8;           ///< STFT overlap (chirps)
  int r_a = 1;         ///< first kept singular component (1-based)
  int r_b = 1;         ///< last kept singular component (1-based)
  WindowKind window = WindowKind::hann;
  RangeIntegration integration = RangeIntegration::coherent;

  int samples_per_chirp() const { return static_cast<int>(std::lround(f_s * T_p)); }
  double chirp_interval() const { return T0 / M; }
  int hop() const { return W - Q; }
  /// floor((M - Q) / (W - Q)); a trailing partial frame is dropped.
  int frames() const { return (M - Q) / (W - Q); }

  void validate() const
  {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw std::invalid_argument(std::string("ChirpParams: ") + what);
    };
    const double n = f_s * T_p;
    require(n >= 1.0 && std::abs(n - std::round(n)) < 1e-9,
            "f_s * T_p must be a positive integer");
    require(M >= 1 && M * T_p <= T0, "need M >= 1 and M * T_p <= T0");
    require(f_c > 0 && B_s > 0, "f_c and B_s must be positive");
    require(Q >= 0 && Q < W, "need 0 <= Q < W");
    require(W <= M, "window longer than the frame");
    require(1 <= r_a && r_a <= r_b && r_b <= std::min(samples_per_chirp(), M),
            "need 1 <= r_a <= r_b <= min(f_s T_p, M)");
  }

  bool operator==(const ChirpParams&) const = default;
};

enum class ScatterOrder { first, higher };

/// Point scatterer with range r(t) = r0 + v t + a sin(2 pi f_m t + phase).
struct Primitive {
  double rcs_gain = 1.0;
  double r0 = 3.0;
  double v = 0.0;
  double a = 0.0;
  double f_m = 0.0;
  double phase = 0.0;
  ScatterOrder order = ScatterOrder::first;

  double range(double t) const
  {
    return r0 + v * t + a * std::sin(2.0 * std::numbers::pi * f_m * t + phase);
  }
  double range_rate(double t) const
  {
    return v + a * 2.0 * std::numbers::pi * f_m * std::cos(2.0 * std::numbers::pi * f_m * t + phase);
  }

  bool operator==(const Primitive&) const = default;
};

struct PrimitiveSet {
  std::vector<Primitive> items;

  void validate() const
  {
    if (std::none_of(items.begin(), items.end(),
                     [](const Primitive& p) { return p.order == ScatterOrder::first; }))
      throw std::invalid_argument("PrimitiveSet: need at least one first-order primitive");
  }

  bool operator==(const PrimitiveSet&) const = default;
};

/// Torso with a slow breathing-like sway, two limbs swinging in antiphase, and
/// one longer multipath echo of a limb.
inline PrimitiveSet default_scene()
{
  constexpr double pi = std::numbers::pi;
  PrimitiveSet s;
  s.items.push_back({1.0, 3.0, 0.0, 0.002, 0.4, 0.0, ScatterOrder::first});
  s.items.push_back({0.25, 3.2, 0.0, 0.008, 1.0, 0.0, ScatterOrder::first});
  s.items.push_back({0.25, 3.2, 0.0, 0.008, 1.0, pi, ScatterOrder::first});
  s.items.push_back({0.04, 4.6, 0.0, 0.008, 1.0, pi / 3, ScatterOrder::higher});
  return s;
}

using RawFrame = Eigen::MatrixXcd;

class GeometryError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Received frame split by origin; every part already carries the sqrt(p_s)
/// amplitude scaling.
struct FrameComponents {
  RawFrame first_order;
  RawFrame higher_order;
  RawFrame clutter;

  RawFrame total() const { return first_order + higher_order + clutter; }
};

/// Deterministic given `seed`. Clutter plus receiver noise is circular complex
/// Gaussian with per-sample variance clutter_psd * f_s.
inline FrameComponents synthesize_frame(const PrimitiveSet& prims, const ChirpParams& cp, double p_s,
                                        double clutter_psd, std::uint64_t seed)
{
  cp.validate();
  prims.validate();
  if (!(p_s >= 0.0) || !(clutter_psd >= 0.0))
    throw std::invalid_argument("synthesize_frame: power and clutter PSD must be non-negative");
  const int rows = cp.samples_per_chirp();
  const int cols = cp.M;
  FrameComponents out{RawFrame::Zero(rows, cols), RawFrame::Zero(rows, cols),
                      RawFrame::Zero(rows, cols)};
  const double amp = std::sqrt(p_s);
  const double k = 4.0 * std::numbers::pi * cp.f_c / kSpeedOfLight;
  for (const auto& prim : prims.items) {
    RawFrame& dst = prim.order == ScatterOrder::first ? out.first_order : out.higher_order;
    const double gain = amp * std::sqrt(prim.rcs_gain);
    for (int m = 0; m < cols; ++m) {
      for (int l = 0; l < rows; ++l) {
        const double t = m * cp.chirp_interval() + l / cp.f_s;
        const double r = prim.range(t);
        if (!(r > 0.0)) {
          std::ostringstream msg;
          msg << "primitive range non-positive (" << r << " m) at t = " << t << " s";
          throw GeometryError(msg.str());
        }
        dst(l, m) += std::polar(gain / (r * r), -k * r);
      }
    }
  }
  if (clutter_psd > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(clutter_psd * cp.f_s / 2.0));
    for (int m = 0; m < cols; ++m)
      for (int l = 0; l < rows; ++l) out.clutter(l, m) = {normal(rng), normal(rng)};
  }
  return out;
}

/// Keep singular triplets r_a..r_b (1-based, inclusive).
inline RawFrame svd_band_filter(const RawFrame& frame, int r_a, int r_b)
{
  const int rank_bound = static_cast<int>(std::min(frame.rows(), frame.cols()));
  if (!(1 <= r_a && r_a <= r_b && r_b <= rank_bound))
    throw std::invalid_argument("svd_band_filter: need 1 <= r_a <= r_b <= min(rows, cols)");
  Eigen::JacobiSVD<RawFrame> svd(frame, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int first = r_a - 1;
  const int count = r_b - r_a + 1;
  const Eigen::VectorXd sigma = svd.singularValues().segment(first, count);
  return svd.matrixU().middleCols(first, count) * sigma.cast<std::complex<double>>().asDiagonal() *
         svd.matrixV().middleCols(first, count).adjoint();
}

struct Spectrogram {
  Eigen::MatrixXd magnitude;  ///< W frequency bins x temporal frames
  double power_w = 0.0;
  std::uint64_t seed = 0;
};

inline std::vector<double> stft_window(WindowKind kind, int W)
{
  std::vector<double> w(static_cast<std::size_t>(W), 1.0);
  if (kind == WindowKind::hann)
    for (int n = 0; n < W; ++n)
      w[static_cast<std::size_t>(n)] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / W));
  return w;
}

namespace detail {

/// Windowed DFT of x[start .. start+W).
inline Eigen::VectorXcd windowed_dft(const Eigen::VectorXcd& x, int start,
                                     const std::vector<double>& w)
{
  const int W = static_cast<int>(w.size());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(W);
  for (int f = 0; f < W; ++f) {
    std::complex<double> acc{0.0, 0.0};
    for (int n = 0; n < W; ++n)
      acc += x(start + n) * w[static_cast<std::size_t>(n)] *
             std::polar(1.0, -2.0 * std::numbers::pi * f * n / W);
    out(f) = acc;
  }
  return out;
}

}  // namespace detail

/// Short-time Fourier transform along slow time (hop W - Q), integrated over
/// the fast-time (range) rows. Coherent mode sums complex STFT values before
/// taking the magnitude; magnitude_first sums per-row magnitudes.
inline Spectrogram integrated_spectrogram(const RawFrame& frame, const ChirpParams& cp)
{
  if (cp.Q < 0 || cp.Q >= cp.W) throw std::invalid_argument("integrated_spectrogram: need 0 <= Q < W");
  if (frame.cols() < cp.W) throw std::invalid_argument("integrated_spectrogram: frame shorter than window");
  const int frames = static_cast<int>((frame.cols() - cp.Q) / cp.hop());
  const auto w = stft_window(cp.window, cp.W);
  Spectrogram s;
  s.magnitude = Eigen::MatrixXd::Zero(cp.W, frames);
  if (cp.integration == RangeIntegration::coherent) {
    const Eigen::VectorXcd x = frame.colwise().sum().transpose();
    for (int j = 0; j < frames; ++j)
      s.magnitude.col(j) = detail::windowed_dft(x, j * cp.hop(), w).cwiseAbs();
  } else {
    for (Eigen::Index l = 0; l < frame.rows(); ++l) {
      const Eigen::VectorXcd x = frame.row(l).transpose();
      for (int j = 0; j < frames; ++j)
        s.magnitude.col(j) += detail::windowed_dft(x, j * cp.hop(), w).cwiseAbs();
    }
  }
  return s;
}

/// SVD band filter followed by the integrated spectrogram.
inline Spectrogram process_frame(const RawFrame& frame, const ChirpParams& cp)
{
  return integrated_spectrogram(svd_band_filter(frame, cp.r_a, cp.r_b), cp);
}

/// Mean structural similarity over all window positions (stride 1). Both
/// images are scaled by their shared maximum first, so the dynamic range is 1.
/// The window is 8x8, shrunk to the image size along any shorter axis.
inline double ssim(const Spectrogram& a, const Spectrogram& b, int window = 8)
{
  const auto& x = a.magnitude;
  const auto& y = b.magnitude;
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("ssim: images differ in shape");
  if (x.size() == 0) throw std::invalid_argument("ssim: empty image");
  const double peak = std::max(x.maxCoeff(), y.maxCoeff());
  const double scale = peak > 0.0 ? 1.0 / peak : 1.0;
  const Eigen::MatrixXd xn = x * scale;
  const Eigen::MatrixXd yn = y * scale;
  const double c1 = 0.01 * 0.01;
  const double c2 = 0.03 * 0.03;
  const int wr = std::min<int>(window, static_cast<int>(x.rows()));
  const int wc = std::min<int>(window, static_cast<int>(x.cols()));
  const double n = static_cast<double>(wr) * wc;
  double total = 0.0;
  int count = 0;
  for (int i = 0; i + wr <= x.rows(); ++i) {
    for (int j = 0; j + wc <= x.cols(); ++j) {
      const auto bx = xn.block(i, j, wr, wc);
      const auto by = yn.block(i, j, wr, wc);
      const double mx = bx.sum() / n;
      const double my = by.sum() / n;
      const double vx = (bx.array() - mx).square().sum() / n;
      const double vy = (by.array() - my).square().sum() / n;
      const double cxy = ((bx.array() - mx) * (by.array() - my)).sum() / n;
      total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / count;
}

struct QualityPoint {
  double p_s = 0.0;
  double ssim_mean = 0.0;
  double ssim_std = 0.0;
};

struct QualityCurve {
  std::vector<QualityPoint> points;
  double threshold_w = 0.0;
  double saturation_ssim = 0.0;
};

/// Per-(power, trial) generator seed, independent of evaluation order.
inline std::uint64_t trial_seed(std::uint64_t master, std::size_t power_index, std::size_t trial)
{
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(power_index), static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  return rng();
}

/// Mean SSIM over `trials` clutter realizations against the noise-free
/// first-order reference at each power. The threshold is the smallest power
/// whose mean SSIM reaches (1 - epsilon) of the value at the largest power.
inline QualityCurve quality_vs_power(const PrimitiveSet& prims, const ChirpParams& cp,
                                     const std::vector<double>& powers, double clutter_psd,
                                     int trials, std::uint64_t seed, double epsilon = 0.02)
{
  if (powers.empty()) throw std::invalid_argument("quality_vs_power: no powers given");
  if (trials < 1) throw std::invalid_argument("quality_vs_power: trials must be >= 1");
  for (std::size_t i = 1; i < powers.size(); ++i)
    if (!(powers[i] > powers[i - 1]))
      throw std::invalid_argument("quality_vs_power: powers must be strictly increasing");

  QualityCurve curve;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(trials));
    Spectrogram reference;
    for (int t = 0; t < trials; ++t) {
      const auto s = trial_seed(seed, i, static_cast<std::size_t>(t));
      const auto parts = synthesize_frame(prims, cp, powers[i], clutter_psd, s);
      if (t == 0) reference = process_frame(parts.first_order, cp);
      Spectrogram observed = process_frame(parts.total(), cp);
      observed.power_w = powers[i];
      observed.seed = s;
      scores.push_back(ssim(observed, reference));
    }
    QualityPoint pt;
    pt.p_s = powers[i];
    for (double v : scores) pt.ssim_mean += v;
    pt.ssim_mean /= static_cast<double>(scores.size());
    if (scores.size() > 1) {
      double ss = 0.0;
      for (double v : scores) ss += (v - pt.ssim_mean) * (v - pt.ssim_mean);
      pt.ssim_std = std::sqrt(ss / static_cast<double>(scores.size() - 1));
    }
    curve.points.push_back(pt);
  }
  curve.saturation_ssim = curve.points.back().ssim_mean;
  const double target = (1.0 - epsilon) * curve.saturation_ssim;
  curve.threshold_w = curve.points.back().p_s;
  for (const auto& pt : curve.points) {
    if (pt.ssim_mean >= target) {
      curve.threshold_w = pt.p_s;
      break;
    }
  }
  return curve;
}

}  // namespace sc2feel
