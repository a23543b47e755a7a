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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include <Eigen/QR>
#include <gtest/gtest.h>

#include "sc2feel/numerics.hpp"
#include "sc2feel/sensing.hpp"
#include "sc2feel/units.hpp"

namespace {

using namespace sc2feel;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

RawFrame random_frame(int rows, int cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  RawFrame m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = {n(rng), n(rng)};
  return m;
}

Eigen::MatrixXcd random_unitary(int n, std::uint64_t seed)
{
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_frame(n, n, seed));
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

Eigen::Index peak_bin(const Eigen::VectorXd& col)
{
  Eigen::Index i = 0;
  col.maxCoeff(&i);
  return i;
}

TEST(SvdBandFilter, FullBandIsIdentity)
{
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto x = random_frame(100, 25, seed);
    const auto y = svd_band_filter(x, 1, 25);
    EXPECT_LE((x - y).norm() / x.norm(), 1e-10);
  }
}

TEST(SvdBandFilter, SelectsTheRequestedBand)
{
  const auto u = random_unitary(6, 10);
  const auto v = random_unitary(3, 11);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(6, 3);
  s(0, 0) = 10.0;
  s(1, 1) = 1.0;
  s(2, 2) = 0.1;
  const RawFrame x = u * s * v.adjoint();
  EXPECT_NEAR(svd_band_filter(x, 2, 2).norm(), 1.0, 1e-9);
  EXPECT_NEAR(svd_band_filter(x, 1, 1).norm(), 10.0, 1e-9);
  EXPECT_NEAR(svd_band_filter(x, 2, 3).norm(), std::sqrt(1.01), 1e-9);
  // the middle component, reconstructed from its own factors
  const RawFrame mid = u.col(1) * v.col(1).adjoint();
  EXPECT_LE((svd_band_filter(x, 2, 2) - mid).norm(), 1e-9);
}

TEST(SvdBandFilter, RankAndIdempotence)
{
  const auto x = random_frame(40, 20, 5);
  const auto y = svd_band_filter(x, 1, 3);
  Eigen::JacobiSVD<RawFrame> svd(y);
  const auto sv = svd.singularValues();
  for (Eigen::Index i = 3; i < sv.size(); ++i) EXPECT_LE(sv(i), 1e-10 * sv(0));
  EXPECT_LE((svd_band_filter(y, 1, 3) - y).norm(), 1e-10 * y.norm());
}

TEST(SvdBandFilter, RejectsBadBand)
{
  const auto x = random_frame(8, 4, 1);
  EXPECT_THROW(svd_band_filter(x, 0, 1), std::invalid_argument);
  EXPECT_THROW(svd_band_filter(x, 3, 2), std::invalid_argument);
  EXPECT_THROW(svd_band_filter(x, 1, 5), std::invalid_argument);
}

TEST(Spectrogram, ShapeDependsOnlyOnParameters)
{
  const ChirpParams cp;
  EXPECT_EQ(cp.frames(), 2);
  for (std::uint64_t seed : {1, 2}) {
    const auto s = integrated_spectrogram(random_frame(100, 25, seed), cp);
    EXPECT_EQ(s.magnitude.rows(), 16);
    EXPECT_EQ(s.magnitude.cols(), 2);
  }
  ChirpParams other = cp;
  other.M = 40;
  other.W = 8;
  other.Q = 4;
  const auto s = integrated_spectrogram(random_frame(3, 40, 1), other);
  EXPECT_EQ(s.magnitude.rows(), 8);
  EXPECT_EQ(s.magnitude.cols(), (40 - 4) / 4);
}

TEST(Spectrogram, PureTonePeaksInPredictedBin)
{
  const ChirpParams cp;
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> bin(0, cp.W - 1);
  std::uniform_real_distribution<double> offset(-0.3, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = bin(rng);
    const double nu = (k + offset(rng)) / cp.W;  // cycles per chirp
    RawFrame x(1, cp.M);
    for (int m = 0; m < cp.M; ++m) x(0, m) = std::polar(1.0, 2.0 * kPi * nu * m);
    const auto s = integrated_spectrogram(x, cp);
    for (Eigen::Index j = 0; j < s.magnitude.cols(); ++j) EXPECT_EQ(peak_bin(s.magnitude.col(j)), k) << nu;
  }
}

TEST(Spectrogram, ParsevalWithRectangularWindow)
{
  ChirpParams cp;
  cp.window = WindowKind::rectangular;
  const auto x = random_frame(1, cp.M, 4);
  const auto s = integrated_spectrogram(x, cp);
  for (int j = 0; j < cp.frames(); ++j) {
    const double energy = x.block(0, j * cp.hop(), 1, cp.W).squaredNorm();
    EXPECT_NEAR(s.magnitude.col(j).squaredNorm(), cp.W * energy, 1e-9 * cp.W * energy);
  }
}

TEST(Spectrogram, RangeIntegrationModes)
{
  ChirpParams cp;
  RawFrame row = random_frame(1, cp.M, 6);
  RawFrame same(3, cp.M);
  for (int i = 0; i < 3; ++i) same.row(i) = row.row(0);
  const auto single = integrated_spectrogram(row, cp);
  EXPECT_LE((integrated_spectrogram(same, cp).magnitude - 3.0 * single.magnitude).norm(),
            1e-12 * single.magnitude.norm());

  const auto mixed = random_frame(5, cp.M, 7);
  const auto coherent = integrated_spectrogram(mixed, cp);
  cp.integration = RangeIntegration::magnitude_first;
  const auto incoherent = integrated_spectrogram(mixed, cp);
  EXPECT_TRUE((incoherent.magnitude.array() >= coherent.magnitude.array() - 1e-12).all());
}

TEST(Spectrogram, LinearInAmplitude)
{
  const ChirpParams cp;
  const auto scene = default_scene();
  const auto a = process_frame(synthesize_frame(scene, cp, 0.1, 0.0, 1).total(), cp);
  const auto b = process_frame(synthesize_frame(scene, cp, 0.4, 0.0, 1).total(), cp);
  EXPECT_LE((b.magnitude - 2.0 * a.magnitude).norm(), 1e-9 * b.magnitude.norm());
}

double doppler_bin(double range_rate, const ChirpParams& cp)
{
  const double f_d = -2.0 * range_rate * cp.f_c / kSpeedOfLight;
  const double slow_rate = 1.0 / cp.chirp_interval();
  const double b = f_d / slow_rate * cp.W;
  return b - cp.W * std::floor(b / cp.W);
}

TEST(Synthesis, ConstantVelocityLandsOnDopplerBin)
{
  const ChirpParams cp;
  // 12.5 Hz Doppler shift is exactly four bins at 50 chirps/s
  for (double v : {0.03125, -0.03125}) {
    PrimitiveSet scene{{{1.0, 3.0, v, 0.0, 0.0, 0.0, ScatterOrder::first}}};
    const auto s = process_frame(synthesize_frame(scene, cp, 1.0, 0.0, 0).total(), cp);
    const double expect = doppler_bin(v, cp);
    EXPECT_NEAR(expect, v > 0 ? 12.0 : 4.0, 1e-9);
    for (Eigen::Index j = 0; j < s.magnitude.cols(); ++j)
      EXPECT_EQ(peak_bin(s.magnitude.col(j)), static_cast<Eigen::Index>(expect));
  }
}

TEST(Synthesis, MicroDopplerTrackFollowsRangeRate)
{
  const ChirpParams cp;
  const Primitive limb{1.0, 3.0, 0.0, 0.016, 0.5, 0.0, ScatterOrder::first};
  const auto s = process_frame(synthesize_frame(PrimitiveSet{{limb}}, cp, 1.0, 0.0, 0).total(), cp);
  std::set<Eigen::Index> peaks;
  for (int j = 0; j < cp.frames(); ++j) {
    const double centre = (j * cp.hop() + (cp.W - 1) / 2.0) * cp.chirp_interval();
    const double expect = doppler_bin(limb.range_rate(centre), cp);
    const auto got = static_cast<double>(peak_bin(s.magnitude.col(j)));
    EXPECT_LE(std::abs(got - expect), 1.0) << "frame " << j;
    peaks.insert(peak_bin(s.magnitude.col(j)));
  }
  EXPECT_EQ(peaks.size(), 2u);
}

TEST(Synthesis, ComponentsAndDeterminism)
{
  const ChirpParams cp;
  const auto scene = default_scene();
  const auto a = synthesize_frame(scene, cp, 0.1, 1e-10, 42);
  const auto b = synthesize_frame(scene, cp, 0.1, 1e-10, 42);
  const auto c = synthesize_frame(scene, cp, 0.1, 1e-10, 43);
  EXPECT_EQ(a.total(), b.total());
  EXPECT_NE(a.clutter, c.clutter);
  EXPECT_EQ(a.first_order, c.first_order);
  EXPECT_EQ(a.first_order.rows(), 100);
  EXPECT_EQ(a.first_order.cols(), 25);
  EXPECT_GT(a.higher_order.norm(), 0.0);
  // per-sample clutter variance clutter_psd * f_s
  EXPECT_NEAR(a.clutter.squaredNorm() / a.clutter.size(), 1e-10 * cp.f_s, 0.1 * 1e-10 * cp.f_s);
  EXPECT_EQ(synthesize_frame(scene, cp, 0.1, 0.0, 1).clutter.norm(), 0.0);
}

TEST(Synthesis, RejectsInvalidInput)
{
  const ChirpParams cp;
  PrimitiveSet collide{{{1.0, 0.005, 0.0, 0.01, 1.0, -std::numbers::pi / 2, ScatterOrder::first}}};
  EXPECT_THROW(synthesize_frame(collide, cp, 1.0, 0.0, 1), GeometryError);
  PrimitiveSet echoes_only{{{1.0, 3.0, 0.0, 0.0, 0.0, 0.0, ScatterOrder::higher}}};
  EXPECT_THROW(synthesize_frame(echoes_only, cp, 1.0, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(synthesize_frame(default_scene(), cp, -1.0, 0.0, 1), std::invalid_argument);
  ChirpParams bad = cp;
  bad.Q = bad.W;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Ssim, IdentityAndSymmetry)
{
  const ChirpParams cp;
  const auto a = process_frame(synthesize_frame(default_scene(), cp, 0.1, 1e-10, 1).total(), cp);
  const auto b = process_frame(synthesize_frame(default_scene(), cp, 0.1, 1e-10, 2).total(), cp);
  EXPECT_EQ(ssim(a, a), 1.0);
  EXPECT_EQ(ssim(a, b), ssim(b, a));
  EXPECT_LT(ssim(a, b), 1.0);
  Spectrogram scaled = a;
  scaled.magnitude *= 7.5;
  EXPECT_EQ(ssim(scaled, scaled), 1.0);
  Spectrogram wrong;
  wrong.magnitude = Eigen::MatrixXd::Ones(3, 3);
  EXPECT_THROW(ssim(a, wrong), std::invalid_argument);
}

TEST(Ssim, SlidingWindowOnLargerImages)
{
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Spectrogram x, y;
  x.magnitude = Eigen::MatrixXd::NullaryExpr(20, 12, [&] { return u(rng); });
  y.magnitude = x.magnitude;
  EXPECT_EQ(ssim(x, y), 1.0);
  y.magnitude += Eigen::MatrixXd::NullaryExpr(20, 12, [&] { return 0.3 * u(rng); });
  const double s = ssim(x, y);
  EXPECT_GT(s, 0.0);
  EXPECT_LT(s, 1.0);
}

TEST(QualityVsPower, ImprovesAndSaturates)
{
  const ChirpParams cp;
  std::vector<double> powers;
  for (int d = 0; d <= 30; d += 5) powers.push_back(dbm_to_watts(d));
  const auto curve = quality_vs_power(default_scene(), cp, powers, 8e-11, 8, 3);
  ASSERT_EQ(curve.points.size(), powers.size());
  EXPECT_GT(curve.points.back().ssim_mean - curve.points.front().ssim_mean, 0.3);
  EXPECT_LT(curve.threshold_w, powers.back());
  EXPECT_GE(curve.threshold_w, powers.front());
  EXPECT_EQ(curve.saturation_ssim, curve.points.back().ssim_mean);
  for (const auto& p : curve.points) EXPECT_GE(p.ssim_std, 0.0);
}

TEST(QualityVsPower, TwentyDbmIsCloseToThirty)
{
  const ChirpParams cp;
  const auto curve = quality_vs_power(default_scene(), cp, {dbm_to_watts(20.0), dbm_to_watts(30.0)}, 8e-11, 20, 1);
  EXPECT_NEAR(curve.points[0].ssim_mean, curve.points[1].ssim_mean, 0.05);
}

TEST(QualityVsPower, WithoutClutterQualityIsFlat)
{
  const ChirpParams cp;
  const std::vector<double> powers{1e-3, 1e-2, 0.1, 1.0};
  const auto curve = quality_vs_power(default_scene(), cp, powers, 0.0, 3, 1);
  for (const auto& p : curve.points) {
    EXPECT_NEAR(p.ssim_mean, curve.points.front().ssim_mean, 1e-12);
    EXPECT_LT(p.ssim_mean, 1.0);  // the echo path remains
    EXPECT_NEAR(p.ssim_std, 0.0, 1e-12);
  }
  EXPECT_EQ(curve.threshold_w, powers.front());

  PrimitiveSet direct_only;
  for (const auto& p : default_scene().items)
    if (p.order == ScatterOrder::first) direct_only.items.push_back(p);
  for (const auto& p : quality_vs_power(direct_only, cp, powers, 0.0, 2, 1).points)
    EXPECT_NEAR(p.ssim_mean, 1.0, 1e-12);
}

TEST(QualityVsPower, SinglePowerAndDeterminism)
{
  const ChirpParams cp;
  const auto one = quality_vs_power(default_scene(), cp, {0.05}, 8e-11, 4, 1);
  EXPECT_EQ(one.threshold_w, 0.05);
  const auto again = quality_vs_power(default_scene(), cp, {0.05}, 8e-11, 4, 1);
  EXPECT_EQ(one.points.front().ssim_mean, again.points.front().ssim_mean);
  EXPECT_THROW(quality_vs_power(default_scene(), cp, {0.1, 0.05}, 8e-11, 4, 1), std::invalid_argument);
  EXPECT_THROW(quality_vs_power(default_scene(), cp, {0.1}, 8e-11, 0, 1), std::invalid_argument);
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t t = 0; t < 20; ++t) seeds.insert(trial_seed(1, i, t));
  EXPECT_EQ(seeds.size(), 100u);
}

}  // namespace
