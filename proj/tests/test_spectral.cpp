// Spectral pipeline tests: time normalization, the radix-2 FFT against a
// naive DFT oracle, entropy arithmetic (including the exact uniform and
// single-spike cases), and the end-to-end event-sequence analysis that
// separates periodic from random event trains.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "lete/rng.hpp"
#include "lete/spectral.hpp"
#include "oracles.hpp"

namespace {

using lete::EntropyConfig;
using lete::EventSequence;
using lete::Rng;
using lete::SpectralMode;

class SpectralTest : public ::testing::Test {
 protected:
  std::vector<double> random_signal(size_t n, std::uint64_t seed) const {
    Rng rng(seed);
    std::vector<double> s(n);
    for (auto& v : s) v = rng.normal(0.0, 1.0);
    return s;
  }
};

TEST_F(SpectralTest, NormalizeMapsMinToZeroMaxToOne) {
  const auto out = lete::normalize_times(std::vector<double>{10.0, 20.0, 30.0});
  ASSERT_EQ(out.size(), 3u);
  EXPECT_DOUBLE_EQ(out[0], 0.0);
  EXPECT_DOUBLE_EQ(out[1], 0.5);
  EXPECT_DOUBLE_EQ(out[2], 1.0);
}

TEST_F(SpectralTest, NormalizeIsIdempotentOnUnitRange) {
  const std::vector<double> unit{0.0, 0.25, 0.75, 1.0};
  const auto out = lete::normalize_times(unit);
  for (size_t i = 0; i < unit.size(); ++i) EXPECT_DOUBLE_EQ(out[i], unit[i]);
}

TEST_F(SpectralTest, NormalizeIsAffineInvariant) {
  const auto base = random_signal(40, 21);
  const auto ref = lete::normalize_times(base);
  for (const auto [alpha, beta] : {std::pair{2.0, 0.0}, {0.001, 5.0}, {1e3, -17.0}}) {
    std::vector<double> mapped(base.size());
    for (size_t i = 0; i < base.size(); ++i) mapped[i] = alpha * base[i] + beta;
    const auto out = lete::normalize_times(mapped);
    for (size_t i = 0; i < out.size(); ++i) {
      EXPECT_NEAR(out[i], ref[i], 1e-12) << "alpha=" << alpha << " i=" << i;
    }
  }
}

TEST_F(SpectralTest, NormalizeRejectsDegenerateInput) {
  EXPECT_THROW(lete::normalize_times(std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(lete::normalize_times(std::vector<double>{3.0, 3.0, 3.0}), std::invalid_argument);
  EXPECT_THROW(lete::normalize_times(std::vector<double>{}), std::invalid_argument);
}

TEST_F(SpectralTest, FftImpulseHasFlatSpectrum) {
  std::vector<std::complex<double>> a(8, {0.0, 0.0});
  a[0] = {1.0, 0.0};
  lete::fft_radix2(a);
  for (const auto& v : a) {
    EXPECT_NEAR(v.real(), 1.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  }
}

TEST_F(SpectralTest, FftRejectsNonPowerOfTwoLength) {
  std::vector<std::complex<double>> a(6, {1.0, 0.0});
  EXPECT_THROW(lete::fft_radix2(a), std::invalid_argument);
  std::vector<std::complex<double>> empty;
  EXPECT_THROW(lete::fft_radix2(empty), std::invalid_argument);
}

TEST_F(SpectralTest, MagnitudesMatchNaiveDftForAllLengths) {
  for (size_t n = 2; n <= 128; ++n) {
    const auto signal = random_signal(n, 100 + n);
    const auto fast = lete::dft_magnitude(signal);
    const auto slow = oracle::naive_dft_magnitude(signal);
    ASSERT_EQ(fast.size(), slow.size()) << "length " << n;
    for (size_t k = 0; k < fast.size(); ++k) {
      EXPECT_NEAR(fast[k], slow[k], 1e-10) << "length " << n << " bin " << k;
    }
  }
}

TEST_F(SpectralTest, ConstantSignalHasEnergyOnlyAtDc) {
  const std::vector<double> flat(32, 0.7);
  const auto mags = lete::dft_magnitude(flat);
  ASSERT_EQ(mags.size(), 17u);
  EXPECT_NEAR(mags[0], 0.7 * 32, 1e-12);
  for (size_t k = 1; k < mags.size(); ++k) EXPECT_NEAR(mags[k], 0.0, 1e-12);
}

TEST_F(SpectralTest, BinFrequencyCosineConcentratesInOneBin) {
  const size_t n = 32;
  std::vector<double> s(n);
  for (size_t i = 0; i < n; ++i) {
    s[i] = std::cos(2.0 * std::numbers::pi * 4.0 * static_cast<double>(i) / n);
  }
  const auto mags = lete::dft_magnitude(s);
  const double peak = mags[4];
  EXPECT_NEAR(peak, n / 2.0, 1e-9);
  for (size_t k = 0; k < mags.size(); ++k) {
    if (k == 4) continue;
    EXPECT_LT(mags[k], 1e-9 * peak) << "bin " << k;
  }
}

TEST_F(SpectralTest, UniformMagnitudesGiveExactlyLnF) {
  for (const int f : {2, 8, 32, 128}) {
    const std::vector<double> mags(static_cast<size_t>(f), 0.7);
    const auto rep = lete::spectral_entropy(mags);
    // Bitwise equality: P(f) = 1/F is exact for power-of-two F and the
    // pairwise-summed entropy reproduces ln F without rounding drift.
    EXPECT_EQ(rep.entropy, std::log(static_cast<double>(f))) << "F=" << f;
    EXPECT_EQ(rep.n_bins, f);
  }
}

TEST_F(SpectralTest, SingleSpikeGivesExactlyZero) {
  std::vector<double> mags(16, 0.0);
  mags[5] = 3.2;
  const auto rep = lete::spectral_entropy(mags);
  EXPECT_EQ(rep.entropy, 0.0);
  EXPECT_FALSE(std::signbit(rep.entropy));
}

TEST_F(SpectralTest, EntropyIsScaleInvariant) {
  auto mags = random_signal(24, 33);
  for (auto& m : mags) m = std::abs(m);
  const auto base = lete::spectral_entropy(mags);

  auto scaled = mags;
  for (auto& m : scaled) m *= 4.0;  // power-of-two scale: bitwise identical
  EXPECT_EQ(lete::spectral_entropy(scaled).entropy, base.entropy);

  auto scaled_odd = mags;
  for (auto& m : scaled_odd) m *= 3.7;
  EXPECT_NEAR(lete::spectral_entropy(scaled_odd).entropy, base.entropy, 1e-12);
}

TEST_F(SpectralTest, DistributionSumsToOneWithinBounds) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto mags = random_signal(50, 200 + seed);
    for (auto& m : mags) m = std::abs(m);
    const auto rep = lete::spectral_entropy(mags);
    double sum = 0.0;
    for (double p : rep.distribution) {
      EXPECT_GE(p, 0.0);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_GE(rep.entropy, 0.0);
    EXPECT_LE(rep.entropy, std::log(static_cast<double>(rep.n_bins)) + 1e-12);
  }
}

TEST_F(SpectralTest, EntropyRejectsInvalidMagnitudes) {
  EXPECT_THROW(lete::spectral_entropy(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(lete::spectral_entropy(std::vector<double>{0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(lete::spectral_entropy(std::vector<double>{1.0, -0.5}), std::invalid_argument);
  EXPECT_THROW(
      lete::spectral_entropy(std::vector<double>{1.0, std::numeric_limits<double>::infinity()}),
      std::invalid_argument);
}

TEST_F(SpectralTest, AnalyzeEnforcesMinEventThresholdStrictly) {
  EntropyConfig cfg;
  cfg.min_events = 5;
  EventSequence five{"node-a", {0.1, 0.2, 0.4, 0.7, 0.9}};
  EXPECT_THROW(lete::analyze_events(five, cfg), std::invalid_argument);
  EventSequence six{"node-a", {0.1, 0.2, 0.4, 0.7, 0.9, 1.5}};
  EXPECT_NO_THROW(lete::analyze_events(six, cfg));
}

TEST_F(SpectralTest, AnalyzeNormalizedTimesMatchesManualPipeline) {
  EventSequence seq{"n", {}};
  Rng rng(44);
  double t = 0.0;
  for (int i = 0; i < 40; ++i) {
    t += rng.uniform(0.1, 1.0);
    seq.times.push_back(t);
  }
  EntropyConfig cfg;
  cfg.mode = SpectralMode::NormalizedTimes;
  const auto rep = lete::analyze_events(seq, cfg);

  const auto normalized = lete::normalize_times(seq.times);
  const auto mags = lete::dft_magnitude(normalized);
  const auto expect =
      lete::spectral_entropy(std::span<const double>(mags).subspan(1));  // DC dropped
  EXPECT_DOUBLE_EQ(rep.entropy, expect.entropy);
  EXPECT_EQ(rep.n_bins, expect.n_bins);
}

TEST_F(SpectralTest, AnalyzeDiffsModeRejectsExactlyPeriodicTrains) {
  EventSequence periodic{"p", {}};
  for (int i = 0; i < 32; ++i) periodic.times.push_back(0.5 * i);
  EntropyConfig cfg;
  cfg.mode = SpectralMode::TimeDifferences;
  // All gaps equal: the gap sequence has zero range and cannot be normalized.
  EXPECT_THROW(lete::analyze_events(periodic, cfg), std::invalid_argument);

  EventSequence jittered = periodic;
  Rng rng(7);
  for (auto& v : jittered.times) v += rng.uniform(0.0, 0.05);
  std::sort(jittered.times.begin(), jittered.times.end());
  EXPECT_NO_THROW(lete::analyze_events(jittered, cfg));
}

TEST_F(SpectralTest, AnalyzeBinnedCountsUsesConfiguredResolution) {
  EventSequence seq{"n", {}};
  Rng rng(45);
  for (int i = 0; i < 200; ++i) seq.times.push_back(rng.uniform(0.0, 100.0));
  std::sort(seq.times.begin(), seq.times.end());
  EntropyConfig cfg;
  cfg.mode = SpectralMode::BinnedCounts;
  cfg.n_bins_hist = 64;
  const auto rep = lete::analyze_events(seq, cfg);
  // 64-sample signal -> 33 one-sided bins, minus DC.
  EXPECT_EQ(rep.n_bins, 32);
  EXPECT_GT(rep.entropy, 0.0);
}

// The discriminative claim behind the pipeline: regularly spaced event
// trains produce concentrated spectra (low entropy), while random trains
// spread energy across bins (high entropy).
TEST_F(SpectralTest, PeriodicTrainsScoreLowerEntropyThanRandom) {
  EntropyConfig cfg;
  cfg.mode = SpectralMode::BinnedCounts;
  const int n_events = 100;
  int wins = 0;
  for (int trial = 0; trial < 100; ++trial) {
    EventSequence periodic{"p", {}};
    for (int i = 0; i < n_events; ++i) {
      periodic.times.push_back(static_cast<double>(i) / n_events);
    }
    EventSequence random{"r", {}};
    Rng rng(900 + static_cast<std::uint64_t>(trial));
    for (int i = 0; i < n_events; ++i) random.times.push_back(rng.uniform(0.0, 1.0));
    std::sort(random.times.begin(), random.times.end());

    const double h_p = lete::analyze_events(periodic, cfg).entropy;
    const double h_r = lete::analyze_events(random, cfg).entropy;
    if (h_p < h_r) ++wins;
  }
  EXPECT_GE(wins, 95);
}

}  // namespace
