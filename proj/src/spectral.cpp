#include "lete/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lete {

namespace {

/// Pairwise (recursive halving) summation: exact whenever all addends are
/// equal and the count is a power of two, and far more accurate than
/// sequential summation in general.
double pairwise_sum(const double* data, size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return data[0];
  const size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::vector<double> normalize_times(std::span<const double> times) {
  if (times.size() < 2) {
    throw std::invalid_argument("normalize_times: need at least two values");
  }
  const auto [mn_it, mx_it] = std::minmax_element(times.begin(), times.end());
  const double mn = *mn_it, mx = *mx_it;
  if (!(mx > mn)) {
    throw std::invalid_argument("normalize_times: all values equal (zero range)");
  }
  const double inv = 1.0 / (mx - mn);
  std::vector<double> out(times.size());
  for (size_t i = 0; i < times.size(); ++i) out[i] = (times[i] - mn) * inv;
  return out;
}

void fft_radix2(std::vector<std::complex<double>>& a) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft_radix2: length must be a power of two");
  }
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<double> dft_magnitude(std::span<const double> signal) {
  if (signal.size() < 2) {
    throw std::invalid_argument("dft_magnitude: need at least two samples");
  }
  const size_t n = next_pow2(signal.size());
  std::vector<std::complex<double>> a(n, {0.0, 0.0});
  for (size_t i = 0; i < signal.size(); ++i) a[i] = {signal[i], 0.0};
  fft_radix2(a);
  std::vector<double> mags(n / 2 + 1);
  for (size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(a[i]);
  return mags;
}

SpectralReport spectral_entropy(std::span<const double> magnitudes) {
  if (magnitudes.empty()) {
    throw std::invalid_argument("spectral_entropy: empty magnitude vector");
  }
  bool any_positive = false;
  for (const double m : magnitudes) {
    if (m < 0.0 || !std::isfinite(m)) {
      throw std::invalid_argument("spectral_entropy: magnitudes must be finite and non-negative");
    }
    if (m > 0.0) any_positive = true;
  }
  if (!any_positive) {
    throw std::invalid_argument("spectral_entropy: all magnitudes are zero");
  }
  const double total = pairwise_sum(magnitudes.data(), magnitudes.size());

  SpectralReport report;
  report.n_bins = static_cast<int>(magnitudes.size());
  report.distribution.resize(magnitudes.size());
  std::vector<double> terms(magnitudes.size());
  for (size_t i = 0; i < magnitudes.size(); ++i) {
    const double p = magnitudes[i] / total;
    report.distribution[i] = p;
    terms[i] = p > 0.0 ? -p * std::log(p) : 0.0;
  }
  // `+ 0.0` folds a possible -0.0 (pure spike) into +0.0.
  report.entropy = pairwise_sum(terms.data(), terms.size()) + 0.0;
  return report;
}

SpectralReport analyze_events(const EventSequence& seq, const EntropyConfig& cfg) {
  if (static_cast<long long>(seq.times.size()) <= cfg.min_events) {
    throw std::invalid_argument("analyze_events: sequence '" + seq.node_id + "' has " +
                                std::to_string(seq.times.size()) +
                                " events; need strictly more than " +
                                std::to_string(cfg.min_events));
  }
  std::vector<double> times(seq.times.begin(), seq.times.end());
  std::sort(times.begin(), times.end());

  std::vector<double> signal;
  switch (cfg.mode) {
    case SpectralMode::NormalizedTimes:
      signal = normalize_times(times);
      break;
    case SpectralMode::TimeDifferences: {
      std::vector<double> diffs(times.size() - 1);
      for (size_t i = 0; i + 1 < times.size(); ++i) diffs[i] = times[i + 1] - times[i];
      signal = normalize_times(diffs);
      break;
    }
    case SpectralMode::BinnedCounts: {
      if (cfg.n_bins_hist < 2) {
        throw std::invalid_argument("analyze_events: n_bins_hist must be >= 2");
      }
      const auto norm = normalize_times(times);
      signal.assign(static_cast<size_t>(cfg.n_bins_hist), 0.0);
      for (const double x : norm) {
        const int b = std::min(static_cast<int>(x * cfg.n_bins_hist), cfg.n_bins_hist - 1);
        signal[static_cast<size_t>(b)] += 1.0;
      }
      break;
    }
  }

  const auto mags = dft_magnitude(signal);
  return spectral_entropy(std::span<const double>(mags).subspan(1));
}

}  // namespace lete
