#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace lete {

/// One node's event timestamps. Batch readers keep sequences sorted
/// ascending; duplicates are allowed and preserved.
struct EventSequence {
  std::string node_id;
  std::vector<double> times;
};

/// Result of a spectral-entropy analysis.
struct SpectralReport {
  double entropy = 0.0;  // nats, in [0, ln(n_bins)]
  int n_bins = 0;        // number of retained frequency bins
  std::vector<double> distribution;  // P(f), sums to 1
};

/// Affine map sending min -> 0 and max -> 1.
/// Throws std::invalid_argument if fewer than two values or all values equal.
std::vector<double> normalize_times(std::span<const double> times);

/// In-place radix-2 decimation-in-time FFT. Length must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a);

/// One-sided DFT magnitudes of a real signal: zero-pads to the next power of
/// two N, runs the radix-2 transform, and returns |X(f)| for the N/2 + 1
/// non-redundant bins (DC first). Throws on length < 2.
std::vector<double> dft_magnitude(std::span<const double> signal);

/// Normalize magnitudes into P(f) = M(f) / sum M and compute the Shannon
/// entropy H = -sum_f P(f) ln P(f) in nats, with 0 ln 0 := 0. Sums use
/// pairwise accumulation, so F equal magnitudes with F a power of two give
/// exactly ln F. Throws std::invalid_argument if any magnitude is negative
/// or all are zero.
SpectralReport spectral_entropy(std::span<const double> magnitudes);

/// What signal the entropy pipeline feeds to the transform.
///  - NormalizedTimes: the [0,1]-normalized timestamps themselves (default).
///  - TimeDifferences: normalized successive gaps; exactly periodic trains
///    have zero-range gaps and are rejected.
///  - BinnedCounts: per-bin event counts over [0,1] — an event-rate signal
///    that separates periodic from random trains far more sharply.
enum class SpectralMode { NormalizedTimes, TimeDifferences, BinnedCounts };

struct EntropyConfig {
  SpectralMode mode = SpectralMode::NormalizedTimes;
  int n_bins_hist = 64;  // BinnedCounts histogram resolution
  int min_events = 5;    // sequences must have strictly more events than this
};

/// Full pipeline: build the mode's signal, transform, drop the DC bin, and
/// return the entropy of the remaining magnitude distribution.
/// Throws std::invalid_argument when the sequence has too few events or the
/// signal is degenerate for the chosen mode.
SpectralReport analyze_events(const EventSequence& seq, const EntropyConfig& cfg);

}  // namespace lete
