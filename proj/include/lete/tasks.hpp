#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lete/baselines.hpp"
#include "lete/encoder.hpp"
#include "lete/train.hpp"

namespace lete {

// ---------------------------------------------------------------------------
// Target functions for the 1-dimensional fitting experiment
// ---------------------------------------------------------------------------

enum class TargetKind { Sin, ModulatedSin, Softplus, Swish };

/// A named scalar target sampled equispaced over [lo, hi].
struct TargetFunction {
  TargetKind kind = TargetKind::Sin;
  double lo = -6.283185307179586;
  double hi = 6.283185307179586;
  int n = 200;
};

/// Default sampling ranges: the periodic targets over [-2pi, 2pi], the
/// activation-function targets over [-4, 4]; 200 samples each.
TargetFunction default_target(TargetKind kind);

/// Closed-form target values:
///   Sin          y = sin(x)
///   ModulatedSin y = (1 + sin(x)) * sin(2x)
///   Softplus     y = log(1 + e^x)
///   Swish        y = x / (1 + e^-x)
double eval_target(TargetKind kind, double x);

TargetKind target_from_name(const std::string& name);
std::string target_name(TargetKind kind);

struct Dataset {
  std::vector<double> x, y;
};

/// Equispaced samples (endpoints included) of the target.
/// Throws std::invalid_argument if lo >= hi or n < 16.
Dataset gen_target(const TargetFunction& tf);

// ---------------------------------------------------------------------------
// Synthetic signals for the reconstruction experiment
// ---------------------------------------------------------------------------

enum class SignalKind { Periodic, NonPeriodic, Mixed };

struct SyntheticSignal {
  SignalKind kind = SignalKind::Mixed;
  std::vector<double> t_grid;  // i/n for i = 0..n-1
  std::vector<double> values;
  std::string generator_spec;  // seed + realized formula, full precision
};

/// Seeded signal generator over the endpoint-exclusive unit grid t_i = i/n.
///   Periodic:    sum of 2-3 sinusoids at even integer frequencies
///                (fundamental period divides 1/2).
///   NonPeriodic: cubic drift plus one Gabor packet (a localized
///                high-frequency burst).
///   Mixed:       pointwise sum of both, sharing the seed.
/// Component draws come from independent sub-streams of the seed, so the
/// Mixed signal is exactly the sum of the other two kinds at the same seed.
/// Throws std::invalid_argument if n < 32.
SyntheticSignal gen_signal(SignalKind kind, int n, std::uint64_t seed);

SignalKind signal_from_name(const std::string& name);
std::string signal_name(SignalKind kind);

// ---------------------------------------------------------------------------
// Task drivers
// ---------------------------------------------------------------------------

enum class FitEncoderKind { FTE, FourierLeTE, SplineLeTE };

FitEncoderKind fit_encoder_from_name(const std::string& name);

struct TaskConfig {
  int steps = 5000;
  double learning_rate = 1e-2;
  std::uint64_t seed = 0;
  /// When in [0, 1], overrides the Fourier fraction of the LeTE fitting
  /// recipes; negative keeps each recipe's own split. Values above 1 are
  /// rejected. Ignored by the fte baseline.
  double p_override = -1.0;
};

struct CurveSample {
  double x = 0.0;
  double target = 0.0;
  double fitted = 0.0;
};

struct FitReport {
  std::string encoder_kind;
  double final_mse = 0.0;
  /// Closed-form least-squares MSE of the same feature family with the
  /// linear map frozen at its initial value; set only where that oracle
  /// is well-defined.
  std::optional<double> oracle_mse;
  std::vector<CurveSample> curve_samples;
  std::vector<double> loss_curve;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
};

/// 1-dimensional fitting experiment: the chosen encoder (raw output, d=1)
/// plus a scalar linear decoder trained with full-batch Adam against the
/// target samples.
///   FourierLeTE: 5 harmonics, trainable linear map (init omega=1, phi=0).
///   SplineLeTE:  degree-3 basis, grid 16 spanning the sample range,
///                trainable linear map.
///   FTE:         single sine with trainable omega/phi.
/// The decoder starts near zero (weights ~ N(0, 0.01)).
/// When non-null, `trained_combined` / `trained_baseline` receive the
/// post-training parameters (whichever matches the encoder kind).
FitReport run_fit(FitEncoderKind kind, const TargetFunction& tf, const TaskConfig& cfg,
                  CombinedEncoderParams* trained_combined = nullptr,
                  BaselineParams* trained_baseline = nullptr);

enum class ReconEncoderKind { FTE, CombinedLeTE };

ReconEncoderKind recon_encoder_from_name(const std::string& name);

/// Signal-reconstruction experiment: d-dimensional encoder + scalar linear
/// decoder against (t_grid, values).
///   CombinedLeTE: split p=0.5, LayerNorm + scale active, spline grid 32;
///                 spline dims get omega=4, phi=-2 so the unit time interval
///                 lands on the knot span.
///   FTE:          unified-sin with harmonic comb init omega_i = 2*pi*i,
///                 which can represent band-limited periodic signals exactly.
/// Throws std::invalid_argument for d < 2.
FitReport run_reconstruction(ReconEncoderKind kind, const SyntheticSignal& signal, int d,
                             const TaskConfig& cfg,
                             CombinedEncoderParams* trained_combined = nullptr,
                             BaselineParams* trained_baseline = nullptr);

/// Feature map: row r = encode(t_grid[r]), shape [|t_grid|][dim].
/// Throws std::invalid_argument if t_grid is empty or unsorted.
std::vector<std::vector<double>> export_feature_map(const Encoder& encoder,
                                                    std::span<const double> t_grid);

// ---------------------------------------------------------------------------
// Transfer-function reconstruction (interpretability)
// ---------------------------------------------------------------------------

/// Per-dimension learned transfer functions phi_j sampled over a raw-input
/// grid, plus a printable coefficient listing. Curves are the raw block
/// outputs (pre-normalization) as functions of the scalar encoder input x,
/// i.e. the composition with x'_i = omega_i x + phi_i is already applied;
/// the listing spells that composition out in footer lines so it remains
/// self-contained (Fourier dims may mix several x'_i).
struct TransferFunctions {
  std::vector<double> x_grid;
  std::vector<std::vector<double>> curves;  // [d][|x_grid|]
  std::string listing;
};

/// Sample and print every dimension's transfer function. Coefficients are
/// printed with full round-trip precision (%.17g) so re-evaluating the
/// listing reproduces the curves to machine accuracy.
TransferFunctions reconstruct_transfer_functions(const CombinedEncoderParams& cp,
                                                 std::span<const double> x_grid);

// ---------------------------------------------------------------------------
// Dense linear algebra used by the closed-form oracles
// ---------------------------------------------------------------------------

/// Solve min ||A c - y||^2 via the normal equations A^T A c = A^T y with a
/// Cholesky factorization. rows[r][j] = A(r, j). Throws on rank deficiency.
std::vector<double> solve_normal_equations(const std::vector<std::vector<double>>& rows,
                                           const std::vector<double>& y);

/// Mean squared residual of the normal-equations least-squares fit.
double least_squares_mse(const std::vector<std::vector<double>>& rows,
                         const std::vector<double>& y);

}  // namespace lete
