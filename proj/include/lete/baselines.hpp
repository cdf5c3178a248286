#pragma once

#include <span>
#include <vector>

#include "lete/encoder.hpp"

namespace lete {

/// Fixed sinusoidal time-encoding families.
///  - FTR: interleaved cosine/sine pairs sharing a frequency (even dim only).
///  - T2V: one linear dimension followed by sines.
///  - UnifiedSin: per-dimension sin(omega_i * t + phi_i); FTR and T2V both
///    rewrite into this form.
enum class BaselineKind { FTR, T2V, UnifiedSin };

/// Parameters of a baseline encoder. For FTR, omega holds one frequency per
/// cos/sin pair (output dim = 2 * omega.size()) and phi is unused (empty).
/// For the other kinds omega and phi both have length dim.
struct BaselineParams {
  BaselineKind kind = BaselineKind::UnifiedSin;
  std::vector<double> omega;
  std::vector<double> phi;

  int dim() const {
    return kind == BaselineKind::FTR ? 2 * static_cast<int>(omega.size())
                                     : static_cast<int>(omega.size());
  }
};

/// Evaluate the baseline at time t:
///   FTR        -> [cos(w_1 t), sin(w_1 t), cos(w_2 t), sin(w_2 t), ...]
///   T2V        -> [w_1 t + p_1, sin(w_2 t + p_2), ...]
///   UnifiedSin -> [sin(w_i t + p_i)]_i
/// Throws std::invalid_argument on non-finite t, empty omega, or (non-FTR)
/// omega/phi length mismatch.
void baseline_encode(double t, const BaselineParams& bp, std::span<double> out);
std::vector<double> baseline_encode(double t, const BaselineParams& bp);

/// Rewrite an FTR parameter set into the unified sinusoidal form: each
/// frequency is duplicated and paired with phases (pi/2, 0), using
/// cos(w t) = sin(w t + pi/2). The result encodes identically for every t.
/// Throws std::invalid_argument if bp.kind != FTR.
BaselineParams unify_ftr(const BaselineParams& bp);

/// Build combined-encoder parameters whose output replicates
/// sin(omega_i * t + phi_i) exactly: Fourier-only split (p = 1) with a single
/// harmonic, diagonal sine weights 1, zero cosine weights and bias, and raw
/// output (LayerNorm and scale bypassed).
/// Throws std::invalid_argument if the input lengths differ or are empty.
CombinedEncoderParams lete_params_replicating_sin(const std::vector<double>& omega,
                                                  const std::vector<double>& phi);

/// Encoder adapter with trainable frequencies (and phases, except FTR where
/// no phase exists).
class BaselineEncoder : public Encoder {
 public:
  explicit BaselineEncoder(BaselineParams params);

  using Encoder::encode;  // keep the vector-returning convenience visible

  int dim() const override { return p_.dim(); }
  void encode(double t, std::span<double> out) const override { baseline_encode(t, p_, out); }
  void backward(double t, std::span<const double> upstream) override;
  std::vector<ParamSlot> params() override;
  void zero_grads() override;

  BaselineParams& p() { return p_; }
  const BaselineParams& p() const { return p_; }

 private:
  BaselineParams p_;
  std::vector<double> omega_g_, phi_g_;
};

}  // namespace lete
