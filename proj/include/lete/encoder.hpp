#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lete/fourier.hpp"
#include "lete/rng.hpp"
#include "lete/spline.hpp"

namespace lete {

/// Named view of one learnable parameter buffer and its gradient buffer.
/// Optimizers and the finite-difference checker address parameters through
/// these slots; `name` identifies the parameter path in diagnostics.
struct ParamSlot {
  std::string name;
  std::vector<double>* value = nullptr;
  std::vector<double>* grad = nullptr;
};

/// Abstract scalar-time encoder: t -> R^d with reverse-mode gradients.
class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual int dim() const = 0;
  virtual void encode(double t, std::span<double> out) const = 0;
  /// Accumulate d(loss)/d(params) into the grad buffers for one (t, upstream)
  /// pair. Performs its own forward pass; call zero_grads() to reset.
  virtual void backward(double t, std::span<const double> upstream) = 0;
  virtual std::vector<ParamSlot> params() = 0;
  virtual void zero_grads() = 0;

  std::vector<double> encode(double t) const {
    std::vector<double> out(static_cast<size_t>(dim()));
    encode(t, out);
    return out;
  }
};

/// (d_fourier, d_spline) split: the first floor(p*d) dimensions go through
/// the Fourier layer, the rest through the spline layer.
/// Throws std::invalid_argument for p outside [0, 1] or d < 1.
std::pair<int, int> split_dims(int d, double p);

/// out = (v - mean(v)) / sqrt(var(v) + eps), statistics over all entries of
/// the single vector (population variance).
void layer_norm(std::span<const double> v, double eps, std::span<double> out);

/// Full parameter set of a combined encoder. p=1 and p=0 recover the pure
/// Fourier / pure spline variants through the same structure.
struct CombinedEncoderParams {
  int d = 0;
  double p = 0.5;
  LinearTimeMap lm;            // length d
  FourierLayerParams fourier;  // over the first floor(p*d) dims
  SplineLayerParams spline;    // over the remaining dims
  std::vector<double> scale;   // length d
  double ln_eps = 1e-5;
  /// Skip LayerNorm and scale entirely, exposing the raw block outputs.
  /// Required for d=1 encoders (normalizing a 1-vector is degenerate) and for
  /// exact sinusoid replication.
  bool raw_output = false;

  int d_fourier() const { return fourier.dim; }
  int d_spline() const { return spline.dim; }
};

/// Gradient buffers mirroring every learnable field of CombinedEncoderParams.
struct CombinedGrads {
  std::vector<double> omega, phi;
  FourierGrads fourier;
  SplineGrads spline;
  std::vector<double> scale;

  void resize_like(const CombinedEncoderParams& cp);
  void zero();
};

/// Configuration for building a freshly initialized combined encoder.
struct CombinedConfig {
  int d = 8;
  double p = 0.5;
  int k_max = 5;
  bool dense_fourier = true;  // false selects the per-dimension diagonal form
  int degree = 3;
  int grid_size = 8;
  double span_lo = -2.0;
  double span_hi = 2.0;
  double ln_eps = 1e-5;
  bool raw_output = false;
};

/// Seeded default initialization:
///   omega[i] = 10^(-4 i / d) (geometric ladder over ~4 decades), phi = 0,
///   Fourier weights ~ N(0, 1/sqrt(d_fourier * k_max)), bias = 0,
///   spline coeffs ~ N(0, 0.1), base_weight = 1, scale = 1.
CombinedEncoderParams make_combined(const CombinedConfig& cfg, Rng& rng);

/// Forward pass: x = lm(t); Fourier block on x[0:df], spline block on
/// x[df:d]; then LayerNorm over all d dims jointly and elementwise scale
/// (both skipped when raw_output).
void encode(const CombinedEncoderParams& cp, double t, std::span<double> out);

/// Reverse-mode gradients for every learnable field (accumulating).
void encode_backward(const CombinedEncoderParams& cp, double t,
                     std::span<const double> upstream, CombinedGrads& grads);

/// Encoder adapter owning parameters and gradient buffers.
class CombinedEncoder : public Encoder {
 public:
  explicit CombinedEncoder(CombinedEncoderParams params) : p_(std::move(params)) {
    g_.resize_like(p_);
  }

  using Encoder::encode;  // keep the vector-returning convenience visible

  int dim() const override { return p_.d; }
  void encode(double t, std::span<double> out) const override { lete::encode(p_, t, out); }
  void backward(double t, std::span<const double> upstream) override {
    encode_backward(p_, t, upstream, g_);
  }
  std::vector<ParamSlot> params() override;
  void zero_grads() override { g_.zero(); }

  CombinedEncoderParams& p() { return p_; }
  const CombinedEncoderParams& p() const { return p_; }

  /// When false, omega/phi are excluded from params() so optimizers leave the
  /// linear map frozen (used by closed-form-oracle comparisons).
  void set_train_linear_map(bool trainable) { train_lm_ = trainable; }

 private:
  CombinedEncoderParams p_;
  CombinedGrads g_;
  bool train_lm_ = true;
};

}  // namespace lete
