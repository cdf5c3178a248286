#pragma once

#include <span>
#include <vector>

namespace lete {

/// Per-dimension frequency/phase pair mapping a scalar time to the
/// pre-activation vector x_i = omega_i * t + phi_i.
struct LinearTimeMap {
  std::vector<double> omega;
  std::vector<double> phi;

  int dim() const { return static_cast<int>(omega.size()); }
};

/// out[i] = omega[i] * t + phi[i].
void linear_map(double t, const LinearTimeMap& lm, std::span<double> out);
std::vector<double> linear_map(double t, const LinearTimeMap& lm);

/// Learnable Fourier-series layer
///   out[j] = bias[j] + sum_i sum_{m=1..k_max}
///            (w_cos[j,i,m] cos(m x_i) + w_sin[j,i,m] sin(m x_i)).
/// The layer is square (output dim == input dim). In diagonal mode only the
/// i == j entries participate; off-diagonal weights are identically zero and
/// receive zero gradients.
struct FourierLayerParams {
  int dim = 0;    // D == M (square layer)
  int k_max = 5;  // harmonic count
  bool diagonal_only = false;
  std::vector<double> w_cos;  // [dim][dim][k_max], row-major (j, i, m)
  std::vector<double> w_sin;  // [dim][dim][k_max]
  std::vector<double> bias;   // [dim]

  size_t widx(int j, int i, int m) const {
    return (static_cast<size_t>(j) * static_cast<size_t>(dim) + static_cast<size_t>(i)) *
               static_cast<size_t>(k_max) +
           static_cast<size_t>(m);
  }
};

/// Gradient buffers mirroring FourierLayerParams.
struct FourierGrads {
  std::vector<double> w_cos;
  std::vector<double> w_sin;
  std::vector<double> bias;

  void resize_like(const FourierLayerParams& fp);
  void zero();
};

/// Exact evaluation of the double sum. Throws std::invalid_argument on
/// dimension mismatch.
void fourier_forward(const FourierLayerParams& fp, std::span<const double> x,
                     std::span<double> out);

/// Reverse-mode gradients: accumulates parameter gradients into `grads` and
/// writes d(loss)/d(x_i) into x_grad (adding to existing contents).
void fourier_backward(const FourierLayerParams& fp, std::span<const double> x,
                      std::span<const double> upstream, FourierGrads& grads,
                      std::span<double> x_grad);

}  // namespace lete
