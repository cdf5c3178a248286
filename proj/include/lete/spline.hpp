#pragma once

#include <span>
#include <vector>

#include "lete/bspline.hpp"

namespace lete {

/// Learnable spline layer: per dimension a weighted Tanh base plus a linear
/// combination of B-spline basis functions,
///   out[i] = base_weight[i] * tanh(x_i) + sum_j coeffs[i,j] * B_j(x_i).
/// An optional dense mixing tensor adds KAN-style cross-dimension terms
///   out[i] += sum_{j != path} sum_m dense_mix[i,j,m] * B_m(x_j)
/// and is disabled (empty) by default.
struct SplineLayerParams {
  KnotVector kv;
  int dim = 0;
  std::vector<double> coeffs;       // [dim][grid_size], row-major (i, j)
  std::vector<double> base_weight;  // [dim]
  std::vector<double> dense_mix;    // [dim][dim][grid_size] when enabled, else empty

  bool dense_enabled() const { return !dense_mix.empty(); }
  size_t cidx(int i, int j) const {
    return static_cast<size_t>(i) * static_cast<size_t>(kv.grid_size) + static_cast<size_t>(j);
  }
  size_t midx(int i, int j, int m) const {
    return (static_cast<size_t>(i) * static_cast<size_t>(dim) + static_cast<size_t>(j)) *
               static_cast<size_t>(kv.grid_size) +
           static_cast<size_t>(m);
  }
};

/// Gradient buffers mirroring SplineLayerParams.
struct SplineGrads {
  std::vector<double> coeffs;
  std::vector<double> base_weight;
  std::vector<double> dense_mix;

  void resize_like(const SplineLayerParams& sp);
  void zero();
};

/// Forward evaluation. Throws std::invalid_argument on dimension mismatch.
void spline_forward(const SplineLayerParams& sp, std::span<const double> x,
                    std::span<double> out);

/// Reverse-mode gradients; parameter grads accumulate into `grads`, input
/// grads add into x_grad.
void spline_backward(const SplineLayerParams& sp, std::span<const double> x,
                     std::span<const double> upstream, SplineGrads& grads,
                     std::span<double> x_grad);

}  // namespace lete
