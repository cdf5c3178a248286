#include "lete/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lete {

void SplineGrads::resize_like(const SplineLayerParams& sp) {
  coeffs.assign(sp.coeffs.size(), 0.0);
  base_weight.assign(sp.base_weight.size(), 0.0);
  dense_mix.assign(sp.dense_mix.size(), 0.0);
}

void SplineGrads::zero() {
  std::fill(coeffs.begin(), coeffs.end(), 0.0);
  std::fill(base_weight.begin(), base_weight.end(), 0.0);
  std::fill(dense_mix.begin(), dense_mix.end(), 0.0);
}

namespace {

void check_dims(const SplineLayerParams& sp, size_t x_len) {
  if (static_cast<int>(x_len) != sp.dim) {
    throw std::invalid_argument("spline layer: input length does not match layer dimension");
  }
}

}  // namespace

void spline_forward(const SplineLayerParams& sp, std::span<const double> x,
                    std::span<double> out) {
  check_dims(sp, x.size());
  if (out.size() != x.size()) {
    throw std::invalid_argument("spline layer: output length does not match layer dimension");
  }
  const size_t d = static_cast<size_t>(sp.dim);
  const size_t g = static_cast<size_t>(sp.kv.grid_size);
  std::vector<double> basis(d * g);
  for (size_t i = 0; i < d; ++i) {
    basis_eval(sp.kv, x[i], std::span<double>(basis.data() + i * g, g));
  }
  for (size_t i = 0; i < d; ++i) {
    double acc = sp.base_weight[i] * std::tanh(x[i]);
    const double* bi = basis.data() + i * g;
    for (size_t j = 0; j < g; ++j) acc += sp.coeffs[i * g + j] * bi[j];
    if (sp.dense_enabled()) {
      for (size_t j = 0; j < d; ++j) {
        const double* bj = basis.data() + j * g;
        const size_t base = sp.midx(static_cast<int>(i), static_cast<int>(j), 0);
        for (size_t m = 0; m < g; ++m) acc += sp.dense_mix[base + m] * bj[m];
      }
    }
    out[i] = acc;
  }
}

void spline_backward(const SplineLayerParams& sp, std::span<const double> x,
                     std::span<const double> upstream, SplineGrads& grads,
                     std::span<double> x_grad) {
  check_dims(sp, x.size());
  if (upstream.size() != x.size() || x_grad.size() != x.size()) {
    throw std::invalid_argument("spline layer: upstream length does not match layer dimension");
  }
  const size_t d = static_cast<size_t>(sp.dim);
  const size_t g = static_cast<size_t>(sp.kv.grid_size);
  std::vector<double> basis(d * g);
  std::vector<double> basis_dx(d * g);
  for (size_t i = 0; i < d; ++i) {
    basis_eval(sp.kv, x[i], std::span<double>(basis.data() + i * g, g));
    basis_eval_dx(sp.kv, x[i], std::span<double>(basis_dx.data() + i * g, g));
  }
  for (size_t i = 0; i < d; ++i) {
    const double gi = upstream[i];
    const double th = std::tanh(x[i]);
    grads.base_weight[i] += gi * th;
    const double* bi = basis.data() + i * g;
    const double* bdi = basis_dx.data() + i * g;
    double dxi = sp.base_weight[i] * (1.0 - th * th);
    for (size_t j = 0; j < g; ++j) {
      grads.coeffs[i * g + j] += gi * bi[j];
      dxi += sp.coeffs[i * g + j] * bdi[j];
    }
    x_grad[i] += gi * dxi;
    if (sp.dense_enabled()) {
      for (size_t j = 0; j < d; ++j) {
        const double* bj = basis.data() + j * g;
        const double* bdj = basis_dx.data() + j * g;
        const size_t base = sp.midx(static_cast<int>(i), static_cast<int>(j), 0);
        double dxj = 0.0;
        for (size_t m = 0; m < g; ++m) {
          grads.dense_mix[base + m] += gi * bj[m];
          dxj += sp.dense_mix[base + m] * bdj[m];
        }
        x_grad[j] += gi * dxj;
      }
    }
  }
}

}  // namespace lete
