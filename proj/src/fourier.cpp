#include "lete/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lete {

void linear_map(double t, const LinearTimeMap& lm, std::span<double> out) {
  const size_t d = lm.omega.size();
  for (size_t i = 0; i < d; ++i) out[i] = lm.omega[i] * t + lm.phi[i];
}

std::vector<double> linear_map(double t, const LinearTimeMap& lm) {
  std::vector<double> out(lm.omega.size());
  linear_map(t, lm, out);
  return out;
}

void FourierGrads::resize_like(const FourierLayerParams& fp) {
  w_cos.assign(fp.w_cos.size(), 0.0);
  w_sin.assign(fp.w_sin.size(), 0.0);
  bias.assign(fp.bias.size(), 0.0);
}

void FourierGrads::zero() {
  std::fill(w_cos.begin(), w_cos.end(), 0.0);
  std::fill(w_sin.begin(), w_sin.end(), 0.0);
  std::fill(bias.begin(), bias.end(), 0.0);
}

namespace {

void check_dims(const FourierLayerParams& fp, size_t x_len) {
  if (static_cast<int>(x_len) != fp.dim) {
    throw std::invalid_argument("fourier layer: input length does not match layer dimension");
  }
}

// cos(m x_i) / sin(m x_i) tables for m = 1..k_max, built once per evaluation.
void trig_tables(std::span<const double> x, int k_max, std::vector<double>& c,
                 std::vector<double>& s) {
  const size_t d = x.size();
  const size_t k = static_cast<size_t>(k_max);
  c.resize(d * k);
  s.resize(d * k);
  for (size_t i = 0; i < d; ++i) {
    for (size_t m = 0; m < k; ++m) {
      const double a = static_cast<double>(m + 1) * x[i];
      c[i * k + m] = std::cos(a);
      s[i * k + m] = std::sin(a);
    }
  }
}

}  // namespace

void fourier_forward(const FourierLayerParams& fp, std::span<const double> x,
                     std::span<double> out) {
  check_dims(fp, x.size());
  if (out.size() != x.size()) {
    throw std::invalid_argument("fourier layer: output length does not match layer dimension");
  }
  const size_t d = static_cast<size_t>(fp.dim);
  const size_t k = static_cast<size_t>(fp.k_max);
  std::vector<double> c, s;
  trig_tables(x, fp.k_max, c, s);
  for (size_t j = 0; j < d; ++j) {
    double acc = fp.bias[j];
    if (fp.diagonal_only) {
      const size_t base = fp.widx(static_cast<int>(j), static_cast<int>(j), 0);
      for (size_t m = 0; m < k; ++m) {
        acc += fp.w_cos[base + m] * c[j * k + m] + fp.w_sin[base + m] * s[j * k + m];
      }
    } else {
      for (size_t i = 0; i < d; ++i) {
        const size_t base = fp.widx(static_cast<int>(j), static_cast<int>(i), 0);
        for (size_t m = 0; m < k; ++m) {
          acc += fp.w_cos[base + m] * c[i * k + m] + fp.w_sin[base + m] * s[i * k + m];
        }
      }
    }
    out[j] = acc;
  }
}

void fourier_backward(const FourierLayerParams& fp, std::span<const double> x,
                      std::span<const double> upstream, FourierGrads& grads,
                      std::span<double> x_grad) {
  check_dims(fp, x.size());
  if (upstream.size() != x.size() || x_grad.size() != x.size()) {
    throw std::invalid_argument("fourier layer: upstream length does not match layer dimension");
  }
  const size_t d = static_cast<size_t>(fp.dim);
  const size_t k = static_cast<size_t>(fp.k_max);
  std::vector<double> c, s;
  trig_tables(x, fp.k_max, c, s);
  for (size_t j = 0; j < d; ++j) {
    const double g = upstream[j];
    grads.bias[j] += g;
    if (g == 0.0) continue;
    const size_t i_lo = fp.diagonal_only ? j : 0;
    const size_t i_hi = fp.diagonal_only ? j + 1 : d;
    for (size_t i = i_lo; i < i_hi; ++i) {
      const size_t base = fp.widx(static_cast<int>(j), static_cast<int>(i), 0);
      double dxi = 0.0;
      for (size_t m = 0; m < k; ++m) {
        const double cim = c[i * k + m];
        const double sim = s[i * k + m];
        grads.w_cos[base + m] += g * cim;
        grads.w_sin[base + m] += g * sim;
        const double md = static_cast<double>(m + 1);
        dxi += md * (-fp.w_cos[base + m] * sim + fp.w_sin[base + m] * cim);
      }
      x_grad[i] += g * dxi;
    }
  }
}

}  // namespace lete
