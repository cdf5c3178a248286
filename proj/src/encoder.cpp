#include "lete/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lete {

std::pair<int, int> split_dims(int d, double p) {
  if (d < 1) throw std::invalid_argument("split_dims: d must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("split_dims: split ratio p must lie in [0, 1]");
  }
  const int df = static_cast<int>(std::floor(p * static_cast<double>(d)));
  return {df, d - df};
}

void layer_norm(std::span<const double> v, double eps, std::span<double> out) {
  const size_t d = v.size();
  double mean = 0.0;
  for (size_t i = 0; i < d; ++i) mean += v[i];
  mean /= static_cast<double>(d);
  double var = 0.0;
  for (size_t i = 0; i < d; ++i) {
    const double c = v[i] - mean;
    var += c * c;
  }
  var /= static_cast<double>(d);
  const double inv = 1.0 / std::sqrt(var + eps);
  for (size_t i = 0; i < d; ++i) out[i] = (v[i] - mean) * inv;
}

namespace {

/// Gradient of layer_norm: given g = d(loss)/d(out) and the normalized values
/// xh, produce d(loss)/d(v). Uses the standard closed form
///   gv = (g - mean(g) - xh * mean(g .* xh)) / sqrt(var + eps).
void layer_norm_backward(std::span<const double> g, std::span<const double> xh, double inv_std,
                         std::span<double> gv) {
  const size_t d = g.size();
  double mg = 0.0, mgx = 0.0;
  for (size_t i = 0; i < d; ++i) {
    mg += g[i];
    mgx += g[i] * xh[i];
  }
  mg /= static_cast<double>(d);
  mgx /= static_cast<double>(d);
  for (size_t i = 0; i < d; ++i) gv[i] = (g[i] - mg - xh[i] * mgx) * inv_std;
}

}  // namespace

void CombinedGrads::resize_like(const CombinedEncoderParams& cp) {
  omega.assign(cp.lm.omega.size(), 0.0);
  phi.assign(cp.lm.phi.size(), 0.0);
  fourier.resize_like(cp.fourier);
  spline.resize_like(cp.spline);
  scale.assign(cp.scale.size(), 0.0);
}

void CombinedGrads::zero() {
  std::fill(omega.begin(), omega.end(), 0.0);
  std::fill(phi.begin(), phi.end(), 0.0);
  fourier.zero();
  spline.zero();
  std::fill(scale.begin(), scale.end(), 0.0);
}

CombinedEncoderParams make_combined(const CombinedConfig& cfg, Rng& rng) {
  auto [df, ds] = split_dims(cfg.d, cfg.p);
  CombinedEncoderParams cp;
  cp.d = cfg.d;
  cp.p = cfg.p;
  cp.ln_eps = cfg.ln_eps;
  cp.raw_output = cfg.raw_output;

  cp.lm.omega.resize(static_cast<size_t>(cfg.d));
  cp.lm.phi.assign(static_cast<size_t>(cfg.d), 0.0);
  for (int i = 0; i < cfg.d; ++i) {
    cp.lm.omega[static_cast<size_t>(i)] =
        std::pow(10.0, -4.0 * static_cast<double>(i) / static_cast<double>(cfg.d));
  }

  cp.fourier.dim = df;
  cp.fourier.k_max = cfg.k_max;
  cp.fourier.diagonal_only = !cfg.dense_fourier;
  const size_t fw = static_cast<size_t>(df) * static_cast<size_t>(df) *
                    static_cast<size_t>(cfg.k_max);
  cp.fourier.w_cos.assign(fw, 0.0);
  cp.fourier.w_sin.assign(fw, 0.0);
  cp.fourier.bias.assign(static_cast<size_t>(df), 0.0);
  if (df > 0) {
    const double std_w = 1.0 / std::sqrt(static_cast<double>(df) * static_cast<double>(cfg.k_max));
    for (int j = 0; j < df; ++j) {
      for (int i = 0; i < df; ++i) {
        const bool active = cfg.dense_fourier || i == j;
        for (int m = 0; m < cfg.k_max; ++m) {
          const size_t idx = cp.fourier.widx(j, i, m);
          cp.fourier.w_cos[idx] = active ? rng.normal(0.0, std_w) : 0.0;
          cp.fourier.w_sin[idx] = active ? rng.normal(0.0, std_w) : 0.0;
        }
      }
    }
  }

  cp.spline.dim = ds;
  cp.spline.kv = make_uniform_knots(cfg.span_lo, cfg.span_hi, cfg.grid_size, cfg.degree);
  cp.spline.coeffs.resize(static_cast<size_t>(ds) * static_cast<size_t>(cfg.grid_size));
  for (auto& c : cp.spline.coeffs) c = rng.normal(0.0, 0.1);
  cp.spline.base_weight.assign(static_cast<size_t>(ds), 1.0);

  cp.scale.assign(static_cast<size_t>(cfg.d), 1.0);
  return cp;
}

namespace {

void block_forward(const CombinedEncoderParams& cp, std::span<const double> x,
                   std::span<double> u) {
  const int df = cp.d_fourier();
  const int ds = cp.d_spline();
  if (df > 0) {
    fourier_forward(cp.fourier, x.subspan(0, static_cast<size_t>(df)),
                    u.subspan(0, static_cast<size_t>(df)));
  }
  if (ds > 0) {
    spline_forward(cp.spline, x.subspan(static_cast<size_t>(df)),
                   u.subspan(static_cast<size_t>(df)));
  }
}

}  // namespace

void encode(const CombinedEncoderParams& cp, double t, std::span<double> out) {
  const size_t d = static_cast<size_t>(cp.d);
  std::vector<double> x(d), u(d);
  linear_map(t, cp.lm, x);
  block_forward(cp, x, u);
  if (cp.raw_output) {
    std::copy(u.begin(), u.end(), out.begin());
    return;
  }
  layer_norm(u, cp.ln_eps, out);
  for (size_t i = 0; i < d; ++i) out[i] *= cp.scale[i];
}

void encode_backward(const CombinedEncoderParams& cp, double t,
                     std::span<const double> upstream, CombinedGrads& grads) {
  if (upstream.size() != static_cast<size_t>(cp.d)) {
    throw std::invalid_argument("encode_backward: upstream length does not match encoder dim");
  }
  const size_t d = static_cast<size_t>(cp.d);
  std::vector<double> x(d), u(d);
  linear_map(t, cp.lm, x);
  block_forward(cp, x, u);

  std::vector<double> gu(d);
  if (cp.raw_output) {
    std::copy(upstream.begin(), upstream.end(), gu.begin());
  } else {
    // Recompute LayerNorm statistics for the backward pass.
    double mean = 0.0;
    for (size_t i = 0; i < d; ++i) mean += u[i];
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (size_t i = 0; i < d; ++i) {
      const double c = u[i] - mean;
      var += c * c;
    }
    var /= static_cast<double>(d);
    const double inv_std = 1.0 / std::sqrt(var + cp.ln_eps);
    std::vector<double> xh(d), gxh(d);
    for (size_t i = 0; i < d; ++i) xh[i] = (u[i] - mean) * inv_std;
    for (size_t i = 0; i < d; ++i) {
      grads.scale[i] += upstream[i] * xh[i];
      gxh[i] = upstream[i] * cp.scale[i];
    }
    layer_norm_backward(gxh, xh, inv_std, gu);
  }

  std::vector<double> gx(d, 0.0);
  const int df = cp.d_fourier();
  const int ds = cp.d_spline();
  if (df > 0) {
    fourier_backward(cp.fourier, std::span<const double>(x.data(), static_cast<size_t>(df)),
                     std::span<const double>(gu.data(), static_cast<size_t>(df)), grads.fourier,
                     std::span<double>(gx.data(), static_cast<size_t>(df)));
  }
  if (ds > 0) {
    spline_backward(cp.spline,
                    std::span<const double>(x.data() + df, static_cast<size_t>(ds)),
                    std::span<const double>(gu.data() + df, static_cast<size_t>(ds)), grads.spline,
                    std::span<double>(gx.data() + df, static_cast<size_t>(ds)));
  }
  for (size_t i = 0; i < d; ++i) {
    grads.omega[i] += gx[i] * t;
    grads.phi[i] += gx[i];
  }
}

std::vector<ParamSlot> CombinedEncoder::params() {
  std::vector<ParamSlot> slots;
  if (train_lm_) {
    slots.push_back({"lm.omega", &p_.lm.omega, &g_.omega});
    slots.push_back({"lm.phi", &p_.lm.phi, &g_.phi});
  }
  if (p_.d_fourier() > 0) {
    slots.push_back({"fourier.w_cos", &p_.fourier.w_cos, &g_.fourier.w_cos});
    slots.push_back({"fourier.w_sin", &p_.fourier.w_sin, &g_.fourier.w_sin});
    slots.push_back({"fourier.bias", &p_.fourier.bias, &g_.fourier.bias});
  }
  if (p_.d_spline() > 0) {
    slots.push_back({"spline.coeffs", &p_.spline.coeffs, &g_.spline.coeffs});
    slots.push_back({"spline.base_weight", &p_.spline.base_weight, &g_.spline.base_weight});
    if (p_.spline.dense_enabled()) {
      slots.push_back({"spline.dense_mix", &p_.spline.dense_mix, &g_.spline.dense_mix});
    }
  }
  if (!p_.raw_output) {
    slots.push_back({"scale", &p_.scale, &g_.scale});
  }
  return slots;
}

}  // namespace lete
