#include "lete/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lete {

namespace {

void check_params(double t, const BaselineParams& bp) {
  if (!std::isfinite(t)) throw std::invalid_argument("baseline_encode: t must be finite");
  if (bp.omega.empty()) throw std::invalid_argument("baseline_encode: empty frequency vector");
  if (bp.kind != BaselineKind::FTR && bp.phi.size() != bp.omega.size()) {
    throw std::invalid_argument("baseline_encode: omega and phi lengths differ");
  }
}

}  // namespace

void baseline_encode(double t, const BaselineParams& bp, std::span<double> out) {
  check_params(t, bp);
  if (out.size() != static_cast<size_t>(bp.dim())) {
    throw std::invalid_argument("baseline_encode: output length does not match dim");
  }
  switch (bp.kind) {
    case BaselineKind::FTR:
      for (size_t k = 0; k < bp.omega.size(); ++k) {
        const double a = bp.omega[k] * t;
        out[2 * k] = std::cos(a);
        out[2 * k + 1] = std::sin(a);
      }
      break;
    case BaselineKind::T2V:
      out[0] = bp.omega[0] * t + bp.phi[0];
      for (size_t i = 1; i < bp.omega.size(); ++i) out[i] = std::sin(bp.omega[i] * t + bp.phi[i]);
      break;
    case BaselineKind::UnifiedSin:
      for (size_t i = 0; i < bp.omega.size(); ++i) out[i] = std::sin(bp.omega[i] * t + bp.phi[i]);
      break;
  }
}

std::vector<double> baseline_encode(double t, const BaselineParams& bp) {
  std::vector<double> out(static_cast<size_t>(bp.dim()));
  baseline_encode(t, bp, out);
  return out;
}

BaselineParams unify_ftr(const BaselineParams& bp) {
  if (bp.kind != BaselineKind::FTR) {
    throw std::invalid_argument("unify_ftr: expected an FTR parameter set");
  }
  BaselineParams u;
  u.kind = BaselineKind::UnifiedSin;
  u.omega.reserve(2 * bp.omega.size());
  u.phi.reserve(2 * bp.omega.size());
  for (const double w : bp.omega) {
    u.omega.push_back(w);
    u.omega.push_back(w);
    u.phi.push_back(std::numbers::pi / 2.0);
    u.phi.push_back(0.0);
  }
  return u;
}

CombinedEncoderParams lete_params_replicating_sin(const std::vector<double>& omega,
                                                  const std::vector<double>& phi) {
  if (omega.empty() || omega.size() != phi.size()) {
    throw std::invalid_argument(
        "lete_params_replicating_sin: omega and phi must be equal-length and non-empty");
  }
  const int d = static_cast<int>(omega.size());
  CombinedEncoderParams cp;
  cp.d = d;
  cp.p = 1.0;
  cp.raw_output = true;
  cp.lm.omega = omega;
  cp.lm.phi = phi;

  cp.fourier.dim = d;
  cp.fourier.k_max = 1;
  cp.fourier.diagonal_only = true;
  const size_t n = static_cast<size_t>(d) * static_cast<size_t>(d);
  cp.fourier.w_cos.assign(n, 0.0);
  cp.fourier.w_sin.assign(n, 0.0);
  cp.fourier.bias.assign(static_cast<size_t>(d), 0.0);
  for (int j = 0; j < d; ++j) cp.fourier.w_sin[cp.fourier.widx(j, j, 0)] = 1.0;

  cp.spline.dim = 0;
  cp.spline.kv = make_uniform_knots(-2.0, 2.0, 8, 3);
  cp.spline.base_weight.clear();
  cp.spline.coeffs.clear();

  cp.scale.assign(static_cast<size_t>(d), 1.0);
  return cp;
}

BaselineEncoder::BaselineEncoder(BaselineParams params) : p_(std::move(params)) {
  // Validate eagerly so a malformed parameter set fails at construction.
  check_params(0.0, p_);
  omega_g_.assign(p_.omega.size(), 0.0);
  phi_g_.assign(p_.phi.size(), 0.0);
}

void BaselineEncoder::backward(double t, std::span<const double> upstream) {
  if (upstream.size() != static_cast<size_t>(p_.dim())) {
    throw std::invalid_argument("BaselineEncoder::backward: upstream length mismatch");
  }
  switch (p_.kind) {
    case BaselineKind::FTR:
      for (size_t k = 0; k < p_.omega.size(); ++k) {
        const double a = p_.omega[k] * t;
        omega_g_[k] += t * (-std::sin(a) * upstream[2 * k] + std::cos(a) * upstream[2 * k + 1]);
      }
      break;
    case BaselineKind::T2V:
      omega_g_[0] += upstream[0] * t;
      phi_g_[0] += upstream[0];
      for (size_t i = 1; i < p_.omega.size(); ++i) {
        const double c = std::cos(p_.omega[i] * t + p_.phi[i]);
        omega_g_[i] += upstream[i] * c * t;
        phi_g_[i] += upstream[i] * c;
      }
      break;
    case BaselineKind::UnifiedSin:
      for (size_t i = 0; i < p_.omega.size(); ++i) {
        const double c = std::cos(p_.omega[i] * t + p_.phi[i]);
        omega_g_[i] += upstream[i] * c * t;
        phi_g_[i] += upstream[i] * c;
      }
      break;
  }
}

std::vector<ParamSlot> BaselineEncoder::params() {
  std::vector<ParamSlot> slots;
  slots.push_back({"omega", &p_.omega, &omega_g_});
  if (p_.kind != BaselineKind::FTR) {
    slots.push_back({"phi", &p_.phi, &phi_g_});
  }
  return slots;
}

void BaselineEncoder::zero_grads() {
  std::fill(omega_g_.begin(), omega_g_.end(), 0.0);
  std::fill(phi_g_.begin(), phi_g_.end(), 0.0);
}

}  // namespace lete
