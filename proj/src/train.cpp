#include "lete/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace lete {

std::pair<double, std::vector<double>> mse_loss(std::span<const double> pred,
                                                std::span<const double> target) {
  if (pred.empty() || pred.size() != target.size()) {
    throw std::invalid_argument("mse_loss: inputs must be non-empty and equal-length");
  }
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  double loss = 0.0;
  std::vector<double> grad(pred.size());
  for (size_t i = 0; i < pred.size(); ++i) {
    const double r = pred[i] - target[i];
    loss += r * r;
    grad[i] = 2.0 * r * inv_n;
  }
  return {loss * inv_n, std::move(grad)};
}

LinearDecoder::LinearDecoder(int in_dim, Rng& rng) {
  if (in_dim < 1) throw std::invalid_argument("LinearDecoder: in_dim must be >= 1");
  w_.resize(static_cast<size_t>(in_dim));
  for (auto& w : w_) w = rng.normal(0.0, 0.01);
  b_.assign(1, 0.0);
  wg_.assign(w_.size(), 0.0);
  bg_.assign(1, 0.0);
}

double LinearDecoder::forward(std::span<const double> x) const {
  if (x.size() != w_.size()) {
    throw std::invalid_argument("LinearDecoder::forward: input length mismatch");
  }
  double y = b_[0];
  for (size_t i = 0; i < w_.size(); ++i) y += w_[i] * x[i];
  return y;
}

void LinearDecoder::backward(std::span<const double> x, double upstream,
                             std::span<double> x_grad) {
  if (x.size() != w_.size() || x_grad.size() != w_.size()) {
    throw std::invalid_argument("LinearDecoder::backward: length mismatch");
  }
  bg_[0] += upstream;
  for (size_t i = 0; i < w_.size(); ++i) {
    wg_[i] += upstream * x[i];
    x_grad[i] += upstream * w_[i];
  }
}

std::vector<ParamSlot> LinearDecoder::params() {
  return {{"decoder.weight", &w_, &wg_}, {"decoder.bias", &b_, &bg_}};
}

void LinearDecoder::zero_grads() {
  std::fill(wg_.begin(), wg_.end(), 0.0);
  std::fill(bg_.begin(), bg_.end(), 0.0);
}

FitProblem::FitProblem(Encoder& encoder, LinearDecoder& decoder, std::vector<double> t,
                       std::vector<double> y)
    : enc_(encoder), dec_(decoder), t_(std::move(t)), y_(std::move(y)) {
  if (t_.empty() || t_.size() != y_.size()) {
    throw std::invalid_argument("FitProblem: t and y must be non-empty and equal-length");
  }
  if (dec_.in_dim() != enc_.dim()) {
    throw std::invalid_argument("FitProblem: decoder input dim must match encoder dim");
  }
}

std::vector<double> FitProblem::predictions() const {
  std::vector<double> pred(t_.size());
  std::vector<double> feat(static_cast<size_t>(enc_.dim()));
  for (size_t i = 0; i < t_.size(); ++i) {
    enc_.encode(t_[i], feat);
    pred[i] = dec_.forward(feat);
  }
  return pred;
}

double FitProblem::loss() const {
  const auto pred = predictions();
  return mse_loss(pred, y_).first;
}

double FitProblem::loss_and_grads() {
  zero_grads();
  const auto pred = predictions();
  auto [loss, g] = mse_loss(pred, y_);
  std::vector<double> feat(static_cast<size_t>(enc_.dim()));
  std::vector<double> x_grad(static_cast<size_t>(enc_.dim()));
  for (size_t i = 0; i < t_.size(); ++i) {
    enc_.encode(t_[i], feat);
    std::fill(x_grad.begin(), x_grad.end(), 0.0);
    dec_.backward(feat, g[i], x_grad);
    enc_.backward(t_[i], x_grad);
  }
  return loss;
}

std::vector<ParamSlot> FitProblem::params() {
  auto slots = enc_.params();
  for (auto& s : dec_.params()) slots.push_back(s);
  return slots;
}

void FitProblem::zero_grads() {
  enc_.zero_grads();
  dec_.zero_grads();
}

double grad_check(FitProblem& problem, double h, std::string* worst_path) {
  if (!(h >= 1e-7 && h <= 1e-3)) {
    throw std::invalid_argument("grad_check: h must lie in [1e-7, 1e-3]");
  }
  problem.loss_and_grads();
  auto slots = problem.params();
  // Snapshot the analytic gradients before the probing evaluations clobber
  // the grad buffers.
  std::vector<std::vector<double>> analytic;
  analytic.reserve(slots.size());
  for (const auto& s : slots) analytic.push_back(*s.grad);

  double worst = 0.0;
  for (size_t si = 0; si < slots.size(); ++si) {
    auto& value = *slots[si].value;
    for (size_t i = 0; i < value.size(); ++i) {
      const double saved = value[i];
      value[i] = saved + h;
      const double lp = problem.loss();
      value[i] = saved - h;
      const double lm = problem.loss();
      value[i] = saved;
      const double numeric = (lp - lm) / (2.0 * h);
      const double a = analytic[si][i];
      const double err = std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
      if (err > worst) {
        worst = err;
        if (worst_path) {
          *worst_path = slots[si].name + "[" + std::to_string(i) + "]";
        }
      }
    }
  }
  return worst;
}

AdamState AdamState::for_params(const std::vector<ParamSlot>& slots) {
  AdamState st;
  st.m.reserve(slots.size());
  st.v.reserve(slots.size());
  for (const auto& s : slots) {
    st.m.emplace_back(s.value->size(), 0.0);
    st.v.emplace_back(s.value->size(), 0.0);
  }
  return st;
}

namespace {

void check_grad_finite(const ParamSlot& slot) {
  const auto& g = *slot.grad;
  for (size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) {
      throw std::runtime_error("optimizer: non-finite gradient in '" + slot.name + "' at index " +
                               std::to_string(i));
    }
  }
}

}  // namespace

void adam_step(std::vector<ParamSlot>& slots, AdamState& state, const TrainConfig& cfg) {
  if (state.m.size() != slots.size()) {
    throw std::invalid_argument("adam_step: state does not match parameter slots");
  }
  for (const auto& s : slots) check_grad_finite(s);
  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (size_t si = 0; si < slots.size(); ++si) {
    auto& value = *slots[si].value;
    const auto& grad = *slots[si].grad;
    auto& m = state.m[si];
    auto& v = state.v[si];
    if (m.size() != value.size()) {
      throw std::invalid_argument("adam_step: moment buffer shape mismatch for '" +
                                  slots[si].name + "'");
    }
    for (size_t i = 0; i < value.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      const double mh = m[i] / bc1;
      const double vh = v[i] / bc2;
      value[i] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.eps);
    }
  }
}

void sgd_step(std::vector<ParamSlot>& slots, const TrainConfig& cfg) {
  for (const auto& s : slots) check_grad_finite(s);
  for (auto& s : slots) {
    auto& value = *s.value;
    const auto& grad = *s.grad;
    for (size_t i = 0; i < value.size(); ++i) value[i] -= cfg.learning_rate * grad[i];
  }
}

TrainReport train_fit(FitProblem& problem, const TrainConfig& cfg) {
  if (cfg.steps < 0) throw std::invalid_argument("train_fit: steps must be >= 0");
  if (!(cfg.learning_rate > 0.0)) {
    throw std::invalid_argument("train_fit: learning_rate must be positive");
  }
  if (!cfg.full_batch) {
    throw std::invalid_argument("train_fit: only full-batch training is supported");
  }
  const auto start = std::chrono::steady_clock::now();
  TrainReport report;
  report.seed = cfg.seed;
  report.loss_curve.reserve(static_cast<size_t>(cfg.steps));

  auto slots = problem.params();
  AdamState state = AdamState::for_params(slots);
  for (int step = 0; step < cfg.steps; ++step) {
    const double loss = problem.loss_and_grads();
    if (!std::isfinite(loss)) {
      throw std::runtime_error("train_fit: loss diverged (non-finite) at step " +
                               std::to_string(step));
    }
    report.loss_curve.push_back(loss);
    if (cfg.optimizer == OptimizerKind::Adam) {
      adam_step(slots, state, cfg);
    } else {
      sgd_step(slots, cfg);
    }
  }
  report.final_loss = problem.loss();
  if (!std::isfinite(report.final_loss)) {
    throw std::runtime_error("train_fit: loss diverged (non-finite) at step " +
                             std::to_string(cfg.steps));
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace lete
