#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lete/encoder.hpp"
#include "lete/rng.hpp"

namespace lete {

/// Mean-squared-error loss with gradient:
///   loss = (1/n) * sum_i (pred_i - target_i)^2,  grad_i = 2 (pred_i - target_i) / n.
/// Throws std::invalid_argument on empty or mismatched inputs.
std::pair<double, std::vector<double>> mse_loss(std::span<const double> pred,
                                                std::span<const double> target);

enum class OptimizerKind { SGD, Adam };

/// Full-batch training configuration. Defaults reproduce the desk-scale
/// experiments: Adam(0.9, 0.999, 1e-8), learning rate 1e-2, 5000 steps.
struct TrainConfig {
  int steps = 5000;
  double learning_rate = 1e-2;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 0;
  /// Only full-batch training is supported; passing false is rejected.
  bool full_batch = true;
};

struct TrainReport {
  std::vector<double> loss_curve;  // loss before each update; length == steps
  double final_loss = 0.0;         // loss after the last update
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
};

/// Scalar linear read-out y = w . x + b over an encoder output.
class LinearDecoder {
 public:
  /// Weights ~ N(0, 0.01), bias 0. The small weight scale keeps the initial
  /// predictions near zero so training starts from a well-conditioned basin.
  LinearDecoder(int in_dim, Rng& rng);

  int in_dim() const { return static_cast<int>(w_.size()); }
  double forward(std::span<const double> x) const;
  /// Accumulate parameter gradients for one sample and add w * g into x_grad.
  void backward(std::span<const double> x, double upstream, std::span<double> x_grad);
  std::vector<ParamSlot> params();
  void zero_grads();

  std::vector<double>& weights() { return w_; }
  std::vector<double>& bias() { return b_; }

 private:
  std::vector<double> w_, b_;    // b_ has length 1
  std::vector<double> wg_, bg_;
};

/// One regression problem: encoder + linear decoder fit against (t, y) pairs
/// under full-batch MSE.
class FitProblem {
 public:
  /// Throws std::invalid_argument on empty or mismatched data.
  FitProblem(Encoder& encoder, LinearDecoder& decoder, std::vector<double> t,
             std::vector<double> y);

  /// Zero all gradients, run the full batch forward and backward, leave
  /// gradients in the parameter slots, and return the loss.
  double loss_and_grads();
  /// Loss only; gradients untouched.
  double loss() const;
  std::vector<double> predictions() const;

  std::vector<ParamSlot> params();
  void zero_grads();

  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& y() const { return y_; }
  size_t n() const { return t_.size(); }

 private:
  Encoder& enc_;
  LinearDecoder& dec_;
  std::vector<double> t_, y_;
};

/// Central-difference gradient verification over every scalar parameter:
///   numeric = (L(theta + h) - L(theta - h)) / (2h)
///   error   = |analytic - numeric| / max(1, |analytic|, |numeric|)
/// Returns the maximum error; if worst_path is non-null it receives the
/// offending parameter as "slot[index]". Throws std::invalid_argument unless
/// h is in [1e-7, 1e-3].
double grad_check(FitProblem& problem, double h, std::string* worst_path = nullptr);

/// Per-slot Adam moment buffers.
struct AdamState {
  std::vector<std::vector<double>> m, v;
  long step = 0;

  static AdamState for_params(const std::vector<ParamSlot>& slots);
};

/// One optimizer update over the given slots. Throws std::runtime_error
/// naming the slot and index if any gradient entry is non-finite.
void adam_step(std::vector<ParamSlot>& slots, AdamState& state, const TrainConfig& cfg);
void sgd_step(std::vector<ParamSlot>& slots, const TrainConfig& cfg);

/// Full-batch training loop. Deterministic given the problem's initial state
/// and the config. steps == 0 is a no-op (empty curve, parameters untouched).
/// Throws std::invalid_argument on invalid config and std::runtime_error
/// (message includes the step index) if the loss becomes non-finite.
TrainReport train_fit(FitProblem& problem, const TrainConfig& cfg);

}  // namespace lete
