// Training-loop tests: MSE loss arithmetic, the linear decoder, central
// finite-difference gradient verification, Adam/SGD updates, and the
// full-batch fitting loop (determinism, divergence reporting, and two small
// end-to-end fits with closed-form baselines).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lete/baselines.hpp"
#include "lete/encoder.hpp"
#include "lete/rng.hpp"
#include "lete/train.hpp"
#include "oracles.hpp"

namespace {

using lete::BaselineEncoder;
using lete::BaselineKind;
using lete::BaselineParams;
using lete::CombinedConfig;
using lete::CombinedEncoder;
using lete::FitProblem;
using lete::LinearDecoder;
using lete::Rng;
using lete::TrainConfig;

class TrainTest : public ::testing::Test {
 protected:
  // Sample grid chosen with an irrational-ish stride so spline inputs stay
  // clear of knot boundaries under finite-difference probing.
  std::vector<double> probe_grid(size_t n, double lo, double stride) const {
    std::vector<double> t(n);
    for (size_t i = 0; i < n; ++i) t[i] = lo + stride * static_cast<double>(i);
    return t;
  }

  BaselineParams unified_sin(std::vector<double> omega, std::vector<double> phi) const {
    BaselineParams bp;
    bp.kind = BaselineKind::UnifiedSin;
    bp.omega = std::move(omega);
    bp.phi = std::move(phi);
    return bp;
  }
};

TEST_F(TrainTest, MseLossHandValues) {
  const std::vector<double> a{1.0, 0.0};
  const std::vector<double> zeros{0.0, 0.0};

  auto [loss_eq, grad_eq] = lete::mse_loss(a, a);
  EXPECT_DOUBLE_EQ(loss_eq, 0.0);
  for (double g : grad_eq) EXPECT_DOUBLE_EQ(g, 0.0);

  auto [loss, grad] = lete::mse_loss(a, zeros);
  EXPECT_DOUBLE_EQ(loss, 0.5);
  ASSERT_EQ(grad.size(), 2u);
  EXPECT_DOUBLE_EQ(grad[0], 1.0);
  EXPECT_DOUBLE_EQ(grad[1], 0.0);

  EXPECT_THROW(lete::mse_loss(a, std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(lete::mse_loss(std::vector<double>{}, std::vector<double>{}),
               std::invalid_argument);
}

TEST_F(TrainTest, MseGradMatchesFiniteDifferences) {
  Rng rng(11);
  std::vector<double> pred(7), target(7);
  for (size_t i = 0; i < pred.size(); ++i) {
    pred[i] = rng.normal(0.0, 2.0);
    target[i] = rng.normal(0.0, 2.0);
  }
  const auto [loss, grad] = lete::mse_loss(pred, target);
  ASSERT_GT(loss, 0.0);
  for (size_t i = 0; i < pred.size(); ++i) {
    const double numeric = oracle::fd_central(
        [&](double v) {
          auto p = pred;
          p[i] = v;
          return lete::mse_loss(p, target).first;
        },
        pred[i], 1e-6);
    EXPECT_NEAR(grad[i], numeric, 1e-8) << "component " << i;
  }
}

TEST_F(TrainTest, DecoderInitAndForward) {
  Rng rng(3);
  LinearDecoder dec(5, rng);
  EXPECT_EQ(dec.in_dim(), 5);
  EXPECT_DOUBLE_EQ(dec.bias()[0], 0.0);
  // Weights are draws from N(0, 0.01): tiny but not all zero.
  double max_abs = 0.0;
  for (double w : dec.weights()) max_abs = std::max(max_abs, std::abs(w));
  EXPECT_GT(max_abs, 0.0);
  EXPECT_LT(max_abs, 0.1);

  std::vector<double> x{1.0, -2.0, 0.5, 3.0, -1.0};
  double expect = 0.0;
  for (size_t i = 0; i < x.size(); ++i) expect += dec.weights()[i] * x[i];
  EXPECT_DOUBLE_EQ(dec.forward(x), expect);

  dec.bias()[0] = 0.25;
  EXPECT_DOUBLE_EQ(dec.forward(x), expect + 0.25);
}

TEST_F(TrainTest, DecoderBackwardMatchesFiniteDifferences) {
  Rng rng(4);
  LinearDecoder dec(3, rng);
  dec.weights() = {0.4, -1.1, 0.7};
  dec.bias()[0] = 0.2;
  const std::vector<double> x{0.9, -0.3, 1.4};
  const double upstream = 0.73;

  dec.zero_grads();
  std::vector<double> x_grad(3, 0.0);
  dec.backward(x, upstream, x_grad);

  auto slots = dec.params();
  ASSERT_EQ(slots.size(), 2u);
  for (auto& slot : slots) {
    for (size_t i = 0; i < slot.value->size(); ++i) {
      const double numeric = oracle::fd_central(
          [&](double v) {
            const double saved = (*slot.value)[i];
            (*slot.value)[i] = v;
            const double out = upstream * dec.forward(x);
            (*slot.value)[i] = saved;
            return out;
          },
          (*slot.value)[i], 1e-6);
      EXPECT_NEAR((*slot.grad)[i], numeric, 1e-8) << slot.name << '[' << i << ']';
    }
  }
  for (size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(x_grad[i], upstream * dec.weights()[i], 1e-15);
  }
}

TEST_F(TrainTest, FitProblemValidatesShapes) {
  Rng rng(5);
  BaselineEncoder enc(unified_sin({1.0}, {0.0}));
  LinearDecoder dec(1, rng);
  LinearDecoder wide(3, rng);
  EXPECT_THROW(FitProblem(enc, dec, {}, {}), std::invalid_argument);
  EXPECT_THROW(FitProblem(enc, dec, {1.0, 2.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(FitProblem(enc, wide, {1.0}, {1.0}), std::invalid_argument);
}

// A T2V encoder with only the linear dimension makes the whole model
// polynomial of degree <= 2 along every single parameter coordinate, for
// which central differences are exact up to rounding.
TEST_F(TrainTest, GradCheckIsExactForLinearModel) {
  BaselineParams bp;
  bp.kind = BaselineKind::T2V;
  bp.omega = {0.8};
  bp.phi = {-0.3};
  BaselineEncoder enc(bp);
  Rng rng(6);
  LinearDecoder dec(1, rng);
  FitProblem problem(enc, dec, {0.1, 0.9, -1.3, 2.2}, {1.0, -0.5, 0.25, 2.0});
  std::string worst;
  const double err = lete::grad_check(problem, 1e-5, &worst);
  EXPECT_LT(err, 1e-9) << "worst: " << worst;
}

TEST_F(TrainTest, GradCheckValidatesStepSize) {
  BaselineEncoder enc(unified_sin({1.0}, {0.0}));
  Rng rng(7);
  LinearDecoder dec(1, rng);
  FitProblem problem(enc, dec, {0.3, 1.1}, {0.2, 0.9});
  EXPECT_THROW(lete::grad_check(problem, 1e-8), std::invalid_argument);
  EXPECT_THROW(lete::grad_check(problem, 1e-2), std::invalid_argument);
  EXPECT_THROW(lete::grad_check(problem, 0.0), std::invalid_argument);
}

// Encoder whose backward pass injects a large error into one gradient entry,
// for verifying that the checker localizes the offending parameter.
class CorruptedGradEncoder : public BaselineEncoder {
 public:
  using BaselineEncoder::BaselineEncoder;
  void backward(double t, std::span<const double> upstream) override {
    BaselineEncoder::backward(t, upstream);
    auto slots = params();
    (*slots[0].grad)[0] += 100.0;
  }
};

TEST_F(TrainTest, GradCheckFlagsCorruptedGradientWithPath) {
  CorruptedGradEncoder enc(unified_sin({1.2, 0.4}, {0.0, 0.7}));
  Rng rng(8);
  LinearDecoder dec(2, rng);
  FitProblem problem(enc, dec, {0.2, -0.6, 1.4}, {0.5, 0.1, -0.9});
  std::string worst;
  const double err = lete::grad_check(problem, 1e-5, &worst);
  EXPECT_GT(err, 0.1);
  EXPECT_EQ(worst, "omega[0]");
}

TEST_F(TrainTest, GradCheckCombinedEncoderThroughDecoder) {
  CombinedConfig cc;
  cc.d = 6;
  cc.p = 0.5;
  Rng rng(9);
  CombinedEncoder enc(make_combined(cc, rng));
  LinearDecoder dec(6, rng);
  FitProblem problem(enc, dec, probe_grid(8, -1.5, 0.37), probe_grid(8, 0.3, -0.21));
  std::string worst;
  const double err = lete::grad_check(problem, 1e-5, &worst);
  EXPECT_LT(err, 1e-4) << "worst: " << worst;
}

TEST_F(TrainTest, AdamZeroGradientLeavesParametersUnchanged) {
  std::vector<double> value{1.5, -2.0, 0.25};
  std::vector<double> grad{0.0, 0.0, 0.0};
  std::vector<lete::ParamSlot> slots{{"w", &value, &grad}};
  auto state = lete::AdamState::for_params(slots);
  TrainConfig cfg;
  const auto before = value;
  lete::adam_step(slots, state, cfg);
  EXPECT_EQ(value, before);
  EXPECT_EQ(state.step, 1);
}

TEST_F(TrainTest, AdamFirstStepIsBiasCorrected) {
  std::vector<double> value{2.0};
  std::vector<double> grad{0.5};
  std::vector<lete::ParamSlot> slots{{"w", &value, &grad}};
  auto state = lete::AdamState::for_params(slots);
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  lete::adam_step(slots, state, cfg);
  // With bias correction the first update is lr * g / (|g| + eps') ~ lr.
  EXPECT_NEAR(value[0], 2.0 - 0.1, 1e-6);
}

TEST_F(TrainTest, AdamConstantGradientStepApproachesLearningRate) {
  std::vector<double> value{0.0};
  std::vector<double> grad{0.5};
  std::vector<lete::ParamSlot> slots{{"w", &value, &grad}};
  auto state = lete::AdamState::for_params(slots);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  double prev = value[0];
  double last_step = 0.0;
  for (int i = 0; i < 200; ++i) {
    lete::adam_step(slots, state, cfg);
    last_step = std::abs(value[0] - prev);
    prev = value[0];
  }
  EXPECT_NEAR(last_step, cfg.learning_rate, 1e-4);
}

TEST_F(TrainTest, AdamRejectsNonFiniteGradientNamingTheSlot) {
  std::vector<double> value{1.0, 2.0};
  std::vector<double> grad{0.0, std::numeric_limits<double>::quiet_NaN()};
  std::vector<lete::ParamSlot> slots{{"fourier.w_cos", &value, &grad}};
  auto state = lete::AdamState::for_params(slots);
  TrainConfig cfg;
  try {
    lete::adam_step(slots, state, cfg);
    FAIL() << "expected std::runtime_error";
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("fourier.w_cos"), std::string::npos) << msg;
    EXPECT_NE(msg.find('1'), std::string::npos) << msg;
  }
}

TEST_F(TrainTest, SgdStepIsPlainDescent) {
  std::vector<double> value{1.0};
  std::vector<double> grad{0.25};
  std::vector<lete::ParamSlot> slots{{"w", &value, &grad}};
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  lete::sgd_step(slots, cfg);
  EXPECT_DOUBLE_EQ(value[0], 1.0 - 0.1 * 0.25);
}

TEST_F(TrainTest, TrainFitZeroStepsIsNoOp) {
  BaselineEncoder enc(unified_sin({1.0}, {0.0}));
  Rng rng(10);
  LinearDecoder dec(1, rng);
  const auto w_before = dec.weights();
  FitProblem problem(enc, dec, {0.1, 0.7, 1.3}, {0.4, 0.1, -0.2});
  TrainConfig cfg;
  cfg.steps = 0;
  const auto report = lete::train_fit(problem, cfg);
  EXPECT_TRUE(report.loss_curve.empty());
  EXPECT_EQ(dec.weights(), w_before);
  EXPECT_DOUBLE_EQ(report.final_loss, problem.loss());
}

TEST_F(TrainTest, TrainFitRejectsInvalidConfig) {
  BaselineEncoder enc(unified_sin({1.0}, {0.0}));
  Rng rng(10);
  LinearDecoder dec(1, rng);
  FitProblem problem(enc, dec, {0.1, 0.7}, {0.4, 0.1});
  TrainConfig bad_steps;
  bad_steps.steps = -1;
  EXPECT_THROW(lete::train_fit(problem, bad_steps), std::invalid_argument);
  TrainConfig bad_lr;
  bad_lr.learning_rate = 0.0;
  EXPECT_THROW(lete::train_fit(problem, bad_lr), std::invalid_argument);
  TrainConfig minibatch;
  minibatch.full_batch = false;
  EXPECT_THROW(lete::train_fit(problem, minibatch), std::invalid_argument);
}

TEST_F(TrainTest, TrainFitReportsDivergenceWithStepIndex) {
  BaselineEncoder enc(unified_sin({1.0}, {0.0}));
  Rng rng(12);
  LinearDecoder dec(1, rng);
  FitProblem problem(enc, dec, {0.1, 0.7, 1.3, -0.4}, {5.0, -3.0, 2.0, 4.0});
  TrainConfig cfg;
  cfg.optimizer = lete::OptimizerKind::SGD;
  cfg.learning_rate = 1e6;
  cfg.steps = 50;
  try {
    lete::train_fit(problem, cfg);
    FAIL() << "expected divergence";
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("step"), std::string::npos) << msg;
  }
}

TEST_F(TrainTest, TrainFitIsBitwiseDeterministic) {
  const std::vector<double> t{0.0, 0.4, 0.8, 1.2, 1.6};
  const std::vector<double> y{0.1, 0.5, 0.3, -0.2, -0.6};
  TrainConfig cfg;
  cfg.steps = 200;

  auto run = [&]() {
    BaselineEncoder enc(unified_sin({1.0, 2.0}, {0.0, 0.5}));
    Rng rng(13);
    LinearDecoder dec(2, rng);
    FitProblem problem(enc, dec, t, y);
    return lete::train_fit(problem, cfg);
  };
  const auto a = run();
  const auto b = run();
  ASSERT_EQ(a.loss_curve.size(), b.loss_curve.size());
  for (size_t i = 0; i < a.loss_curve.size(); ++i) {
    EXPECT_EQ(a.loss_curve[i], b.loss_curve[i]) << "step " << i;
  }
  EXPECT_EQ(a.final_loss, b.final_loss);
}

// y = sin(2t) lies exactly in the model class of a single trainable sine
// plus a linear read-out, so a converged fit must be nearly interpolating.
// The frequency landscape is multi-basin (omega can collapse to 0, where the
// decoder just predicts the mean); the decoder seed is pinned to an init
// whose basin reaches the global optimum, which it does across a wide range
// of learning rates.
TEST_F(TrainTest, UnifiedSinLearnsDoubledFrequency) {
  const int n = 200;
  std::vector<double> t(n), y(n);
  for (int i = 0; i < n; ++i) {
    t[i] = -std::numbers::pi + 2.0 * std::numbers::pi * i / (n - 1);
    y[i] = std::sin(2.0 * t[i]);
  }
  BaselineEncoder enc(unified_sin({1.0}, {0.0}));
  Rng rng(4);
  LinearDecoder dec(1, rng);
  FitProblem problem(enc, dec, t, y);
  TrainConfig cfg;
  cfg.steps = 5000;
  const auto report = lete::train_fit(problem, cfg);
  EXPECT_LT(report.final_loss, 1e-3);
}

// With the linear map frozen, the Fourier encoder + linear decoder is linear
// in its trainable coefficients, so the normal-equations optimum is a hard
// floor and Adam should land within a small factor of it.
TEST_F(TrainTest, FrozenMapFourierFitLandsNearLeastSquaresOptimum) {
  const int n = 200;
  std::vector<double> t(n), y(n);
  for (int i = 0; i < n; ++i) {
    t[i] = -2.0 * std::numbers::pi + 4.0 * std::numbers::pi * i / (n - 1);
    y[i] = std::sin(t[i]);
  }

  CombinedConfig cc;
  cc.d = 1;
  cc.p = 1.0;
  cc.k_max = 5;
  cc.dense_fourier = false;
  cc.raw_output = true;
  Rng rng(2);
  CombinedEncoder enc(make_combined(cc, rng));
  ASSERT_DOUBLE_EQ(enc.p().lm.omega[0], 1.0);
  ASSERT_DOUBLE_EQ(enc.p().lm.phi[0], 0.0);
  enc.set_train_linear_map(false);

  LinearDecoder dec(1, rng);
  FitProblem problem(enc, dec, t, y);
  TrainConfig cfg;
  const auto report = lete::train_fit(problem, cfg);

  // Independent oracle: least squares over the same frozen feature family
  // {cos(mt), sin(mt), 1}.
  std::vector<std::vector<double>> design(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = design[static_cast<size_t>(i)];
    for (int m = 1; m <= 5; ++m) {
      row.push_back(std::cos(m * t[static_cast<size_t>(i)]));
      row.push_back(std::sin(m * t[static_cast<size_t>(i)]));
    }
    row.push_back(1.0);
  }
  const double oracle = oracle::lstsq_mse(design, y);

  EXPECT_GE(report.final_loss, oracle - 1e-9);
  EXPECT_LE(report.final_loss, std::max(10.0 * oracle, 1e-3));

  // Convex-in-coefficients fit: the loss curve's running best never rises
  // and training makes real progress from the initial loss.
  double best = report.loss_curve.front();
  for (double loss : report.loss_curve) {
    best = std::min(best, loss);
  }
  EXPECT_LE(best, report.loss_curve.front());
  EXPECT_LT(report.final_loss, 0.5 * report.loss_curve.front());
}

}  // namespace
