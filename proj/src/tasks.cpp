#include "lete/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace lete {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Render "c1*s1 +/- c2*s2 ..." with the sign folded into the separator and
/// coefficients printed to full round-trip precision. Zero-coefficient terms
/// are expected to be filtered out by the caller; an empty list prints "0".
std::string join_terms(const std::vector<std::pair<double, std::string>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [c, suffix] : terms) {
    const bool neg = std::signbit(c);
    const std::string mag = fmt17(std::abs(c));
    if (first) {
      out += (neg ? "-" : "") + mag + suffix;
      first = false;
    } else {
      out += (neg ? " - " : " + ") + mag + suffix;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Targets
// ---------------------------------------------------------------------------

TargetFunction default_target(TargetKind kind) {
  TargetFunction tf;
  tf.kind = kind;
  if (kind == TargetKind::Softplus || kind == TargetKind::Swish) {
    tf.lo = -4.0;
    tf.hi = 4.0;
  } else {
    tf.lo = -2.0 * std::numbers::pi;
    tf.hi = 2.0 * std::numbers::pi;
  }
  tf.n = 200;
  return tf;
}

double eval_target(TargetKind kind, double x) {
  switch (kind) {
    case TargetKind::Sin:
      return std::sin(x);
    case TargetKind::ModulatedSin:
      return (1.0 + std::sin(x)) * std::sin(2.0 * x);
    case TargetKind::Softplus:
      return std::log1p(std::exp(x));
    case TargetKind::Swish:
      return x / (1.0 + std::exp(-x));
  }
  throw std::invalid_argument("eval_target: unknown target kind");
}

TargetKind target_from_name(const std::string& name) {
  if (name == "sin") return TargetKind::Sin;
  if (name == "modsin") return TargetKind::ModulatedSin;
  if (name == "softplus") return TargetKind::Softplus;
  if (name == "swish") return TargetKind::Swish;
  throw std::invalid_argument("unknown target '" + name +
                              "' (expected sin, modsin, softplus, or swish)");
}

std::string target_name(TargetKind kind) {
  switch (kind) {
    case TargetKind::Sin:
      return "sin";
    case TargetKind::ModulatedSin:
      return "modsin";
    case TargetKind::Softplus:
      return "softplus";
    case TargetKind::Swish:
      return "swish";
  }
  return "?";
}

Dataset gen_target(const TargetFunction& tf) {
  if (!(tf.lo < tf.hi)) throw std::invalid_argument("gen_target: need lo < hi");
  if (tf.n < 16) throw std::invalid_argument("gen_target: need at least 16 samples");
  Dataset ds;
  ds.x.resize(static_cast<size_t>(tf.n));
  ds.y.resize(static_cast<size_t>(tf.n));
  for (int i = 0; i < tf.n; ++i) {
    const double x =
        tf.lo + (tf.hi - tf.lo) * static_cast<double>(i) / static_cast<double>(tf.n - 1);
    ds.x[static_cast<size_t>(i)] = x;
    ds.y[static_cast<size_t>(i)] = eval_target(tf.kind, x);
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Synthetic signals
// ---------------------------------------------------------------------------

namespace {

struct PeriodicDraw {
  std::vector<int> freqs;  // even integer cycle counts: 2m
  std::vector<double> amp, phase;
};

// Sub-stream 1 of the seed. Frequencies are even integers, so every signal
// repeats with period 1/2 of the unit interval.
PeriodicDraw draw_periodic(std::uint64_t seed) {
  Rng rng(seed, 1);
  const int ncomp = static_cast<int>(rng.uniform_int(2, 3));
  int pool[3] = {1, 2, 3};
  for (int i = 2; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_int(0, i));
    std::swap(pool[i], pool[j]);
  }
  PeriodicDraw d;
  for (int k = 0; k < ncomp; ++k) d.freqs.push_back(2 * pool[k]);
  std::sort(d.freqs.begin(), d.freqs.end());
  for (int k = 0; k < ncomp; ++k) {
    d.amp.push_back(rng.uniform(0.5, 1.2));
    d.phase.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
  }
  return d;
}

double eval_periodic(const PeriodicDraw& d, double t) {
  double v = 0.0;
  for (size_t k = 0; k < d.freqs.size(); ++k) {
    v += d.amp[k] * std::sin(2.0 * std::numbers::pi * d.freqs[k] * t + d.phase[k]);
  }
  return v;
}

std::string spec_periodic(const PeriodicDraw& d) {
  std::string s = "periodic(t) =";
  for (size_t k = 0; k < d.freqs.size(); ++k) {
    if (k > 0) s += " +";
    s += " " + fmt17(d.amp[k]) + "*sin(2*pi*" + std::to_string(d.freqs[k]) + "*t + " +
         fmt17(d.phase[k]) + ")";
  }
  return s;
}

struct NonPeriodicDraw {
  double t0, c1, c2, c3;       // cubic drift around t0
  double amp, center, width, burst_freq;  // Gabor packet
};

// Sub-stream 2 of the seed. The packet frequency sits above the harmonic
// comb a periodic-oriented baseline can represent.
NonPeriodicDraw draw_nonperiodic(std::uint64_t seed) {
  Rng rng(seed, 2);
  NonPeriodicDraw d;
  d.t0 = rng.uniform(0.3, 0.7);
  d.c1 = rng.uniform(-3.0, 3.0);
  d.c2 = rng.uniform(-3.0, 3.0);
  d.c3 = rng.uniform(-3.0, 3.0);
  const double mag = rng.uniform(0.8, 1.5);
  d.amp = rng.uniform() < 0.5 ? -mag : mag;
  d.center = rng.uniform(0.25, 0.75);
  d.width = rng.uniform(0.06, 0.12);
  d.burst_freq = rng.uniform(8.0, 12.0);
  return d;
}

double eval_nonperiodic(const NonPeriodicDraw& d, double t) {
  const double u = t - d.t0;
  const double g = (t - d.center) / d.width;
  return d.c1 * u + d.c2 * u * u + d.c3 * u * u * u +
         d.amp * std::exp(-g * g) *
             std::cos(2.0 * std::numbers::pi * d.burst_freq * (t - d.center));
}

std::string spec_nonperiodic(const NonPeriodicDraw& d) {
  const std::string u = "(t - " + fmt17(d.t0) + ")";
  const std::string c = "(t - " + fmt17(d.center) + ")";
  return "nonperiodic(t) = " + fmt17(d.c1) + "*" + u + " + " + fmt17(d.c2) + "*" + u + "^2 + " +
         fmt17(d.c3) + "*" + u + "^3 + " + fmt17(d.amp) + "*exp(-(" + c + "/" + fmt17(d.width) +
         ")^2)*cos(2*pi*" + fmt17(d.burst_freq) + "*" + c + ")";
}

}  // namespace

SyntheticSignal gen_signal(SignalKind kind, int n, std::uint64_t seed) {
  if (n < 32) throw std::invalid_argument("gen_signal: need at least 32 samples");
  SyntheticSignal sig;
  sig.kind = kind;
  sig.t_grid.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    sig.t_grid[static_cast<size_t>(i)] = static_cast<double>(i) / static_cast<double>(n);
  }
  sig.values.resize(static_cast<size_t>(n));

  const std::string head = "seed=" + std::to_string(seed) + "; n=" + std::to_string(n) + "; ";
  switch (kind) {
    case SignalKind::Periodic: {
      const auto p = draw_periodic(seed);
      for (int i = 0; i < n; ++i) {
        sig.values[static_cast<size_t>(i)] = eval_periodic(p, sig.t_grid[static_cast<size_t>(i)]);
      }
      sig.generator_spec = head + spec_periodic(p);
      break;
    }
    case SignalKind::NonPeriodic: {
      const auto q = draw_nonperiodic(seed);
      for (int i = 0; i < n; ++i) {
        sig.values[static_cast<size_t>(i)] =
            eval_nonperiodic(q, sig.t_grid[static_cast<size_t>(i)]);
      }
      sig.generator_spec = head + spec_nonperiodic(q);
      break;
    }
    case SignalKind::Mixed: {
      const auto p = draw_periodic(seed);
      const auto q = draw_nonperiodic(seed);
      for (int i = 0; i < n; ++i) {
        const double t = sig.t_grid[static_cast<size_t>(i)];
        sig.values[static_cast<size_t>(i)] = eval_periodic(p, t) + eval_nonperiodic(q, t);
      }
      sig.generator_spec = head + "mixed(t) = periodic(t) + nonperiodic(t); " + spec_periodic(p) +
                           "; " + spec_nonperiodic(q);
      break;
    }
  }
  return sig;
}

SignalKind signal_from_name(const std::string& name) {
  if (name == "periodic") return SignalKind::Periodic;
  if (name == "nonperiodic") return SignalKind::NonPeriodic;
  if (name == "mixed") return SignalKind::Mixed;
  throw std::invalid_argument("unknown signal kind '" + name +
                              "' (expected periodic, nonperiodic, or mixed)");
}

std::string signal_name(SignalKind kind) {
  switch (kind) {
    case SignalKind::Periodic:
      return "periodic";
    case SignalKind::NonPeriodic:
      return "nonperiodic";
    case SignalKind::Mixed:
      return "mixed";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

FitEncoderKind fit_encoder_from_name(const std::string& name) {
  if (name == "fte") return FitEncoderKind::FTE;
  if (name == "fourier") return FitEncoderKind::FourierLeTE;
  if (name == "spline") return FitEncoderKind::SplineLeTE;
  throw std::invalid_argument("unknown fit encoder '" + name +
                              "' (expected fte, fourier, or spline)");
}

ReconEncoderKind recon_encoder_from_name(const std::string& name) {
  if (name == "fte") return ReconEncoderKind::FTE;
  if (name == "combined") return ReconEncoderKind::CombinedLeTE;
  throw std::invalid_argument("unknown reconstruction encoder '" + name +
                              "' (expected fte or combined)");
}

namespace {

/// Closed-form least-squares MSE over the feature family spanned by the
/// encoder's trainable output coefficients when the linear map is frozen at
/// its initial value (identity: x = t).
double fit_oracle_mse(FitEncoderKind kind, const TargetFunction& tf, const Dataset& data) {
  std::vector<std::vector<double>> rows(data.x.size());
  switch (kind) {
    case FitEncoderKind::FourierLeTE:
      for (size_t r = 0; r < data.x.size(); ++r) {
        auto& row = rows[r];
        for (int m = 1; m <= 5; ++m) {
          row.push_back(std::cos(m * data.x[r]));
          row.push_back(std::sin(m * data.x[r]));
        }
        row.push_back(1.0);
      }
      break;
    case FitEncoderKind::SplineLeTE: {
      // No constant column here: the basis functions sum to one on the
      // interior span (partition of unity), so adding it would make the
      // design exactly rank-deficient without enlarging the span.
      const auto kv = make_uniform_knots(tf.lo, tf.hi, 16, 3);
      for (size_t r = 0; r < data.x.size(); ++r) {
        const auto basis = basis_eval(kv, data.x[r]);
        auto& row = rows[r];
        row = basis.values;
        row.push_back(std::tanh(data.x[r]));
      }
      break;
    }
    case FitEncoderKind::FTE:
      for (size_t r = 0; r < data.x.size(); ++r) {
        rows[r] = {std::sin(data.x[r]), 1.0};
      }
      break;
  }
  return least_squares_mse(rows, data.y);
}

FitReport finish_report(FitProblem& problem, const TrainReport& tr, std::string encoder_kind,
                        std::span<const double> x) {
  FitReport rep;
  rep.encoder_kind = std::move(encoder_kind);
  rep.final_mse = tr.final_loss;
  rep.loss_curve = tr.loss_curve;
  rep.wall_time_s = tr.wall_time_s;
  rep.seed = tr.seed;
  const auto pred = problem.predictions();
  rep.curve_samples.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    rep.curve_samples[i] = {x[i], problem.y()[i], pred[i]};
  }
  return rep;
}

}  // namespace

FitReport run_fit(FitEncoderKind kind, const TargetFunction& tf, const TaskConfig& cfg,
                  CombinedEncoderParams* trained_combined, BaselineParams* trained_baseline) {
  const Dataset data = gen_target(tf);
  if (cfg.p_override > 1.0) {
    throw std::invalid_argument("run_fit: p override must lie in [0, 1]");
  }
  Rng rng(cfg.seed);

  std::unique_ptr<Encoder> enc;
  CombinedEncoder* as_combined = nullptr;
  BaselineEncoder* as_baseline = nullptr;
  std::string name;
  switch (kind) {
    case FitEncoderKind::FourierLeTE: {
      CombinedConfig cc;
      cc.d = 1;
      cc.p = cfg.p_override >= 0.0 ? cfg.p_override : 1.0;
      cc.k_max = 5;
      cc.raw_output = true;  // LayerNorm of a 1-vector is identically zero
      auto owned = std::make_unique<CombinedEncoder>(make_combined(cc, rng));
      as_combined = owned.get();
      enc = std::move(owned);
      name = "fourier";
      break;
    }
    case FitEncoderKind::SplineLeTE: {
      CombinedConfig cc;
      cc.d = 1;
      cc.p = cfg.p_override >= 0.0 ? cfg.p_override : 0.0;
      cc.degree = 3;
      cc.grid_size = 16;  // resolves the targets over their full sample range
      cc.span_lo = tf.lo;
      cc.span_hi = tf.hi;
      cc.raw_output = true;
      auto owned = std::make_unique<CombinedEncoder>(make_combined(cc, rng));
      as_combined = owned.get();
      enc = std::move(owned);
      name = "spline";
      break;
    }
    case FitEncoderKind::FTE: {
      BaselineParams bp;
      bp.kind = BaselineKind::UnifiedSin;
      bp.omega = {1.0};
      bp.phi = {0.0};
      auto owned = std::make_unique<BaselineEncoder>(bp);
      as_baseline = owned.get();
      enc = std::move(owned);
      name = "fte";
      break;
    }
  }

  LinearDecoder dec(1, rng);
  FitProblem problem(*enc, dec, data.x, data.y);
  TrainConfig tc;
  tc.steps = cfg.steps;
  tc.learning_rate = cfg.learning_rate;
  tc.seed = cfg.seed;
  const TrainReport tr = train_fit(problem, tc);

  FitReport rep = finish_report(problem, tr, name, data.x);
  // The closed-form oracle describes each recipe's stock feature family; a
  // p override changes that family, so no oracle is reported for it.
  if (kind == FitEncoderKind::FTE || cfg.p_override < 0.0) {
    rep.oracle_mse = fit_oracle_mse(kind, tf, data);
  }
  if (trained_combined && as_combined) *trained_combined = as_combined->p();
  if (trained_baseline && as_baseline) *trained_baseline = as_baseline->p();
  return rep;
}

FitReport run_reconstruction(ReconEncoderKind kind, const SyntheticSignal& signal, int d,
                             const TaskConfig& cfg, CombinedEncoderParams* trained_combined,
                             BaselineParams* trained_baseline) {
  if (d < 2) throw std::invalid_argument("run_reconstruction: need d >= 2");
  if (signal.t_grid.empty() || signal.t_grid.size() != signal.values.size()) {
    throw std::invalid_argument("run_reconstruction: malformed signal");
  }
  Rng rng(cfg.seed);

  std::unique_ptr<Encoder> enc;
  CombinedEncoder* as_combined = nullptr;
  BaselineEncoder* as_baseline = nullptr;
  std::string name;
  if (kind == ReconEncoderKind::CombinedLeTE) {
    CombinedConfig cc;
    cc.d = d;
    cc.p = 0.5;
    cc.grid_size = 32;  // resolves bursts down to ~1/8 of the signal span
    auto cp = make_combined(cc, rng);
    // Spline dims: map the unit time interval onto the knot span [-2, 2].
    for (int i = cp.d_fourier(); i < d; ++i) {
      cp.lm.omega[static_cast<size_t>(i)] = 4.0;
      cp.lm.phi[static_cast<size_t>(i)] = -2.0;
    }
    auto owned = std::make_unique<CombinedEncoder>(std::move(cp));
    as_combined = owned.get();
    enc = std::move(owned);
    name = "combined";
  } else {
    // Harmonic comb: can represent any band-limited signal of integer
    // frequency up to d exactly, a deliberately strong baseline init.
    BaselineParams bp;
    bp.kind = BaselineKind::UnifiedSin;
    for (int i = 1; i <= d; ++i) {
      bp.omega.push_back(2.0 * std::numbers::pi * static_cast<double>(i));
      bp.phi.push_back(0.0);
    }
    auto owned = std::make_unique<BaselineEncoder>(bp);
    as_baseline = owned.get();
    enc = std::move(owned);
    name = "fte";
  }

  LinearDecoder dec(d, rng);
  FitProblem problem(*enc, dec, signal.t_grid, signal.values);
  TrainConfig tc;
  tc.steps = cfg.steps;
  tc.learning_rate = cfg.learning_rate;
  tc.seed = cfg.seed;
  const TrainReport tr = train_fit(problem, tc);
  FitReport rep = finish_report(problem, tr, name, signal.t_grid);
  if (trained_combined && as_combined) *trained_combined = as_combined->p();
  if (trained_baseline && as_baseline) *trained_baseline = as_baseline->p();
  return rep;
}

std::vector<std::vector<double>> export_feature_map(const Encoder& encoder,
                                                    std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("export_feature_map: empty grid");
  for (size_t i = 1; i < t_grid.size(); ++i) {
    if (t_grid[i] < t_grid[i - 1]) {
      throw std::invalid_argument("export_feature_map: grid must be sorted ascending");
    }
  }
  std::vector<std::vector<double>> rows(t_grid.size());
  for (size_t r = 0; r < t_grid.size(); ++r) {
    rows[r].resize(static_cast<size_t>(encoder.dim()));
    encoder.encode(t_grid[r], rows[r]);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Transfer functions
// ---------------------------------------------------------------------------

TransferFunctions reconstruct_transfer_functions(const CombinedEncoderParams& cp,
                                                 std::span<const double> x_grid) {
  if (x_grid.empty()) {
    throw std::invalid_argument("reconstruct_transfer_functions: empty grid");
  }
  const int d = cp.d;
  const int df = cp.d_fourier();
  const int ds = cp.d_spline();

  TransferFunctions tf;
  tf.x_grid.assign(x_grid.begin(), x_grid.end());
  tf.curves.assign(static_cast<size_t>(d), std::vector<double>(x_grid.size()));

  // Sample the raw (pre-normalization) block outputs as functions of the
  // scalar input.
  std::vector<double> x(static_cast<size_t>(d)), u(static_cast<size_t>(d));
  for (size_t g = 0; g < x_grid.size(); ++g) {
    linear_map(x_grid[g], cp.lm, x);
    if (df > 0) {
      fourier_forward(cp.fourier, std::span<const double>(x.data(), static_cast<size_t>(df)),
                      std::span<double>(u.data(), static_cast<size_t>(df)));
    }
    if (ds > 0) {
      spline_forward(cp.spline, std::span<const double>(x.data() + df, static_cast<size_t>(ds)),
                     std::span<double>(u.data() + df, static_cast<size_t>(ds)));
    }
    for (int j = 0; j < d; ++j) tf.curves[static_cast<size_t>(j)][g] = u[static_cast<size_t>(j)];
  }

  // Coefficient listing: one line per output dim, then the linear-map
  // footers, then the basis layout needed to re-evaluate spline terms.
  std::string listing;
  for (int j = 0; j < d; ++j) {
    std::vector<std::pair<double, std::string>> terms;
    if (j < df) {
      for (int i = 0; i < df; ++i) {
        for (int m = 0; m < cp.fourier.k_max; ++m) {
          const std::string arg =
              "(" + std::to_string(m + 1) + "*x'_" + std::to_string(i) + ")";
          const double wc = cp.fourier.w_cos[cp.fourier.widx(j, i, m)];
          const double ws = cp.fourier.w_sin[cp.fourier.widx(j, i, m)];
          if (wc != 0.0) terms.emplace_back(wc, "*cos" + arg);
          if (ws != 0.0) terms.emplace_back(ws, "*sin" + arg);
        }
      }
      const double b = cp.fourier.bias[static_cast<size_t>(j)];
      if (b != 0.0) terms.emplace_back(b, "");
    } else {
      const int s = j - df;
      const auto& kv = cp.spline.kv;
      for (int bidx = 0; bidx < kv.grid_size; ++bidx) {
        const double c = cp.spline.coeffs[cp.spline.cidx(s, bidx)];
        if (c == 0.0) continue;
        const std::string support =
            " (support: [" + fmt2(kv.knots[static_cast<size_t>(bidx)]) + "," +
            fmt2(kv.knots[static_cast<size_t>(bidx + kv.degree + 1)]) + "])";
        terms.emplace_back(c, "*B_" + std::to_string(bidx) + "(x'_" + std::to_string(j) + ")" +
                                  support);
      }
      if (cp.spline.dense_enabled()) {
        for (int i = 0; i < ds; ++i) {
          for (int m = 0; m < kv.grid_size; ++m) {
            const double c = cp.spline.dense_mix[cp.spline.midx(s, i, m)];
            if (c == 0.0) continue;
            terms.emplace_back(c, "*B_" + std::to_string(m) + "(x'_" +
                                      std::to_string(df + i) + ")");
          }
        }
      }
      const double bw = cp.spline.base_weight[static_cast<size_t>(s)];
      if (bw != 0.0) terms.emplace_back(bw, "*Tanh(x'_" + std::to_string(j) + ")");
    }
    listing += "f_" + std::to_string(j) + "(x) = " + join_terms(terms) + "\n";
  }
  for (int i = 0; i < d; ++i) {
    std::vector<std::pair<double, std::string>> terms;
    if (cp.lm.omega[static_cast<size_t>(i)] != 0.0) {
      terms.emplace_back(cp.lm.omega[static_cast<size_t>(i)], "*x");
    }
    if (cp.lm.phi[static_cast<size_t>(i)] != 0.0) {
      terms.emplace_back(cp.lm.phi[static_cast<size_t>(i)], "");
    }
    listing += "x'_" + std::to_string(i) + " = " + join_terms(terms) + "\n";
  }
  if (ds > 0) {
    listing += "basis: degree " + std::to_string(cp.spline.kv.degree) + ", grid " +
               std::to_string(cp.spline.kv.grid_size) + ", span [" +
               fmt17(cp.spline.kv.lo()) + ", " + fmt17(cp.spline.kv.hi()) + "]\n";
  }
  tf.listing = std::move(listing);
  return tf;
}

// ---------------------------------------------------------------------------
// Normal equations
// ---------------------------------------------------------------------------

std::vector<double> solve_normal_equations(const std::vector<std::vector<double>>& rows,
                                           const std::vector<double>& y) {
  const size_t m = rows.size();
  if (m == 0 || y.size() != m) throw std::invalid_argument("solve_normal_equations: bad shapes");
  const size_t k = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != k) throw std::invalid_argument("solve_normal_equations: ragged matrix");
  }

  // G = A^T A, b = A^T y.
  std::vector<std::vector<double>> g(k, std::vector<double>(k, 0.0));
  std::vector<double> b(k, 0.0);
  for (size_t r = 0; r < m; ++r) {
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = i; j < k; ++j) g[i][j] += rows[r][i] * rows[r][j];
      b[i] += rows[r][i] * y[r];
    }
  }
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < i; ++j) g[i][j] = g[j][i];
  }

  // Cholesky G = L L^T.
  std::vector<std::vector<double>> l(k, std::vector<double>(k, 0.0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j <= i; ++j) {
      double s = g[i][j];
      for (size_t q = 0; q < j; ++q) s -= l[i][q] * l[j][q];
      if (i == j) {
        if (!(s > 0.0)) {
          throw std::runtime_error("solve_normal_equations: matrix not positive definite "
                                   "(rank-deficient design)");
        }
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }

  // Solve L z = b, then L^T c = z.
  std::vector<double> z(k, 0.0);
  for (size_t i = 0; i < k; ++i) {
    double s = b[i];
    for (size_t q = 0; q < i; ++q) s -= l[i][q] * z[q];
    z[i] = s / l[i][i];
  }
  std::vector<double> c(k, 0.0);
  for (size_t i = k; i-- > 0;) {
    double s = z[i];
    for (size_t q = i + 1; q < k; ++q) s -= l[q][i] * c[q];
    c[i] = s / l[i][i];
  }
  return c;
}

double least_squares_mse(const std::vector<std::vector<double>>& rows,
                         const std::vector<double>& y) {
  const auto c = solve_normal_equations(rows, y);
  double sse = 0.0;
  for (size_t r = 0; r < rows.size(); ++r) {
    double pred = 0.0;
    for (size_t j = 0; j < c.size(); ++j) pred += rows[r][j] * c[j];
    const double res = pred - y[r];
    sse += res * res;
  }
  return sse / static_cast<double>(rows.size());
}

}  // namespace lete
