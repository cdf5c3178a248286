#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lete.h"

namespace {

int exit_code_for(lete_status status) {
  switch (status) {
    case LETE_OK:
      return 0;
    case LETE_INVALID_ARG:
      return 1;
    case LETE_IO_ERROR:
    case LETE_SCHEMA_ERROR:
    case LETE_VERSION_ERROR:
    case LETE_DATA_ERROR:
      return 2;
    case LETE_DIVERGED:
    case LETE_INTERNAL_ERROR:
      return 3;
  }
  return 3;
}

int fail(lete_status status) {
  std::cerr << "error (" << lete_status_name(status) << "): " << lete_last_error() << '\n';
  return exit_code_for(status);
}

struct CommonFlags {
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonFlags& c) {
  cmd->add_option("--output-dir", c.output_dir, "Directory for report files")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--format", c.format, "Table format (csv | json | svg)")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->capture_default_str();
}

struct EncoderFlags {
  std::string kind = "combined";
  int dim = 8;
  double p = 0.5;
  int k_max = 5;
  int degree = 3;
  int grid_size = 8;
  double span_lo = -2.0;
  double span_hi = 2.0;
  bool diagonal = false;
  bool raw = false;
};

void add_encoder_flags(CLI::App* cmd, EncoderFlags& ef) {
  cmd->add_option("--encoder", ef.kind, "Encoder kind (combined | ftr | t2v | sin)")
      ->check(CLI::IsMember({"combined", "ftr", "t2v", "sin"}))
      ->capture_default_str();
  cmd->add_option("--dim", ef.dim, "Encoding dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--p", ef.p, "Fraction of dims given to the Fourier block")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--k-max", ef.k_max, "Harmonics per Fourier input dim")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--degree", ef.degree, "Spline degree")
      ->check(CLI::Range(0, 8))
      ->capture_default_str();
  cmd->add_option("--grid-size", ef.grid_size, "Spline basis count per dim")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--span-lo", ef.span_lo, "Spline knot span, lower edge")
      ->capture_default_str();
  cmd->add_option("--span-hi", ef.span_hi, "Spline knot span, upper edge")
      ->capture_default_str();
  cmd->add_flag("--diagonal", ef.diagonal,
                "Each Fourier output sees only its own input dim");
  cmd->add_flag("--raw", ef.raw, "Skip LayerNorm and the per-dim scale");
}

lete_encoder_config to_config(const EncoderFlags& ef, std::uint64_t seed) {
  lete_encoder_config cfg;
  lete_encoder_config_init(&cfg);
  if (ef.kind == "combined") {
    cfg.kind = LETE_ENCODER_COMBINED;
  } else if (ef.kind == "ftr") {
    cfg.kind = LETE_ENCODER_FTR;
  } else if (ef.kind == "t2v") {
    cfg.kind = LETE_ENCODER_T2V;
  } else {
    cfg.kind = LETE_ENCODER_UNIFIED_SIN;
  }
  cfg.d = ef.dim;
  cfg.p = ef.p;
  cfg.k_max = ef.k_max;
  cfg.degree = ef.degree;
  cfg.grid_size = ef.grid_size;
  cfg.span_lo = ef.span_lo;
  cfg.span_hi = ef.span_hi;
  cfg.dense_fourier = ef.diagonal ? 0 : 1;
  cfg.raw_output = ef.raw ? 1 : 0;
  cfg.seed = seed;
  return cfg;
}

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learnable time encodings: fitting, reconstruction, and spectral analysis"};
  app.require_subcommand(1);

  // --- fit -----------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "Fit a 1-d target function with a time encoding");
  CommonFlags fit_common;
  std::string fit_encoder, fit_target;
  int fit_dim = 1;
  int fit_steps = 5000;
  double fit_lr = 1e-2;
  double fit_p = -1.0;
  fit->add_option("--encoder", fit_encoder, "Encoder recipe (fourier | spline | fte)")
      ->required()
      ->check(CLI::IsMember({"fourier", "spline", "fte"}));
  fit->add_option("--target", fit_target, "Target function (sin | modsin | softplus | swish)")
      ->required()
      ->check(CLI::IsMember({"sin", "modsin", "softplus", "swish"}));
  fit->add_option("--dim", fit_dim, "Encoding dimension (the fitting recipes are 1-dimensional)")
      ->check(CLI::Range(1, 1))
      ->capture_default_str();
  fit->add_option("--steps", fit_steps, "Full-batch Adam steps")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fit->add_option("--learning-rate", fit_lr, "Adam learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--p", fit_p,
                  "Override the LeTE recipes' Fourier fraction, in [0,1] "
                  "(default: 1 for fourier, 0 for spline; ignored for fte)")
      ->check(CLI::Range(0.0, 1.0));
  add_common(fit, fit_common);

  // --- reconstruct -----------------------------------------------------------
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct a synthetic signal");
  CommonFlags rec_common;
  std::string rec_encoder, rec_signal;
  int rec_dim = 8;
  int rec_samples = 256;
  int rec_steps = 3000;
  double rec_lr = 1e-2;
  rec->add_option("--encoder", rec_encoder, "Encoder recipe (combined | fte)")
      ->required()
      ->check(CLI::IsMember({"combined", "fte"}));
  rec->add_option("--signal", rec_signal, "Signal kind (periodic | nonperiodic | mixed)")
      ->required()
      ->check(CLI::IsMember({"periodic", "nonperiodic", "mixed"}));
  rec->add_option("--dim", rec_dim, "Encoding dimension")
      ->check(CLI::Range(2, 4096))
      ->capture_default_str();
  rec->add_option("--samples", rec_samples, "Signal samples over the unit interval")
      ->check(CLI::Range(32, 1 << 20))
      ->capture_default_str();
  rec->add_option("--steps", rec_steps, "Full-batch Adam steps")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  rec->add_option("--learning-rate", rec_lr, "Adam learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(rec, rec_common);

  // --- entropy ---------------------------------------------------------------
  auto* ent = app.add_subcommand("entropy", "Spectral entropy of per-node event sequences");
  CommonFlags ent_common;
  std::string ent_input, ent_mode = "bins";
  int ent_min_events = 5;
  ent->add_option("--input", ent_input, "Event CSV with header node_id,timestamp")->required();
  ent->add_option("--min-events", ent_min_events,
                  "Analyze only nodes with strictly more events than this")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  ent->add_option("--mode", ent_mode, "Series fed to the FFT (times | diffs | bins)")
      ->check(CLI::IsMember({"times", "diffs", "bins"}))
      ->capture_default_str();
  add_common(ent, ent_common);

  // --- featmap ---------------------------------------------------------------
  auto* fm = app.add_subcommand("featmap", "Feature map and transfer functions of an encoder");
  CommonFlags fm_common;
  EncoderFlags fm_enc;
  std::string fm_model;
  double fm_lo = -2.0, fm_hi = 2.0;
  int fm_n = 128;
  fm->add_option("--model", fm_model, "Load the encoder from a saved model file "
                                      "(overrides the construction flags)");
  add_encoder_flags(fm, fm_enc);
  fm->add_option("--grid-lo", fm_lo, "Grid lower edge")->capture_default_str();
  fm->add_option("--grid-hi", fm_hi, "Grid upper edge")->capture_default_str();
  fm->add_option("--grid-n", fm_n, "Grid points")
      ->check(CLI::Range(2, 1 << 20))
      ->capture_default_str();
  add_common(fm, fm_common);

  // --- gradcheck ---------------------------------------------------------------
  auto* gc = app.add_subcommand("gradcheck",
                                "Compare analytic gradients against finite differences");
  CommonFlags gc_common;
  EncoderFlags gc_enc;
  double gc_h = 1e-5;
  double gc_tol = 0.0;
  add_encoder_flags(gc, gc_enc);
  gc->add_option("--step", gc_h, "Finite-difference step h")
      ->check(CLI::Range(1e-7, 1e-3))
      ->capture_default_str();
  gc->add_option("--tolerance", gc_tol,
                 "Fail (exit 3) when the max relative error exceeds this; 0 reports only")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_common(gc, gc_common);

  // --- replicate-sin -----------------------------------------------------------
  auto* rs = app.add_subcommand(
      "replicate-sin", "Configure a combined encoder to reproduce sin(w*t + phi) exactly");
  CommonFlags rs_common;
  std::vector<double> rs_omega, rs_phi;
  int rs_count = 4;
  rs->add_option("--omega", rs_omega, "Explicit frequencies (comma-separated)")
      ->delimiter(',');
  rs->add_option("--phi", rs_phi, "Explicit phases (comma-separated, defaults to zeros)")
      ->delimiter(',');
  rs->add_option("--count", rs_count, "Number of random (omega, phi) draws when --omega is absent")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  add_common(rs, rs_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*fit) {
    lete_fit_result result{};
    const lete_status st =
        lete_run_fit(fit_encoder.c_str(), fit_target.c_str(), fit_p, fit_steps, fit_lr,
                     fit_common.seed, fit_common.output_dir.c_str(), fit_common.format.c_str(),
                     &result);
    if (st != LETE_OK) return fail(st);
    std::cout << "fit: encoder=" << fit_encoder << " target=" << fit_target
              << " steps=" << fit_steps << " seed=" << fit_common.seed << '\n';
    std::cout << "final MSE:  " << fmtg(result.final_mse) << '\n';
    if (std::isfinite(result.oracle_mse)) {
      std::cout << "oracle MSE: " << fmtg(result.oracle_mse)
                << "  (closed-form least squares, frozen linear map)" << '\n';
    }
    std::cout << "wall time:  " << fmtg(result.wall_time_s) << " s\n";
    std::cout << "reports written to " << fit_common.output_dir << '/' << '\n';
    return 0;
  }

  if (*rec) {
    lete_fit_result result{};
    const lete_status st = lete_run_reconstruction(
        rec_encoder.c_str(), rec_signal.c_str(), rec_dim, rec_samples, rec_steps, rec_lr,
        rec_common.seed, rec_common.output_dir.c_str(), rec_common.format.c_str(), &result);
    if (st != LETE_OK) return fail(st);
    std::cout << "reconstruct: encoder=" << rec_encoder << " signal=" << rec_signal
              << " dim=" << rec_dim << " samples=" << rec_samples << " steps=" << rec_steps
              << " seed=" << rec_common.seed << '\n';
    std::cout << "final MSE: " << fmtg(result.final_mse) << '\n';
    std::cout << "wall time: " << fmtg(result.wall_time_s) << " s\n";
    std::cout << "reports written to " << rec_common.output_dir << '/' << '\n';
    return 0;
  }

  if (*ent) {
    lete_entropy_result result{};
    const lete_status st = lete_run_entropy_file(
        ent_input.c_str(), ent_min_events, ent_mode.c_str(), ent_common.output_dir.c_str(),
        ent_common.format.c_str(), &result);
    if (st != LETE_OK) return fail(st);
    if (result.n_sequences == 0) {
      std::cerr << "warning: no node had more than " << ent_min_events << " events; "
                << "nothing to analyze\n";
    } else {
      std::cout << "analyzed " << result.n_sequences
                << " sequences; mean spectral entropy = " << fmtg(result.mean_entropy)
                << " nats\n";
    }
    std::cout << "reports written to " << ent_common.output_dir << '/' << '\n';
    return 0;
  }

  if (*fm) {
    lete_encoder* enc = nullptr;
    lete_status st;
    if (!fm_model.empty()) {
      st = lete_encoder_load(fm_model.c_str(), &enc);
    } else {
      const lete_encoder_config cfg = to_config(fm_enc, fm_common.seed);
      st = lete_encoder_create(&cfg, &enc);
    }
    if (st != LETE_OK) return fail(st);
    st = lete_run_featmap(enc, fm_lo, fm_hi, fm_n, fm_common.output_dir.c_str(),
                          fm_common.format.c_str());
    int32_t dim = 0;
    lete_encoder_dim(enc, &dim);
    lete_encoder_destroy(enc);
    if (st != LETE_OK) return fail(st);
    std::cout << "feature map: dim=" << dim << " grid=[" << fmtg(fm_lo) << ", " << fmtg(fm_hi)
              << "] n=" << fm_n << '\n';
    std::cout << "reports written to " << fm_common.output_dir << '/' << '\n';
    return 0;
  }

  if (*gc) {
    const lete_encoder_config cfg = to_config(gc_enc, gc_common.seed);
    lete_gradcheck_result result{};
    const lete_status st = lete_run_gradcheck(&cfg, gc_common.seed, gc_h, &result);
    if (st != LETE_OK) return fail(st);
    std::cout << "max relative gradient error: " << fmtg(result.max_rel_error) << " (worst: "
              << (result.worst_param[0] ? result.worst_param : "n/a") << ", h=" << fmtg(gc_h)
              << ")\n";
    if (gc_tol > 0.0 && result.max_rel_error > gc_tol) {
      std::cerr << "error: gradient error exceeds tolerance " << fmtg(gc_tol) << '\n';
      return 3;
    }
    return 0;
  }

  if (*rs) {
    if (rs_omega.empty() && !rs_phi.empty()) {
      std::cerr << "error: --phi requires --omega\n";
      return 1;
    }
    std::vector<double> omega = rs_omega, phi = rs_phi;
    if (omega.empty()) {
      std::mt19937_64 gen(rs_common.seed);
      std::uniform_real_distribution<double> u_omega(0.05, 5.0);
      std::uniform_real_distribution<double> u_phi(0.0, 2.0 * 3.14159265358979323846);
      for (int i = 0; i < rs_count; ++i) {
        omega.push_back(u_omega(gen));
        phi.push_back(u_phi(gen));
      }
    } else if (phi.empty()) {
      phi.assign(omega.size(), 0.0);
    } else if (phi.size() != omega.size()) {
      std::cerr << "error: --phi must list exactly as many values as --omega\n";
      return 1;
    }

    lete_encoder* enc = nullptr;
    lete_status st = lete_encoder_replicate_sin(omega.data(), phi.data(), omega.size(), &enc);
    if (st != LETE_OK) return fail(st);

    // Probe the handle against the closed form it claims to reproduce.
    const int n_probe = 1001;
    std::vector<double> row(omega.size());
    double max_dev = 0.0;
    for (int i = 0; i < n_probe && st == LETE_OK; ++i) {
      const double t = -10.0 + 20.0 * static_cast<double>(i) / (n_probe - 1);
      st = lete_encoder_encode(enc, t, row.data(), row.size());
      for (size_t k = 0; k < omega.size() && st == LETE_OK; ++k) {
        max_dev = std::max(max_dev, std::abs(row[k] - std::sin(omega[k] * t + phi[k])));
      }
    }
    if (st != LETE_OK) {
      lete_encoder_destroy(enc);
      return fail(st);
    }

    std::error_code ec;
    std::filesystem::create_directories(rs_common.output_dir, ec);
    const std::string model_path = rs_common.output_dir + "/model.json";
    st = lete_encoder_save(enc, model_path.c_str());
    lete_encoder_destroy(enc);
    if (st != LETE_OK) return fail(st);

    std::cout << "replicated " << omega.size() << " sine dims; max |encode - sin| over ["
              << -10.0 << ", " << 10.0 << "] = " << fmtg(max_dev) << '\n';
    std::cout << "model written to " << model_path << '\n';
    return 0;
  }

  return 1;
}
