#include "lete.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lete/model_io.hpp"
#include "lete/tasks.hpp"
#include "lete/train.hpp"

struct lete_encoder {
  lete::Model model;
  std::unique_ptr<lete::Encoder> enc;
};

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

thread_local std::string t_last_error;

template <typename Fn>
lete_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    t_last_error.clear();
    return LETE_OK;
  } catch (const lete::IoError& e) {
    t_last_error = e.what();
    return LETE_IO_ERROR;
  } catch (const lete::SchemaError& e) {
    t_last_error = e.what();
    return LETE_SCHEMA_ERROR;
  } catch (const lete::VersionError& e) {
    t_last_error = e.what();
    return LETE_VERSION_ERROR;
  } catch (const lete::DataError& e) {
    t_last_error = e.what();
    return LETE_DATA_ERROR;
  } catch (const std::invalid_argument& e) {
    t_last_error = e.what();
    return LETE_INVALID_ARG;
  } catch (const std::runtime_error& e) {
    t_last_error = e.what();
    return LETE_DIVERGED;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return LETE_INTERNAL_ERROR;
  } catch (...) {
    t_last_error = "unknown error";
    return LETE_INTERNAL_ERROR;
  }
}

lete_status invalid(const char* msg) noexcept {
  try {
    t_last_error = msg;
  } catch (...) {
  }
  return LETE_INVALID_ARG;
}

lete::BaselineKind to_baseline_kind(lete_encoder_kind kind) {
  switch (kind) {
    case LETE_ENCODER_FTR:
      return lete::BaselineKind::FTR;
    case LETE_ENCODER_T2V:
      return lete::BaselineKind::T2V;
    case LETE_ENCODER_UNIFIED_SIN:
      return lete::BaselineKind::UnifiedSin;
    default:
      throw std::invalid_argument("expected a baseline encoder kind");
  }
}

lete::Model model_from_config(const lete_encoder_config& c) {
  lete::Model m;
  m.creation_seed = c.seed;
  if (c.kind == LETE_ENCODER_COMBINED) {
    lete::CombinedConfig cc;
    cc.d = c.d;
    cc.p = c.p;
    cc.k_max = c.k_max;
    cc.dense_fourier = c.dense_fourier != 0;
    cc.degree = c.degree;
    cc.grid_size = c.grid_size;
    cc.span_lo = c.span_lo;
    cc.span_hi = c.span_hi;
    cc.raw_output = c.raw_output != 0;
    lete::Rng rng(c.seed);
    m.kind = lete::Model::Kind::Combined;
    m.combined = lete::make_combined(cc, rng);
  } else {
    m.kind = lete::Model::Kind::Baseline;
    auto& b = m.baseline;
    b.kind = to_baseline_kind(c.kind);
    int nfreq = c.d;
    if (c.kind == LETE_ENCODER_FTR) {
      if (c.d % 2 != 0) throw std::invalid_argument("FTR encoder dimension must be even");
      nfreq = c.d / 2;
    }
    if (nfreq < 1) throw std::invalid_argument("encoder dimension must be >= 1");
    for (int i = 0; i < nfreq; ++i) {
      b.omega.push_back(std::pow(10.0, -4.0 * static_cast<double>(i) / nfreq));
    }
    if (c.kind != LETE_ENCODER_FTR) b.phi.assign(static_cast<size_t>(nfreq), 0.0);
  }
  return m;
}

lete_encoder* wrap_model(lete::Model model) {
  auto handle = std::make_unique<lete_encoder>();
  handle->enc = lete::make_encoder(model);
  handle->model = std::move(model);
  return handle.release();
}

fs::path prep_dir(const char* output_dir) {
  if (!output_dir || !*output_dir) throw std::invalid_argument("output_dir must be non-empty");
  fs::path dir(output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw lete::IoError("cannot create output directory '" + std::string(output_dir) +
                        "': " + ec.message());
  }
  return dir;
}

enum class OutFormat { Csv, Json, Svg };

OutFormat parse_format(const char* format) {
  const std::string f = (format && *format) ? format : "csv";
  if (f == "csv") return OutFormat::Csv;
  if (f == "json") return OutFormat::Json;
  if (f == "svg") return OutFormat::Svg;
  throw std::invalid_argument("unknown format '" + f + "' (expected csv, json, or svg)");
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw lete::IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw lete::IoError("write to '" + path.string() + "' failed");
}

void write_fit_outputs(const fs::path& dir, OutFormat fmt, const lete::FitReport& rep,
                       const lete::Model& model, const std::string& generator_spec) {
  json j{{"encoder_kind", rep.encoder_kind},
         {"final_mse", rep.final_mse},
         {"steps", rep.loss_curve.size()},
         {"wall_time_s", rep.wall_time_s},
         {"seed", rep.seed}};
  j["oracle_mse"] = rep.oracle_mse ? json(*rep.oracle_mse) : json(nullptr);
  if (!generator_spec.empty()) j["generator_spec"] = generator_spec;

  if (fmt == OutFormat::Json) {
    j["loss_curve"] = rep.loss_curve;
    json samples = json::array();
    for (const auto& s : rep.curve_samples) {
      samples.push_back({{"x", s.x}, {"target", s.target}, {"fitted", s.fitted}});
    }
    j["curve_samples"] = samples;
  } else {
    std::vector<std::vector<double>> loss_rows;
    loss_rows.reserve(rep.loss_curve.size());
    for (size_t i = 0; i < rep.loss_curve.size(); ++i) {
      loss_rows.push_back({static_cast<double>(i), rep.loss_curve[i]});
    }
    lete::write_csv((dir / "loss_curve.csv").string(), {"step", "loss"}, loss_rows);
    std::vector<std::vector<double>> curve_rows;
    curve_rows.reserve(rep.curve_samples.size());
    for (const auto& s : rep.curve_samples) curve_rows.push_back({s.x, s.target, s.fitted});
    lete::write_csv((dir / "curve_samples.csv").string(), {"x", "target", "fitted"}, curve_rows);
  }
  write_json_file(dir / "fit_report.json", j);
  lete::save_model((dir / "model.json").string(), model);

  if (fmt == OutFormat::Svg && rep.curve_samples.size() >= 2) {
    std::vector<double> x, tgt, fit;
    for (const auto& s : rep.curve_samples) {
      x.push_back(s.x);
      tgt.push_back(s.target);
      fit.push_back(s.fitted);
    }
    lete::write_svg_curves((dir / "fit_curves.svg").string(), x, {tgt, fit},
                           {"target", "fitted"});
  }
}

/// True when any spline input x'_i = omega_i*t + phi_i of the combined
/// encoder sits within `margin` of a knot, where one-sided finite
/// differences would straddle a pieces-of-polynomial boundary.
bool near_spline_knot(const lete::CombinedEncoderParams& cp, double t, double margin) {
  for (int i = cp.d_fourier(); i < cp.d; ++i) {
    const double x = cp.lm.omega[static_cast<size_t>(i)] * t + cp.lm.phi[static_cast<size_t>(i)];
    for (double k : cp.spline.kv.knots) {
      if (std::abs(x - k) < margin) return true;
    }
  }
  return false;
}

}  // namespace

extern "C" {

void lete_encoder_config_init(lete_encoder_config* cfg) {
  if (!cfg) return;
  cfg->kind = LETE_ENCODER_COMBINED;
  cfg->d = 8;
  cfg->p = 0.5;
  cfg->k_max = 5;
  cfg->degree = 3;
  cfg->grid_size = 8;
  cfg->span_lo = -2.0;
  cfg->span_hi = 2.0;
  cfg->dense_fourier = 1;
  cfg->raw_output = 0;
  cfg->seed = 0;
}

lete_status lete_encoder_create(const lete_encoder_config* cfg, lete_encoder** out) {
  if (!cfg || !out) return invalid("lete_encoder_create: null argument");
  return guarded([&] { *out = wrap_model(model_from_config(*cfg)); });
}

lete_status lete_encoder_create_baseline(lete_encoder_kind kind, const double* omega,
                                         const double* phi, size_t n, lete_encoder** out) {
  if (!omega || !out) return invalid("lete_encoder_create_baseline: null argument");
  if (n == 0) return invalid("lete_encoder_create_baseline: need at least one frequency");
  return guarded([&] {
    lete::Model m;
    m.kind = lete::Model::Kind::Baseline;
    m.baseline.kind = to_baseline_kind(kind);
    m.baseline.omega.assign(omega, omega + n);
    if (m.baseline.kind != lete::BaselineKind::FTR) {
      if (phi) {
        m.baseline.phi.assign(phi, phi + n);
      } else {
        m.baseline.phi.assign(n, 0.0);
      }
    }
    *out = wrap_model(std::move(m));
  });
}

lete_status lete_encoder_replicate_sin(const double* omega, const double* phi, size_t n,
                                       lete_encoder** out) {
  if (!omega || !out) return invalid("lete_encoder_replicate_sin: null argument");
  if (n == 0) return invalid("lete_encoder_replicate_sin: need at least one frequency");
  return guarded([&] {
    const std::vector<double> w(omega, omega + n);
    const std::vector<double> p = phi ? std::vector<double>(phi, phi + n)
                                      : std::vector<double>(n, 0.0);
    lete::Model m;
    m.kind = lete::Model::Kind::Combined;
    m.combined = lete::lete_params_replicating_sin(w, p);
    *out = wrap_model(std::move(m));
  });
}

lete_status lete_encoder_save(const lete_encoder* enc, const char* path) {
  if (!enc) return invalid("lete_encoder_save: null encoder");
  if (!path || !*path) return invalid("lete_encoder_save: null path");
  return guarded([&] { lete::save_model(path, enc->model); });
}

lete_status lete_encoder_load(const char* path, lete_encoder** out) {
  if (!path || !*path) return invalid("lete_encoder_load: null path");
  if (!out) return invalid("lete_encoder_load: null output handle");
  return guarded([&] { *out = wrap_model(lete::load_model(path)); });
}

lete_status lete_encoder_dim(const lete_encoder* enc, int32_t* out_dim) {
  if (!enc || !out_dim) return invalid("lete_encoder_dim: null argument");
  *out_dim = static_cast<int32_t>(enc->enc->dim());
  return LETE_OK;
}

lete_status lete_encoder_encode(const lete_encoder* enc, double t, double* out, size_t out_len) {
  if (!enc || !out) return invalid("lete_encoder_encode: null argument");
  if (out_len != static_cast<size_t>(enc->enc->dim())) {
    return invalid("lete_encoder_encode: out_len must equal the encoder dimension");
  }
  return guarded([&] { enc->enc->encode(t, std::span<double>(out, out_len)); });
}

lete_status lete_encoder_encode_batch(const lete_encoder* enc, const double* t, size_t n,
                                      double* out, size_t out_len) {
  if (!enc || !t || !out) return invalid("lete_encoder_encode_batch: null argument");
  const auto dim = static_cast<size_t>(enc->enc->dim());
  if (out_len != n * dim) {
    return invalid("lete_encoder_encode_batch: out_len must equal n * dim");
  }
  return guarded([&] {
    for (size_t i = 0; i < n; ++i) {
      enc->enc->encode(t[i], std::span<double>(out + i * dim, dim));
    }
  });
}

void lete_encoder_destroy(lete_encoder* enc) { delete enc; }

lete_status lete_run_fit(const char* encoder_name, const char* target_name, double p,
                         int32_t steps, double learning_rate, uint64_t seed,
                         const char* output_dir, const char* format, lete_fit_result* out) {
  if (!encoder_name || !target_name) return invalid("lete_run_fit: null name argument");
  return guarded([&] {
    const auto kind = lete::fit_encoder_from_name(encoder_name);
    const auto target = lete::target_from_name(target_name);
    const auto fmt = parse_format(format);
    const fs::path dir = prep_dir(output_dir);

    lete::TaskConfig cfg;
    cfg.steps = steps;
    cfg.learning_rate = learning_rate;
    cfg.seed = seed;
    cfg.p_override = p;
    const lete::TargetFunction tf = lete::default_target(target);

    lete::Model model;
    model.creation_seed = seed;
    model.kind = kind == lete::FitEncoderKind::FTE ? lete::Model::Kind::Baseline
                                                   : lete::Model::Kind::Combined;
    const lete::FitReport rep =
        lete::run_fit(kind, tf, cfg, &model.combined, &model.baseline);
    write_fit_outputs(dir, fmt, rep, model, "target=" + lete::target_name(target));

    if (out) {
      out->final_mse = rep.final_mse;
      out->oracle_mse =
          rep.oracle_mse ? *rep.oracle_mse : std::numeric_limits<double>::quiet_NaN();
      out->wall_time_s = rep.wall_time_s;
    }
  });
}

lete_status lete_run_reconstruction(const char* encoder_name, const char* signal_name, int32_t d,
                                    int32_t n_samples, int32_t steps, double learning_rate,
                                    uint64_t seed, const char* output_dir, const char* format,
                                    lete_fit_result* out) {
  if (!encoder_name || !signal_name) return invalid("lete_run_reconstruction: null name argument");
  return guarded([&] {
    const auto kind = lete::recon_encoder_from_name(encoder_name);
    const auto skind = lete::signal_from_name(signal_name);
    const auto fmt = parse_format(format);
    const fs::path dir = prep_dir(output_dir);

    const lete::SyntheticSignal sig = lete::gen_signal(skind, n_samples, seed);
    lete::TaskConfig cfg;
    cfg.steps = steps;
    cfg.learning_rate = learning_rate;
    cfg.seed = seed;

    lete::Model model;
    model.creation_seed = seed;
    model.kind = kind == lete::ReconEncoderKind::FTE ? lete::Model::Kind::Baseline
                                                     : lete::Model::Kind::Combined;
    const lete::FitReport rep =
        lete::run_reconstruction(kind, sig, d, cfg, &model.combined, &model.baseline);
    write_fit_outputs(dir, fmt, rep, model, sig.generator_spec);

    if (out) {
      out->final_mse = rep.final_mse;
      out->oracle_mse = std::numeric_limits<double>::quiet_NaN();
      out->wall_time_s = rep.wall_time_s;
    }
  });
}

lete_status lete_run_entropy_file(const char* input_csv, int32_t min_events, const char* mode,
                                  const char* output_dir, const char* format,
                                  lete_entropy_result* out) {
  if (!input_csv) return invalid("lete_run_entropy_file: null input path");
  return guarded([&] {
    lete::EntropyConfig ec;
    const std::string mode_name = (mode && *mode) ? mode : "bins";
    if (mode_name == "times") {
      ec.mode = lete::SpectralMode::NormalizedTimes;
    } else if (mode_name == "diffs") {
      ec.mode = lete::SpectralMode::TimeDifferences;
    } else if (mode_name == "bins") {
      ec.mode = lete::SpectralMode::BinnedCounts;
    } else {
      throw std::invalid_argument("unknown entropy mode '" + mode_name +
                                  "' (expected times, diffs, or bins)");
    }
    if (min_events < 0) throw std::invalid_argument("min_events must be >= 0");
    ec.min_events = min_events;
    const auto fmt = parse_format(format);
    const fs::path dir = prep_dir(output_dir);

    const auto sequences = lete::read_event_csv(input_csv, min_events);
    std::vector<const lete::EventSequence*> analyzed;
    std::vector<lete::SpectralReport> reports;
    analyzed.reserve(sequences.size());
    reports.reserve(sequences.size());
    json skipped = json::array();
    double entropy_sum = 0.0;
    for (const auto& seq : sequences) {
      try {
        reports.push_back(lete::analyze_events(seq, ec));
      } catch (const std::invalid_argument& e) {
        // A series with no non-DC spectral content (constant binned counts,
        // all-equal gaps) has an undefined magnitude distribution. Drop the
        // node the way the min-events threshold drops short sequences rather
        // than failing the whole batch over one degenerate train.
        skipped.push_back({{"node_id", seq.node_id}, {"reason", e.what()}});
        continue;
      }
      analyzed.push_back(&seq);
      entropy_sum += reports.back().entropy;
    }
    const double mean = analyzed.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : entropy_sum / static_cast<double>(analyzed.size());

    json j{{"input", input_csv},
           {"mode", mode_name},
           {"min_events", min_events},
           {"n_sequences", analyzed.size()},
           {"n_skipped", skipped.size()}};
    if (!skipped.empty()) j["skipped"] = skipped;
    j["mean_entropy"] = analyzed.empty() ? json(nullptr) : json(mean);
    if (fmt == OutFormat::Json) {
      json nodes = json::array();
      for (size_t i = 0; i < analyzed.size(); ++i) {
        nodes.push_back({{"node_id", analyzed[i]->node_id},
                         {"n_events", analyzed[i]->times.size()},
                         {"entropy", reports[i].entropy},
                         {"n_bins", reports[i].n_bins}});
      }
      j["nodes"] = nodes;
    } else {
      // node ids may be arbitrary strings, so this table is written by hand
      // instead of through the numeric CSV writer
      std::ofstream csv(dir / "entropy.csv");
      if (!csv) throw lete::IoError("cannot open entropy.csv for writing");
      csv << "node_id,n_events,entropy,n_bins\n";
      char buf[40];
      for (size_t i = 0; i < analyzed.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", reports[i].entropy);
        csv << analyzed[i]->node_id << ',' << analyzed[i]->times.size() << ',' << buf << ','
            << reports[i].n_bins << '\n';
      }
      if (!csv) throw lete::IoError("write to entropy.csv failed");
    }
    write_json_file(dir / "entropy_report.json", j);

    if (fmt == OutFormat::Svg && !reports.empty()) {
      const size_t shown = std::min<size_t>(reports.size(), 8);
      size_t max_bins = 0;
      for (size_t i = 0; i < shown; ++i) {
        max_bins = std::max(max_bins, reports[i].distribution.size());
      }
      if (max_bins >= 2) {
        std::vector<double> xg(max_bins);
        for (size_t i = 0; i < max_bins; ++i) xg[i] = static_cast<double>(i);
        std::vector<std::vector<double>> curves;
        std::vector<std::string> labels;
        for (size_t i = 0; i < shown; ++i) {
          auto c = reports[i].distribution;
          c.resize(max_bins, 0.0);
          curves.push_back(std::move(c));
          labels.push_back(analyzed[i]->node_id);
        }
        lete::write_svg_curves((dir / "spectra.svg").string(), xg, curves, labels);
      }
    }

    if (out) {
      out->n_sequences = analyzed.size();
      out->mean_entropy = mean;
    }
  });
}

lete_status lete_run_featmap(const lete_encoder* enc, double grid_lo, double grid_hi,
                             int32_t grid_n, const char* output_dir, const char* format) {
  if (!enc) return invalid("lete_run_featmap: null encoder");
  return guarded([&] {
    if (grid_n < 2) throw std::invalid_argument("lete_run_featmap: need grid_n >= 2");
    if (!(grid_lo < grid_hi)) {
      throw std::invalid_argument("lete_run_featmap: need grid_lo < grid_hi");
    }
    const auto fmt = parse_format(format);
    const fs::path dir = prep_dir(output_dir);

    std::vector<double> grid(static_cast<size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i) {
      grid[static_cast<size_t>(i)] =
          grid_lo + (grid_hi - grid_lo) * static_cast<double>(i) / (grid_n - 1);
    }
    const auto rows = lete::export_feature_map(*enc->enc, grid);

    const int d = enc->enc->dim();
    std::vector<std::string> header{"t"};
    for (int j = 0; j < d; ++j) header.push_back("f" + std::to_string(j));
    std::vector<std::vector<double>> table(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
      table[r].push_back(grid[r]);
      table[r].insert(table[r].end(), rows[r].begin(), rows[r].end());
    }
    if (fmt == OutFormat::Json) {
      json j{{"t", grid}, {"features", rows}};
      write_json_file(dir / "feature_map.json", j);
    } else {
      lete::write_csv((dir / "feature_map.csv").string(), header, table);
    }
    if (fmt == OutFormat::Svg) {
      lete::write_svg_heatmap((dir / "feature_map.svg").string(), rows);
    }

    if (enc->model.kind == lete::Model::Kind::Combined) {
      const auto tf = lete::reconstruct_transfer_functions(enc->model.combined, grid);
      std::ofstream listing(dir / "transfer_listing.txt");
      if (!listing) throw lete::IoError("cannot open transfer_listing.txt for writing");
      listing << tf.listing;
      if (!listing) throw lete::IoError("write to transfer_listing.txt failed");

      std::vector<std::string> theader{"x"};
      std::vector<std::string> labels;
      for (int j = 0; j < d; ++j) {
        theader.push_back("dim" + std::to_string(j));
        labels.push_back("f_" + std::to_string(j));
      }
      std::vector<std::vector<double>> trows(grid.size());
      for (size_t r = 0; r < grid.size(); ++r) {
        trows[r].push_back(grid[r]);
        for (int j = 0; j < d; ++j) trows[r].push_back(tf.curves[static_cast<size_t>(j)][r]);
      }
      lete::write_csv((dir / "transfer_curves.csv").string(), theader, trows);
      if (fmt == OutFormat::Svg) {
        lete::write_svg_curves((dir / "transfer_curves.svg").string(), tf.x_grid, tf.curves,
                               labels);
      }
    }
  });
}

lete_status lete_run_gradcheck(const lete_encoder_config* cfg, uint64_t seed, double h,
                               lete_gradcheck_result* out) {
  if (!cfg || !out) return invalid("lete_run_gradcheck: null argument");
  return guarded([&] {
    lete::Model model = model_from_config(*cfg);
    const auto enc = lete::make_encoder(model);

    // Probe problem: random timestamps and targets. Timestamps are redrawn
    // if they land a finite-difference step away from a spline knot, where
    // the basis is only piecewise smooth.
    lete::Rng rng(seed, 3);
    const size_t n = 16;
    std::vector<double> t(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      double ti = rng.uniform(-1.5, 1.5);
      if (model.kind == lete::Model::Kind::Combined) {
        for (int tries = 0; tries < 100 && near_spline_knot(model.combined, ti, 8.0 * h);
             ++tries) {
          ti = rng.uniform(-1.5, 1.5);
        }
      }
      t[i] = ti;
      y[i] = rng.normal(0.0, 1.0);
    }

    lete::LinearDecoder dec(enc->dim(), rng);
    lete::FitProblem problem(*enc, dec, t, y);
    std::string worst;
    const double err = lete::grad_check(problem, h, &worst);
    out->max_rel_error = err;
    std::snprintf(out->worst_param, sizeof out->worst_param, "%s", worst.c_str());
  });
}

const char* lete_last_error(void) { return t_last_error.c_str(); }

const char* lete_status_name(lete_status status) {
  switch (status) {
    case LETE_OK:
      return "LETE_OK";
    case LETE_INVALID_ARG:
      return "LETE_INVALID_ARG";
    case LETE_IO_ERROR:
      return "LETE_IO_ERROR";
    case LETE_SCHEMA_ERROR:
      return "LETE_SCHEMA_ERROR";
    case LETE_VERSION_ERROR:
      return "LETE_VERSION_ERROR";
    case LETE_DATA_ERROR:
      return "LETE_DATA_ERROR";
    case LETE_DIVERGED:
      return "LETE_DIVERGED";
    case LETE_INTERNAL_ERROR:
      return "LETE_INTERNAL_ERROR";
  }
  return "LETE_UNKNOWN";
}

}  // extern "C"
