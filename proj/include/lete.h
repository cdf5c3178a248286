#ifndef LETE_H
#define LETE_H

/* C interface to the learnable time-encoding library.
 *
 * All functions returning lete_status report LETE_OK on success; on failure
 * they leave outputs untouched and store a human-readable message retrievable
 * with lete_last_error() (thread-local). Handles created by the lete_encoder_*
 * constructors must be released with lete_encoder_destroy(). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lete_status {
  LETE_OK = 0,
  LETE_INVALID_ARG = 1,    /* bad parameter or null pointer */
  LETE_IO_ERROR = 2,       /* file could not be opened or written */
  LETE_SCHEMA_ERROR = 3,   /* file contents violate the expected layout */
  LETE_VERSION_ERROR = 4,  /* file written by an unsupported format version */
  LETE_DATA_ERROR = 5,     /* well-formed file with invalid payload */
  LETE_DIVERGED = 6,       /* numerical failure (non-finite loss/gradient) */
  LETE_INTERNAL_ERROR = 7  /* unexpected failure */
} lete_status;

/* Opaque encoder handle. */
typedef struct lete_encoder lete_encoder;

typedef enum lete_encoder_kind {
  LETE_ENCODER_COMBINED = 0,    /* Fourier + spline blocks with LayerNorm */
  LETE_ENCODER_FTR = 1,         /* fixed-form interleaved cos/sin pairs */
  LETE_ENCODER_T2V = 2,         /* linear first dim + sines */
  LETE_ENCODER_UNIFIED_SIN = 3  /* pure sine family */
} lete_encoder_kind;

/* Construction recipe for a combined encoder (and the deterministic
 * frequency-ladder init used when a baseline kind is requested). Initialize
 * with lete_encoder_config_init() before overriding fields. */
typedef struct lete_encoder_config {
  lete_encoder_kind kind;
  int32_t d;           /* output dimension (FTR: must be even) */
  double p;            /* fraction of dims given to the Fourier block, in [0,1] */
  int32_t k_max;       /* harmonics per Fourier input dim */
  int32_t degree;      /* spline degree */
  int32_t grid_size;   /* spline basis count per dim */
  double span_lo;      /* spline knot span */
  double span_hi;
  int32_t dense_fourier; /* nonzero: every Fourier output sees every input dim */
  int32_t raw_output;    /* nonzero: skip LayerNorm + per-dim scale */
  uint64_t seed;         /* weight-init seed */
} lete_encoder_config;

void lete_encoder_config_init(lete_encoder_config* cfg);

/* Create an encoder from a config (random weights seeded by cfg->seed for the
 * combined kind; baselines get the deterministic frequency ladder). */
lete_status lete_encoder_create(const lete_encoder_config* cfg, lete_encoder** out);

/* Create a baseline encoder with explicit frequencies/phases. `phi` may be
 * NULL for zero phases; the FTR kind ignores it (n is the frequency count, so
 * the FTR encoder has dimension 2*n). */
lete_status lete_encoder_create_baseline(lete_encoder_kind kind, const double* omega,
                                         const double* phi, size_t n, lete_encoder** out);

/* Combined encoder configured to reproduce sin(omega_i * t + phi_i) exactly. */
lete_status lete_encoder_replicate_sin(const double* omega, const double* phi, size_t n,
                                       lete_encoder** out);

lete_status lete_encoder_save(const lete_encoder* enc, const char* path);
lete_status lete_encoder_load(const char* path, lete_encoder** out);

lete_status lete_encoder_dim(const lete_encoder* enc, int32_t* out_dim);

/* Encode one timestamp into out[0..out_len), out_len == dim. */
lete_status lete_encoder_encode(const lete_encoder* enc, double t, double* out, size_t out_len);

/* Encode n timestamps into a row-major [n x dim] buffer of length out_len. */
lete_status lete_encoder_encode_batch(const lete_encoder* enc, const double* t, size_t n,
                                      double* out, size_t out_len);

void lete_encoder_destroy(lete_encoder* enc);

/* ------------------------------------------------------------------------ */
/* Experiment drivers. Each writes its report files under output_dir         */
/* (created if missing) and returns headline metrics. `format` selects the   */
/* table format: "csv" (default; CSV tables + JSON summary), "json" (tables  */
/* embedded in the JSON report), or "svg" (CSV tables + SVG plots).          */
/* ------------------------------------------------------------------------ */

typedef struct lete_fit_result {
  double final_mse;
  double oracle_mse; /* NaN when no closed-form least-squares oracle applies */
  double wall_time_s;
} lete_fit_result;

/* encoder_name: "fourier" | "spline" | "fte"; target_name: "sin" | "modsin" |
 * "softplus" | "swish". `p` in [0,1] overrides the LeTE recipes' Fourier
 * fraction; pass a negative value to keep each recipe's own split. */
lete_status lete_run_fit(const char* encoder_name, const char* target_name, double p,
                         int32_t steps, double learning_rate, uint64_t seed,
                         const char* output_dir, const char* format, lete_fit_result* out);

/* encoder_name: "combined" | "fte"; signal_name: "periodic" | "nonperiodic" |
 * "mixed". */
lete_status lete_run_reconstruction(const char* encoder_name, const char* signal_name, int32_t d,
                                    int32_t n_samples, int32_t steps, double learning_rate,
                                    uint64_t seed, const char* output_dir, const char* format,
                                    lete_fit_result* out);

typedef struct lete_entropy_result {
  size_t n_sequences;  /* sequences analyzed: met the min-event threshold and
                        * had non-degenerate spectra (a constant series has no
                        * non-DC content; such nodes are skipped and listed in
                        * the report under "skipped") */
  double mean_entropy; /* NaN when no sequence qualified */
} lete_entropy_result;

/* mode: "times" (normalized timestamps), "diffs" (inter-event gaps), or
 * "bins" (histogram counts). */
lete_status lete_run_entropy_file(const char* input_csv, int32_t min_events, const char* mode,
                                  const char* output_dir, const char* format,
                                  lete_entropy_result* out);

/* Feature map of `enc` over an inclusive equispaced grid; combined encoders
 * additionally emit per-dimension transfer curves and the coefficient
 * listing. */
lete_status lete_run_featmap(const lete_encoder* enc, double grid_lo, double grid_hi,
                             int32_t grid_n, const char* output_dir, const char* format);

typedef struct lete_gradcheck_result {
  double max_rel_error;
  char worst_param[128]; /* e.g. "fourier.w_cos[12]" */
} lete_gradcheck_result;

/* Build the configured encoder plus a linear decoder on a small synthetic
 * fitting problem and compare analytic gradients against central finite
 * differences with step h. */
lete_status lete_run_gradcheck(const lete_encoder_config* cfg, uint64_t seed, double h,
                               lete_gradcheck_result* out);

/* Message for the most recent failing call on this thread ("" if none). */
const char* lete_last_error(void);

/* Stable name for a status code, e.g. "LETE_SCHEMA_ERROR". */
const char* lete_status_name(lete_status status);

#ifdef __cplusplus
}
#endif

#endif /* LETE_H */
