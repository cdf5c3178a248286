#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "lete/baselines.hpp"
#include "lete/encoder.hpp"
#include "lete/spectral.hpp"

namespace lete {

/// File could not be opened / written at all.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File opened but its contents violate the expected layout (truncation,
/// wrong types, inconsistent tensor shapes, bad headers).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File declares a format_version this build does not understand.
struct VersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Well-formed file with semantically invalid payload (malformed CSV rows,
/// non-numeric timestamps, out-of-range values).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A serializable encoder: either a combined (Fourier+spline) encoder or a
/// fixed-form baseline, plus the seed it was created from (for provenance).
struct Model {
  enum class Kind { Combined, Baseline };
  Kind kind = Kind::Combined;
  CombinedEncoderParams combined;
  BaselineParams baseline;
  std::uint64_t creation_seed = 0;
};

/// Wrap the model's parameters in the matching trainable Encoder adapter.
std::unique_ptr<Encoder> make_encoder(const Model& model);

inline constexpr int kModelFormatVersion = 1;

/// JSON with full round-trip float precision: save -> load -> encode is
/// bitwise identical to the original encoder.
void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

/// Plain CSV writer with full round-trip float precision.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Parse a `node_id,timestamp` CSV into per-node event sequences, sorted by
/// time (duplicates preserved) and filtered to nodes with strictly more than
/// `min_events` events. Sequences are returned ordered by node id. An empty
/// file yields an empty list; a malformed row reports its line number.
std::vector<EventSequence> read_event_csv(const std::string& path, int min_events = 5);

/// Dependency-free SVG renderings (cosmetic outputs for --format svg).
void write_svg_heatmap(const std::string& path, const std::vector<std::vector<double>>& rows);
void write_svg_curves(const std::string& path, const std::vector<double>& x,
                      const std::vector<std::vector<double>>& curves,
                      const std::vector<std::string>& labels);

}  // namespace lete
