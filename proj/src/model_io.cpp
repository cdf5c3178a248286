#include "lete/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace lete {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string family_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::FTR:
      return "ftr";
    case BaselineKind::T2V:
      return "t2v";
    case BaselineKind::UnifiedSin:
      return "unified_sin";
  }
  return "?";
}

BaselineKind family_from_name(const std::string& name) {
  if (name == "ftr") return BaselineKind::FTR;
  if (name == "t2v") return BaselineKind::T2V;
  if (name == "unified_sin") return BaselineKind::UnifiedSin;
  throw SchemaError("load_model: unknown baseline family '" + name + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw SchemaError("load_model: " + what);
}

void validate_combined(const CombinedEncoderParams& c) {
  int df = 0, ds = 0;
  try {
    const auto split = split_dims(c.d, c.p);
    df = split.first;
    ds = split.second;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("load_model: ") + e.what());
  }
  const auto d = static_cast<size_t>(c.d);
  require(c.fourier.dim == df, "fourier.dim inconsistent with (d, p)");
  require(c.spline.dim == ds, "spline.dim inconsistent with (d, p)");
  require(c.lm.omega.size() == d && c.lm.phi.size() == d, "linear map tensors must have length d");
  require(c.scale.size() == d, "scale must have length d");
  require(std::isfinite(c.ln_eps) && c.ln_eps >= 0.0, "ln_eps must be finite and non-negative");

  const auto nf = static_cast<size_t>(df) * static_cast<size_t>(df) *
                  static_cast<size_t>(std::max(c.fourier.k_max, 0));
  if (df > 0) require(c.fourier.k_max >= 1, "fourier.k_max must be >= 1");
  require(c.fourier.w_cos.size() == nf && c.fourier.w_sin.size() == nf,
          "fourier weight tensors inconsistent with (dim, k_max)");
  require(c.fourier.bias.size() == static_cast<size_t>(df), "fourier.bias must have length dim");

  const auto& kv = c.spline.kv;
  require(kv.degree >= 0 && kv.grid_size >= 1, "spline basis layout out of range");
  require(kv.knots.size() == static_cast<size_t>(kv.grid_size + kv.degree + 1),
          "knot count inconsistent with (grid_size, degree)");
  for (size_t i = 1; i < kv.knots.size(); ++i) {
    require(kv.knots[i] > kv.knots[i - 1], "knots must be strictly increasing");
  }
  const auto dss = static_cast<size_t>(ds);
  require(c.spline.coeffs.size() == dss * static_cast<size_t>(kv.grid_size),
          "spline.coeffs inconsistent with (dim, grid_size)");
  require(c.spline.base_weight.size() == dss, "spline.base_weight must have length dim");
  require(c.spline.dense_mix.empty() ||
              c.spline.dense_mix.size() == dss * dss * static_cast<size_t>(kv.grid_size),
          "spline.dense_mix inconsistent with (dim, grid_size)");
}

void validate_baseline(const BaselineParams& b) {
  require(!b.omega.empty(), "baseline omega must be non-empty");
  if (b.kind == BaselineKind::FTR) {
    require(b.phi.empty(), "ftr baseline carries no phases");
  } else {
    require(b.phi.size() == b.omega.size(), "baseline phi must match omega length");
  }
}

json to_json(const Model& m) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["creation_seed"] = m.creation_seed;
  if (m.kind == Model::Kind::Combined) {
    const auto& c = m.combined;
    j["kind"] = "combined";
    j["combined"] = {
        {"d", c.d},
        {"p", c.p},
        {"ln_eps", c.ln_eps},
        {"raw_output", c.raw_output},
        {"lm", {{"omega", c.lm.omega}, {"phi", c.lm.phi}}},
        {"fourier",
         {{"dim", c.fourier.dim},
          {"k_max", c.fourier.k_max},
          {"diagonal_only", c.fourier.diagonal_only},
          {"w_cos", c.fourier.w_cos},
          {"w_sin", c.fourier.w_sin},
          {"bias", c.fourier.bias}}},
        {"spline",
         {{"dim", c.spline.dim},
          {"degree", c.spline.kv.degree},
          {"grid_size", c.spline.kv.grid_size},
          {"knots", c.spline.kv.knots},
          {"coeffs", c.spline.coeffs},
          {"base_weight", c.spline.base_weight},
          {"dense_mix", c.spline.dense_mix}}},
        {"scale", c.scale}};
  } else {
    j["kind"] = "baseline";
    j["baseline"] = {{"family", family_name(m.baseline.kind)},
                     {"omega", m.baseline.omega},
                     {"phi", m.baseline.phi}};
  }
  return j;
}

Model from_json(const json& j) {
  Model m;
  m.creation_seed = j.value("creation_seed", std::uint64_t{0});
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "combined") {
    m.kind = Model::Kind::Combined;
    const auto& jc = j.at("combined");
    auto& c = m.combined;
    c.d = jc.at("d").get<int>();
    c.p = jc.at("p").get<double>();
    c.ln_eps = jc.at("ln_eps").get<double>();
    c.raw_output = jc.at("raw_output").get<bool>();
    c.lm.omega = jc.at("lm").at("omega").get<std::vector<double>>();
    c.lm.phi = jc.at("lm").at("phi").get<std::vector<double>>();
    const auto& jf = jc.at("fourier");
    c.fourier.dim = jf.at("dim").get<int>();
    c.fourier.k_max = jf.at("k_max").get<int>();
    c.fourier.diagonal_only = jf.at("diagonal_only").get<bool>();
    c.fourier.w_cos = jf.at("w_cos").get<std::vector<double>>();
    c.fourier.w_sin = jf.at("w_sin").get<std::vector<double>>();
    c.fourier.bias = jf.at("bias").get<std::vector<double>>();
    const auto& js = jc.at("spline");
    c.spline.dim = js.at("dim").get<int>();
    c.spline.kv.degree = js.at("degree").get<int>();
    c.spline.kv.grid_size = js.at("grid_size").get<int>();
    c.spline.kv.knots = js.at("knots").get<std::vector<double>>();
    c.spline.coeffs = js.at("coeffs").get<std::vector<double>>();
    c.spline.base_weight = js.at("base_weight").get<std::vector<double>>();
    c.spline.dense_mix = js.at("dense_mix").get<std::vector<double>>();
    c.scale = jc.at("scale").get<std::vector<double>>();
    validate_combined(c);
  } else if (kind == "baseline") {
    m.kind = Model::Kind::Baseline;
    const auto& jb = j.at("baseline");
    m.baseline.kind = family_from_name(jb.at("family").get<std::string>());
    m.baseline.omega = jb.at("omega").get<std::vector<double>>();
    m.baseline.phi = jb.at("phi").get<std::vector<double>>();
    validate_baseline(m.baseline);
  } else {
    throw SchemaError("load_model: unknown model kind '" + kind + "'");
  }
  return m;
}

}  // namespace

std::unique_ptr<Encoder> make_encoder(const Model& model) {
  if (model.kind == Model::Kind::Combined) {
    return std::make_unique<CombinedEncoder>(model.combined);
  }
  return std::make_unique<BaselineEncoder>(model.baseline);
}

void save_model(const std::string& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw IoError("save_model: cannot open '" + path + "' for writing");
  out << to_json(model).dump(2) << '\n';
  if (!out) throw IoError("save_model: write to '" + path + "' failed");
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_model: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError("load_model: '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("format_version")) {
    throw SchemaError("load_model: '" + path + "' has no format_version field");
  }
  int version = -1;
  try {
    version = j.at("format_version").get<int>();
  } catch (const json::exception&) {
    throw SchemaError("load_model: format_version must be an integer");
  }
  if (version != kModelFormatVersion) {
    throw VersionError("load_model: file declares format_version " + std::to_string(version) +
                       " but this build reads version " + std::to_string(kModelFormatVersion));
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("load_model: malformed model payload: ") + e.what());
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("write_csv: cannot open '" + path + "' for writing");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::invalid_argument("write_csv: row width does not match header");
    }
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << fmt17(row[i]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write_csv: write to '" + path + "' failed");
}

namespace {

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::vector<EventSequence> read_event_csv(const std::string& path, int min_events) {
  std::ifstream in(path);
  if (!in) throw IoError("read_event_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) return {};  // empty file: nothing to analyze
  line = strip_cr(line);
  if (line != "node_id,timestamp") {
    throw DataError("read_event_csv: line 1: expected header 'node_id,timestamp', got '" + line +
                    "'");
  }
  std::map<std::string, std::vector<double>> by_node;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || comma == 0) {
      throw DataError("read_event_csv: line " + std::to_string(line_no) +
                      ": expected 'node_id,timestamp', got '" + line + "'");
    }
    const std::string node = line.substr(0, comma);
    const std::string stamp = line.substr(comma + 1);
    char* end = nullptr;
    const double t = std::strtod(stamp.c_str(), &end);
    if (end == stamp.c_str() || *end != '\0' || !std::isfinite(t)) {
      throw DataError("read_event_csv: line " + std::to_string(line_no) +
                      ": invalid timestamp '" + stamp + "'");
    }
    by_node[node].push_back(t);
  }
  std::vector<EventSequence> out;
  for (auto& [id, times] : by_node) {
    if (static_cast<int>(times.size()) <= min_events) continue;
    std::sort(times.begin(), times.end());
    out.push_back({id, std::move(times)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG renderings
// ---------------------------------------------------------------------------

namespace {

struct Rgb {
  int r, g, b;
};

// Diverging blue -> white -> red over u in [0, 1].
Rgb diverging(double u) {
  u = std::clamp(u, 0.0, 1.0);
  const auto lerp = [](int a, int b, double w) {
    return static_cast<int>(std::lround(a + (b - a) * w));
  };
  if (u < 0.5) {
    const double w = u / 0.5;
    return {lerp(48, 255, w), lerp(86, 255, w), lerp(166, 255, w)};
  }
  const double w = (u - 0.5) / 0.5;
  return {lerp(255, 178, w), lerp(255, 50, w), lerp(255, 44, w)};
}

const char* kCurveColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                              "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_svg_heatmap(const std::string& path, const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows[0].empty()) {
    throw std::invalid_argument("write_svg_heatmap: empty matrix");
  }
  const size_t nr = rows.size();
  const size_t nc = rows[0].size();
  double lo = rows[0][0], hi = rows[0][0];
  for (const auto& row : rows) {
    if (row.size() != nc) throw std::invalid_argument("write_svg_heatmap: ragged matrix");
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;

  const double cell_w = std::max(2.0, 720.0 / static_cast<double>(nc));
  const double cell_h = std::max(2.0, 480.0 / static_cast<double>(nr));
  const double width = cell_w * static_cast<double>(nc);
  const double height = cell_h * static_cast<double>(nr);

  std::ofstream out(path);
  if (!out) throw IoError("write_svg_heatmap: cannot open '" + path + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  for (size_t r = 0; r < nr; ++r) {
    for (size_t c = 0; c < nc; ++c) {
      const Rgb rgb = diverging((rows[r][c] - lo) / (hi - lo));
      out << "<rect x=\"" << c * cell_w << "\" y=\"" << r * cell_h << "\" width=\"" << cell_w
          << "\" height=\"" << cell_h << "\" fill=\"rgb(" << rgb.r << ',' << rgb.g << ',' << rgb.b
          << ")\"/>\n";
    }
  }
  out << "</svg>\n";
  if (!out) throw IoError("write_svg_heatmap: write to '" + path + "' failed");
}

void write_svg_curves(const std::string& path, const std::vector<double>& x,
                      const std::vector<std::vector<double>>& curves,
                      const std::vector<std::string>& labels) {
  if (x.size() < 2 || curves.empty()) {
    throw std::invalid_argument("write_svg_curves: need at least two samples and one curve");
  }
  for (const auto& c : curves) {
    if (c.size() != x.size()) throw std::invalid_argument("write_svg_curves: ragged curves");
  }
  const double width = 800.0, height = 420.0, margin = 42.0;
  double xlo = x.front(), xhi = x.back();
  if (!(xhi > xlo)) xhi = xlo + 1.0;
  double ylo = curves[0][0], yhi = curves[0][0];
  for (const auto& c : curves) {
    for (double v : c) {
      ylo = std::min(ylo, v);
      yhi = std::max(yhi, v);
    }
  }
  if (!(yhi > ylo)) yhi = ylo + 1.0;
  const auto px = [&](double v) {
    return margin + (v - xlo) / (xhi - xlo) * (width - 2.0 * margin);
  };
  const auto py = [&](double v) {
    return height - margin - (v - ylo) / (yhi - ylo) * (height - 2.0 * margin);
  };

  std::ofstream out(path);
  if (!out) throw IoError("write_svg_curves: cannot open '" + path + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
      << "\" height=\"" << height - 2 * margin
      << "\" fill=\"none\" stroke=\"#404040\" stroke-width=\"1\"/>\n";
  for (size_t c = 0; c < curves.size(); ++c) {
    const char* color = kCurveColors[c % (sizeof kCurveColors / sizeof kCurveColors[0])];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < x.size(); ++i) {
      if (i > 0) out << ' ';
      out << px(x[i]) << ',' << py(curves[c][i]);
    }
    out << "\"/>\n";
    if (c < labels.size()) {
      out << "<text x=\"" << margin + 8 << "\" y=\"" << margin + 16 + 14 * static_cast<double>(c)
          << "\" font-family=\"monospace\" font-size=\"11\" fill=\"" << color << "\">"
          << labels[c] << "</text>\n";
    }
  }
  out << "</svg>\n";
  if (!out) throw IoError("write_svg_curves: write to '" + path + "' failed");
}

}  // namespace lete
