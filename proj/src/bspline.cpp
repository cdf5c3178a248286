#include "lete/bspline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lete {

KnotVector make_uniform_knots(double lo, double hi, int grid_size, int degree) {
  if (!(lo < hi)) {
    throw std::invalid_argument("make_uniform_knots: require lo < hi, got [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (degree < 0) {
    throw std::invalid_argument("make_uniform_knots: degree must be non-negative");
  }
  if (grid_size < degree + 1) {
    throw std::invalid_argument("make_uniform_knots: grid_size must be >= degree + 1, got " +
                                std::to_string(grid_size) + " with degree " +
                                std::to_string(degree));
  }
  KnotVector kv;
  kv.degree = degree;
  kv.grid_size = grid_size;
  const double h = (hi - lo) / static_cast<double>(grid_size - degree);
  kv.knots.resize(static_cast<size_t>(grid_size + degree + 1));
  for (int i = 0; i < grid_size + degree + 1; ++i) {
    kv.knots[static_cast<size_t>(i)] = lo + static_cast<double>(i - degree) * h;
  }
  return kv;
}

namespace {

// Degree-0 indicator row: half-open cells [t_j, t_{j+1}), with the final
// interior cell closed at the right so x == hi belongs to it (and not to the
// first extended cell beyond it).
void degree0_row(const KnotVector& kv, double x, std::vector<double>& n) {
  const auto& t = kv.knots;
  const size_t cells = t.size() - 1;
  n.assign(cells, 0.0);
  for (size_t j = 0; j < cells; ++j) {
    if (t[j] <= x && x < t[j + 1]) n[j] = 1.0;
  }
  const size_t m = static_cast<size_t>(kv.grid_size);  // index of hi in knots
  if (x == t[m]) {
    n[m - 1] = 1.0;
    if (m < cells) n[m] = 0.0;
  }
}

void check_finite(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("basis_eval: non-finite evaluation point");
  }
}

}  // namespace

void basis_eval(const KnotVector& kv, double x, std::span<double> out) {
  check_finite(x);
  const auto& t = kv.knots;
  const int p = kv.degree;
  std::vector<double> n;
  degree0_row(kv, x, n);
  for (int k = 1; k <= p; ++k) {
    const size_t width = t.size() - 1 - static_cast<size_t>(k);
    for (size_t j = 0; j < width; ++j) {
      const double d1 = t[j + static_cast<size_t>(k)] - t[j];
      const double d2 = t[j + static_cast<size_t>(k) + 1] - t[j + 1];
      double v = 0.0;
      if (d1 > 0.0) v += (x - t[j]) / d1 * n[j];
      if (d2 > 0.0) v += (t[j + static_cast<size_t>(k) + 1] - x) / d2 * n[j + 1];
      n[j] = v;
    }
  }
  for (int i = 0; i < kv.grid_size; ++i) out[static_cast<size_t>(i)] = n[static_cast<size_t>(i)];
}

BasisValues basis_eval(const KnotVector& kv, double x) {
  BasisValues bv;
  bv.at_x = x;
  bv.values.resize(static_cast<size_t>(kv.grid_size));
  basis_eval(kv, x, bv.values);
  return bv;
}

void basis_eval_dx(const KnotVector& kv, double x, std::span<double> out) {
  check_finite(x);
  const int p = kv.degree;
  if (p == 0) {
    for (int i = 0; i < kv.grid_size; ++i) out[static_cast<size_t>(i)] = 0.0;
    return;
  }
  // Basis of degree p-1 over the same knot vector; one extra function exists
  // at the lower degree.
  const auto& t = kv.knots;
  std::vector<double> n;
  degree0_row(kv, x, n);
  for (int k = 1; k <= p - 1; ++k) {
    const size_t width = t.size() - 1 - static_cast<size_t>(k);
    for (size_t j = 0; j < width; ++j) {
      const double d1 = t[j + static_cast<size_t>(k)] - t[j];
      const double d2 = t[j + static_cast<size_t>(k) + 1] - t[j + 1];
      double v = 0.0;
      if (d1 > 0.0) v += (x - t[j]) / d1 * n[j];
      if (d2 > 0.0) v += (t[j + static_cast<size_t>(k) + 1] - x) / d2 * n[j + 1];
      n[j] = v;
    }
  }
  const double pd = static_cast<double>(p);
  for (int i = 0; i < kv.grid_size; ++i) {
    const size_t j = static_cast<size_t>(i);
    const double d1 = t[j + static_cast<size_t>(p)] - t[j];
    const double d2 = t[j + static_cast<size_t>(p) + 1] - t[j + 1];
    double v = 0.0;
    if (d1 > 0.0) v += n[j] / d1;
    if (d2 > 0.0) v -= n[j + 1] / d2;
    out[j] = pd * v;
  }
}

BasisValues basis_eval_dx(const KnotVector& kv, double x) {
  BasisValues bv;
  bv.at_x = x;
  bv.values.resize(static_cast<size_t>(kv.grid_size));
  basis_eval_dx(kv, x, bv.values);
  return bv;
}

}  // namespace lete
