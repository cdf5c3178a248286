#pragma once

#include <span>
#include <vector>

namespace lete {

/// Uniform extended knot vector for a B-spline basis of `grid_size` functions
/// of degree `degree`. The interior span is [knots[degree], knots[grid_size]];
/// the vector extends `degree` extra cells past each end at the same spacing
/// so every interior point has a full complement of nonzero bases.
struct KnotVector {
  std::vector<double> knots;  // non-decreasing, length grid_size + degree + 1
  int degree = 3;
  int grid_size = 8;  // number of basis functions

  double lo() const { return knots[static_cast<size_t>(degree)]; }
  double hi() const { return knots[static_cast<size_t>(grid_size)]; }
};

/// Basis values (or derivatives) at a single evaluation point.
struct BasisValues {
  std::vector<double> values;  // length grid_size
  double at_x = 0.0;
};

/// Build a uniform extended knot vector over [lo, hi].
/// Throws std::invalid_argument if lo >= hi or grid_size < degree + 1.
KnotVector make_uniform_knots(double lo, double hi, int grid_size, int degree);

/// Cox-de Boor evaluation of all basis functions at x. Intervals are
/// half-open [t_i, t_{i+1}); the final interior interval is closed at the
/// right endpoint so evaluation is total and single-valued at hi.
/// Outside the extended knot span all values are zero.
/// Throws std::invalid_argument on non-finite x.
void basis_eval(const KnotVector& kv, double x, std::span<double> out);
BasisValues basis_eval(const KnotVector& kv, double x);

/// First derivative of every basis function at x, via the standard identity
/// d/dx N_{i,p} = p * (N_{i,p-1}/(t_{i+p}-t_i) - N_{i+1,p-1}/(t_{i+p+1}-t_{i+1})),
/// with degenerate knot spans contributing zero. Degree-0 bases have zero
/// derivative everywhere (defined as 0 at knot points).
void basis_eval_dx(const KnotVector& kv, double x, std::span<double> out);
BasisValues basis_eval_dx(const KnotVector& kv, double x);

}  // namespace lete
