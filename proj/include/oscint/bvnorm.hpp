#pragma once

#include <string>
#include <vector>

#include "oscint/function_spec.hpp"
#include "oscint/quad.hpp"

namespace oscint {

struct MonotonePiece {
  double lo = 0.0;
  double hi = 0.0;
  int direction = 0;  // +1 increasing, -1 decreasing, 0 constant
};

enum class VariationRoute { Skeleton, Derivative, Refinement, Split };

struct BVProfile {
  ExtInterval interval;
  double variation = 0.0;             // may be +inf
  double inf_abs = 0.0;
  std::vector<MonotonePiece> monotone_pieces;
  bool normalized = false;            // profile of the normalised representative
  bool exact = false;                 // false: certified lower bound or numerical estimate
  VariationRoute route = VariationRoute::Skeleton;
  double normalized_variation = 0.0;  // V of g~ (right limits, g~(b) = 0)
  cplx left_value{};                  // g(a+) (limit at -inf for infinite a)
  cplx right_value{};                 // g(b-) (limit at +inf for infinite b)
};

/// Total variation of g over I. Complex g: variations of real and imaginary parts are added.
BVProfile variation(const FunctionSpec& g, const ExtInterval& I);

/// Profile of the normalised representative: g~(x) = g(x+) on [a, b), g~(b) = 0.
BVProfile normalized_profile(const FunctionSpec& g, const ExtInterval& I);

struct AlexiewiczResult {
  double norm = 0.0;
  Status status = Status::Converged;
  std::size_t grid_points = 0;
  double argmin = 0.0;  // real f: where F is smallest
  double argmax = 0.0;
};

/// sup over subintervals of |int f|, as the oscillation of F(x) = int_lo^x f.
AlexiewiczResult alexiewicz(const FunctionSpec& f, const ExtInterval& I, double tol = 1e-9);
/// Norm only; NaN when the integral does not converge.
double alexiewicz_norm(const FunctionSpec& f, const ExtInterval& I, double tol = 1e-9);

struct ProductBound {
  double bound = 0.0;             // |int f| inf|g| + ||f|| V g
  double normalized_bound = 0.0;  // ||f|| V g~
  double integral_f = 0.0;        // |int f|
  double norm_f = 0.0;
  double variation_g = 0.0;
  double inf_g = 0.0;
  double normalized_variation_g = 0.0;
  QuadResult integral_fg;         // the quantity being bounded
};

ProductBound product_bound(const FunctionSpec& f, const FunctionSpec& g, const ExtInterval& I, double tol = 1e-9);

}  // namespace oscint
