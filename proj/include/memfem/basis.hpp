#pragma once

#include <stdexcept>
#include <vector>

#include "memfem/types.hpp"

namespace memfem {

enum class BasisKind {
  LagrangeLinear,     // 4-node bilinear quad
  LagrangeQuadratic,  // 9-node biquadratic quad
  BezierExtracted,    // spline basis via Bezier extraction, optionally rational
};

/// Element basis description. For BezierExtracted, `extraction` maps the
/// (p+1)^2 tensor-product Bernstein polynomials to the n_ne local spline
/// functions, and `weights` holds the rational (NURBS) weight per function.
struct ElementBasis {
  BasisKind kind = BasisKind::LagrangeLinear;
  int degree = 1;        // polynomial degree (Bezier kind only)
  MatX extraction;       // n_ne x (p+1)^2
  VecX weights;          // n_ne, strictly positive

  int node_count() const;
  void validate() const;

  static ElementBasis lagrange_linear();
  static ElementBasis lagrange_quadratic();
  static ElementBasis bezier(int degree, MatX extraction, VecX weights);
};

/// Shape function values and parametric derivatives at one master-element
/// point. d2N columns are ordered (11, 12, 22).
struct BasisEval {
  VecX N;    // n_ne
  MatX dN;   // n_ne x 2
  MatX d2N;  // n_ne x 3
};

struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int order = 0;  // points per direction
};

/// Evaluate the basis at xi in [-1,1]^2. Points up to 1e-12 outside the
/// master domain are clamped.
BasisEval eval_basis(const ElementBasis& basis, const Vec2& xi);

/// Tensor-product Gauss-Legendre rule, n_per_dir in 1..6.
QuadratureRule gauss_rule(int n_per_dir);

struct QuadratureRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

/// 1D Gauss-Legendre rule on [-1,1], n in 1..6 (edge integrals).
QuadratureRule1D gauss_rule_1d(int n);

/// Default quadrature order for an element kind (overridable per scenario).
int default_quadrature_order(const ElementBasis& basis);

}  // namespace memfem
