#include "memfem/basis.hpp"

#include <cmath>

namespace memfem {

namespace {

// 1D Lagrange shape functions on [-1,1] with value/first/second derivative.
struct Shape1D {
  VecX v, d, dd;
};

Shape1D lagrange1d_linear(double x) {
  Shape1D s;
  s.v.resize(2);
  s.d.resize(2);
  s.dd = VecX::Zero(2);
  s.v << 0.5 * (1.0 - x), 0.5 * (1.0 + x);
  s.d << -0.5, 0.5;
  return s;
}

Shape1D lagrange1d_quadratic(double x) {
  Shape1D s;
  s.v.resize(3);
  s.d.resize(3);
  s.dd.resize(3);
  s.v << 0.5 * x * (x - 1.0), 1.0 - x * x, 0.5 * x * (x + 1.0);
  s.d << x - 0.5, -2.0 * x, x + 0.5;
  s.dd << 1.0, -2.0, 1.0;
  return s;
}

// Bernstein polynomials of degree p on [-1,1].
Shape1D bernstein1d(int p, double x) {
  const double u = 0.5 * (1.0 + x);  // map to [0,1], du/dx = 1/2
  const int n = p + 1;
  Shape1D s;
  s.v = VecX::Zero(n);
  s.d = VecX::Zero(n);
  s.dd = VecX::Zero(n);

  auto binom = [](int nn, int kk) {
    double r = 1.0;
    for (int i = 1; i <= kk; ++i) r = r * (nn - kk + i) / i;
    return r;
  };
  auto bern = [&](int deg, int i) -> double {
    if (i < 0 || i > deg) return 0.0;
    return binom(deg, i) * std::pow(u, i) * std::pow(1.0 - u, deg - i);
  };
  for (int i = 0; i < n; ++i) {
    s.v(i) = bern(p, i);
    // d/du then chain rule with du/dx = 1/2
    s.d(i) = 0.5 * p * (bern(p - 1, i - 1) - bern(p - 1, i));
    s.dd(i) = 0.25 * p * (p - 1) *
              (bern(p - 2, i - 2) - 2.0 * bern(p - 2, i - 1) + bern(p - 2, i));
  }
  return s;
}

BasisEval tensor_product(const Shape1D& s1, const Shape1D& s2) {
  const int n1 = static_cast<int>(s1.v.size());
  const int n2 = static_cast<int>(s2.v.size());
  const int n = n1 * n2;
  BasisEval e;
  e.N.resize(n);
  e.dN.resize(n, 2);
  e.d2N.resize(n, 3);
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      const int I = i + n1 * j;  // xi^1 fastest
      e.N(I) = s1.v(i) * s2.v(j);
      e.dN(I, 0) = s1.d(i) * s2.v(j);
      e.dN(I, 1) = s1.v(i) * s2.d(j);
      e.d2N(I, 0) = s1.dd(i) * s2.v(j);
      e.d2N(I, 1) = s1.d(i) * s2.d(j);
      e.d2N(I, 2) = s1.v(i) * s2.dd(j);
    }
  return e;
}

double clamp_coord(double x) {
  if (x < -1.0) {
    if (x < -1.0 - 1e-12) throw std::invalid_argument("xi outside master domain");
    return -1.0;
  }
  if (x > 1.0) {
    if (x > 1.0 + 1e-12) throw std::invalid_argument("xi outside master domain");
    return 1.0;
  }
  return x;
}

// Apply rational (NURBS) weighting with quotient-rule derivatives.
BasisEval rationalize(const BasisEval& raw, const VecX& w) {
  const int n = static_cast<int>(raw.N.size());
  BasisEval e;
  e.N.resize(n);
  e.dN.resize(n, 2);
  e.d2N.resize(n, 3);

  const VecX P = w.cwiseProduct(raw.N);
  const double W = P.sum();
  Vec2 dW;
  Vec3 d2W;
  for (int a = 0; a < 2; ++a) dW(a) = w.dot(raw.dN.col(a));
  for (int c = 0; c < 3; ++c) d2W(c) = w.dot(raw.d2N.col(c));

  // second-derivative component c pairs the first-derivative directions
  const int pair_a[3] = {0, 0, 1};
  const int pair_b[3] = {0, 1, 1};
  for (int I = 0; I < n; ++I) {
    const double p = P(I);
    const Vec2 dp = w(I) * raw.dN.row(I).transpose();
    e.N(I) = p / W;
    for (int a = 0; a < 2; ++a) e.dN(I, a) = (dp(a) * W - p * dW(a)) / (W * W);
    for (int c = 0; c < 3; ++c) {
      const int a = pair_a[c], b = pair_b[c];
      const double d2p = w(I) * raw.d2N(I, c);
      e.d2N(I, c) = d2p / W -
                    (dp(a) * dW(b) + dp(b) * dW(a) + p * d2W(c)) / (W * W) +
                    2.0 * p * dW(a) * dW(b) / (W * W * W);
    }
  }
  return e;
}

// Abscissae/weights of the 1..6 point Gauss-Legendre rules on [-1,1].
const std::vector<std::vector<double>>& gauss_nodes() {
  static const std::vector<std::vector<double>> nodes = {
      {0.0},
      {-0.5773502691896257645091488, 0.5773502691896257645091488},
      {-0.7745966692414833770358531, 0.0, 0.7745966692414833770358531},
      {-0.8611363115940525752239465, -0.3399810435848562648026658,
       0.3399810435848562648026658, 0.8611363115940525752239465},
      {-0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
       0.5384693101056830910363144, 0.9061798459386639927976269},
      {-0.9324695142031520278123016, -0.6612093864662645136613996,
       -0.2386191860831969086305017, 0.2386191860831969086305017,
       0.6612093864662645136613996, 0.9324695142031520278123016}};
  return nodes;
}

const std::vector<std::vector<double>>& gauss_weights() {
  static const std::vector<std::vector<double>> weights = {
      {2.0},
      {1.0, 1.0},
      {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0},
      {0.3478548451374538573730639, 0.6521451548625461426269361,
       0.6521451548625461426269361, 0.3478548451374538573730639},
      {0.2369268850561890875142640, 0.4786286704993664680412915,
       0.5688888888888888888888889, 0.4786286704993664680412915,
       0.2369268850561890875142640},
      {0.1713244923791703450402961, 0.3607615730481386075698335,
       0.4679139345726910473898703, 0.4679139345726910473898703,
       0.3607615730481386075698335, 0.1713244923791703450402961}};
  return weights;
}

}  // namespace

int ElementBasis::node_count() const {
  switch (kind) {
    case BasisKind::LagrangeLinear:
      return 4;
    case BasisKind::LagrangeQuadratic:
      return 9;
    case BasisKind::BezierExtracted:
      return static_cast<int>(extraction.rows());
  }
  throw std::invalid_argument("unknown element basis kind");
}

void ElementBasis::validate() const {
  if (kind != BasisKind::BezierExtracted) return;
  const int nb = (degree + 1) * (degree + 1);
  if (degree < 1) throw std::invalid_argument("Bezier degree must be >= 1");
  if (extraction.cols() != nb)
    throw std::invalid_argument("extraction operator column count does not match degree");
  if (extraction.rows() < 1)
    throw std::invalid_argument("extraction operator has no rows");
  if (!extraction.allFinite())
    throw std::invalid_argument("extraction operator has non-finite entries");
  if (weights.size() != extraction.rows())
    throw std::invalid_argument("weight count does not match extraction rows");
  if ((weights.array() <= 0.0).any())
    throw std::invalid_argument("rational weights must be strictly positive");
}

ElementBasis ElementBasis::lagrange_linear() {
  ElementBasis b;
  b.kind = BasisKind::LagrangeLinear;
  b.degree = 1;
  return b;
}

ElementBasis ElementBasis::lagrange_quadratic() {
  ElementBasis b;
  b.kind = BasisKind::LagrangeQuadratic;
  b.degree = 2;
  return b;
}

ElementBasis ElementBasis::bezier(int degree, MatX extraction, VecX weights) {
  ElementBasis b;
  b.kind = BasisKind::BezierExtracted;
  b.degree = degree;
  b.extraction = std::move(extraction);
  b.weights = std::move(weights);
  b.validate();
  return b;
}

BasisEval eval_basis(const ElementBasis& basis, const Vec2& xi) {
  const double x1 = clamp_coord(xi(0));
  const double x2 = clamp_coord(xi(1));

  switch (basis.kind) {
    case BasisKind::LagrangeLinear:
      return tensor_product(lagrange1d_linear(x1), lagrange1d_linear(x2));
    case BasisKind::LagrangeQuadratic:
      return tensor_product(lagrange1d_quadratic(x1), lagrange1d_quadratic(x2));
    case BasisKind::BezierExtracted: {
      basis.validate();
      const BasisEval bern =
          tensor_product(bernstein1d(basis.degree, x1), bernstein1d(basis.degree, x2));
      BasisEval raw;
      raw.N = basis.extraction * bern.N;
      raw.dN = basis.extraction * bern.dN;
      raw.d2N = basis.extraction * bern.d2N;
      return rationalize(raw, basis.weights);
    }
  }
  throw std::invalid_argument("unknown element basis kind");
}

QuadratureRule gauss_rule(int n_per_dir) {
  if (n_per_dir < 1 || n_per_dir > 6)
    throw std::invalid_argument("gauss_rule order must be in 1..6");
  const auto& xs = gauss_nodes()[n_per_dir - 1];
  const auto& ws = gauss_weights()[n_per_dir - 1];
  QuadratureRule rule;
  rule.order = n_per_dir;
  for (int j = 0; j < n_per_dir; ++j)
    for (int i = 0; i < n_per_dir; ++i) {
      rule.points.emplace_back(xs[i], xs[j]);
      rule.weights.push_back(ws[i] * ws[j]);
    }
  return rule;
}

QuadratureRule1D gauss_rule_1d(int n) {
  if (n < 1 || n > 6) throw std::invalid_argument("gauss_rule_1d order must be in 1..6");
  return {gauss_nodes()[n - 1], gauss_weights()[n - 1]};
}

int default_quadrature_order(const ElementBasis& basis) {
  switch (basis.kind) {
    case BasisKind::LagrangeLinear:
      return 2;
    case BasisKind::LagrangeQuadratic:
      return 3;
    case BasisKind::BezierExtracted:
      return basis.degree <= 2 ? 3 : 4;
  }
  return 3;
}

}  // namespace memfem
