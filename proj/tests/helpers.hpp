#pragma once

#include <random>
#include <vector>

#include "memfem/assembly.hpp"

namespace testutil {

using namespace memfem;

inline std::mt19937 rng(unsigned seed = 42) { return std::mt19937(seed); }

inline double urand(std::mt19937& gen, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

inline ElementBasis basis_for(BasisKind kind, std::mt19937* gen = nullptr) {
  switch (kind) {
    case BasisKind::LagrangeLinear:
      return ElementBasis::lagrange_linear();
    case BasisKind::LagrangeQuadratic:
      return ElementBasis::lagrange_quadratic();
    case BasisKind::BezierExtracted: {
      // biquadratic Bezier element with mildly non-uniform rational weights
      VecX w = VecX::Ones(9);
      if (gen)
        for (int i = 0; i < 9; ++i) w(i) = 1.0 + 0.3 * urand(*gen, 0.0, 1.0);
      return ElementBasis::bezier(2, MatX::Identity(9, 9), w);
    }
  }
  throw std::logic_error("unreachable");
}

/// Control net of a gently curved, randomly perturbed surface patch.
inline std::vector<Vec3> random_patch(const ElementBasis& basis, std::mt19937& gen,
                                      double noise = 0.08) {
  const int per_dir = basis.degree + 1;
  std::vector<Vec3> nodes;
  for (int j = 0; j < per_dir; ++j)
    for (int i = 0; i < per_dir; ++i) {
      const double u = per_dir == 2 ? i : i / double(per_dir - 1);
      const double v = per_dir == 2 ? j : j / double(per_dir - 1);
      Vec3 x(u, v, 0.25 * std::sin(2.0 * u + 1.0) * std::cos(1.5 * v));
      x += noise * Vec3(urand(gen), urand(gen), urand(gen));
      nodes.push_back(x);
    }
  return nodes;
}

/// Single-element mesh plus cache for direct element-level tests.
struct SingleElement {
  Mesh mesh;
  AssemblyContext ctx;
  const ElementCache& ec() const { return ctx.elements[0]; }
};

inline SingleElement single_element(BasisKind kind, std::mt19937& gen, int quadrature = 0,
                                    double noise = 0.08) {
  SingleElement s;
  Element e;
  e.basis = basis_for(kind, &gen);
  s.mesh.ref_coords = random_patch(e.basis, gen, noise);
  e.nodes.resize(s.mesh.ref_coords.size());
  for (size_t i = 0; i < e.nodes.size(); ++i) e.nodes[i] = static_cast<int>(i);
  s.mesh.elements.push_back(std::move(e));
  s.mesh.validate();
  s.ctx = AssemblyContext::build(s.mesh, quadrature);
  return s;
}

/// Deformed copy of the reference coordinates: smooth stretch plus noise.
inline std::vector<Vec3> deformed_coords(const std::vector<Vec3>& ref, std::mt19937& gen,
                                         double amp = 0.1) {
  std::vector<Vec3> out = ref;
  for (auto& x : out) {
    x *= 1.0 + 0.2 * amp;
    x += amp * Vec3(urand(gen), urand(gen), urand(gen));
  }
  return out;
}

/// Central finite-difference gradient of a scalar functional of nodal coords.
template <class F>
VecX fd_gradient(F&& f, std::vector<Vec3> coords, double step) {
  const int n = static_cast<int>(coords.size());
  VecX g(3 * n);
  for (int dof = 0; dof < 3 * n; ++dof) {
    const int node = dof / 3, comp = dof % 3;
    const double saved = coords[node](comp);
    coords[node](comp) = saved + step;
    const double fp = f(coords);
    coords[node](comp) = saved - step;
    const double fm = f(coords);
    coords[node](comp) = saved;
    g(dof) = (fp - fm) / (2.0 * step);
  }
  return g;
}

/// Central finite-difference Jacobian of a vector functional of nodal coords.
template <class F>
MatX fd_jacobian(F&& f, std::vector<Vec3> coords, double step) {
  const int n = static_cast<int>(coords.size());
  const VecX f0 = f(coords);
  MatX j(f0.size(), 3 * n);
  for (int dof = 0; dof < 3 * n; ++dof) {
    const int node = dof / 3, comp = dof % 3;
    const double saved = coords[node](comp);
    coords[node](comp) = saved + step;
    const VecX fp = f(coords);
    coords[node](comp) = saved - step;
    const VecX fm = f(coords);
    coords[node](comp) = saved;
    j.col(dof) = (fp - fm) / (2.0 * step);
  }
  return j;
}

inline double rel_diff(const MatX& a, const MatX& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace testutil
