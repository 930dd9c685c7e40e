#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "memfem/basis.hpp"
#include "memfem/types.hpp"

namespace memfem {

/// Curvilinear kinematic quantities at one quadrature point.
struct SurfaceFrame {
  Vec3 a1, a2;          // covariant tangents
  Mat2 a_cov;           // metric a_{ab}
  Mat2 a_con;           // inverse metric a^{ab}
  Vec3 a_dual1, a_dual2;  // contravariant tangents
  Vec3 n;               // unit normal
  double Ja = 0.0;      // sqrt(det a_cov)
  bool has_curvature = false;
  Mat2 b_cov;           // curvature components b_{ab}

  const Vec3& a(int alpha) const { return alpha == 0 ? a1 : a2; }
  const Vec3& a_dual(int alpha) const { return alpha == 0 ? a_dual1 : a_dual2; }
};

struct DeformationMeasures {
  double J = 1.0;    // area stretch Ja/JA
  Mat2 A_con_push;   // reference contravariant metric components
};

struct DegenerateFrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Build a SurfaceFrame from nodal coordinates and a basis evaluation.
/// Throws DegenerateFrameError when det a_{ab} <= eps relative to the
/// tangent magnitudes (collapsed or inverted element).
SurfaceFrame frame(const BasisEval& be, std::span<const Vec3> nodal_coords,
                   bool with_curvature = false, double eps_det = 1e-14);

/// Isotropic reference-metric rescaling implementing a pre-stretch
/// lambda0: A_ab <- A_ab / lambda0^2, leaving coordinates untouched.
void apply_prestretch(SurfaceFrame& ref, double lambda0);

DeformationMeasures deformation(const SurfaceFrame& ref, const SurfaceFrame& cur);

/// Trace b^a_a = a^{ab} b_{ab} = 2H.
double mean_curvature_trace(const SurfaceFrame& f);

}  // namespace memfem
