#include "memfem/geometry.hpp"

#include <cmath>

namespace memfem {

SurfaceFrame frame(const BasisEval& be, std::span<const Vec3> nodal_coords,
                   bool with_curvature, double eps_det) {
  const int n = static_cast<int>(be.N.size());
  if (static_cast<int>(nodal_coords.size()) != n)
    throw std::invalid_argument("nodal coordinate count does not match basis");

  SurfaceFrame f;
  f.a1.setZero();
  f.a2.setZero();
  for (int I = 0; I < n; ++I) {
    f.a1 += be.dN(I, 0) * nodal_coords[I];
    f.a2 += be.dN(I, 1) * nodal_coords[I];
  }

  f.a_cov(0, 0) = f.a1.dot(f.a1);
  f.a_cov(0, 1) = f.a_cov(1, 0) = f.a1.dot(f.a2);
  f.a_cov(1, 1) = f.a2.dot(f.a2);

  const double det = f.a_cov(0, 0) * f.a_cov(1, 1) - f.a_cov(0, 1) * f.a_cov(0, 1);
  const double scale = f.a_cov(0, 0) + f.a_cov(1, 1);
  if (!(det > eps_det * scale * scale))
    throw DegenerateFrameError("degenerate surface frame: det a_{ab} vanishes");

  // explicit 2x2 inversion
  f.a_con(0, 0) = f.a_cov(1, 1) / det;
  f.a_con(1, 1) = f.a_cov(0, 0) / det;
  f.a_con(0, 1) = f.a_con(1, 0) = -f.a_cov(0, 1) / det;

  f.a_dual1 = f.a_con(0, 0) * f.a1 + f.a_con(0, 1) * f.a2;
  f.a_dual2 = f.a_con(1, 0) * f.a1 + f.a_con(1, 1) * f.a2;

  f.Ja = std::sqrt(det);
  f.n = f.a1.cross(f.a2) / f.Ja;

  if (with_curvature) {
    Vec3 x11 = Vec3::Zero(), x12 = Vec3::Zero(), x22 = Vec3::Zero();
    for (int I = 0; I < n; ++I) {
      x11 += be.d2N(I, 0) * nodal_coords[I];
      x12 += be.d2N(I, 1) * nodal_coords[I];
      x22 += be.d2N(I, 2) * nodal_coords[I];
    }
    f.b_cov(0, 0) = f.n.dot(x11);
    f.b_cov(0, 1) = f.b_cov(1, 0) = f.n.dot(x12);
    f.b_cov(1, 1) = f.n.dot(x22);
    f.has_curvature = true;
  } else {
    f.b_cov.setZero();
  }
  return f;
}

void apply_prestretch(SurfaceFrame& ref, double lambda0) {
  if (lambda0 == 1.0) return;
  const double s = lambda0 * lambda0;
  ref.a_cov /= s;
  ref.a_con *= s;
  ref.Ja /= s;
  ref.a_dual1 *= s;  // A^a = A^{ab} A_b with A_b unchanged
  ref.a_dual2 *= s;
}

DeformationMeasures deformation(const SurfaceFrame& ref, const SurfaceFrame& cur) {
  DeformationMeasures d;
  d.J = cur.Ja / ref.Ja;
  if (!(d.J > 0.0)) throw std::runtime_error("inverted mapping: J <= 0");
  d.A_con_push = ref.a_con;
  return d;
}

double mean_curvature_trace(const SurfaceFrame& f) {
  if (!f.has_curvature)
    throw std::logic_error("mean_curvature_trace: curvature not computed");
  return (f.a_con * f.b_cov).trace();
}

}  // namespace memfem
