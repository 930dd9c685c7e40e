#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "memfem/mesh.hpp"

using namespace memfem;
using testutil::urand;

TEST_CASE("flat rectangular patch has the analytic metric") {
  // mapping x = (2 xi1 + 1, 3 xi2 - 1, 0): a1 = (2,0,0), a2 = (0,3,0)
  std::vector<Vec3> nodes = {{-1, -4, 0}, {3, -4, 0}, {-1, 2, 0}, {3, 2, 0}};
  const ElementBasis lin = ElementBasis::lagrange_linear();
  auto gen = testutil::rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const BasisEval be = eval_basis(lin, Vec2(urand(gen), urand(gen)));
    const SurfaceFrame f = frame(be, nodes, true);
    CHECK((f.a1 - Vec3(2, 0, 0)).norm() < 1e-13);
    CHECK((f.a2 - Vec3(0, 3, 0)).norm() < 1e-13);
    CHECK(f.a_cov(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(f.a_cov(1, 1) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(std::abs(f.a_cov(0, 1)) < 1e-13);
    CHECK(f.Ja == doctest::Approx(6.0).epsilon(1e-14));
    CHECK((f.n - Vec3(0, 0, 1)).norm() < 1e-13);
    CHECK(f.b_cov.cwiseAbs().maxCoeff() < 1e-12);  // flat: zero curvature
    CHECK(mean_curvature_trace(f) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("dual basis and inverse metric on random elements") {
  auto gen = testutil::rng(4);
  for (BasisKind kind :
       {BasisKind::LagrangeLinear, BasisKind::LagrangeQuadratic, BasisKind::BezierExtracted}) {
    const ElementBasis basis = testutil::basis_for(kind, &gen);
    for (int trial = 0; trial < 20; ++trial) {
      const auto nodes = testutil::random_patch(basis, gen);
      const BasisEval be = eval_basis(basis, Vec2(urand(gen, -0.9, 0.9), urand(gen, -0.9, 0.9)));
      const SurfaceFrame f = frame(be, nodes);

      // a^a . a_b = delta^a_b
      CHECK(f.a_dual1.dot(f.a1) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(f.a_dual2.dot(f.a2) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(f.a_dual1.dot(f.a2)) < 1e-12);
      CHECK(std::abs(f.a_dual2.dot(f.a1)) < 1e-12);

      // a_con is the inverse of a_cov
      CHECK(((f.a_con * f.a_cov) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(f.Ja == doctest::Approx(std::sqrt(f.a_cov.determinant())).epsilon(1e-13));

      // n unit, orthogonal to the tangents
      CHECK(f.n.norm() == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(f.n.dot(f.a1)) < 1e-12);
      CHECK(std::abs(f.n.dot(f.a2)) < 1e-12);
    }
  }
}

TEST_CASE("exact NURBS sphere octant geometry") {
  const double R = 1.7;
  const Mesh mesh = make_sphere_octant(1, 1, ElementKind::NurbsQuadratic, R);
  REQUIRE(mesh.elements.size() == 1);
  const Element& e = mesh.elements[0];
  std::vector<Vec3> nodes;
  for (int id : e.nodes) nodes.push_back(mesh.ref_coords[id]);

  auto gen = testutil::rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const BasisEval be = eval_basis(e.basis, Vec2(urand(gen, -0.999, 0.999),
                                                  urand(gen, -0.999, 0.98)));
    Vec3 x = Vec3::Zero();
    for (int I = 0; I < be.N.size(); ++I) x += be.N(I) * nodes[I];
    CHECK(x.norm() == doctest::Approx(R).epsilon(1e-13));  // exact rational sphere
    CHECK(x(0) >= -1e-12);
    CHECK(x(1) >= -1e-12);
    CHECK(x(2) >= -1e-12);

    const SurfaceFrame f = frame(be, nodes, true);
    CHECK((f.n - x / R).norm() < 1e-11);  // outward normal
    // b^a_a = -2/r with the outward-normal convention
    CHECK(mean_curvature_trace(f) == doctest::Approx(-2.0 / R).epsilon(1e-10));
  }
}

TEST_CASE("curvature of a Lagrange quadratic sphere patch") {
  const double R = 2.0;
  const Mesh mesh = make_sphere_octant(4, 4, ElementKind::LagrangeQuadratic, R);
  const Element& e = mesh.elements[1];
  std::vector<Vec3> nodes;
  for (int id : e.nodes) nodes.push_back(mesh.ref_coords[id]);
  const BasisEval be = eval_basis(e.basis, Vec2(0.3, -0.2));
  const SurfaceFrame f = frame(be, nodes, true);
  // interpolated geometry: curvature accurate to mesh truncation error only
  CHECK(mean_curvature_trace(f) == doctest::Approx(-2.0 / R).epsilon(5e-3));
}

TEST_CASE("deformation measures under uniform scaling") {
  auto gen = testutil::rng(6);
  const ElementBasis basis = ElementBasis::lagrange_quadratic();
  const auto ref_nodes = testutil::random_patch(basis, gen);
  const double s = 1.37;
  std::vector<Vec3> cur_nodes = ref_nodes;
  for (auto& x : cur_nodes) x *= s;

  const BasisEval be = eval_basis(basis, Vec2(0.21, -0.43));
  const SurfaceFrame ref = frame(be, ref_nodes);
  const SurfaceFrame cur = frame(be, cur_nodes);
  const DeformationMeasures def = deformation(ref, cur);
  CHECK(def.J == doctest::Approx(s * s).epsilon(1e-13));
  // A_con_push carries the reference contravariant metric components
  CHECK(((def.A_con_push - ref.a_con)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("prestretch rescales the reference metric") {
  auto gen = testutil::rng(16);
  const ElementBasis basis = ElementBasis::lagrange_linear();
  const auto nodes = testutil::random_patch(basis, gen);
  const BasisEval be = eval_basis(basis, Vec2(0.1, 0.5));
  const SurfaceFrame plain = frame(be, nodes);
  SurfaceFrame pre = frame(be, nodes);
  const double lam0 = 1.05;
  apply_prestretch(pre, lam0);

  CHECK(((pre.a_cov * lam0 * lam0) - plain.a_cov).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(pre.Ja * lam0 * lam0 == doctest::Approx(plain.Ja).epsilon(1e-13));
  CHECK(((pre.a_con / (lam0 * lam0)) - plain.a_con).cwiseAbs().maxCoeff() < 1e-13);

  // identical current coordinates then register as a lam0^2 area stretch
  const DeformationMeasures def = deformation(pre, plain);
  CHECK(def.J == doctest::Approx(lam0 * lam0).epsilon(1e-13));
}

TEST_CASE("degenerate frames are rejected") {
  // all nodes on one line: a1 x a2 = 0
  std::vector<Vec3> nodes = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  const BasisEval be = eval_basis(ElementBasis::lagrange_linear(), Vec2(0.0, 0.0));
  CHECK_THROWS_AS(frame(be, nodes), DegenerateFrameError);
}

TEST_CASE("inverted deformation is rejected") {
  auto gen = testutil::rng(17);
  const ElementBasis basis = ElementBasis::lagrange_linear();
  const auto nodes = testutil::random_patch(basis, gen, 0.0);
  const BasisEval be = eval_basis(basis, Vec2(0.0, 0.0));
  const SurfaceFrame ref = frame(be, nodes);
  SurfaceFrame cur = ref;
  cur.Ja = -1.0;
  CHECK_THROWS(deformation(ref, cur));
}
