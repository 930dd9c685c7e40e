#pragma once

#include <array>
#include <variant>

#include "memfem/geometry.hpp"
#include "memfem/types.hpp"

namespace memfem {

struct NeoHooke {
  double muT = 1.0;  // membrane stiffness mu*T (force/length)
};

struct Liquid {
  double gamma = 1.0;  // surface tension (force/length)
};

struct StabilizedLiquid {
  double gamma = 1.0;
  double mu_stab = 0.01;  // fictitious in-plane stiffness (force/length)
};

using MaterialModel = std::variant<NeoHooke, Liquid, StabilizedLiquid>;

void validate(const MaterialModel& model);
bool needs_split(const MaterialModel& model);

/// Rank-4 in-plane moduli c^{abgd} with major and minor symmetries.
struct Moduli {
  std::array<double, 16> c{};
  double& operator()(int a, int b, int g, int d) {
    return c[8 * a + 4 * b + 2 * g + d];
  }
  double operator()(int a, int b, int g, int d) const {
    return c[8 * a + 4 * b + 2 * g + d];
  }
};

struct StressState {
  Mat2 tau = Mat2::Zero();       // Kirchhoff components tau^{ab} = J sigma^{ab}
  Mat2 tau_stab = Mat2::Zero();  // in-plane-only stabilization part
  Moduli c;                      // analytic moduli (liquid/solid; excludes split terms)
  double J = 1.0;
  double thickness_ratio = 1.0;  // t/T = 1/J (NeoHooke only)
};

StressState evaluate(const MaterialModel& model, const DeformationMeasures& def,
                     const SurfaceFrame& cur);

/// Mixed Cauchy components sigma^a_b = tau^{ag} a_{gb} / J for given tau.
Mat2 mixed_stress(const Mat2& tau, const SurfaceFrame& cur, double J);

/// Minimum principal stress I1/2 - sqrt(I1^2/4 - I2) of mixed components.
double min_principal_stress(const Mat2& sigma_mixed);

}  // namespace memfem
