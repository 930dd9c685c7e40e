#include "memfem/material.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace memfem {

namespace {

// unit alternator e^{ab}
constexpr double alternator(int a, int b) {
  return (a == 0 && b == 1) ? 1.0 : (a == 1 && b == 0) ? -1.0 : 0.0;
}

Moduli neo_hooke_moduli(double muT, double J, const Mat2& a_con, double det_a) {
  Moduli c;
  const double f = muT / (J * J);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int g = 0; g < 2; ++g)
        for (int d = 0; d < 2; ++d)
          c(a, b, g, d) = f * (4.0 * a_con(a, b) * a_con(g, d) -
                               (alternator(a, g) * alternator(b, d) +
                                alternator(a, d) * alternator(b, g)) /
                                   det_a);
  return c;
}

Moduli liquid_moduli(double gamma, double J, const Mat2& a_con, double det_a) {
  Moduli c;
  const double f = gamma * J;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int g = 0; g < 2; ++g)
        for (int d = 0; d < 2; ++d)
          c(a, b, g, d) = f * ((alternator(a, g) * alternator(b, d) +
                                alternator(a, d) * alternator(b, g)) /
                                   det_a -
                               a_con(a, b) * a_con(g, d));
  return c;
}

Mat2 neo_hooke_tau(double muT, double J, const Mat2& A_con, const Mat2& a_con) {
  return muT * (A_con - a_con / (J * J));
}

}  // namespace

void validate(const MaterialModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NeoHooke>) {
          if (!(m.muT > 0.0)) throw std::invalid_argument("muT must be positive");
        } else if constexpr (std::is_same_v<T, Liquid>) {
          if (!(m.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
        } else {
          if (!(m.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
          if (m.mu_stab < 0.0) throw std::invalid_argument("mu_stab must be >= 0");
          if (m.mu_stab > 0.1 * m.gamma)
            std::cerr << "warning: mu_stab = " << m.mu_stab
                      << " exceeds 0.1*gamma; stabilization may affect results\n";
        }
      },
      model);
}

bool needs_split(const MaterialModel& model) {
  return std::holds_alternative<StabilizedLiquid>(model);
}

StressState evaluate(const MaterialModel& model, const DeformationMeasures& def,
                     const SurfaceFrame& cur) {
  if (!(def.J > 0.0)) throw std::runtime_error("material evaluate: J <= 0");
  const double det_a = cur.Ja * cur.Ja;

  StressState s;
  s.J = def.J;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NeoHooke>) {
          s.tau = neo_hooke_tau(m.muT, def.J, def.A_con_push, cur.a_con);
          s.c = neo_hooke_moduli(m.muT, def.J, cur.a_con, det_a);
          s.thickness_ratio = 1.0 / def.J;
        } else if constexpr (std::is_same_v<T, Liquid>) {
          s.tau = m.gamma * def.J * cur.a_con;
          s.c = liquid_moduli(m.gamma, def.J, cur.a_con, det_a);
        } else {
          s.tau = m.gamma * def.J * cur.a_con;
          s.tau_stab = neo_hooke_tau(m.mu_stab, def.J, def.A_con_push, cur.a_con);
          s.c = liquid_moduli(m.gamma, def.J, cur.a_con, det_a);
        }
      },
      model);
  return s;
}

Mat2 mixed_stress(const Mat2& tau, const SurfaceFrame& cur, double J) {
  return tau * cur.a_cov / J;
}

double min_principal_stress(const Mat2& sigma_mixed) {
  if (!sigma_mixed.allFinite())
    throw std::invalid_argument("min_principal_stress: non-finite input");
  const double i1 = sigma_mixed.trace();
  const double i2 = sigma_mixed.determinant();
  double disc = 0.25 * i1 * i1 - i2;
  const double scale = std::max(1.0, i1 * i1);
  if (disc < 0.0) {
    if (disc < -1e-12 * scale)
      throw std::invalid_argument("min_principal_stress: negative discriminant");
    disc = 0.0;
  }
  return 0.5 * i1 - std::sqrt(disc);
}

}  // namespace memfem
