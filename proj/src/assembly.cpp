#include "memfem/assembly.hpp"

#include <cmath>
#include <limits>

namespace memfem {

namespace {

double gamma_of(const MaterialModel& model) {
  if (const auto* l = std::get_if<Liquid>(&model)) return l->gamma;
  if (const auto* s = std::get_if<StabilizedLiquid>(&model)) return s->gamma;
  return 0.0;
}

double pressure_at(const LoadCase& load, double p_v, const Vec3& x) {
  double p = (load.pressure_mode == PressureMode::VolumeConstraint) ? p_v : load.prescribed_p;
  if (load.hydrostatic)
    p += load.hydrostatic->sign * load.hydrostatic->rho * load.hydrostatic->g_vec.dot(x);
  return p;
}

Vec3 interp(const BasisEval& be, std::span<const Vec3> xe) {
  Vec3 x = Vec3::Zero();
  for (size_t I = 0; I < xe.size(); ++I) x += be.N(I) * xe[I];
  return x;
}

}  // namespace

AssemblyContext AssemblyContext::build(const Mesh& mesh, int quadrature_order) {
  AssemblyContext ctx;
  ctx.quadrature_order = quadrature_order;
  ctx.elements.reserve(mesh.elements.size());
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    const Element& elem = mesh.elements[e];
    ElementCache ec;
    ec.element_id = static_cast<int>(e);
    ec.nodes = elem.nodes;
    ec.basis = elem.basis;
    for (int id : elem.nodes) ec.X.push_back(mesh.ref_coords[id]);

    const int order =
        quadrature_order > 0 ? quadrature_order : default_quadrature_order(elem.basis);
    const QuadratureRule rule = gauss_rule(order);
    double area = 0.0;
    for (size_t g = 0; g < rule.points.size(); ++g) {
      ElementQP qp;
      qp.be = eval_basis(elem.basis, rule.points[g]);
      qp.ref = frame(qp.be, ec.X);
      apply_prestretch(qp.ref, mesh.prestretch);
      qp.w = rule.weights[g];
      area += qp.w * qp.ref.Ja;
      ec.qps.push_back(std::move(qp));
    }
    ec.h = std::sqrt(std::abs(area));
    ctx.elements.push_back(std::move(ec));
  }
  return ctx;
}

std::vector<QPState> eval_states(const ElementCache& ec, std::span<const Vec3> xe,
                                 const MaterialModel& model, bool with_curvature) {
  std::vector<QPState> st;
  st.reserve(ec.qps.size());
  for (const auto& qp : ec.qps) {
    QPState s;
    s.cur = frame(qp.be, xe, with_curvature);
    s.def = deformation(qp.ref, s.cur);
    s.stress = evaluate(model, s.def, s.cur);
    st.push_back(std::move(s));
  }
  return st;
}

VecX element_fint(const ElementCache& ec, const std::vector<QPState>& st,
                  std::span<const Vec3> xe) {
  const int n = static_cast<int>(xe.size());
  VecX f = VecX::Zero(3 * n);
  for (size_t g = 0; g < ec.qps.size(); ++g) {
    const auto& qp = ec.qps[g];
    const Mat2& tau = st[g].stress.tau;
    const double wJA = qp.w * qp.ref.Ja;
    // N^T_{,a} tau^{ab} N_{,b} x_e
    for (int I = 0; I < n; ++I) {
      Vec3 fi = Vec3::Zero();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) fi += qp.be.dN(I, a) * tau(a, b) * st[g].cur.a(b);
      f.segment<3>(3 * I) += wJA * fi;
    }
  }
  return f;
}

SplitForces element_fint_split(const ElementCache& ec, const std::vector<QPState>& st,
                               std::span<const Vec3> xe, bool use_stab_stress) {
  const int n = static_cast<int>(xe.size());
  SplitForces out;
  out.f_inti = VecX::Zero(3 * n);
  out.f_into = VecX::Zero(3 * n);
  for (size_t g = 0; g < ec.qps.size(); ++g) {
    const auto& qp = ec.qps[g];
    const QPState& s = st[g];
    if (!s.cur.has_curvature)
      throw std::logic_error("element_fint_split requires curvature data");
    const Mat2& tau = use_stab_stress ? s.stress.tau_stab : s.stress.tau;
    const double wJA = qp.w * qp.ref.Ja;

    // second parametric derivatives of the mapping
    Vec3 x_ab[2][2];
    {
      Vec3 x11 = Vec3::Zero(), x12 = Vec3::Zero(), x22 = Vec3::Zero();
      for (int I = 0; I < n; ++I) {
        x11 += qp.be.d2N(I, 0) * xe[I];
        x12 += qp.be.d2N(I, 1) * xe[I];
        x22 += qp.be.d2N(I, 2) * xe[I];
      }
      x_ab[0][0] = x11;
      x_ab[0][1] = x_ab[1][0] = x12;
      x_ab[1][1] = x22;
    }

    for (int I = 0; I < n; ++I) {
      Vec3 in_plane = Vec3::Zero();
      double normal_part = 0.0;  // tau^{ab} n . x_{,ab}
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          in_plane += qp.be.dN(I, a) * tau(a, b) * s.cur.a(b);
          normal_part += tau(a, b) * s.cur.n.dot(x_ab[a][b]);
        }
      const Vec3 oop = qp.be.N(I) * normal_part * s.cur.n;
      out.f_inti.segment<3>(3 * I) += wJA * (in_plane + oop);
      out.f_into.segment<3>(3 * I) -= wJA * oop;
    }
  }
  return out;
}

ExternalForces element_fext(const ElementCache& ec, const std::vector<QPState>& st,
                            const LoadCase& load, double p_v, std::span<const Vec3> xe) {
  const int n = static_cast<int>(xe.size());
  ExternalForces out;
  out.f_ext = VecX::Zero(3 * n);
  out.l_ext = VecX::Zero(3 * n);
  for (size_t g = 0; g < ec.qps.size(); ++g) {
    const auto& qp = ec.qps[g];
    const QPState& s = st[g];
    const double wJA = qp.w * qp.ref.Ja;   // reference measure
    const double wJa = qp.w * s.cur.Ja;    // current measure
    const Vec3 x = interp(qp.be, xe);
    const double p = pressure_at(load, p_v, x);
    for (int I = 0; I < n; ++I) {
      out.f_ext.segment<3>(3 * I) += qp.be.N(I) * (wJA * load.dead_load + wJa * p * s.cur.n);
      out.l_ext.segment<3>(3 * I) += qp.be.N(I) * wJa * s.cur.n;
    }
  }

  // dead boundary tractions, 1D Gauss along the edge parameter
  for (const auto& et : load.edge_tractions) {
    if (et.element != ec.element_id) continue;
    const int order = default_quadrature_order(ec.basis);
    const QuadratureRule1D rule1d = gauss_rule_1d(order);
    for (int q = 0; q < order; ++q) {
      const double t = rule1d.points[q];
      Vec2 xi;
      int tangent_dir;
      switch (et.edge) {
        case 0: xi = Vec2(t, -1.0); tangent_dir = 0; break;
        case 1: xi = Vec2(1.0, t); tangent_dir = 1; break;
        case 2: xi = Vec2(t, 1.0); tangent_dir = 0; break;
        case 3: xi = Vec2(-1.0, t); tangent_dir = 1; break;
        default: throw std::invalid_argument("invalid edge index");
      }
      const BasisEval be = eval_basis(ec.basis, xi);
      Vec3 tang = Vec3::Zero();
      for (int I = 0; I < n; ++I) tang += be.dN(I, tangent_dir) * ec.X[I];
      const double ds = tang.norm() * rule1d.weights[q];
      for (int I = 0; I < n; ++I)
        out.f_ext.segment<3>(3 * I) += be.N(I) * ds * et.traction;
    }
  }
  return out;
}

ContactForces element_contact(const ElementCache& ec, const std::vector<QPState>& st,
                              const std::vector<Obstacle>& obstacles,
                              std::span<const Vec3> xe) {
  const int n = static_cast<int>(xe.size());
  ContactForces out;
  out.f_c = VecX::Zero(3 * n);
  out.k_c = MatX::Zero(3 * n, 3 * n);
  if (obstacles.empty()) return out;

  for (size_t g = 0; g < ec.qps.size(); ++g) {
    const auto& qp = ec.qps[g];
    const QPState& s = st[g];
    const double wJa = qp.w * s.cur.Ja;
    const Vec3 x = interp(qp.be, xe);
    for (const auto& obs : obstacles) {
      const ContactPoint cp = project_to_obstacle(obs, x);
      if (cp.gap >= 0.0) continue;
      const Vec3 t_c = -obs.epsilon_n * cp.gap * cp.normal;

      // d t_c / d x = -eps (n_p n_p^T + g_n * dn_p/dx); dn_p/dx = (I - n n^T)/|x-c|
      Mat3 dt = -obs.epsilon_n * (cp.normal * cp.normal.transpose());
      if (cp.inv_dist > 0.0)
        dt += -obs.epsilon_n * cp.gap * cp.inv_dist *
              (Mat3::Identity() - cp.normal * cp.normal.transpose());

      for (int I = 0; I < n; ++I) {
        out.f_c.segment<3>(3 * I) += qp.be.N(I) * wJa * t_c;
        for (int J = 0; J < n; ++J) {
          // traction variation
          out.k_c.block<3, 3>(3 * I, 3 * J) += qp.be.N(I) * qp.be.N(J) * wJa * dt;
          // area variation: D(da) = (a^a . N_{,a} Dx_e) da
          const Vec3 da_row =
              qp.be.dN(J, 0) * s.cur.a_dual1 + qp.be.dN(J, 1) * s.cur.a_dual2;
          out.k_c.block<3, 3>(3 * I, 3 * J) +=
              qp.be.N(I) * wJa * (t_c * da_row.transpose());
        }
      }
    }
  }
  return out;
}

VolumeContribution element_volume(const ElementCache& ec, const std::vector<QPState>& st,
                                  std::span<const Vec3> xe) {
  const int n = static_cast<int>(xe.size());
  VolumeContribution out;
  out.h_v = VecX::Zero(3 * n);
  for (size_t g = 0; g < ec.qps.size(); ++g) {
    const auto& qp = ec.qps[g];
    const QPState& s = st[g];
    const double wJa = qp.w * s.cur.Ja;
    const Vec3 x = interp(qp.be, xe);
    const double xn = x.dot(s.cur.n);
    out.g_v_e += wJa * xn / 3.0;
    for (int I = 0; I < n; ++I) {
      Vec3 h = qp.be.N(I) * s.cur.n;
      for (int a = 0; a < 2; ++a)
        h += qp.be.dN(I, a) * (xn * s.cur.a_dual(a) - x.dot(s.cur.a_dual(a)) * s.cur.n);
      out.h_v.segment<3>(3 * I) += (wJa / 3.0) * h;
    }
  }
  return out;
}

MatX element_kint(const ElementCache& ec, const std::vector<QPState>& st) {
  const int n = static_cast<int>(ec.nodes.size());
  MatX k = MatX::Zero(3 * n, 3 * n);
  for (size_t g = 0; g < ec.qps.size(); ++g) {
    const auto& qp = ec.qps[g];
    const QPState& s = st[g];
    const double wJA = qp.w * qp.ref.Ja;

    // material part: c^{abgd} N^T_{,a} (a_b x a_g) N_{,d}
    Mat3 kernel[2][2];  // kernel[a][d] = sum_{b,g} c^{abgd} a_b x a_g
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d) {
        Mat3 m = Mat3::Zero();
        for (int b = 0; b < 2; ++b)
          for (int gg = 0; gg < 2; ++gg)
            m += s.stress.c(a, b, gg, d) * (s.cur.a(b) * s.cur.a(gg).transpose());
        kernel[a][d] = m;
      }

    for (int I = 0; I < n; ++I)
      for (int J = 0; J < n; ++J) {
        Mat3 block = Mat3::Zero();
        double geo = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int d = 0; d < 2; ++d) {
            block += qp.be.dN(I, a) * kernel[a][d] * qp.be.dN(J, d);
            geo += qp.be.dN(I, a) * s.stress.tau(a, d) * qp.be.dN(J, d);
          }
        block += geo * Mat3::Identity();
        k.block<3, 3>(3 * I, 3 * J) += wJA * block;
      }
  }
  return k;
}

MatX element_kext(const ElementCache& ec, const std::vector<QPState>& st,
                  const LoadCase& load, double p_v, std::span<const Vec3> xe) {
  const int n = static_cast<int>(xe.size());
  MatX k = MatX::Zero(3 * n, 3 * n);
  for (size_t g = 0; g < ec.qps.size(); ++g) {
    const auto& qp = ec.qps[g];
    const QPState& s = st[g];
    const double wJa = qp.w * s.cur.Ja;
    const Vec3 x = interp(qp.be, xe);
    const double p = pressure_at(load, p_v, x);

    for (int I = 0; I < n; ++I)
      for (int J = 0; J < n; ++J) {
        Mat3 block = Mat3::Zero();
        // live pressure: p (n x a^a - a^a x n) N_{,a}
        for (int a = 0; a < 2; ++a)
          block += p * qp.be.dN(J, a) *
                   (s.cur.n * s.cur.a_dual(a).transpose() -
                    s.cur.a_dual(a) * s.cur.n.transpose());
        // hydrostatic: Dp = sign * rho * g . (N Dx_e)
        if (load.hydrostatic)
          block += load.hydrostatic->sign * load.hydrostatic->rho * qp.be.N(J) *
                   (s.cur.n * load.hydrostatic->g_vec.transpose());
        k.block<3, 3>(3 * I, 3 * J) += qp.be.N(I) * wJa * block;
      }
  }
  return k;
}

MatX element_kstab_fd(const ElementCache& ec, std::span<const Vec3> xe,
                      const MaterialModel& model) {
  const int n = static_cast<int>(xe.size());
  MatX k = MatX::Zero(3 * n, 3 * n);
  if (!needs_split(model)) return k;
  const double step = 1e-7 * ec.h;

  std::vector<Vec3> pert(xe.begin(), xe.end());
  auto finti = [&](const std::vector<Vec3>& coords) {
    const auto st = eval_states(ec, coords, model, /*with_curvature=*/true);
    return element_fint_split(ec, st, coords, /*use_stab_stress=*/true).f_inti;
  };
  for (int dof = 0; dof < 3 * n; ++dof) {
    const int node = dof / 3, comp = dof % 3;
    const double saved = pert[node](comp);
    pert[node](comp) = saved + step;
    const VecX fp = finti(pert);
    pert[node](comp) = saved - step;
    const VecX fm = finti(pert);
    pert[node](comp) = saved;
    k.col(dof) = (fp - fm) / (2.0 * step);
  }
  return k;
}

GlobalSystem assemble(const Mesh& mesh, const AssemblyContext& ctx,
                      const BoundaryConditions& bcs, const LoadCase& load,
                      const SystemState& state, const MaterialModel& model,
                      bool with_tangent) {
  const int n_dof = 3 * mesh.node_count();
  GlobalSystem sys;
  sys.residual = VecX::Zero(n_dof);
  sys.h_v = VecX::Zero(n_dof);
  sys.l_ext = VecX::Zero(n_dof);
  sys.min_sigma = std::numeric_limits<double>::infinity();
  sys.max_tension_err = 0.0;
  sys.p_min = std::numeric_limits<double>::infinity();
  sys.p_max = -std::numeric_limits<double>::infinity();

  const bool split = needs_split(model);
  const double gamma = gamma_of(model);
  std::vector<Eigen::Triplet<double>> trips;

  std::vector<Vec3> xe;
  for (const auto& ec : ctx.elements) {
    const int n = static_cast<int>(ec.nodes.size());
    xe.clear();
    for (int id : ec.nodes) xe.push_back(state.coords[id]);

    const auto st = eval_states(ec, xe, model, split);

    VecX f_int = element_fint(ec, st, xe);
    if (split) f_int += element_fint_split(ec, st, xe, /*use_stab_stress=*/true).f_inti;

    const ExternalForces ext = element_fext(ec, st, load, state.p_v, xe);
    const ContactForces con = element_contact(ec, st, load.obstacles, xe);
    const VolumeContribution vol = element_volume(ec, st, xe);

    MatX k;
    if (with_tangent) {
      k = element_kint(ec, st) - element_kext(ec, st, load, state.p_v, xe) - con.k_c;
      if (split) k += element_kstab_fd(ec, xe, model);
    }

    const VecX f_e = f_int - ext.f_ext - con.f_c;
    sys.force_scale += f_int.norm() + ext.f_ext.norm() + con.f_c.norm();

    // monitors
    for (size_t g = 0; g < st.size(); ++g) {
      const QPState& s = st[g];
      const Mat2 tau_total = s.stress.tau + s.stress.tau_stab;
      const Mat2 sig = mixed_stress(tau_total, s.cur, s.def.J);
      sys.min_sigma = std::min(sys.min_sigma, min_principal_stress(sig));
      if (gamma > 0.0)
        sys.max_tension_err =
            std::max(sys.max_tension_err, std::abs(sig.trace() / (2.0 * gamma) - 1.0));
      const double p = pressure_at(load, state.p_v, interp(ec.qps[g].be, xe));
      sys.p_min = std::min(sys.p_min, p);
      sys.p_max = std::max(sys.p_max, p);
    }

    // scatter
    for (int I = 0; I < n; ++I) {
      const int gi = ec.nodes[I];
      for (int i = 0; i < 3; ++i) {
        const int row = 3 * gi + i;
        sys.residual(row) += f_e(3 * I + i);
        sys.h_v(row) += vol.h_v(3 * I + i);
        sys.l_ext(row) += ext.l_ext(3 * I + i);
        if (bcs.is_fixed(gi, i) || !with_tangent) continue;
        for (int J = 0; J < n; ++J) {
          const int gj = ec.nodes[J];
          for (int j = 0; j < 3; ++j) {
            if (bcs.is_fixed(gj, j)) continue;
            trips.emplace_back(row, 3 * gj + j, k(3 * I + i, 3 * J + j));
          }
        }
      }
    }
    sys.V += vol.g_v_e;
  }

  // Dirichlet elimination: identity rows/cols, zero residual and couplings
  for (int node = 0; node < mesh.node_count(); ++node)
    for (int i = 0; i < 3; ++i)
      if (bcs.is_fixed(node, i)) {
        const int d = 3 * node + i;
        trips.emplace_back(d, d, 1.0);
        sys.residual(d) = 0.0;
        sys.h_v(d) = 0.0;
        sys.l_ext(d) = 0.0;
      }

  sys.K.resize(n_dof, n_dof);
  sys.K.setFromTriplets(trips.begin(), trips.end());
  sys.g_v = sys.V - load.volume_target;
  return sys;
}

}  // namespace memfem
