#include "memfem/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

namespace memfem {

namespace {

constexpr double kResidualFloor = 1e-12;

void apply_parameter(LoadCase& load, const Vec3& base_dead_load, ScheduleParameter param,
                     double value) {
  switch (param) {
    case ScheduleParameter::Volume:
      load.volume_target = value;
      break;
    case ScheduleParameter::Gravity:
      if (!load.hydrostatic)
        throw std::invalid_argument("gravity schedule requires a hydrostatic load");
      load.hydrostatic->rho = value;  // value is rho*g with unit g_vec direction
      break;
    case ScheduleParameter::Pressure:
      load.prescribed_p = value;
      break;
    case ScheduleParameter::DeadLoadScale:
      load.dead_load = value * base_dead_load;
      break;
  }
}

double initial_parameter(const Problem& prob, const LoadCase& load,
                         ScheduleParameter param, double V_now) {
  switch (param) {
    case ScheduleParameter::Volume:
      return V_now;
    case ScheduleParameter::Gravity:
      return load.hydrostatic ? load.hydrostatic->rho : 0.0;
    case ScheduleParameter::Pressure:
      return load.prescribed_p;
    case ScheduleParameter::DeadLoadScale:
      return 0.0;
  }
  return 0.0;
}

double combined_residual(const GlobalSystem& sys, bool volume_mode, double V0) {
  double m = sys.residual.norm() / std::max(sys.force_scale, kResidualFloor);
  if (volume_mode) m = std::max(m, std::abs(sys.g_v) / V0);
  return m;
}

double rel_err(const MatX& a, const MatX& b) {
  const double scale = std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1e-300});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

void StepSchedule::validate() const {
  if (values.empty()) throw std::invalid_argument("schedule must have at least one step");
  if (values.size() > 1) {
    const bool inc = values.back() >= values.front();
    for (size_t i = 1; i < values.size(); ++i)
      if ((inc && values[i] < values[i - 1]) || (!inc && values[i] > values[i - 1]))
        throw std::invalid_argument("schedule values must be monotone");
  }
}

NewtonIncrement newton_step(const GlobalSystem& sys, bool volume_mode) {
  const int n = static_cast<int>(sys.residual.size());
  NewtonIncrement inc;

  if (!volume_mode) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(sys.K);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("singular tangent in Newton step");
    inc.dx = lu.solve(-sys.residual);
    inc.dp_v = 0.0;
    return inc;
  }

  // bordered system [[K, -L],[H^T, 0]]
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(sys.K.nonZeros() + 2 * n + 1);
  for (int k = 0; k < sys.K.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.K, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < n; ++i) {
    if (sys.l_ext(i) != 0.0) trips.emplace_back(i, n, -sys.l_ext(i));
    if (sys.h_v(i) != 0.0) trips.emplace_back(n, i, sys.h_v(i));
  }
  Eigen::SparseMatrix<double> B(n + 1, n + 1);
  B.setFromTriplets(trips.begin(), trips.end());

  VecX rhs(n + 1);
  rhs.head(n) = -sys.residual;
  rhs(n) = -sys.g_v;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(B);
  if (lu.info() != Eigen::Success) {
    const double hnorm = sys.h_v.norm();
    throw std::runtime_error("singular bordered system (constraint row norm " +
                             std::to_string(hnorm) + ")");
  }
  const VecX sol = lu.solve(rhs);
  inc.dx = sol.head(n);
  inc.dp_v = sol(n);
  return inc;
}

NewtonReport newton_solve(const Problem& prob, const LoadCase& load, SystemState& state,
                          int step_index) {
  const bool volume_mode = load.pressure_mode == PressureMode::VolumeConstraint;
  NewtonReport rep;
  double coord_scale = 0.0;
  for (const auto& x : state.coords) coord_scale = std::max(coord_scale, x.norm());
  coord_scale = std::max(coord_scale, 1.0);

  for (int iter = 0; iter < prob.newton.max_iter; ++iter) {
    GlobalSystem sys = assemble(*prob.mesh, *prob.ctx, *prob.bcs, load, state, prob.model);
    const double meas = combined_residual(sys, volume_mode, prob.V0);
    rep.residual_history.push_back(meas);
    if (prob.diagnostics)
      *prob.diagnostics << "step=" << step_index << " iter=" << iter << " residual=" << meas
                        << " gv=" << sys.g_v << " p_v=" << state.p_v << "\n";
    if (meas < prob.newton.tol_residual) {
      rep.converged = true;
      rep.iterations = iter;
      rep.final_residual = meas;
      return rep;
    }

    const NewtonIncrement inc = newton_step(sys, volume_mode);

    double t = 1.0;
    bool accepted = false;
    SystemState trial = state;
    for (int ls = 0; ls <= 8; ++ls, t *= 0.5) {
      for (int k = 0; k < prob.mesh->node_count(); ++k)
        trial.coords[k] = state.coords[k] + t * inc.dx.segment<3>(3 * k);
      trial.p_v = state.p_v + t * inc.dp_v;
      if (!prob.newton.line_search) {
        accepted = true;
        break;
      }
      try {
        GlobalSystem probe = assemble(*prob.mesh, *prob.ctx, *prob.bcs, load, trial, prob.model,
                                      /*with_tangent=*/false);
        if (combined_residual(probe, volume_mode, prob.V0) < meas) {
          accepted = true;
          break;
        }
      } catch (const std::exception&) {
        // degenerate trial state; keep backtracking
      }
    }
    if (!accepted) {
      rep.converged = false;
      rep.iterations = iter + 1;
      rep.final_residual = meas;
      return rep;
    }
    state = trial;

    const double inc_norm = t * inc.dx.norm() / coord_scale;
    if (inc_norm < prob.newton.tol_increment) {
      GlobalSystem sys2 = assemble(*prob.mesh, *prob.ctx, *prob.bcs, load, state, prob.model,
                                   /*with_tangent=*/false);
      const double meas2 = combined_residual(sys2, volume_mode, prob.V0);
      rep.converged = meas2 < std::sqrt(prob.newton.tol_residual);
      rep.iterations = iter + 1;
      rep.final_residual = meas2;
      rep.residual_history.push_back(meas2);
      return rep;
    }
  }
  rep.converged = false;
  rep.iterations = prob.newton.max_iter;
  rep.final_residual = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
  return rep;
}

ScheduleResult run_schedule(Problem& prob, const StepSchedule& schedule, SystemState state) {
  schedule.validate();
  ScheduleResult result;

  const bool volume_mode = prob.load.pressure_mode == PressureMode::VolumeConstraint;
  const double V_now = enclosed_volume(*prob.mesh, state.coords, prob.ctx->quadrature_order);
  double from = initial_parameter(prob, prob.load, schedule.parameter, V_now);

  int step_index = 0;
  for (double target : schedule.values) {
    // advance from -> target with step halving on divergence
    struct Seg {
      double from, to;
      int depth;
    };
    std::vector<Seg> stack{{from, target, 0}};
    bool ok = true;
    NewtonReport last_rep;
    while (!stack.empty()) {
      Seg seg = stack.back();
      stack.pop_back();
      apply_parameter(prob.load, prob.base_dead_load, schedule.parameter, seg.to);
      SystemState attempt = state;
      NewtonReport rep = newton_solve(prob, prob.load, attempt, step_index);
      if (rep.converged) {
        state = attempt;
        last_rep = rep;
        continue;
      }
      if (seg.depth >= schedule.max_halvings) {
        ok = false;
        result.failure = "Newton divergence at parameter value " + std::to_string(seg.to);
        break;
      }
      const double mid = 0.5 * (seg.from + seg.to);
      stack.push_back({mid, seg.to, seg.depth + 1});
      stack.push_back({seg.from, mid, seg.depth + 1});
    }
    if (!ok) {
      result.completed = false;
      break;
    }

    // record at the schedule value
    apply_parameter(prob.load, prob.base_dead_load, schedule.parameter, target);
    GlobalSystem sys = assemble(*prob.mesh, *prob.ctx, *prob.bcs, prob.load, state, prob.model,
                                /*with_tangent=*/false);
    StepRecord rec;
    rec.value = target;
    rec.V = sys.V;
    rec.p_v = volume_mode ? state.p_v : prob.load.prescribed_p;
    rec.p_min = sys.p_min;
    rec.p_max = sys.p_max;
    rec.min_sigma = sys.min_sigma;
    rec.max_tension_err = sys.max_tension_err;
    rec.iterations = last_rep.iterations;
    state.load_factor = target;
    rec.state = state;
    result.steps.push_back(std::move(rec));
    if (prob.diagnostics && sys.min_sigma < 0.0)
      *prob.diagnostics << "step=" << step_index << " warning=compression sigma_min="
                        << sys.min_sigma << "\n";
    from = target;
    ++step_index;
  }
  return result;
}

double AuditReport::worst() const {
  double w = 0.0;
  for (const auto& [k, v] : max_rel_error) w = std::max(w, v);
  return w;
}

AuditReport fd_tangent_audit(const Problem& prob, const SystemState& state, int n_samples,
                             unsigned seed) {
  AuditReport report;
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto note = [&](const std::string& key, double err) {
    auto& slot = report.max_rel_error[key];
    slot = std::max(slot, err);
  };

  const auto& elements = prob.ctx->elements;
  for (int sample = 0; sample < n_samples; ++sample) {
    const ElementCache& ec = elements[sample % elements.size()];
    const int n = static_cast<int>(ec.nodes.size());

    std::vector<Vec3> xe;
    for (int id : ec.nodes) xe.push_back(state.coords[id]);
    const double amp = 0.02 * ec.h;
    for (auto& x : xe) x += amp * Vec3(gauss(rng), gauss(rng), gauss(rng));
    const double p_v = state.p_v + 0.1 * gauss(rng);

    const double step = 1e-6 * ec.h;
    auto fd_matrix = [&](auto&& f) {
      std::vector<Vec3> pert = xe;
      const VecX f0 = f(pert);
      MatX k(f0.size(), 3 * n);
      for (int dof = 0; dof < 3 * n; ++dof) {
        const int node = dof / 3, comp = dof % 3;
        const double saved = pert[node](comp);
        pert[node](comp) = saved + step;
        const VecX fp = f(pert);
        pert[node](comp) = saved - step;
        const VecX fm = f(pert);
        pert[node](comp) = saved;
        k.col(dof) = (fp - fm) / (2.0 * step);
      }
      return k;
    };

    const bool split = needs_split(prob.model);
    const auto st = eval_states(ec, xe, prob.model, split);

    // internal tangent (analytic part only; split models add the FD block)
    {
      MatX analytic = element_kint(ec, st);
      MatX fd = fd_matrix([&](const std::vector<Vec3>& c) {
        const auto s = eval_states(ec, c, prob.model, false);
        return element_fint(ec, s, c);
      });
      note("k_int", rel_err(analytic, fd));
    }

    // external tangent (live pressure, hydrostatic)
    {
      MatX analytic = element_kext(ec, st, prob.load, p_v, xe);
      MatX fd = fd_matrix([&](const std::vector<Vec3>& c) {
        const auto s = eval_states(ec, c, prob.model, false);
        return element_fext(ec, s, prob.load, p_v, c).f_ext;
      });
      const std::string key = prob.load.hydrostatic ? "k_ext_hydrostatic" : "k_ext_pressure";
      note(key, rel_err(analytic, fd));
    }

    // contact tangent
    if (!prob.load.obstacles.empty()) {
      MatX analytic = element_contact(ec, st, prob.load.obstacles, xe).k_c;
      if (analytic.cwiseAbs().maxCoeff() > 0.0) {
        MatX fd = fd_matrix([&](const std::vector<Vec3>& c) {
          const auto s = eval_states(ec, c, prob.model, false);
          return element_contact(ec, s, prob.load.obstacles, c).f_c;
        });
        note("k_c", rel_err(analytic, fd));
      }
    }

    // volume constraint row
    {
      const VolumeContribution vol = element_volume(ec, st, xe);
      MatX fd = fd_matrix([&](const std::vector<Vec3>& c) {
        const auto s = eval_states(ec, c, prob.model, false);
        VecX one(1);
        one(0) = element_volume(ec, s, c).g_v_e;
        return one;
      });
      note("h_v", rel_err(MatX(vol.h_v.transpose()), fd));
    }

    // constraint column: d f_ext / d p_v
    if (prob.load.pressure_mode == PressureMode::VolumeConstraint) {
      const ExternalForces e0 = element_fext(ec, st, prob.load, p_v, xe);
      const double dp = 1e-6 * std::max(1.0, std::abs(p_v));
      const ExternalForces ep = element_fext(ec, st, prob.load, p_v + dp, xe);
      const ExternalForces em = element_fext(ec, st, prob.load, p_v - dp, xe);
      const VecX fd = (ep.f_ext - em.f_ext) / (2.0 * dp);
      note("l_ext", rel_err(MatX(e0.l_ext), MatX(fd)));
    }
  }
  return report;
}

}  // namespace memfem
