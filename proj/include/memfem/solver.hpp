#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "memfem/assembly.hpp"

namespace memfem {

struct NewtonSettings {
  double tol_residual = 1e-9;   // relative, combined force/constraint measure
  double tol_increment = 1e-10;
  int max_iter = 30;
  bool line_search = true;
};

enum class ScheduleParameter { Volume, Gravity, Pressure, DeadLoadScale };

struct StepSchedule {
  ScheduleParameter parameter = ScheduleParameter::Volume;
  std::vector<double> values;  // monotone
  int max_halvings = 6;
  void validate() const;
};

/// Everything a solve needs; load is mutated by the schedule driver.
struct Problem {
  const Mesh* mesh = nullptr;
  const AssemblyContext* ctx = nullptr;
  const BoundaryConditions* bcs = nullptr;
  LoadCase load;
  MaterialModel model;
  NewtonSettings newton;
  Vec3 base_dead_load = Vec3::Zero();  // scaled by DeadLoadScale schedules
  double V0 = 1.0;                     // volume scale for the constraint residual
  std::ostream* diagnostics = nullptr;
};

struct NewtonIncrement {
  VecX dx;
  double dp_v = 0.0;
};

/// Solve the (possibly bordered) linear system of one Newton iteration.
NewtonIncrement newton_step(const GlobalSystem& sys, bool volume_mode);

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;
};

/// Full Newton loop at fixed load; updates state in place.
NewtonReport newton_solve(const Problem& prob, const LoadCase& load, SystemState& state,
                          int step_index = 0);

struct StepRecord {
  double value = 0.0;      // schedule parameter value
  double V = 0.0;
  double p_v = 0.0;
  double p_min = 0.0, p_max = 0.0;  // total pressure range over quadrature points
  double min_sigma = 0.0;
  double max_tension_err = 0.0;
  int iterations = 0;
  SystemState state;
};

struct ScheduleResult {
  std::vector<StepRecord> steps;
  bool completed = true;
  std::string failure;
};

/// Continuation over the schedule with step halving on divergence.
ScheduleResult run_schedule(Problem& prob, const StepSchedule& schedule, SystemState state);

/// Finite-difference verification of every analytic element tangent block.
struct AuditReport {
  std::map<std::string, double> max_rel_error;
  double worst() const;
};

AuditReport fd_tangent_audit(const Problem& prob, const SystemState& state, int n_samples,
                             unsigned seed = 12345);

}  // namespace memfem
