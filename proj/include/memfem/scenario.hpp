#pragma once

#include <string>

#include "memfem/solver.hpp"

namespace memfem {

/// Mesh source: either a JSON mesh file or one of the built-in generators.
struct MeshSpec {
  std::string file;       // non-empty: load this mesh file, ignore the rest
  std::string generator;  // "sphere_octant", "sphere_quarter", "square_sheet"
  ElementKind kind = ElementKind::LagrangeQuadratic;
  int n1 = 1, n2 = 1;
  double radius = 1.0;
  double half_width = 1.0;
  double prestretch = 1.0;

  Mesh build() const;
};

struct BCEntry {
  std::string set;
  std::vector<int> components;
};

enum class ReferenceCurve { None, Balloon, Droplet };

struct ScenarioOutputs {
  std::string csv = "results.csv";
  std::string vtk_dir = "vtk";
  std::string diagnostics;  // empty: no diagnostics file
};

struct Scenario {
  std::string name = "scenario";
  MeshSpec mesh;
  MaterialModel model = NeoHooke{};
  std::vector<BCEntry> bcs;
  LoadCase load;
  StepSchedule schedule;
  bool schedule_relative_to_v0 = false;  // scale volume schedule values by V0
  NewtonSettings newton;
  int quadrature = 0;        // 0: per-kind default
  ReferenceCurve reference = ReferenceCurve::None;
  double ref_radius = 1.0;   // length scale of the reference curve
  double v0_override = 0.0;  // 0: use the discrete initial volume
  Vec3 initial_shift = Vec3::Zero();
  ScenarioOutputs outputs;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);

std::vector<std::string> builtin_scenario_names();
Scenario builtin_scenario(const std::string& name);

struct RunOptions {
  int quadrature = 0;            // override, 0: keep scenario setting
  std::string out_dir;           // override output root, empty: cwd-relative
  bool strict_deterministic = false;
  bool write_outputs = true;
  std::ostream* log = nullptr;   // progress / report stream
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 3 solver failure
  ScheduleResult schedule;
  double V0 = 0.0;
  std::vector<double> reference_errors;  // per recorded step, when applicable
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

/// Built solver inputs for a scenario (shared by run and audit). The
/// object owns the mesh and assembly data; make_problem() returns a Problem
/// pointing into it, so keep the setup alive while solving.
struct ScenarioSetup {
  Mesh mesh;
  AssemblyContext ctx;
  BoundaryConditions bcs{0};
  LoadCase load;
  MaterialModel model = NeoHooke{};
  NewtonSettings newton;
  SystemState initial;
  double V0 = 0.0;
  StepSchedule schedule;

  Problem make_problem() const;
};

ScenarioSetup setup_scenario(const Scenario& scenario, int quadrature_override = 0);

/// Legacy ASCII VTK PolyData export of one state; each element is sampled on
/// a 4x4 facet grid, with point-wise J, I1 and minimum principal stress.
void write_vtk(const std::string& path, const Mesh& mesh, const SystemState& state,
               const MaterialModel& model);

}  // namespace memfem
