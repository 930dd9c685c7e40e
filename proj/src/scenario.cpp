#include "memfem/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "memfem/analytic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace memfem {

namespace {

ElementKind kind_from_string(const std::string& s) {
  if (s == "lagrange_linear") return ElementKind::LagrangeLinear;
  if (s == "lagrange_quadratic") return ElementKind::LagrangeQuadratic;
  if (s == "nurbs_quadratic") return ElementKind::NurbsQuadratic;
  throw std::invalid_argument("unknown element kind '" + s + "'");
}

std::string kind_to_string(ElementKind k) {
  switch (k) {
    case ElementKind::LagrangeLinear:
      return "lagrange_linear";
    case ElementKind::LagrangeQuadratic:
      return "lagrange_quadratic";
    case ElementKind::NurbsQuadratic:
      return "nurbs_quadratic";
  }
  return "";
}

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json vec3_to_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

MaterialModel material_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "neo_hooke") return NeoHooke{j.at("muT").get<double>()};
  if (type == "liquid") return Liquid{j.at("gamma").get<double>()};
  if (type == "stabilized_liquid")
    return StabilizedLiquid{j.at("gamma").get<double>(), j.at("mu_stab").get<double>()};
  throw std::invalid_argument("unknown material type '" + type + "'");
}

json material_to_json(const MaterialModel& m) {
  json j;
  std::visit(
      [&](const auto& mat) {
        using T = std::decay_t<decltype(mat)>;
        if constexpr (std::is_same_v<T, NeoHooke>) {
          j = {{"type", "neo_hooke"}, {"muT", mat.muT}};
        } else if constexpr (std::is_same_v<T, Liquid>) {
          j = {{"type", "liquid"}, {"gamma", mat.gamma}};
        } else {
          j = {{"type", "stabilized_liquid"}, {"gamma", mat.gamma}, {"mu_stab", mat.mu_stab}};
        }
      },
      m);
  return j;
}

LoadCase load_from_json(const json& j) {
  LoadCase load;
  if (j.contains("dead_load")) load.dead_load = vec3_from_json(j["dead_load"]);
  if (j.contains("pressure_mode")) {
    const std::string m = j["pressure_mode"].get<std::string>();
    if (m == "prescribed")
      load.pressure_mode = PressureMode::Prescribed;
    else if (m == "volume_constraint")
      load.pressure_mode = PressureMode::VolumeConstraint;
    else
      throw std::invalid_argument("unknown pressure mode '" + m + "'");
  }
  load.prescribed_p = j.value("prescribed_p", 0.0);
  load.volume_target = j.value("volume_target", 0.0);
  if (j.contains("hydrostatic")) {
    const json& h = j["hydrostatic"];
    Hydrostatic hyd;
    hyd.rho = h.value("rho", 0.0);
    hyd.g_vec = vec3_from_json(h.at("g_vec"));
    hyd.sign = h.value("sign", 1.0);
    load.hydrostatic = hyd;
  }
  for (const json& o : j.value("obstacles", json::array())) {
    Obstacle obs;
    const std::string type = o.at("type").get<std::string>();
    if (type == "half_space") {
      HalfSpaceObstacle hs;
      hs.normal = vec3_from_json(o.at("normal")).normalized();
      hs.offset = o.value("offset", 0.0);
      obs.shape = hs;
    } else if (type == "sphere") {
      SphereObstacle sp;
      sp.center = vec3_from_json(o.at("center"));
      sp.radius = o.at("radius").get<double>();
      obs.shape = sp;
    } else {
      throw std::invalid_argument("unknown obstacle type '" + type + "'");
    }
    obs.epsilon_n = o.value("epsilon_n", 0.0);
    load.obstacles.push_back(obs);
  }
  return load;
}

json load_to_json(const LoadCase& load) {
  json j;
  j["dead_load"] = vec3_to_json(load.dead_load);
  j["pressure_mode"] =
      load.pressure_mode == PressureMode::Prescribed ? "prescribed" : "volume_constraint";
  j["prescribed_p"] = load.prescribed_p;
  j["volume_target"] = load.volume_target;
  if (load.hydrostatic) {
    j["hydrostatic"] = {{"rho", load.hydrostatic->rho},
                        {"g_vec", vec3_to_json(load.hydrostatic->g_vec)},
                        {"sign", load.hydrostatic->sign}};
  }
  json obstacles = json::array();
  for (const Obstacle& obs : load.obstacles) {
    json o;
    if (const auto* hs = std::get_if<HalfSpaceObstacle>(&obs.shape)) {
      o = {{"type", "half_space"}, {"normal", vec3_to_json(hs->normal)}, {"offset", hs->offset}};
    } else {
      const auto& sp = std::get<SphereObstacle>(obs.shape);
      o = {{"type", "sphere"}, {"center", vec3_to_json(sp.center)}, {"radius", sp.radius}};
    }
    o["epsilon_n"] = obs.epsilon_n;
    obstacles.push_back(o);
  }
  if (!obstacles.empty()) j["obstacles"] = obstacles;
  return j;
}

ScheduleParameter parameter_from_string(const std::string& s) {
  if (s == "volume") return ScheduleParameter::Volume;
  if (s == "gravity") return ScheduleParameter::Gravity;
  if (s == "pressure") return ScheduleParameter::Pressure;
  if (s == "dead_load_scale") return ScheduleParameter::DeadLoadScale;
  throw std::invalid_argument("unknown schedule parameter '" + s + "'");
}

std::string parameter_to_string(ScheduleParameter p) {
  switch (p) {
    case ScheduleParameter::Volume:
      return "volume";
    case ScheduleParameter::Gravity:
      return "gravity";
    case ScheduleParameter::Pressure:
      return "pressure";
    case ScheduleParameter::DeadLoadScale:
      return "dead_load_scale";
  }
  return "";
}

double material_scale(const MaterialModel& m) {
  return std::visit(
      [](const auto& mat) {
        using T = std::decay_t<decltype(mat)>;
        if constexpr (std::is_same_v<T, NeoHooke>)
          return mat.muT;
        else
          return mat.gamma;
      },
      m);
}

void atomic_write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

}  // namespace

Mesh MeshSpec::build() const {
  if (!file.empty()) return load_mesh_json(file);
  if (generator == "sphere_octant") return make_sphere_octant(n1, n2, kind, radius);
  if (generator == "sphere_quarter") return make_sphere_quarter(n1, n2, kind, radius);
  if (generator == "square_sheet") return make_square_sheet(n1, kind, half_width, prestretch);
  throw std::invalid_argument("unknown mesh generator '" + generator + "'");
}

Scenario parse_scenario(const std::string& json_text) {
  json j = json::parse(json_text);
  if (j.value("version", 0) != 1) throw std::invalid_argument("config version must be 1");

  Scenario s;
  s.name = j.value("name", "scenario");

  const json& jm = j.at("mesh");
  if (jm.contains("file") == jm.contains("generator"))
    throw std::invalid_argument("mesh must give exactly one of 'file' or 'generator'");
  if (jm.contains("file")) {
    s.mesh.file = jm["file"].get<std::string>();
  } else {
    s.mesh.generator = jm["generator"].get<std::string>();
    s.mesh.kind = kind_from_string(jm.value("kind", "lagrange_quadratic"));
    s.mesh.n1 = jm.value("n1", 1);
    s.mesh.n2 = jm.value("n2", 1);
    s.mesh.radius = jm.value("radius", 1.0);
    s.mesh.half_width = jm.value("half_width", 1.0);
    s.mesh.prestretch = jm.value("prestretch", 1.0);
  }

  s.model = material_from_json(j.at("material"));
  for (const json& b : j.value("bcs", json::array())) {
    BCEntry e;
    e.set = b.at("set").get<std::string>();
    for (const json& c : b.at("components")) e.components.push_back(c.get<int>());
    s.bcs.push_back(std::move(e));
  }
  s.load = load_from_json(j.value("load", json::object()));

  const json& js = j.at("schedule");
  s.schedule.parameter = parameter_from_string(js.value("parameter", "volume"));
  s.schedule.values = js.at("values").get<std::vector<double>>();
  s.schedule.max_halvings = js.value("max_halvings", 6);
  s.schedule_relative_to_v0 = js.value("relative_to_v0", false);

  if (j.contains("newton")) {
    const json& jn = j["newton"];
    s.newton.tol_residual = jn.value("tol_residual", s.newton.tol_residual);
    s.newton.tol_increment = jn.value("tol_increment", s.newton.tol_increment);
    s.newton.max_iter = jn.value("max_iter", s.newton.max_iter);
    s.newton.line_search = jn.value("line_search", s.newton.line_search);
  }
  s.quadrature = j.value("quadrature", 0);

  const std::string ref = j.value("reference", "none");
  if (ref == "balloon")
    s.reference = ReferenceCurve::Balloon;
  else if (ref == "droplet")
    s.reference = ReferenceCurve::Droplet;
  else if (ref != "none")
    throw std::invalid_argument("unknown reference curve '" + ref + "'");
  s.ref_radius = j.value("ref_radius", 1.0);
  s.v0_override = j.value("v0", 0.0);
  if (j.contains("initial_shift")) s.initial_shift = vec3_from_json(j["initial_shift"]);

  if (j.contains("outputs")) {
    const json& jo = j["outputs"];
    s.outputs.csv = jo.value("csv", s.outputs.csv);
    s.outputs.vtk_dir = jo.value("vtk_dir", s.outputs.vtk_dir);
    s.outputs.diagnostics = jo.value("diagnostics", s.outputs.diagnostics);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["version"] = 1;
  j["name"] = s.name;
  json jm;
  if (!s.mesh.file.empty()) {
    jm["file"] = s.mesh.file;
  } else {
    jm["generator"] = s.mesh.generator;
    jm["kind"] = kind_to_string(s.mesh.kind);
    jm["n1"] = s.mesh.n1;
    jm["n2"] = s.mesh.n2;
    if (s.mesh.generator == "square_sheet") {
      jm["half_width"] = s.mesh.half_width;
      jm["prestretch"] = s.mesh.prestretch;
    } else {
      jm["radius"] = s.mesh.radius;
    }
  }
  j["mesh"] = jm;
  j["material"] = material_to_json(s.model);
  json bcs = json::array();
  for (const BCEntry& e : s.bcs) bcs.push_back({{"set", e.set}, {"components", e.components}});
  j["bcs"] = bcs;
  j["load"] = load_to_json(s.load);
  j["schedule"] = {{"parameter", parameter_to_string(s.schedule.parameter)},
                   {"values", s.schedule.values},
                   {"max_halvings", s.schedule.max_halvings},
                   {"relative_to_v0", s.schedule_relative_to_v0}};
  j["newton"] = {{"tol_residual", s.newton.tol_residual},
                 {"tol_increment", s.newton.tol_increment},
                 {"max_iter", s.newton.max_iter},
                 {"line_search", s.newton.line_search}};
  if (s.quadrature > 0) j["quadrature"] = s.quadrature;
  j["reference"] = s.reference == ReferenceCurve::None
                       ? "none"
                       : (s.reference == ReferenceCurve::Balloon ? "balloon" : "droplet");
  j["ref_radius"] = s.ref_radius;
  if (s.v0_override > 0.0) j["v0"] = s.v0_override;
  if (s.initial_shift.norm() > 0.0) j["initial_shift"] = vec3_to_json(s.initial_shift);
  j["outputs"] = {{"csv", s.outputs.csv},
                  {"vtk_dir", s.outputs.vtk_dir},
                  {"diagnostics", s.outputs.diagnostics}};
  return j.dump(2) + "\n";
}

std::vector<std::string> builtin_scenario_names() {
  return {"balloon", "sheet", "droplet-growth", "droplet-contact"};
}

Scenario builtin_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.outputs.csv = name + ".csv";
  s.outputs.vtk_dir = name + "_vtk";
  s.load.pressure_mode = PressureMode::VolumeConstraint;
  s.schedule.parameter = ScheduleParameter::Volume;
  s.schedule_relative_to_v0 = true;

  if (name == "balloon") {
    s.mesh.generator = "sphere_octant";
    s.mesh.kind = ElementKind::NurbsQuadratic;
    s.mesh.n1 = s.mesh.n2 = 1;
    s.mesh.radius = 1.0;
    s.model = NeoHooke{1.0};
    s.bcs = {{"sym_x", {0}}, {"sym_y", {1}}, {"sym_z", {2}}};
    s.schedule.values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    s.quadrature = 6;
    s.reference = ReferenceCurve::Balloon;
    return s;
  }
  if (name == "sheet") {
    s.mesh.generator = "square_sheet";
    s.mesh.kind = ElementKind::LagrangeQuadratic;
    s.mesh.n1 = s.mesh.n2 = 8;
    s.mesh.half_width = 2.0;  // 4 L0 x 4 L0 sheet with L0 = 1
    s.mesh.prestretch = 1.05;
    s.model = NeoHooke{1.0};
    s.bcs = {{"clamped", {0, 1, 2}}};
    s.v0_override = 4.0;  // V0 = 4 L0^3
    s.schedule.values = {0.25, 0.5, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    return s;
  }
  if (name == "droplet-growth") {
    s.mesh.generator = "sphere_octant";
    s.mesh.kind = ElementKind::LagrangeQuadratic;
    s.mesh.n1 = 4;
    s.mesh.n2 = 3;
    s.mesh.radius = 1.0;
    s.model = StabilizedLiquid{1.0, 0.01};
    s.bcs = {{"sym_x", {0}}, {"sym_y", {1}}, {"sym_z", {2}}};
    s.schedule.values = {1, 1.5, 2, 2.5, 3, 3.5, 4};
    s.reference = ReferenceCurve::Droplet;
    return s;
  }
  if (name == "droplet-contact") {
    s.mesh.generator = "sphere_quarter";
    s.mesh.kind = ElementKind::LagrangeQuadratic;
    s.mesh.n1 = 4;
    s.mesh.n2 = 6;
    s.mesh.radius = 1.0;
    s.model = StabilizedLiquid{1.0, 0.005};
    s.bcs = {{"sym_x", {0}}, {"sym_y", {1}}};
    s.load.hydrostatic = Hydrostatic{0.0, Vec3(0, 0, -1), 1.0};
    Obstacle plane;
    plane.shape = HalfSpaceObstacle{Vec3(0, 0, 1), -1.0};
    plane.epsilon_n = 0.0;  // sized from the mesh at setup
    s.load.obstacles.push_back(plane);
    // deep enough that quadrature points of the pole elements penetrate the
    // plane; otherwise the contact force vanishes and the free vertical
    // translation mode makes the initial tangent singular
    s.initial_shift = Vec3(0, 0, -1e-2);
    s.schedule.parameter = ScheduleParameter::Gravity;
    s.schedule_relative_to_v0 = false;
    s.schedule.values = {1, 2, 4, 8};
    return s;
  }
  throw std::invalid_argument("unknown builtin scenario '" + name + "'");
}

Problem ScenarioSetup::make_problem() const {
  Problem prob;
  prob.mesh = &mesh;
  prob.ctx = &ctx;
  prob.bcs = &bcs;
  prob.load = load;
  prob.model = model;
  prob.newton = newton;
  prob.V0 = std::max(V0, 1e-12);
  return prob;
}

ScenarioSetup setup_scenario(const Scenario& scenario, int quadrature_override) {
  ScenarioSetup setup;
  setup.mesh = scenario.mesh.build();
  const int quad = quadrature_override > 0 ? quadrature_override : scenario.quadrature;
  setup.ctx = AssemblyContext::build(setup.mesh, quad);

  setup.bcs = BoundaryConditions(setup.mesh.node_count());
  for (const BCEntry& e : scenario.bcs)
    for (int c : e.components) setup.bcs.fix_set(setup.mesh, e.set, c);

  setup.initial.coords = setup.mesh.ref_coords;
  for (auto& x : setup.initial.coords) x += scenario.initial_shift;
  setup.initial.p_v = 0.0;

  setup.load = scenario.load;
  setup.model = scenario.model;
  validate(setup.model);
  // a liquid sphere starts in equilibrium at the Young-Laplace pressure; a
  // zero initial p_v makes the floppy membrane collapse in the first steps
  if (!std::holds_alternative<NeoHooke>(setup.model) &&
      setup.load.pressure_mode == PressureMode::VolumeConstraint && scenario.mesh.radius > 0.0)
    setup.initial.p_v = 2.0 * material_scale(setup.model) / scenario.mesh.radius;
  setup.newton = scenario.newton;

  setup.V0 = scenario.v0_override > 0.0
                 ? scenario.v0_override
                 : enclosed_volume(setup.mesh, setup.initial.coords, quad);
  setup.schedule = scenario.schedule;
  if (setup.schedule.parameter == ScheduleParameter::Volume && scenario.schedule_relative_to_v0)
    for (double& v : setup.schedule.values) v *= setup.V0;
  if (setup.load.pressure_mode == PressureMode::VolumeConstraint &&
      setup.schedule.parameter != ScheduleParameter::Volume &&
      setup.load.volume_target == 0.0)
    setup.load.volume_target = setup.V0;

  // size unset contact penalties from the material and mesh scales
  double h_min = std::numeric_limits<double>::max();
  for (const auto& ec : setup.ctx.elements) h_min = std::min(h_min, ec.h);
  for (Obstacle& obs : setup.load.obstacles)
    if (obs.epsilon_n <= 0.0)
      obs.epsilon_n = 100.0 * material_scale(setup.model) / (h_min * h_min * h_min);

  return setup;
}

void write_vtk(const std::string& path, const Mesh& mesh, const SystemState& state,
               const MaterialModel& model) {
  constexpr int sub = 4;  // facets per element edge

  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\nmembrane surface\nASCII\nDATASET POLYDATA\n";
  out << std::setprecision(9);

  std::vector<Vec3> points;
  std::vector<std::array<int, 4>> quads;
  std::vector<double> field_J, field_I1, field_smin;

  std::vector<Vec3> xe, Xe;
  for (const Element& el : mesh.elements) {
    xe.clear();
    Xe.clear();
    for (int id : el.nodes) {
      xe.push_back(state.coords[id]);
      Xe.push_back(mesh.ref_coords[id]);
    }
    const int base = static_cast<int>(points.size());
    for (int j = 0; j <= sub; ++j)
      for (int i = 0; i <= sub; ++i) {
        const Vec2 xi(-1.0 + 2.0 * i / sub, -1.0 + 2.0 * j / sub);
        const BasisEval be = eval_basis(el.basis, xi);
        Vec3 x = Vec3::Zero();
        for (int a = 0; a < be.N.size(); ++a) x += be.N(a) * xe[a];
        points.push_back(x);

        // fields; nudge toward the element center at collapsed edges
        double J = 1.0, I1 = 0.0, smin = 0.0;
        for (double shrink : {1.0, 1.0 - 1e-6, 1.0 - 1e-3, 0.99}) {
          try {
            const BasisEval bs = shrink == 1.0 ? be : eval_basis(el.basis, Vec2(shrink * xi));
            SurfaceFrame ref = frame(bs, Xe, false);
            apply_prestretch(ref, mesh.prestretch);
            const SurfaceFrame cur = frame(bs, xe, false);
            const DeformationMeasures def = deformation(ref, cur);
            const StressState stress = evaluate(model, def, cur);
            const Mat2 sigma = mixed_stress(stress.tau + stress.tau_stab, cur, stress.J);
            J = def.J;
            I1 = sigma.trace();
            smin = min_principal_stress(sigma);
            break;
          } catch (const DegenerateFrameError&) {
          }
        }
        field_J.push_back(J);
        field_I1.push_back(I1);
        field_smin.push_back(smin);
      }
    for (int j = 0; j < sub; ++j)
      for (int i = 0; i < sub; ++i) {
        const int p0 = base + i + (sub + 1) * j;
        quads.push_back({p0, p0 + 1, p0 + sub + 2, p0 + sub + 1});
      }
  }

  out << "POINTS " << points.size() << " double\n";
  for (const Vec3& p : points) out << p(0) << " " << p(1) << " " << p(2) << "\n";
  out << "POLYGONS " << quads.size() << " " << 5 * quads.size() << "\n";
  for (const auto& q : quads) out << "4 " << q[0] << " " << q[1] << " " << q[2] << " " << q[3] << "\n";

  out << "POINT_DATA " << points.size() << "\n";
  auto write_field = [&](const char* fname, const std::vector<double>& f) {
    out << "SCALARS " << fname << " double 1\nLOOKUP_TABLE default\n";
    for (double v : f) out << v << "\n";
  };
  write_field("J", field_J);
  write_field("I1", field_I1);
  write_field("sigma_min", field_smin);

  atomic_write(path, out.str());
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  if (options.strict_deterministic) Eigen::setNbThreads(1);

  ScenarioSetup setup = setup_scenario(scenario, options.quadrature);
  Problem prob = setup.make_problem();

  const fs::path root = options.out_dir.empty() ? fs::path(".") : fs::path(options.out_dir);
  std::ofstream diag_file;
  if (options.write_outputs && !scenario.outputs.diagnostics.empty()) {
    const fs::path p = root / scenario.outputs.diagnostics;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    diag_file.open(p);
    prob.diagnostics = &diag_file;
  }

  RunResult result;
  result.V0 = setup.V0;
  result.schedule = run_schedule(prob, setup.schedule, setup.initial);

  // CSV: one row per completed step (partial results retained on failure)
  std::ostringstream csv;
  csv << std::setprecision(12);
  csv << "value,V,p_v,p_min,p_max,sigma_min,tension_err,iterations\n";
  for (const StepRecord& rec : result.schedule.steps)
    csv << rec.value << "," << rec.V << "," << rec.p_v << "," << rec.p_min << "," << rec.p_max
        << "," << rec.min_sigma << "," << rec.max_tension_err << "," << rec.iterations << "\n";

  if (options.write_outputs) {
    atomic_write(root / scenario.outputs.csv, csv.str());
    const fs::path vtk_dir = root / scenario.outputs.vtk_dir;
    fs::create_directories(vtk_dir);
    int step = 0;
    for (const StepRecord& rec : result.schedule.steps) {
      std::ostringstream fname;
      fname << scenario.name << "_" << std::setw(3) << std::setfill('0') << step++ << ".vtk";
      write_vtk((vtk_dir / fname.str()).string(), setup.mesh, rec.state, setup.model);
    }
  }

  if (scenario.reference != ReferenceCurve::None) {
    const double scale = material_scale(setup.model) / scenario.ref_radius;
    std::ostringstream rep;
    rep << std::setprecision(12) << "value,p_v,p_ref,rel_error\n";
    for (const StepRecord& rec : result.schedule.steps) {
      const double ratio = rec.V / setup.V0;
      const double p_ref = scale * (scenario.reference == ReferenceCurve::Balloon
                                        ? balloon_pressure(ratio)
                                        : droplet_pressure(ratio));
      const double err =
          std::abs(p_ref) > 0.0 ? std::abs(rec.p_v - p_ref) / std::abs(p_ref) : std::abs(rec.p_v);
      result.reference_errors.push_back(err);
      rep << rec.value << "," << rec.p_v << "," << p_ref << "," << err << "\n";
    }
    if (options.write_outputs)
      atomic_write(root / (scenario.name + "_reference_error.csv"), rep.str());
    if (options.log) *options.log << rep.str();
  }

  if (!result.schedule.completed) {
    if (options.log) *options.log << "solver failure: " << result.schedule.failure << "\n";
    result.exit_code = 3;
  }
  return result;
}

}  // namespace memfem
