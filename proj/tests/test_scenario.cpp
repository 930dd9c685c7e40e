#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "memfem/scenario.hpp"

using namespace memfem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "memfem_scenario_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("builtin scenarios parse and roundtrip through JSON") {
  const auto names = builtin_scenario_names();
  REQUIRE(names.size() == 4);
  CHECK(names[0] == "balloon");

  for (const std::string& name : names) {
    const Scenario s = builtin_scenario(name);
    CHECK(s.name == name);
    CHECK_NOTHROW(s.schedule.validate());

    const Scenario back = parse_scenario(scenario_to_json(s));
    CHECK(back.name == s.name);
    CHECK(back.mesh.generator == s.mesh.generator);
    CHECK(back.mesh.n1 == s.mesh.n1);
    CHECK(back.schedule.values == s.schedule.values);
    CHECK(back.bcs.size() == s.bcs.size());
    CHECK(back.load.obstacles.size() == s.load.obstacles.size());
    CHECK((back.load.hydrostatic.has_value()) == (s.load.hydrostatic.has_value()));
    CHECK(back.model.index() == s.model.index());
  }
  CHECK_THROWS(builtin_scenario("no-such-scenario"));
}

TEST_CASE("config validation errors") {
  CHECK_THROWS(parse_scenario("this is not json"));
  CHECK_THROWS(parse_scenario("{}"));                  // missing version
  CHECK_THROWS(parse_scenario(R"({"version": 2})"));   // wrong version
  // both mesh file and generator given
  CHECK_THROWS(parse_scenario(R"({
    "version": 1,
    "mesh": {"file": "a.json", "generator": "square_sheet"},
    "material": {"type": "liquid", "gamma": 1.0},
    "schedule": {"values": [1.0]}
  })"));
  // unknown material
  CHECK_THROWS(parse_scenario(R"({
    "version": 1,
    "mesh": {"generator": "square_sheet"},
    "material": {"type": "rubber"},
    "schedule": {"values": [1.0]}
  })"));
  CHECK_THROWS(load_scenario("/no/such/path.json"));
}

TEST_CASE("scenario setup wires the solver inputs") {
  const Scenario s = builtin_scenario("droplet-contact");
  const ScenarioSetup setup = setup_scenario(s);
  CHECK(setup.mesh.elements.size() == 24);
  CHECK(setup.V0 == doctest::Approx(3.14159265358979 / 3.0).epsilon(1e-3));
  CHECK(setup.load.volume_target == doctest::Approx(setup.V0));
  REQUIRE(setup.load.obstacles.size() == 1);
  CHECK(setup.load.obstacles[0].epsilon_n > 0.0);  // auto-sized penalty
  // initial shift engages the contact plane
  double zmin = 1e9;
  for (const Vec3& x : setup.initial.coords) zmin = std::min(zmin, x(2));
  CHECK(zmin < -1.0);

  const Problem prob = setup.make_problem();
  CHECK(prob.mesh == &setup.mesh);
  CHECK(prob.V0 == doctest::Approx(setup.V0));
}

TEST_CASE("balloon run writes consistent artifacts") {
  TempDir tmp;
  Scenario s = builtin_scenario("balloon");
  s.schedule.values = {1, 2, 4};  // keep the test quick

  RunOptions opt;
  opt.out_dir = tmp.path.string();
  const RunResult res = run_scenario(s, opt);
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.schedule.steps.size() == 3);

  // CSV: header plus one row per recorded step
  const std::string csv = slurp(tmp.path / "balloon.csv");
  CHECK(count_lines(csv) == 4);
  CHECK(csv.rfind("value,V,p_v,", 0) == 0);

  // reference error report present and small at the final step
  const std::string err = slurp(tmp.path / "balloon_reference_error.csv");
  CHECK(count_lines(err) == 4);
  REQUIRE(res.reference_errors.size() == 3);
  CHECK(res.reference_errors.back() < 1e-6);

  // VTK per step, loadable PolyData schema
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "balloon_%03d.vtk", i);
    const fs::path p = tmp.path / "balloon_vtk" / name;
    REQUIRE(fs::exists(p));
    std::ifstream in(p);
    std::string l1, l2, l3, l4;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    std::getline(in, l4);
    CHECK(l1.rfind("# vtk DataFile Version", 0) == 0);
    CHECK(l3 == "ASCII");
    CHECK(l4 == "DATASET POLYDATA");
    const std::string body = slurp(p);
    CHECK(body.find("POINTS 25 double") != std::string::npos);  // 1 element, 5x5 samples
    CHECK(body.find("POLYGONS 16 80") != std::string::npos);
    CHECK(body.find("POINT_DATA 25") != std::string::npos);
    CHECK(body.find("SCALARS J double 1") != std::string::npos);
    CHECK(body.find("SCALARS I1 double 1") != std::string::npos);
    CHECK(body.find("SCALARS sigma_min double 1") != std::string::npos);
  }

  // re-running overwrites the outputs atomically (no stale temp files)
  const RunResult res2 = run_scenario(s, opt);
  CHECK(res2.exit_code == 0);
  CHECK(count_lines(slurp(tmp.path / "balloon.csv")) == 4);
  for (const auto& entry : fs::recursive_directory_iterator(tmp.path))
    CHECK(entry.path().extension() != ".tmp");
}

TEST_CASE("solver failure keeps partial outputs and signals exit 3") {
  TempDir tmp;
  Scenario s = builtin_scenario("balloon");
  s.schedule.values = {2, 1e6};  // second step is unreachable
  s.schedule.max_halvings = 0;
  s.newton.max_iter = 6;

  RunOptions opt;
  opt.out_dir = tmp.path.string();
  const RunResult res = run_scenario(s, opt);
  CHECK(res.exit_code == 3);
  CHECK(res.schedule.steps.size() == 1);  // first step completed
  CHECK(count_lines(slurp(tmp.path / "balloon.csv")) == 2);
}

TEST_CASE("quadrature override flows through run options") {
  TempDir tmp;
  Scenario s = builtin_scenario("balloon");
  s.schedule.values = {1, 10};
  s.quadrature = 0;

  RunOptions opt;
  opt.out_dir = tmp.path.string();
  opt.write_outputs = false;

  opt.quadrature = 3;
  const RunResult coarse = run_scenario(s, opt);
  opt.quadrature = 6;
  const RunResult fine = run_scenario(s, opt);
  REQUIRE(coarse.exit_code == 0);
  REQUIRE(fine.exit_code == 0);
  CHECK(fine.reference_errors.back() < coarse.reference_errors.back());
  CHECK(fine.reference_errors.back() < 1e-6);
}

TEST_CASE("sheet volume is measured against the prescribed V0") {
  const Scenario s = builtin_scenario("sheet");
  const ScenarioSetup setup = setup_scenario(s);
  CHECK(setup.V0 == doctest::Approx(4.0));  // 4 L0^3, not the (zero) flat volume
  CHECK(setup.schedule.values.back() == doctest::Approx(40.0));
  CHECK(setup.mesh.prestretch == doctest::Approx(1.05));
}
