#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "memfem/basis.hpp"
#include "memfem/types.hpp"

namespace memfem {

struct Element {
  ElementBasis basis;
  std::vector<int> nodes;
};

/// Discrete problem definition. Node sets "clamped", "sym_x", "sym_y",
/// "sym_z" are reserved by the generators. `prestretch` rescales the
/// stored reference metric (A_ab <- A_ab/lambda0^2).
struct Mesh {
  std::vector<Vec3> ref_coords;
  std::vector<Element> elements;
  std::map<std::string, std::vector<int>> node_sets;
  bool closed = false;
  double prestretch = 1.0;

  int node_count() const { return static_cast<int>(ref_coords.size()); }
  void validate() const;
};

/// Per-node per-component fixed flags and prescribed displacement values.
struct BoundaryConditions {
  std::vector<std::array<bool, 3>> fixed;
  std::vector<Vec3> value;

  explicit BoundaryConditions(int n_nodes = 0);
  void fix(int node, int component, double v = 0.0);
  void fix_set(const Mesh& mesh, const std::string& set_name, int component);
  bool is_fixed(int node, int component) const { return fixed[node][component]; }
};

struct HalfSpaceObstacle {
  Vec3 normal = Vec3::UnitZ();  // outward unit normal of the obstacle surface
  double offset = 0.0;          // obstacle occupies normal . x <= offset
};

struct SphereObstacle {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;  // solid ball; membrane stays outside
};

struct Obstacle {
  std::variant<HalfSpaceObstacle, SphereObstacle> shape;
  double epsilon_n = 0.0;  // penalty parameter (force/length^3)
};

/// Closest-point projection result for a membrane point against an obstacle.
struct ContactPoint {
  double gap = 0.0;  // (x - x_p) . n_p; negative means penetration
  Vec3 normal = Vec3::UnitZ();
  double inv_dist = 0.0;  // 1/|x-c| for the sphere, 0 for the half-space
};

ContactPoint project_to_obstacle(const Obstacle& obstacle, const Vec3& x);

struct Hydrostatic {
  double rho = 0.0;
  Vec3 g_vec = Vec3::Zero();
  double sign = 1.0;  // p_h = sign * rho * (g_vec . x); +1 is the physical choice
};

enum class PressureMode { Prescribed, VolumeConstraint };

struct EdgeTraction {
  int element = 0;
  int edge = 0;     // 0: xi2=-1, 1: xi1=+1, 2: xi2=+1, 3: xi1=-1
  Vec3 traction = Vec3::Zero();  // dead, per reference length
};

struct LoadCase {
  Vec3 dead_load = Vec3::Zero();  // f0 per unit reference area
  PressureMode pressure_mode = PressureMode::VolumeConstraint;
  double prescribed_p = 0.0;
  double volume_target = 0.0;
  std::optional<Hydrostatic> hydrostatic;
  std::vector<Obstacle> obstacles;
  std::vector<EdgeTraction> edge_tractions;
};

struct SystemState {
  std::vector<Vec3> coords;
  double p_v = 0.0;
  double load_factor = 0.0;
};

// --- generators -----------------------------------------------------------

enum class ElementKind { LagrangeLinear, LagrangeQuadratic, NurbsQuadratic };

/// Octant (x,y,z >= 0) of a sphere of given radius, outward oriented, with
/// symmetry sets sym_x/sym_y/sym_z. For the NURBS kind only the single-patch
/// exact octant (n_circ = n_merid = 1) is supported.
Mesh make_sphere_octant(int n_circ, int n_merid, ElementKind kind, double radius);

/// Quarter sphere (x,y >= 0, full meridian pole to pole), for the
/// droplet-contact scenario; symmetry sets sym_x and sym_y.
Mesh make_sphere_quarter(int n_circ, int n_merid, ElementKind kind, double radius);

/// Flat square sheet [-hw,hw]^2 at z = 0 with n x n elements, boundary set
/// "clamped", reference metric scaled by the pre-stretch.
Mesh make_square_sheet(int n, ElementKind kind, double half_width, double prestretch);

/// Discrete enclosed volume V = (1/3) sum_e int x.n da. For open meshes the
/// clamped boundary must lie in a plane through the origin.
double enclosed_volume(const Mesh& mesh, const std::vector<Vec3>& coords,
                       int quadrature_order = 0);

// --- JSON mesh file format ------------------------------------------------

Mesh load_mesh_json(const std::string& path);
void save_mesh_json(const Mesh& mesh, const std::string& path);

}  // namespace memfem
