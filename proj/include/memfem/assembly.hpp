#pragma once

#include <span>

#include <Eigen/Sparse>

#include "memfem/material.hpp"
#include "memfem/mesh.hpp"

namespace memfem {

/// Reference data cached per quadrature point: basis evaluation and the
/// (pre-stretch scaled) reference frame.
struct ElementQP {
  BasisEval be;
  SurfaceFrame ref;
  double w = 0.0;  // Gauss weight
};

struct ElementCache {
  int element_id = 0;
  std::vector<int> nodes;
  ElementBasis basis;
  std::vector<Vec3> X;  // reference nodal coordinates
  std::vector<ElementQP> qps;
  double h = 0.0;  // characteristic element size (sqrt of reference area)
};

/// Precomputed reference-side data for the whole mesh.
struct AssemblyContext {
  std::vector<ElementCache> elements;
  int quadrature_order = 0;  // 0 = per-kind default

  static AssemblyContext build(const Mesh& mesh, int quadrature_order = 0);
};

/// Current-configuration state at one quadrature point.
struct QPState {
  SurfaceFrame cur;
  DeformationMeasures def;
  StressState stress;
};

std::vector<QPState> eval_states(const ElementCache& ec, std::span<const Vec3> xe,
                                 const MaterialModel& model, bool with_curvature);

// --- element force vectors -------------------------------------------------

VecX element_fint(const ElementCache& ec, const std::vector<QPState>& st,
                  std::span<const Vec3> xe);

/// In-plane / out-of-plane split of the internal force. With
/// use_stab_stress the stabilization stress tau_stab is integrated instead
/// of tau. Requires curvature data in the states.
struct SplitForces {
  VecX f_inti, f_into;
};
SplitForces element_fint_split(const ElementCache& ec, const std::vector<QPState>& st,
                               std::span<const Vec3> xe, bool use_stab_stress = false);

struct ExternalForces {
  VecX f_ext, l_ext;  // l_ext = d f_ext / d p_v
};
ExternalForces element_fext(const ElementCache& ec, const std::vector<QPState>& st,
                            const LoadCase& load, double p_v, std::span<const Vec3> xe);

struct ContactForces {
  VecX f_c;
  MatX k_c;  // d f_c / d x_e
};
ContactForces element_contact(const ElementCache& ec, const std::vector<QPState>& st,
                              const std::vector<Obstacle>& obstacles,
                              std::span<const Vec3> xe);

struct VolumeContribution {
  double g_v_e = 0.0;  // element part of V
  VecX h_v;            // d g_v_e / d x_e
};
VolumeContribution element_volume(const ElementCache& ec, const std::vector<QPState>& st,
                                  std::span<const Vec3> xe);

// --- element tangent blocks ------------------------------------------------

/// Analytic internal tangent k_mat + k_geo from the stored tau and moduli.
MatX element_kint(const ElementCache& ec, const std::vector<QPState>& st);

/// External tangent d f_ext / d x_e (live pressure and hydrostatic parts).
MatX element_kext(const ElementCache& ec, const std::vector<QPState>& st,
                  const LoadCase& load, double p_v, std::span<const Vec3> xe);

/// Stabilization tangent d f_inti(tau_stab) / d x_e by central differences
/// (step 1e-7 * element size).
MatX element_kstab_fd(const ElementCache& ec, std::span<const Vec3> xe,
                      const MaterialModel& model);

// --- global assembly -------------------------------------------------------

struct GlobalSystem {
  VecX residual;                   // f_int - f_ext - f_c, Dirichlet rows zeroed
  Eigen::SparseMatrix<double> K;   // residual tangent, Dirichlet rows/cols identity
  VecX h_v;                        // volume-constraint row
  VecX l_ext;                      // volume-constraint column (d f_ext / d p_v)
  double g_v = 0.0;                // V - V_target (volume mode)
  double V = 0.0;                  // current enclosed volume
  double force_scale = 0.0;        // sum of element force magnitudes, for
                                   // normalizing the residual
  // quadrature-point monitors
  double min_sigma = 0.0;          // minimum principal stress over all points
  double max_tension_err = 0.0;    // max |I1/(2 gamma) - 1| (liquid models)
  double p_min = 0.0, p_max = 0.0; // total pressure range over quadrature points
};

GlobalSystem assemble(const Mesh& mesh, const AssemblyContext& ctx,
                      const BoundaryConditions& bcs, const LoadCase& load,
                      const SystemState& state, const MaterialModel& model,
                      bool with_tangent = true);

}  // namespace memfem
