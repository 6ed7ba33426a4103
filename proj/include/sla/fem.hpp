#pragma once

// Assembly of the per-step linear problem
//
//   K(w, u) = L(w, u) + (1/dt) M(w, u) = P(w)   for all admissible w,
//
//   L(w, u) = int K(F, Te)[grad u] . grad w
//   M(w, u) = int M(F)[grad u] . grad w
//   P(w)    = int rho g . w + int_{top} f . w - int Te . grad w
//
// on linear triangles with one quadrature point (the centroid), so every
// integral is exact for the piecewise-constant state.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "sla/material.hpp"
#include "sla/mesh.hpp"

namespace sla {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/// Material parameters indexed by Region.
using RegionParams = std::array<MaterialParams, 2>;

inline const MaterialParams& params_for(const RegionParams& params, Region r) {
  return params[static_cast<std::size_t>(r)];
}

/// Traction prescribed on the free (top) boundary, as a function of position.
using SurfaceTraction = std::function<Vec2(const Vec2&)>;

using Triangle = std::array<Vec2, 3>;

/// Shape-function gradients of a linear triangle, plus its signed area.
struct ShapeGradients {
  std::array<Vec2, 3> grad{};
  double area = 0.0;
};

/// Throws ElementInverted when the signed area is not positive.
ShapeGradients shape_gradients(const Triangle& tri);

/// Gradient of a piecewise-linear field: H = sum_a u_a (x) grad N_a.
Tensor2 field_gradient(const ShapeGradients& sg, const std::array<Vec2, 3>& u);

/// Local dofs are ordered (ux0, uy0, ux1, uy1, ux2, uy2).
struct ElementMatrices {
  Matrix6 k_local = Matrix6::Zero();
  Vector6 f_local = Vector6::Zero();
};

/// Weights of the two bilinear forms in the stiffness: k = wL * L + wM * M.
struct FormWeights {
  double elastic = 1.0;
  double viscous = 1.0;
};

/// Element stiffness only, for arbitrary form weights.
Matrix6 element_stiffness(const ShapeGradients& sg, const PointState& st,
                          const MaterialParams& m, FormWeights w);

/// Stiffness for K = L + M / dt and the body-force / stress load.
ElementMatrices element_matrices(const Triangle& tri, const PointState& st,
                                 const MaterialParams& m, const Vec2& g, double dt);

/// Per-component dof numbering. free_index[2 n + c] is the position of that
/// dof in the reduced system, or -1 when it is constrained.
struct DofMap {
  std::vector<int> free_index;
  int num_free = 0;

  static DofMap all_free(std::size_t num_nodes);
  static DofMap from_rollers(const Mesh& mesh);

  bool is_free(int node, int component) const {
    return free_index[static_cast<std::size_t>(2 * node + component)] >= 0;
  }

  /// Restricts a full (2 * nodes) vector to free dofs.
  Vector restrict_to_free(const Vector& full) const;
  /// Expands free-dof values to one vector per node; constrained entries are 0.
  std::vector<Vec2> expand(const Vector& free) const;
};

struct SparseSystem {
  SparseMatrix matrix;
  Vector rhs;
  DofMap dofs;
};

struct AssemblyInput {
  const Mesh& mesh;
  std::span<const PointState> states;  ///< one per triangle
  const RegionParams& params;
  Vec2 gravity;
  SurfaceTraction traction;  ///< may be empty (traction-free top)
  double dt = 1.0;
};

/// Builds the full (unconstrained) system over all 2 * nodes dofs.
SparseSystem assemble(const AssemblyInput& in);

/// Removes x-dofs on side rollers and y-dofs on the bottom roller.
SparseSystem apply_roller_constraints(const SparseSystem& system, const Mesh& mesh);

/// assemble followed by apply_roller_constraints, without materializing the
/// unconstrained matrix.
SparseSystem assemble_constrained(const AssemblyInput& in);

/// Global matrix of one bilinear form combination over the given dof map.
SparseMatrix assemble_matrix(const Mesh& mesh, std::span<const PointState> states,
                             const RegionParams& params, FormWeights w, const DofMap& dofs);

// Load vectors over all 2 * nodes dofs.

/// int rho g . w  (rho from the point states).
Vector body_force_load(const Mesh& mesh, std::span<const PointState> states, const Vec2& g);
/// int_{top} f . w with a two-point Gauss rule per edge.
Vector surface_load(const Mesh& mesh, const SurfaceTraction& f);
/// int S . grad w for a piecewise-constant tensor field S (one per triangle).
Vector stress_load(const Mesh& mesh, std::span<const Tensor2> stress);

}  // namespace sla
