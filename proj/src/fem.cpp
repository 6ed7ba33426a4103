#include "sla/fem.hpp"

#include <cmath>
#include <string>

#include "sla/errors.hpp"
#include "sla/parallel.hpp"

namespace sla {

ShapeGradients shape_gradients(const Triangle& tri) {
  const Vec2& p0 = tri[0];
  const Vec2& p1 = tri[1];
  const Vec2& p2 = tri[2];
  ShapeGradients sg;
  sg.area = 0.5 * cross(p1 - p0, p2 - p0);
  if (!(sg.area > 0.0)) {
    throw ElementInverted("triangle has non-positive area " + std::to_string(sg.area));
  }
  const double inv2a = 1.0 / (2.0 * sg.area);
  sg.grad[0] = {(p1.y - p2.y) * inv2a, (p2.x - p1.x) * inv2a};
  sg.grad[1] = {(p2.y - p0.y) * inv2a, (p0.x - p2.x) * inv2a};
  sg.grad[2] = {(p0.y - p1.y) * inv2a, (p1.x - p0.x) * inv2a};
  return sg;
}

Tensor2 field_gradient(const ShapeGradients& sg, const std::array<Vec2, 3>& u) {
  Tensor2 H;
  for (int a = 0; a < 3; ++a) H += outer(u[a], sg.grad[a]);
  return H;
}

namespace {

constexpr Vec2 kUnit[2] = {{1.0, 0.0}, {0.0, 1.0}};

Triangle corners(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  return {mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
}

std::array<int, 6> global_dofs(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  return {2 * tri[0], 2 * tri[0] + 1, 2 * tri[1], 2 * tri[1] + 1, 2 * tri[2], 2 * tri[2] + 1};
}

void check_states(const Mesh& mesh, std::span<const PointState> states) {
  if (states.size() != mesh.triangles.size()) {
    throw ValidationError("expected one point state per triangle");
  }
}

SparseMatrix scatter(const std::vector<Matrix6>& local, const Mesh& mesh, const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(local.size() * 36);
  for (std::size_t t = 0; t < local.size(); ++t) {
    const auto g = global_dofs(mesh, t);
    for (int r = 0; r < 6; ++r) {
      const int row = dofs.free_index[g[r]];
      if (row < 0) continue;
      for (int c = 0; c < 6; ++c) {
        const int col = dofs.free_index[g[c]];
        if (col < 0) continue;
        triplets.emplace_back(row, col, local[t](r, c));
      }
    }
  }
  SparseMatrix A(dofs.num_free, dofs.num_free);
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

}  // namespace

Matrix6 element_stiffness(const ShapeGradients& sg, const PointState& st,
                          const MaterialParams& m, FormWeights w) {
  Matrix6 k;
  for (int b = 0; b < 3; ++b) {
    for (int j = 0; j < 2; ++j) {
      const Tensor2 E = outer(kUnit[j], sg.grad[b]);
      Tensor2 S;
      if (w.elastic != 0.0) S += w.elastic * piola_elasticity_apply(st.F, st.Te, E, m);
      if (w.viscous != 0.0) S += w.viscous * viscosity_apply(st.F, E, m);
      for (int a = 0; a < 3; ++a) {
        const Vec2 s = S * sg.grad[a];
        k(2 * a, 2 * b + j) = sg.area * s.x;
        k(2 * a + 1, 2 * b + j) = sg.area * s.y;
      }
    }
  }
  return k;
}

ElementMatrices element_matrices(const Triangle& tri, const PointState& st,
                                 const MaterialParams& m, const Vec2& g, double dt) {
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  const ShapeGradients sg = shape_gradients(tri);
  ElementMatrices em;
  em.k_local = element_stiffness(sg, st, m, {1.0, 1.0 / dt});
  const Vec2 body = (st.rho * sg.area / 3.0) * g;
  for (int a = 0; a < 3; ++a) {
    const Vec2 s = st.Te * sg.grad[a];
    em.f_local(2 * a) = body.x - sg.area * s.x;
    em.f_local(2 * a + 1) = body.y - sg.area * s.y;
  }
  return em;
}

DofMap DofMap::all_free(std::size_t num_nodes) {
  DofMap map;
  map.free_index.resize(2 * num_nodes);
  for (std::size_t i = 0; i < map.free_index.size(); ++i) map.free_index[i] = static_cast<int>(i);
  map.num_free = static_cast<int>(map.free_index.size());
  return map;
}

DofMap DofMap::from_rollers(const Mesh& mesh) {
  const auto fixed = roller_constraints(mesh);
  DofMap map;
  map.free_index.assign(2 * mesh.nodes.size(), -1);
  int next = 0;
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    for (int c = 0; c < 2; ++c) {
      if (!fixed[n][c]) map.free_index[2 * n + c] = next++;
    }
  }
  map.num_free = next;
  return map;
}

Vector DofMap::restrict_to_free(const Vector& full) const {
  if (static_cast<std::size_t>(full.size()) != free_index.size()) {
    throw ValidationError("vector size does not match dof map");
  }
  Vector out(num_free);
  for (std::size_t i = 0; i < free_index.size(); ++i) {
    if (free_index[i] >= 0) out(free_index[i]) = full(static_cast<Eigen::Index>(i));
  }
  return out;
}

std::vector<Vec2> DofMap::expand(const Vector& free) const {
  if (free.size() != num_free) throw ValidationError("vector size does not match dof map");
  std::vector<Vec2> u(free_index.size() / 2);
  for (std::size_t n = 0; n < u.size(); ++n) {
    const int ix = free_index[2 * n];
    const int iy = free_index[2 * n + 1];
    u[n] = {ix >= 0 ? free(ix) : 0.0, iy >= 0 ? free(iy) : 0.0};
  }
  return u;
}

namespace {

SparseSystem assemble_with(const AssemblyInput& in, DofMap dofs) {
  check_states(in.mesh, in.states);
  if (!(in.dt > 0.0)) throw ValidationError("time step must be positive");
  const std::size_t nt = in.mesh.triangles.size();
  std::vector<Matrix6> local(nt);
  std::vector<Vector6> load(nt);
  parallel_for(nt, [&](std::size_t t) {
    try {
      const auto em = element_matrices(corners(in.mesh, t), in.states[t],
                                       params_for(in.params, in.mesh.region[t]), in.gravity,
                                       in.dt);
      local[t] = em.k_local;
      load[t] = em.f_local;
    } catch (const ElementInverted& e) {
      throw ElementInverted(std::string(e.what()) + " (element " + std::to_string(t) + ")",
                            static_cast<long>(t));
    }
  });

  Vector full = Vector::Zero(static_cast<Eigen::Index>(2 * in.mesh.nodes.size()));
  for (std::size_t t = 0; t < nt; ++t) {
    const auto g = global_dofs(in.mesh, t);
    for (int r = 0; r < 6; ++r) full(g[r]) += load[t](r);
  }
  if (in.traction) full += surface_load(in.mesh, in.traction);

  SparseSystem sys;
  sys.matrix = scatter(local, in.mesh, dofs);
  sys.rhs = dofs.restrict_to_free(full);
  sys.dofs = std::move(dofs);
  return sys;
}

}  // namespace

SparseSystem assemble(const AssemblyInput& in) {
  return assemble_with(in, DofMap::all_free(in.mesh.nodes.size()));
}

SparseSystem assemble_constrained(const AssemblyInput& in) {
  return assemble_with(in, DofMap::from_rollers(in.mesh));
}

SparseSystem apply_roller_constraints(const SparseSystem& system, const Mesh& mesh) {
  DofMap reduced = DofMap::from_rollers(mesh);
  // Old free index -> new free index.
  std::vector<int> remap(static_cast<std::size_t>(system.dofs.num_free), -1);
  for (std::size_t i = 0; i < reduced.free_index.size(); ++i) {
    const int old_index = system.dofs.free_index[i];
    if (old_index >= 0) remap[old_index] = reduced.free_index[i];
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(system.matrix.nonZeros()));
  for (int r = 0; r < system.matrix.outerSize(); ++r) {
    if (remap[r] < 0) continue;
    for (SparseMatrix::InnerIterator it(system.matrix, r); it; ++it) {
      const int c = remap[it.col()];
      if (c >= 0) triplets.emplace_back(remap[r], c, it.value());
    }
  }
  SparseSystem out;
  out.matrix.resize(reduced.num_free, reduced.num_free);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.rhs.resize(reduced.num_free);
  for (int r = 0; r < system.dofs.num_free; ++r) {
    if (remap[r] >= 0) out.rhs(remap[r]) = system.rhs(r);
  }
  out.dofs = std::move(reduced);
  return out;
}

SparseMatrix assemble_matrix(const Mesh& mesh, std::span<const PointState> states,
                             const RegionParams& params, FormWeights w, const DofMap& dofs) {
  check_states(mesh, states);
  std::vector<Matrix6> local(mesh.triangles.size());
  parallel_for(local.size(), [&](std::size_t t) {
    local[t] = element_stiffness(shape_gradients(corners(mesh, t)), states[t],
                                 params_for(params, mesh.region[t]), w);
  });
  return scatter(local, mesh, dofs);
}

Vector body_force_load(const Mesh& mesh, std::span<const PointState> states, const Vec2& g) {
  check_states(mesh, states);
  Vector full = Vector::Zero(static_cast<Eigen::Index>(2 * mesh.nodes.size()));
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Vec2 f = (states[t].rho * signed_area(mesh, t) / 3.0) * g;
    for (int n : mesh.triangles[t]) {
      full(2 * n) += f.x;
      full(2 * n + 1) += f.y;
    }
  }
  return full;
}

Vector surface_load(const Mesh& mesh, const SurfaceTraction& f) {
  Vector full = Vector::Zero(static_cast<Eigen::Index>(2 * mesh.nodes.size()));
  if (!f) return full;
  // Two-point Gauss rule on [0, 1].
  const double r = 0.5 / std::sqrt(3.0);
  const double xi[2] = {0.5 - r, 0.5 + r};
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::TopFree) continue;
    const Vec2& a = mesh.nodes[e.nodes[0]];
    const Vec2& b = mesh.nodes[e.nodes[1]];
    const double len = norm(b - a);
    for (double s : xi) {
      const Vec2 t = f(a + s * (b - a));
      const double w = 0.5 * len;
      const double na = (1.0 - s) * w;
      const double nb = s * w;
      full(2 * e.nodes[0]) += na * t.x;
      full(2 * e.nodes[0] + 1) += na * t.y;
      full(2 * e.nodes[1]) += nb * t.x;
      full(2 * e.nodes[1] + 1) += nb * t.y;
    }
  }
  return full;
}

Vector stress_load(const Mesh& mesh, std::span<const Tensor2> stress) {
  if (stress.size() != mesh.triangles.size()) {
    throw ValidationError("expected one stress per triangle");
  }
  Vector full = Vector::Zero(static_cast<Eigen::Index>(2 * mesh.nodes.size()));
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const ShapeGradients sg = shape_gradients(corners(mesh, t));
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      const Vec2 s = stress[t] * sg.grad[a];
      full(2 * tri[a]) += sg.area * s.x;
      full(2 * tri[a] + 1) += sg.area * s.y;
    }
  }
  return full;
}

}  // namespace sla
