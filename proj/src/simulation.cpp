#include "sla/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sla/errors.hpp"
#include "sla/parallel.hpp"

namespace sla {

namespace {

Triangle corners(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  return {mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
}

std::array<Vec2, 3> nodal(const std::vector<Vec2>& u, const std::array<int, 3>& tri) {
  return {u[tri[0]], u[tri[1]], u[tri[2]]};
}

/// Per-element relative displacement gradients of a nodal field on `mesh`.
std::vector<Tensor2> element_gradients(const Mesh& mesh, const std::vector<Vec2>& u) {
  std::vector<Tensor2> H(mesh.triangles.size());
  parallel_for(H.size(), [&](std::size_t t) {
    H[t] = field_gradient(shape_gradients(corners(mesh, t)), nodal(u, mesh.triangles[t]));
  });
  return H;
}

/// Advances every point state and moves the mesh; shared by the stepper and
/// the perturbation.
void advance(SimState& s, const std::vector<Vec2>& u, double dt, StressUpdate mode) {
  const std::vector<Tensor2> H = element_gradients(s.mesh, u);
  std::vector<PointState> next(s.states.size());
  parallel_for(next.size(), [&](std::size_t t) {
    try {
      next[t] = update_point_state(s.states[t], H[t], dt,
                                   params_for(s.params, s.mesh.region[t]), mode);
    } catch (const ElementInverted& e) {
      throw ElementInverted(std::string(e.what()) + " (element " + std::to_string(t) + ")",
                            static_cast<long>(t));
    }
  });
  s.states = std::move(next);
  s.mesh = displace_nodes(s.mesh, u);
  for (std::size_t n = 0; n < u.size(); ++n) s.displacement[n] += u[n];
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

StepControls StepControls::from(const ScenarioConfig& cfg) {
  StepControls c;
  c.dt = cfg.time.dt;
  c.gravity_magnitude = cfg.gravity.magnitude;
  c.ramp_steps = cfg.gravity.ramp_steps;
  c.ramp_angle_deg = cfg.gravity.ramp_angle_deg;
  c.solver = cfg.solver;
  c.stress_update = cfg.stress_update;
  c.decomposition = cfg.output.decomposition;
  return c;
}

Vec2 StepControls::gravity_at(int step) const {
  const Vec2 g0{0.0, -gravity_magnitude};
  if (ramp_steps < 1) return g0;
  return gravity_ramp(step, ramp_steps, ramp_angle_deg, g0);
}

SurfaceTraction StepControls::traction_at(int step) const {
  if (!traction) return {};
  return [f = traction, step](const Vec2& x) { return f(x, step); };
}

Vec2 gravity_ramp(int n, int ramp_steps, double angle_deg, const Vec2& g0) {
  if (ramp_steps < 1) throw ValidationError("ramp_steps must be at least 1");
  const double frac = std::min(static_cast<double>(std::max(n, 0)) / ramp_steps, 1.0);
  const double a = angle_deg * frac * std::numbers::pi / 180.0;
  const double c = std::cos(a);
  const double s = std::sin(a);
  return {c * g0.x - s * g0.y, s * g0.x + c * g0.y};
}

double lithostatic_pressure(double y, const Geometry& geom, const RegionParams& params,
                            double g) {
  const double rho_salt = params_for(params, Region::Salt).rho0;
  const double rho_sed = params_for(params, Region::Sediment).rho0;
  const double top = geom.height();
  if (y >= geom.salt_height) return rho_sed * g * (top - y);
  return rho_sed * g * geom.sediment_height + rho_salt * g * (geom.salt_height - y);
}

SimState initialize(const ScenarioConfig& cfg) {
  validate(cfg.geometry);
  SimState s;
  s.mesh = build_two_layer_mesh(cfg.geometry);
  s.reference = s.mesh;
  s.params = {cfg.salt, cfg.sediment};
  s.displacement.assign(s.mesh.nodes.size(), Vec2{});
  s.gravity = StepControls::from(cfg).gravity_at(0);
  s.states.resize(s.mesh.triangles.size());
  const double g = norm(s.gravity);
  for (std::size_t t = 0; t < s.mesh.triangles.size(); ++t) {
    const auto& tri = s.mesh.triangles[t];
    const double yc =
        (s.mesh.nodes[tri[0]].y + s.mesh.nodes[tri[1]].y + s.mesh.nodes[tri[2]].y) / 3.0;
    const double q = lithostatic_pressure(yc, cfg.geometry, s.params, g);
    s.states[t] = hydrostatic_point(q, params_for(s.params, s.mesh.region[t]));
  }
  return s;
}

namespace {

/// Displacement of the whole body when the interface bump is imposed as a
/// constraint and the other free dofs solve (L + M / dt) u = 0.
std::vector<Vec2> accommodate(const SimState& s, const std::vector<Vec2>& bump,
                              const std::vector<bool>& prescribed, double dt,
                              const SolverOptions& opts) {
  const std::size_t n_nodes = s.mesh.nodes.size();
  const FormWeights w{1.0, 1.0 / dt};
  DofMap free = DofMap::from_rollers(s.mesh);
  for (std::size_t n = 0; n < n_nodes; ++n) {
    if (prescribed[n]) free.free_index[2 * n + 1] = -1;
  }
  free.num_free = 0;
  for (int& idx : free.free_index) {
    if (idx >= 0) idx = free.num_free++;
  }

  Vector up = Vector::Zero(static_cast<Eigen::Index>(2 * n_nodes));
  for (std::size_t n = 0; n < n_nodes; ++n) up(static_cast<Eigen::Index>(2 * n + 1)) = bump[n].y;
  const SparseMatrix full = assemble_matrix(s.mesh, s.states, s.params, w,
                                            DofMap::all_free(n_nodes));
  const Vector rhs = free.restrict_to_free(-(full * up));
  const SparseMatrix A = assemble_matrix(s.mesh, s.states, s.params, w, free);
  const Vector uf = solve(A, rhs, opts).solution;

  std::vector<Vec2> u = free.expand(uf);
  for (std::size_t n = 0; n < n_nodes; ++n) {
    if (prescribed[n]) u[n].y = bump[n].y;
  }
  return u;
}

}  // namespace

SimState apply_perturbation(const SimState& state, const Perturbation& p, double dt,
                            StressUpdate mode, const SolverOptions& opts) {
  if (p.amplitude == 0.0) return state;
  if (!(p.half_width > 0.0)) throw ValidationError("perturbation half width must be positive");
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  std::vector<Vec2> u(state.mesh.nodes.size());
  std::vector<bool> prescribed(state.mesh.nodes.size(), false);
  for (int n : state.mesh.interface_nodes) {
    const double d = state.mesh.nodes[n].x - p.center_x;
    if (std::abs(d) > p.half_width) continue;
    const double c = std::cos(std::numbers::pi * d / (2.0 * p.half_width));
    u[n].y = p.amplitude * c * c;
    prescribed[n] = true;
  }
  if (p.mode == PerturbationMode::Accommodated) u = accommodate(state, u, prescribed, dt, opts);
  SimState s = state;
  advance(s, u, dt, mode);
  return s;
}

Vector step_load(const SimState& state, const Vec2& next_g, const SurfaceTraction& next_f) {
  const DofMap dofs = DofMap::from_rollers(state.mesh);
  std::vector<Tensor2> Te(state.states.size());
  for (std::size_t t = 0; t < Te.size(); ++t) Te[t] = state.states[t].Te;
  Vector full = body_force_load(state.mesh, state.states, next_g) - stress_load(state.mesh, Te);
  if (next_f) full += surface_load(state.mesh, next_f);
  return dofs.restrict_to_free(full);
}

namespace {

std::vector<Tensor2> viscous_stress(const SimState& state, double dt) {
  std::vector<Tensor2> S(state.states.size());
  for (std::size_t t = 0; t < S.size(); ++t) {
    const PointState& st = state.states[t];
    S[t] = viscosity_apply(st.F, (1.0 / dt) * st.H_prev,
                           params_for(state.params, state.mesh.region[t]));
  }
  return S;
}

}  // namespace

LoadDecomposition incremental_decomposition(const SimState& state, const Vec2& next_g,
                                            const SurfaceTraction& next_f,
                                            const SurfaceTraction& current_f, double dt) {
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  const DofMap dofs = DofMap::from_rollers(state.mesh);
  LoadDecomposition out;
  out.I1 = dofs.restrict_to_free(body_force_load(state.mesh, state.states, next_g - state.gravity));
  out.I2 = dofs.restrict_to_free(surface_load(state.mesh, next_f) -
                                 surface_load(state.mesh, current_f));
  out.I3 = dofs.restrict_to_free(stress_load(state.mesh, viscous_stress(state, dt)));
  return out;
}

Vector equilibrium_residual(const SimState& state, const SurfaceTraction& current_f, double dt) {
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  const DofMap dofs = DofMap::from_rollers(state.mesh);
  std::vector<Tensor2> total = viscous_stress(state, dt);
  for (std::size_t t = 0; t < total.size(); ++t) total[t] += state.states[t].Te;
  Vector full = body_force_load(state.mesh, state.states, state.gravity) -
                stress_load(state.mesh, total) + surface_load(state.mesh, current_f);
  return dofs.restrict_to_free(full);
}

double apex_height(const Mesh& mesh) {
  double apex = -std::numeric_limits<double>::infinity();
  for (int n : mesh.interface_nodes) apex = std::max(apex, mesh.nodes[n].y);
  return apex;
}

std::array<double, 2> region_mass(const SimState& state) {
  std::array<double, 2> mass{0.0, 0.0};
  for (std::size_t t = 0; t < state.states.size(); ++t) {
    mass[static_cast<std::size_t>(state.mesh.region[t])] +=
        state.states[t].rho * signed_area(state.mesh, t);
  }
  return mass;
}

StepResult step(const SimState& state, const StepControls& ctl) {
  if (!(ctl.dt > 0.0)) throw ValidationError("time step must be positive");
  const int next_step = state.step + 1;
  const Vec2 next_g = ctl.gravity_at(next_step);
  const SurfaceTraction next_f = ctl.traction_at(next_step);

  StepRecord rec;
  rec.step = next_step;
  rec.time = next_step * ctl.dt;
  if (ctl.decomposition) {
    const auto dec =
        incremental_decomposition(state, next_g, next_f, ctl.traction_at(state.step), ctl.dt);
    rec.has_decomposition = true;
    rec.I1 = max_abs(dec.I1);
    rec.I2 = max_abs(dec.I2);
    rec.I3 = max_abs(dec.I3);
  }

  StepResult out{state, rec};
  SimState& s = out.state;
  try {
    const SparseSystem sys =
        assemble_constrained({s.mesh, s.states, s.params, next_g, next_f, ctl.dt});
    const SolveResult sol = solve(sys, ctl.solver);
    const std::vector<Vec2> u = sys.dofs.expand(sol.solution);

    out.record.residual = sol.report.residual_norm;
    for (const Vec2& v : u) out.record.max_u = std::max(out.record.max_u, norm(v));

    advance(s, u, ctl.dt, ctl.stress_update);
  } catch (const ElementInverted& e) {
    throw ElementInverted("step " + std::to_string(next_step) + ": " + e.what(), e.element(),
                          next_step);
  }

  s.step = next_step;
  s.time = next_step * ctl.dt;
  s.gravity = next_g;

  out.record.apex_height = apex_height(s.mesh);
  out.record.min_area_ratio = min_area_ratio(s.mesh, s.reference);
  if (!(out.record.min_area_ratio > 0.0)) {
    throw ElementInverted("step " + std::to_string(next_step) + ": mesh inverted", -1, next_step);
  }
  return out;
}

RunResult run(const ScenarioConfig& cfg, int n_steps, const RunHooks& hooks) {
  validate(cfg);
  const StepControls ctl = StepControls::from(cfg);
  RunResult result;
  result.final_state = initialize(cfg);
  if (cfg.perturbation.enabled) {
    result.final_state = apply_perturbation(
        result.final_state, resolve(cfg.perturbation, cfg.geometry), ctl.dt, ctl.stress_update, ctl.solver);
  }
  if (hooks.snapshot) hooks.snapshot(result.final_state);

  for (int n = 0; n < n_steps; ++n) {
    try {
      StepResult r = step(result.final_state, ctl);
      result.final_state = std::move(r.state);
      result.records.push_back(r.record);
      if (hooks.on_step) hooks.on_step(result.final_state, r.record);
    } catch (const ElementInverted& e) {
      result.failure = Failure::Inversion;
      result.error = e.what();
      break;
    } catch (const SolverBreakdown& e) {
      result.failure = Failure::Solver;
      result.error = e.what();
      break;
    } catch (const NoConvergence& e) {
      result.failure = Failure::Solver;
      result.error = e.what();
      break;
    } catch (const Error& e) {
      result.failure = Failure::Other;
      result.error = e.what();
      break;
    }
    const int done = n + 1;
    if (hooks.snapshot && (done % cfg.output.cadence == 0 || done == n_steps)) {
      hooks.snapshot(result.final_state);
    }
  }
  if (hooks.snapshot && result.failure != Failure::None) hooks.snapshot(result.final_state);
  return result;
}

}  // namespace sla
