#pragma once

// Successive linear approximation driver. Each step solves the linear
// problem on the current configuration, moves the nodes by the computed
// displacement and advances the per-element state with H = grad u taken in
// current coordinates. The velocity is approximated by u / dt.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "sla/fem.hpp"
#include "sla/scenario.hpp"
#include "sla/solver.hpp"

namespace sla {

struct SimState {
  Mesh mesh;                       ///< current configuration
  Mesh reference;                  ///< configuration at t0, for quality monitoring
  std::vector<PointState> states;  ///< one per triangle
  std::vector<Vec2> displacement;  ///< cumulative nodal displacement since t0
  int step = 0;
  double time = 0.0;  ///< Ma
  Vec2 gravity;       ///< body force acting on the current configuration
  RegionParams params;
};

/// One row of the diagnostics series.
struct StepRecord {
  int step = 0;
  double time = 0.0;
  double apex_height = 0.0;
  double min_area_ratio = 0.0;
  double max_u = 0.0;
  double residual = 0.0;
  bool has_decomposition = false;
  double I1 = 0.0;
  double I2 = 0.0;
  double I3 = 0.0;
};

/// Traction on the top boundary at a given step index.
using TractionSchedule = std::function<Vec2(const Vec2& x, int step)>;

struct StepControls {
  double dt = 0.1;
  double gravity_magnitude = 9.81;
  int ramp_steps = 0;
  double ramp_angle_deg = 0.0;
  TractionSchedule traction;  ///< empty for a traction-free top
  SolverOptions solver;
  StressUpdate stress_update = StressUpdate::Increment;
  bool decomposition = false;

  static StepControls from(const ScenarioConfig& cfg);
  Vec2 gravity_at(int step) const;
  SurfaceTraction traction_at(int step) const;
};

/// g0 rotated counter-clockwise by angle_deg * min(n / ramp_steps, 1).
Vec2 gravity_ramp(int n, int ramp_steps, double angle_deg, const Vec2& g0);

/// Lithostatic pressure at height y for the layered column (0 at the top).
double lithostatic_pressure(double y, const Geometry& geom, const RegionParams& params,
                            double g);

/// Builds the mesh and the lithostatic equilibrium state at t0: F = I,
/// H_prev = 0, rho = rho0, Te = -p_lith I at each element centroid.
SimState initialize(const ScenarioConfig& cfg);

/// Raises interface nodes by amplitude * cos^2(pi (x - c) / (2 w)) for
/// |x - c| <= w and pushes the induced gradient through update_point_state.
/// In Accommodated mode the remaining nodes follow from a constrained solve
/// (see PerturbationMode); the interface nodes still move by exactly the bump.
SimState apply_perturbation(const SimState& state, const Perturbation& p, double dt,
                            StressUpdate mode = StressUpdate::Increment,
                            const SolverOptions& opts = {});

struct StepResult {
  SimState state;
  StepRecord record;
};

/// Advances the state by one step. Throws ElementInverted (with step and
/// element), SolverBreakdown or NoConvergence.
StepResult step(const SimState& state, const StepControls& ctl);

/// Load vectors over the free dofs of the current configuration.
struct LoadDecomposition {
  Vector I1;  ///< int rho_n (g_{n+1} - g_n) . w
  Vector I2;  ///< int_{top} (f_{n+1} - f_n) . w
  Vector I3;  ///< int M(F_n)[H_prev / dt] . grad w
};

LoadDecomposition incremental_decomposition(const SimState& state, const Vec2& next_g,
                                            const SurfaceTraction& next_f,
                                            const SurfaceTraction& current_f, double dt);

/// The full step load P = int rho_n g_{n+1} . w + int f_{n+1} . w - int Te . grad w.
Vector step_load(const SimState& state, const Vec2& next_g, const SurfaceTraction& next_f);

/// Residual of the previous step's equilibrium:
/// int rho_n g_n . w + int f_n . w - int (Te + M(F_n)[H_prev / dt]) . grad w.
/// P = I1 + I2 + I3 + this residual holds identically.
Vector equilibrium_residual(const SimState& state, const SurfaceTraction& current_f, double dt);

double apex_height(const Mesh& mesh);

/// Sum of rho * area per region, indexed by Region.
std::array<double, 2> region_mass(const SimState& state);

enum class Failure { None, Inversion, Solver, Other };

struct RunResult {
  std::vector<StepRecord> records;  ///< one per completed step
  SimState final_state;
  Failure failure = Failure::None;
  std::string error;  ///< empty on success
};

struct RunHooks {
  /// Called with the state after initialization (and perturbation) and then
  /// every `cadence` steps, and after the last step.
  std::function<void(const SimState&)> snapshot;
  /// Called after every completed step.
  std::function<void(const SimState&, const StepRecord&)> on_step;
};

/// initialize -> optional perturbation -> n_steps x step. Step errors stop the
/// run; the records collected so far are returned together with the failure.
RunResult run(const ScenarioConfig& cfg, int n_steps, const RunHooks& hooks = {});

}  // namespace sla
