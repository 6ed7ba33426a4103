#include "sla/scenario.hpp"

#include <cmath>

#include "sla/errors.hpp"

namespace sla {

Perturbation resolve(const PerturbationSpec& spec, const Geometry& geom) {
  Perturbation p;
  p.center_x = spec.center_x.value_or(0.5 * geom.length);
  p.half_width = spec.half_width.value_or(2.0 * geom.element_width());
  p.amplitude = spec.amplitude.value_or(0.01 * geom.salt_height);
  p.mode = spec.mode;
  return p;
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return a.name == b.name && a.geometry == b.geometry && a.salt == b.salt &&
         a.sediment == b.sediment && a.time == b.time && a.gravity == b.gravity &&
         a.perturbation == b.perturbation && a.output == b.output &&
         a.solver.method == b.solver.method && a.solver.tol == b.solver.tol &&
         a.solver.max_iter == b.solver.max_iter && a.stress_update == b.stress_update;
}

void validate(const ScenarioConfig& cfg) {
  try {
    validate(cfg.geometry);
  } catch (const InvalidGeometry& e) {
    throw ValidationError(e.what());
  }
  validate(cfg.salt);
  validate(cfg.sediment);
  if (!(cfg.time.dt > 0.0)) throw ValidationError("time.dt must be positive");
  if (cfg.time.n_steps < 0) throw ValidationError("time.n_steps must be non-negative");
  if (!(cfg.gravity.magnitude >= 0.0)) throw ValidationError("gravity.magnitude must be >= 0");
  if (cfg.gravity.ramp_steps < 0) throw ValidationError("gravity.ramp_steps must be >= 0");
  if (!std::isfinite(cfg.gravity.ramp_angle_deg)) {
    throw ValidationError("gravity.ramp_angle_deg must be finite");
  }
  if (cfg.output.cadence < 1) throw ValidationError("output.cadence must be at least 1");
  if (!(cfg.solver.tol > 0.0)) throw ValidationError("solver.tol must be positive");
  if (cfg.solver.max_iter < 1) throw ValidationError("solver.max_iter must be at least 1");
  if (cfg.perturbation.enabled) {
    const Perturbation p = resolve(cfg.perturbation, cfg.geometry);
    if (!(p.half_width > 0.0)) throw ValidationError("perturbation.half_width must be positive");
    if (!(std::abs(p.amplitude) <= 0.05 * cfg.geometry.salt_height)) {
      throw ValidationError("perturbation.amplitude must not exceed 5% of the salt height");
    }
    if (!std::isfinite(p.center_x)) throw ValidationError("perturbation.center_x must be finite");
  }
}

namespace {

MaterialParams rock_salt(double beta) {
  MaterialParams m;
  m.rho0 = 2.2e3;
  m.s1 = 0.0;
  m.s2 = -0.2e3;
  m.lambda = -10.0e3;
  m.mu1 = 15.0e3;
  m.mu2 = 0.0;
  m.mu3 = 0.0;
  m.beta = beta;
  return m;
}

MaterialParams overburden(double beta) {
  MaterialParams m;
  m.rho0 = 3.0e3;
  m.s1 = 2.5e3;
  m.s2 = -7.5e3;
  m.beta = beta;
  return m;
}

}  // namespace

ScenarioConfig preset_diapir() {
  ScenarioConfig cfg;
  cfg.name = "diapir_6_1";
  cfg.geometry = {1200.0, 100.0, 200.0, 60, 5, 10};
  cfg.salt = rock_salt(1e9);
  cfg.sediment = overburden(1e9);
  cfg.time = {0.1, 300};
  cfg.perturbation.enabled = true;
  cfg.output.cadence = 10;
  return cfg;
}

ScenarioConfig preset_incline() {
  ScenarioConfig cfg;
  cfg.name = "incline_6_2";
  cfg.geometry = {5000.0, 100.0, 200.0, 100, 5, 10};
  cfg.salt = rock_salt(2e9);
  cfg.sediment = overburden(2e9);
  cfg.time = {0.1, 1500};
  cfg.gravity.ramp_steps = 10;
  cfg.gravity.ramp_angle_deg = 1.0;
  cfg.output.cadence = 50;
  return cfg;
}

std::optional<ScenarioConfig> find_preset(const std::string& name) {
  if (name == "diapir_6_1") return preset_diapir();
  if (name == "incline_6_2") return preset_incline();
  return std::nullopt;
}

}  // namespace sla
