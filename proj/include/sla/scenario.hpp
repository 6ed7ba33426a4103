#pragma once

// Scenario description shared by the stepper, the config parser and the CLI.

#include <optional>
#include <string>

#include "sla/material.hpp"
#include "sla/mesh.hpp"
#include "sla/solver.hpp"

namespace sla {

struct TimeSpec {
  double dt = 0.1;  ///< Ma
  int n_steps = 0;

  friend bool operator==(const TimeSpec&, const TimeSpec&) = default;
};

/// Gravity starts as (0, -magnitude) and is rotated counter-clockwise by
/// ramp_angle_deg over the first ramp_steps steps (0 disables the ramp). A
/// positive angle tilts the frame as if the left end of the base were lifted.
struct GravitySpec {
  double magnitude = 9.81;  ///< m/s^2
  int ramp_steps = 0;
  double ramp_angle_deg = 0.0;

  friend bool operator==(const GravitySpec&, const GravitySpec&) = default;
};

/// How the rest of the body responds to the prescribed interface bump.
///  - Accommodated: the bump is imposed as a displacement constraint on the
///    interface nodes and every other free dof follows from one solve of the
///    step operator L + M / dt with zero load.
///  - Nodal: only the interface nodes move; all other nodes stay put.
enum class PerturbationMode { Accommodated, Nodal };

/// Vertical cos^2 bump applied to the interface nodes before the first step.
/// Unset fields resolve against the geometry: centre of the domain, two
/// element widths, 1% of the salt height.
struct PerturbationSpec {
  bool enabled = false;
  PerturbationMode mode = PerturbationMode::Accommodated;
  std::optional<double> center_x;
  std::optional<double> half_width;
  std::optional<double> amplitude;

  friend bool operator==(const PerturbationSpec&, const PerturbationSpec&) = default;
};

/// PerturbationSpec with every field resolved.
struct Perturbation {
  double center_x = 0.0;
  double half_width = 0.0;
  double amplitude = 0.0;
  PerturbationMode mode = PerturbationMode::Accommodated;
};

Perturbation resolve(const PerturbationSpec& spec, const Geometry& geom);

struct OutputSpec {
  int cadence = 10;  ///< snapshot every `cadence` steps
  std::string directory = "out";
  bool snapshots = true;
  bool decomposition = false;  ///< record I1/I2/I3 magnitudes per step

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ScenarioConfig {
  std::string name = "custom";
  Geometry geometry;
  MaterialParams salt;
  MaterialParams sediment;
  TimeSpec time;
  GravitySpec gravity;
  PerturbationSpec perturbation;
  OutputSpec output;
  SolverOptions solver;
  StressUpdate stress_update = StressUpdate::Increment;
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/// Throws ValidationError on any invariant violation (including geometry).
void validate(const ScenarioConfig& cfg);

/// Two-layer diapir: 1200 m x (100 m salt + 200 m sediment), centred
/// perturbation, dt = 0.1 Ma.
ScenarioConfig preset_diapir();

/// Inclined base: 5000 m long, beta = 2e9 Pa, gravity tilted to 1 degree over
/// the first 10 steps, no perturbation.
ScenarioConfig preset_incline();

/// Looks up a preset by name ("diapir_6_1" or "incline_6_2").
std::optional<ScenarioConfig> find_preset(const std::string& name);

}  // namespace sla
