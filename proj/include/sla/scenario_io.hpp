#pragma once

// Scenario configuration text, VTK snapshots and the diagnostics CSV.
//
// Configuration format: '#' starts a comment, "[section]" opens a section and
// "key = value" sets a field inside it. Strings may be bare or double-quoted;
// booleans are true/false. Every key must belong to its section's schema:
//
//   [geometry]      length salt_height sediment_height nx ny_salt ny_sediment
//   [salt]          rho0 s1 s2 lambda mu1 mu2 mu3 beta
//   [sediment]      rho0 s1 s2 lambda mu1 mu2 mu3 beta
//   [time]          dt n_steps
//   [gravity]       magnitude ramp_steps ramp_angle_deg
//   [perturbation]  enabled center_x half_width amplitude mode(accommodated|nodal)
//   [output]        name directory cadence snapshots decomposition
//   [solver]        method(direct|iterative) tol max_iter stress_update(increment|recompute)
//
// Keys that are not given keep the value of the base configuration.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sla/scenario.hpp"
#include "sla/simulation.hpp"

namespace sla {

/// Parses configuration text on top of `base` and validates the result.
/// Throws ParseError (with the 1-based line) for malformed lines, unknown
/// sections or keys, duplicates and unparsable values; ValidationError when
/// the resulting configuration violates an invariant.
ScenarioConfig parse_config(std::string_view text, const ScenarioConfig& base = {});

/// Reads and parses a configuration file. Throws IoError when it cannot be read.
ScenarioConfig load_config(const std::filesystem::path& path, const ScenarioConfig& base = {});

/// Sets one field from a dotted key such as "geometry.nx" and a value text.
/// Does not validate the whole configuration. Throws ParseError.
void apply_override(ScenarioConfig& cfg, std::string_view dotted_key, std::string_view value);

/// Applies "section.key=value" assignments in order, then validates.
void apply_overrides(ScenarioConfig& cfg, std::span<const std::string> assignments);

/// Writes every field, so that parse_config(serialize(c)) == c.
std::string serialize(const ScenarioConfig& cfg);

/// Legacy ASCII VTK 3.0 unstructured grid of the current configuration with
/// cell data (region, p, rho, detF, Te_xx, Te_xy, Te_yx, Te_yy) and point data
/// (cumulative displacement). Throws ValidationError for an empty mesh and
/// IoError when the file cannot be written.
void write_snapshot(const SimState& state, const std::filesystem::path& path);

/// Header of the diagnostics CSV.
inline constexpr std::string_view kDiagnosticsHeader =
    "step,time_Ma,apex_height_m,min_area_ratio,max_u_m,residual,I1,I2,I3";

/// One CSV row per record; I1..I3 are empty unless the record carries them.
void write_diagnostics(std::span<const StepRecord> records, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace sla
