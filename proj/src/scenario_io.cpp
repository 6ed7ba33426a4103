#include "sla/scenario_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <system_error>
#include <type_traits>

#include "sla/errors.hpp"

namespace sla {

namespace {

// ---------------------------------------------------------------------------
// Value conversion

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw ParseError("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

int to_int(std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw ParseError("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ParseError("expected true or false, got '" + std::string(v) + "'");
}

std::string to_string_value(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  if (v.find('"') != std::string_view::npos) {
    throw ParseError("unbalanced quote in '" + std::string(v) + "'");
  }
  return std::string(v);
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }
std::string fmt(double v) { return format_double(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

// ---------------------------------------------------------------------------
// Schema

struct Field {
  std::string_view section;
  std::string_view key;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  /// Empty when the field is unset and must not be serialized.
  std::function<std::optional<std::string>(const ScenarioConfig&)> get;
};

template <class Member>
Field number(std::string_view section, std::string_view key, Member member) {
  return {section, key,
          [member](ScenarioConfig& c, std::string_view v) {
            auto& target = member(c);
            if constexpr (std::is_same_v<std::remove_cvref_t<decltype(target)>, int>) {
              target = to_int(v);
            } else {
              target = to_double(v);
            }
          },
          [member](const ScenarioConfig& c) -> std::optional<std::string> {
            return fmt(member(c));
          }};
}

template <class Member>
Field flag(std::string_view section, std::string_view key, Member member) {
  return {section, key, [member](ScenarioConfig& c, std::string_view v) { member(c) = to_bool(v); },
          [member](const ScenarioConfig& c) -> std::optional<std::string> {
            return fmt(member(c));
          }};
}

template <class Member>
Field optional_number(std::string_view section, std::string_view key, Member member) {
  return {section, key,
          [member](ScenarioConfig& c, std::string_view v) { member(c) = to_double(v); },
          [member](const ScenarioConfig& c) -> std::optional<std::string> {
            const auto& value = member(c);
            if (!value) return std::nullopt;
            return fmt(*value);
          }};
}

void material_fields(std::vector<Field>& out, std::string_view section,
                     MaterialParams ScenarioConfig::*which) {
  auto add = [&](std::string_view key, double MaterialParams::*field) {
    out.push_back(number(section, key,
                         [which, field](auto& c) -> auto& { return (c.*which).*field; }));
  };
  add("rho0", &MaterialParams::rho0);
  add("s1", &MaterialParams::s1);
  add("s2", &MaterialParams::s2);
  add("lambda", &MaterialParams::lambda);
  add("mu1", &MaterialParams::mu1);
  add("mu2", &MaterialParams::mu2);
  add("mu3", &MaterialParams::mu3);
  add("beta", &MaterialParams::beta);
}

std::vector<Field> build_schema() {
  std::vector<Field> f;
  using C = ScenarioConfig;
  f.push_back(number("geometry", "length", [](auto& c) -> auto& { return c.geometry.length; }));
  f.push_back(
      number("geometry", "salt_height", [](auto& c) -> auto& { return c.geometry.salt_height; }));
  f.push_back(number("geometry", "sediment_height",
                     [](auto& c) -> auto& { return c.geometry.sediment_height; }));
  f.push_back(number("geometry", "nx", [](auto& c) -> auto& { return c.geometry.nx; }));
  f.push_back(number("geometry", "ny_salt", [](auto& c) -> auto& { return c.geometry.ny_salt; }));
  f.push_back(
      number("geometry", "ny_sediment", [](auto& c) -> auto& { return c.geometry.ny_sediment; }));

  material_fields(f, "salt", &C::salt);
  material_fields(f, "sediment", &C::sediment);

  f.push_back(number("time", "dt", [](auto& c) -> auto& { return c.time.dt; }));
  f.push_back(number("time", "n_steps", [](auto& c) -> auto& { return c.time.n_steps; }));

  f.push_back(number("gravity", "magnitude", [](auto& c) -> auto& { return c.gravity.magnitude; }));
  f.push_back(number("gravity", "ramp_steps", [](auto& c) -> auto& { return c.gravity.ramp_steps; }));
  f.push_back(number("gravity", "ramp_angle_deg",
                     [](auto& c) -> auto& { return c.gravity.ramp_angle_deg; }));

  f.push_back(flag("perturbation", "enabled", [](auto& c) -> auto& { return c.perturbation.enabled; }));
  f.push_back(optional_number("perturbation", "center_x",
                              [](auto& c) -> auto& { return c.perturbation.center_x; }));
  f.push_back(optional_number(
      "perturbation", "half_width",
      [](auto& c) -> auto& { return c.perturbation.half_width; }));
  f.push_back(optional_number(
      "perturbation", "amplitude",
      [](auto& c) -> auto& { return c.perturbation.amplitude; }));
  f.push_back({"perturbation", "mode",
               [](C& c, std::string_view v) {
                 const std::string s = to_string_value(v);
                 if (s == "accommodated") {
                   c.perturbation.mode = PerturbationMode::Accommodated;
                 } else if (s == "nodal") {
                   c.perturbation.mode = PerturbationMode::Nodal;
                 } else {
                   throw ParseError("perturbation.mode must be accommodated or nodal");
                 }
               },
               [](const C& c) -> std::optional<std::string> {
                 return quote(c.perturbation.mode == PerturbationMode::Nodal ? "nodal"
                                                                             : "accommodated");
               }});

  f.push_back({"output", "name", [](C& c, std::string_view v) { c.name = to_string_value(v); },
               [](const C& c) -> std::optional<std::string> { return quote(c.name); }});
  f.push_back({"output", "directory",
               [](C& c, std::string_view v) { c.output.directory = to_string_value(v); },
               [](const C& c) -> std::optional<std::string> { return quote(c.output.directory); }});
  f.push_back(number("output", "cadence", [](auto& c) -> auto& { return c.output.cadence; }));
  f.push_back(flag("output", "snapshots", [](auto& c) -> auto& { return c.output.snapshots; }));
  f.push_back(
      flag("output", "decomposition", [](auto& c) -> auto& { return c.output.decomposition; }));

  f.push_back({"solver", "method",
               [](C& c, std::string_view v) {
                 const std::string s = to_string_value(v);
                 if (s == "direct") {
                   c.solver.method = SolverMethod::Direct;
                 } else if (s == "iterative") {
                   c.solver.method = SolverMethod::Iterative;
                 } else {
                   throw ParseError("solver.method must be direct or iterative");
                 }
               },
               [](const C& c) -> std::optional<std::string> {
                 return quote(c.solver.method == SolverMethod::Direct ? "direct" : "iterative");
               }});
  f.push_back(number("solver", "tol", [](auto& c) -> auto& { return c.solver.tol; }));
  f.push_back(number("solver", "max_iter", [](auto& c) -> auto& { return c.solver.max_iter; }));
  f.push_back({"solver", "stress_update",
               [](C& c, std::string_view v) {
                 const std::string s = to_string_value(v);
                 if (s == "increment") {
                   c.stress_update = StressUpdate::Increment;
                 } else if (s == "recompute") {
                   c.stress_update = StressUpdate::Recompute;
                 } else {
                   throw ParseError("solver.stress_update must be increment or recompute");
                 }
               },
               [](const C& c) -> std::optional<std::string> {
                 return quote(c.stress_update == StressUpdate::Recompute ? "recompute"
                                                                         : "increment");
               }});
  return f;
}

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = build_schema();
  return fields;
}

bool known_section(std::string_view section) {
  for (const Field& f : schema()) {
    if (f.section == section) return true;
  }
  return false;
}

const Field& find_field(std::string_view section, std::string_view key) {
  if (!known_section(section)) throw ParseError("unknown section [" + std::string(section) + "]");
  for (const Field& f : schema()) {
    if (f.section == section && f.key == key) return f;
  }
  throw ParseError("unknown key '" + std::string(key) + "' in [" + std::string(section) + "]");
}

std::string_view strip_comment(std::string_view line) {
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quotes = !in_quotes;
    if (line[i] == '#' && !in_quotes) return line.substr(0, i);
  }
  return line;
}

std::string state_label(const SimState& s) {
  return "sla snapshot step " + std::to_string(s.step) + " time_Ma " + format_double(s.time);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, ptr);
}

void apply_override(ScenarioConfig& cfg, std::string_view dotted_key, std::string_view value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string_view::npos) {
    throw ParseError("override key '" + std::string(dotted_key) + "' must be section.key");
  }
  const Field& f = find_field(trim(dotted_key.substr(0, dot)), trim(dotted_key.substr(dot + 1)));
  try {
    f.set(cfg, trim(value));
  } catch (const ParseError& e) {
    throw ParseError(std::string(dotted_key) + ": " + e.what());
  }
}

void apply_overrides(ScenarioConfig& cfg, std::span<const std::string> assignments) {
  for (const std::string& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ParseError("override '" + a + "' must be key=value");
    apply_override(cfg, std::string_view(a).substr(0, eq), std::string_view(a).substr(eq + 1));
  }
  validate(cfg);
}

ScenarioConfig parse_config(std::string_view text, const ScenarioConfig& base) {
  ScenarioConfig cfg = base;
  std::string section;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
    ++line_no;
    pos = end + 1;
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("malformed section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_section(section)) throw ParseError("unknown section [" + section + "]", line_no);
      if (!seen_sections.insert(section).second) {
        throw ParseError("duplicate section [" + section + "]", line_no);
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
    if (section.empty()) throw ParseError("key outside of any section", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    try {
      const Field& f = find_field(section, key);
      if (!seen_keys.insert(section + "." + key).second) {
        throw ParseError("duplicate key '" + key + "'");
      }
      f.set(cfg, value);
    } catch (const ParseError& e) {
      throw ParseError(section + "." + key + ": " + e.what(), line_no);
    }
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, const ScenarioConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), base);
}

std::string serialize(const ScenarioConfig& cfg) {
  std::ostringstream out;
  std::string_view section;
  for (const Field& f : schema()) {
    if (f.section != section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    if (const auto v = f.get(cfg)) out << f.key << " = " << *v << '\n';
  }
  return out.str();
}

void write_snapshot(const SimState& state, const std::filesystem::path& path) {
  const Mesh& mesh = state.mesh;
  if (mesh.nodes.empty() || mesh.triangles.empty()) {
    throw ValidationError("cannot write a snapshot of an empty mesh");
  }
  if (state.states.size() != mesh.triangles.size() ||
      state.displacement.size() != mesh.nodes.size()) {
    throw ValidationError("snapshot state does not match the mesh");
  }
  std::ofstream out = open_for_write(path);
  out << "# vtk DataFile Version 3.0\n";
  out << state_label(state) << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.nodes.size() << " double\n";
  for (const Vec2& x : mesh.nodes) out << format_double(x.x) << ' ' << format_double(x.y) << " 0\n";

  const std::size_t nt = mesh.triangles.size();
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (std::size_t t = 0; t < nt; ++t) out << "5\n";

  out << "CELL_DATA " << nt << '\n';
  out << "SCALARS region int 1\nLOOKUP_TABLE default\n";
  for (Region r : mesh.region) out << static_cast<int>(r) << '\n';
  auto scalar = [&](const char* name, auto&& value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (const PointState& st : state.states) out << format_double(value(st)) << '\n';
  };
  scalar("p", [](const PointState& st) { return st.p; });
  scalar("rho", [](const PointState& st) { return st.rho; });
  scalar("detF", [](const PointState& st) { return det(st.F); });
  scalar("Te_xx", [](const PointState& st) { return st.Te.a11; });
  scalar("Te_xy", [](const PointState& st) { return st.Te.a12; });
  scalar("Te_yx", [](const PointState& st) { return st.Te.a21; });
  scalar("Te_yy", [](const PointState& st) { return st.Te.a22; });

  out << "POINT_DATA " << mesh.nodes.size() << '\n';
  out << "VECTORS displacement double\n";
  for (const Vec2& u : state.displacement) {
    out << format_double(u.x) << ' ' << format_double(u.y) << " 0\n";
  }
  finish(out, path);
}

void write_diagnostics(std::span<const StepRecord> records, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << kDiagnosticsHeader << '\n';
  for (const StepRecord& r : records) {
    out << r.step << ',' << format_double(r.time) << ',' << format_double(r.apex_height) << ','
        << format_double(r.min_area_ratio) << ',' << format_double(r.max_u) << ','
        << format_double(r.residual) << ',';
    if (r.has_decomposition) {
      out << format_double(r.I1) << ',' << format_double(r.I2) << ',' << format_double(r.I3);
    } else {
      out << ",,";
    }
    out << '\n';
  }
  finish(out, path);
}

}  // namespace sla
