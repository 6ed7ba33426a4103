// sla-sim: command-line driver for the two-layer salt-diapir simulator.
//
//   sla-sim run --config FILE [--set section.key=value ...] [--out DIR]
//   sla-sim preset diapir_6_1|incline_6_2 [--out DIR] [--set ...]
//   sla-sim validate-kernels [--samples N] [--seed S]
//   sla-sim info [--config FILE | --preset NAME] [--set ...]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure. The last
// line printed is always "status=<ok|config_error|runtime_failure> key=value ...".

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sla/errors.hpp"
#include "sla/oracle.hpp"
#include "sla/parallel.hpp"
#include "sla/scenario_io.hpp"
#include "sla/simulation.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr double kKernelTolerance = 1e-5;

/// Makes a message safe to embed as a quoted value on the status line.
std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out + "\"";
}

int config_error(const std::string& reason) {
  std::cout << "status=config_error reason=" << quoted(reason) << std::endl;
  return kExitConfig;
}

int runtime_failure(const std::string& kind, const std::string& reason, int step = -1) {
  std::cout << "status=runtime_failure kind=" << kind;
  if (step >= 0) std::cout << " step=" << step;
  std::cout << " reason=" << quoted(reason) << std::endl;
  return kExitRuntime;
}

const char* failure_kind(sla::Failure f) {
  switch (f) {
    case sla::Failure::Inversion:
      return "inversion";
    case sla::Failure::Solver:
      return "solver";
    case sla::Failure::Other:
      return "other";
    case sla::Failure::None:
      break;
  }
  return "none";
}

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%05d.vtk", step);
  return buf;
}

void print_summary(const sla::ScenarioConfig& cfg) {
  const auto& g = cfg.geometry;
  const sla::Perturbation p = sla::resolve(cfg.perturbation, g);
  std::cout << "scenario        " << cfg.name << '\n'
            << "domain          " << g.length << " m x (" << g.salt_height << " m salt + "
            << g.sediment_height << " m sediment)\n"
            << "mesh            " << g.nx << " x (" << g.ny_salt << " + " << g.ny_sediment
            << ") cells, " << (g.nx + 1) * (g.ny_salt + g.ny_sediment + 1) << " nodes, "
            << 2 * g.nx * (g.ny_salt + g.ny_sediment) << " triangles\n"
            << "salt            rho0=" << cfg.salt.rho0 << " beta=" << cfg.salt.beta
            << " mu1=" << cfg.salt.mu1 << '\n'
            << "sediment        rho0=" << cfg.sediment.rho0 << " beta=" << cfg.sediment.beta
            << '\n'
            << "time            dt=" << cfg.time.dt << " Ma, " << cfg.time.n_steps << " steps ("
            << cfg.time.dt * cfg.time.n_steps << " Ma)\n"
            << "gravity         " << cfg.gravity.magnitude << " m/s^2, ramp "
            << cfg.gravity.ramp_angle_deg << " deg over " << cfg.gravity.ramp_steps
            << " steps\n";
  if (cfg.perturbation.enabled) {
    std::cout << "perturbation    amplitude=" << p.amplitude << " m half_width=" << p.half_width
              << " m center_x=" << p.center_x << " m\n";
  } else {
    std::cout << "perturbation    none\n";
  }
  std::cout << "output          " << cfg.output.directory << " every " << cfg.output.cadence
            << " steps\n"
            << "threads         " << sla::thread_count() << '\n';
}

int execute(sla::ScenarioConfig cfg) {
  print_summary(cfg);
  const fs::path dir = cfg.output.directory;
  try {
    fs::create_directories(dir);
  } catch (const fs::filesystem_error& e) {
    return runtime_failure("io", e.what());
  }

  sla::RunHooks hooks;
  std::string io_error;
  if (cfg.output.snapshots) {
    hooks.snapshot = [&](const sla::SimState& s) {
      try {
        sla::write_snapshot(s, dir / snapshot_name(s.step));
      } catch (const sla::Error& e) {
        if (io_error.empty()) io_error = e.what();
      }
    };
  }
  hooks.on_step = [&](const sla::SimState&, const sla::StepRecord& r) {
    if (r.step % cfg.output.cadence == 0 || r.step == cfg.time.n_steps) {
      std::cout << "step " << r.step << " t=" << r.time << " Ma apex=" << r.apex_height
                << " m min_area_ratio=" << r.min_area_ratio << " max_u=" << r.max_u << " m\n";
    }
  };

  sla::RunResult result;
  try {
    std::ofstream(dir / "config.toml") << sla::serialize(cfg);
    result = sla::run(cfg, cfg.time.n_steps, hooks);
    sla::write_diagnostics(result.records, dir / "diagnostics.csv");
  } catch (const sla::ValidationError& e) {
    return config_error(e.what());
  } catch (const sla::Error& e) {
    return runtime_failure("other", e.what());
  }

  if (result.failure != sla::Failure::None) {
    return runtime_failure(failure_kind(result.failure), result.error,
                           static_cast<int>(result.records.size()) + 1);
  }
  if (!io_error.empty()) return runtime_failure("io", io_error);

  const double apex = result.records.empty() ? sla::apex_height(result.final_state.mesh)
                                             : result.records.back().apex_height;
  std::cout << "status=ok steps=" << result.records.size()
            << " time_Ma=" << sla::format_double(result.final_state.time)
            << " apex_height_m=" << sla::format_double(apex) << " out=" << quoted(dir.string())
            << std::endl;
  return kExitOk;
}

/// Preset (if any), then the config file, then --out and the overrides.
sla::ScenarioConfig build_config(const std::string& config_path, const std::string& preset,
                                 const std::vector<std::string>& overrides,
                                 const std::string& out_dir) {
  sla::ScenarioConfig cfg;
  if (!preset.empty()) {
    const auto p = sla::find_preset(preset);
    if (!p) throw sla::ValidationError("unknown preset '" + preset + "'");
    cfg = *p;
  }
  if (!config_path.empty()) cfg = sla::load_config(config_path, cfg);
  if (!out_dir.empty()) cfg.output.directory = out_dir;
  sla::apply_overrides(cfg, overrides);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    sla::configure_threads_from_env();
  } catch (const sla::Error& e) {
    return config_error(e.what());
  }

  CLI::App app{"Two-layer salt-diapir simulator (successive linear approximation)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  std::vector<std::string> overrides;
  int samples = 100;
  std::uint64_t seed = 12345;

  auto* run = app.add_subcommand("run", "Run a scenario from a configuration file");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--set", overrides, "Override: section.key=value (repeatable)");
  run->add_option("--out", out_dir, "Output directory (overrides output.directory)");

  auto* preset = app.add_subcommand("preset", "Run a built-in scenario");
  preset->add_option("name", preset_name, "diapir_6_1 or incline_6_2")
      ->required()
      ->check(CLI::IsMember({"diapir_6_1", "incline_6_2"}));
  preset->add_option("--out", out_dir, "Output directory");
  preset->add_option("--set", overrides, "Override: section.key=value (repeatable)");

  auto* kernels = app.add_subcommand("validate-kernels",
                                     "Check the tangent tensors against finite differences");
  kernels->add_option("--samples", samples, "Number of random states")
      ->check(CLI::PositiveNumber);
  kernels->add_option("--seed", seed, "Random seed");

  auto* info = app.add_subcommand("info", "Print a scenario summary without running it");
  info->add_option("--config", config_path, "Configuration file");
  info->add_option("--preset", preset_name, "Built-in scenario name");
  info->add_option("--set", overrides, "Override: section.key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return config_error(e.what());
  }

  if (*kernels) {
    const sla::oracle::KernelReport r = sla::oracle::validate_kernels(samples, seed);
    const double err = r.max_rel_error();
    std::cout << "samples=" << r.samples
              << " max_rel_error_elasticity=" << r.max_rel_error_elasticity
              << " max_rel_error_viscosity=" << r.max_rel_error_viscosity << '\n';
    if (err < kKernelTolerance) {
      std::cout << "status=ok max_rel_error=" << sla::format_double(err) << std::endl;
      return kExitOk;
    }
    std::ostringstream msg;
    msg << "max relative error " << err << " exceeds " << kKernelTolerance;
    return runtime_failure("kernel_mismatch", msg.str());
  }

  sla::ScenarioConfig cfg;
  try {
    if (*info && config_path.empty() && preset_name.empty()) preset_name = "diapir_6_1";
    cfg = build_config(config_path, preset_name, overrides, out_dir);
  } catch (const sla::ParseError& e) {
    return config_error(e.what());
  } catch (const sla::ValidationError& e) {
    return config_error(e.what());
  } catch (const sla::IoError& e) {
    return config_error(e.what());
  }

  if (*info) {
    print_summary(cfg);
    std::cout << "status=ok scenario=" << cfg.name << std::endl;
    return kExitOk;
  }
  return execute(cfg);
}
