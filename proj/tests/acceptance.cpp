// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runs the desk-scale scenarios at full length.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sla/errors.hpp"
#include "sla/oracle.hpp"
#include "sla/parallel.hpp"
#include "sla/simulation.hpp"

namespace {

using namespace sla;
using Clock = std::chrono::steady_clock;

// Pinned thresholds.
constexpr double kKernelTol = 1e-5;
constexpr double kKernelSeconds = 5.0;
constexpr double kEquilibriumFactor = 1e-6;  // x element size
constexpr double kEquilibriumSeconds = 30.0;
constexpr int kDichotomySteps = 50;
constexpr double kGrowthFactor = 5.0;
constexpr double kDecayFactor = 0.5;
constexpr double kDichotomySeconds = 120.0;
constexpr int kMaturationSteps = 300;
constexpr double kSaturationTol = 0.02;
constexpr double kMaturationSeconds = 600.0;
constexpr double kDecompositionTol = 1e-6;
constexpr int kInclineNx = 100;
constexpr int kInclineSteps = 1500;
constexpr double kInclineThreshold = 1.5;  // x salt height
constexpr double kInclineSeconds = 1800.0;
constexpr double kTimeStepTol = 0.10;
constexpr double kMassTol = 1e-6;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Series {
  std::string label;
  std::vector<StepRecord> records;
  SimState final_state;
  Failure failure = Failure::None;
  std::string error;
  double seconds = 0.0;
  double mass_drift = 0.0;  ///< max relative per-region mass change
  double initial_apex = 0.0;
  std::function<void(const SimState&)> observer;

  bool completed(int n) const {
    return failure == Failure::None && static_cast<int>(records.size()) == n;
  }
  std::string status() const {
    if (failure == Failure::None) return "completed " + std::to_string(records.size()) + " steps";
    return "aborted after " + std::to_string(records.size()) + " steps (" + error + ")";
  }
};

std::vector<Series*> g_all_runs;

Series run_series(const std::string& label, const ScenarioConfig& cfg, int n,
                  std::function<void(const SimState&)> observer = {}) {
  Series s;
  s.label = label;
  const auto t0 = Clock::now();
  std::array<double, 2> m0{};
  bool have_m0 = false;
  RunHooks hooks;
  hooks.snapshot = [&](const SimState& st) {
    if (!have_m0) {
      m0 = region_mass(st);
      s.initial_apex = apex_height(st.mesh);
      have_m0 = true;
    }
  };
  hooks.on_step = [&](const SimState& st, const StepRecord&) {
    const auto m = region_mass(st);
    for (int r = 0; r < 2; ++r) s.mass_drift = std::max(s.mass_drift, std::abs(m[r] / m0[r] - 1.0));
    if (observer) observer(st);
  };
  RunResult r = run(cfg, n, hooks);
  s.seconds = seconds_since(t0);
  s.records = std::move(r.records);
  s.final_state = std::move(r.final_state);
  s.failure = r.failure;
  s.error = r.error;
  return s;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  std::printf("[%s] C%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

double deviation(const StepRecord& r, double salt_height) { return r.apex_height - salt_height; }

ScenarioConfig swapped(ScenarioConfig cfg) {
  std::swap(cfg.salt.rho0, cfg.sediment.rho0);
  return cfg;
}

// --------------------------------------------------------------------------

Outcome kernel_oracle() {
  const auto t0 = Clock::now();
  const oracle::KernelReport r = oracle::validate_kernels(100, 12345, 0.5);
  const double t = seconds_since(t0);
  Outcome o;
  o.pass = r.samples == 100 && r.max_rel_error() < kKernelTol && t < kKernelSeconds;
  o.detail = "samples=" + std::to_string(r.samples) +
             " max_rel_error(L)=" + fmt(r.max_rel_error_elasticity) +
             " max_rel_error(M)=" + fmt(r.max_rel_error_viscosity) + " (< " + fmt(kKernelTol) +
             "), " + fmt(t) + " s (< " + fmt(kKernelSeconds) + " s)";
  return o;
}

Outcome equilibrium_persistence(Series& s, const ScenarioConfig& cfg) {
  const double h = cfg.geometry.element_width();
  double worst = 0.0;
  for (const auto& r : s.records) worst = std::max(worst, r.max_u);
  Outcome o;
  o.pass = s.completed(10) && worst < kEquilibriumFactor * h && s.seconds < kEquilibriumSeconds;
  o.detail = "nx=" + std::to_string(cfg.geometry.nx) + " " + s.status() +
             ", max|u|=" + fmt(worst) + " m (< " + fmt(kEquilibriumFactor * h) + " m), " +
             fmt(s.seconds) + " s (< " + fmt(kEquilibriumSeconds) + " s)";
  return o;
}

Outcome instability_dichotomy(const Series& heavy, const Series& light, double salt_height) {
  const double d0_heavy = heavy.initial_apex - salt_height;
  const double d0_light = light.initial_apex - salt_height;
  const bool heavy_ok = heavy.completed(kDichotomySteps);
  const bool light_ok = light.completed(kDichotomySteps);
  const double g = heavy_ok ? deviation(heavy.records.back(), salt_height) / d0_heavy
                            : std::numeric_limits<double>::quiet_NaN();
  const double d = light_ok ? deviation(light.records.back(), salt_height) / d0_light
                            : std::numeric_limits<double>::quiet_NaN();
  const double t = heavy.seconds + light.seconds;
  Outcome o;
  o.pass = heavy_ok && light_ok && g >= kGrowthFactor && d <= kDecayFactor &&
           t < kDichotomySeconds;
  o.detail = "heavy-over-light " + heavy.status() + ", growth(step " +
             std::to_string(kDichotomySteps) + ")=" + fmt(g) + "x (>= " + fmt(kGrowthFactor) +
             "); light-over-heavy " + light.status() + ", ratio=" + fmt(d) + "x (<= " +
             fmt(kDecayFactor) + "); " + fmt(t) + " s (< " + fmt(kDichotomySeconds) + " s)";
  return o;
}

Outcome maturation(const Series& s, double salt_height) {
  Outcome o;
  if (!s.completed(kMaturationSteps)) {
    o.detail = "nx=60 run " + s.status() + "; saturation and early-growth checks need 300 steps";
    return o;
  }
  auto dev = [&](int step) { return deviation(s.records[step - 1], salt_height); };
  const double d300 = dev(300);
  const double late = (d300 - dev(250)) / d300;
  int half_step = -1;
  for (const auto& r : s.records) {
    if (deviation(r, salt_height) >= 0.5 * d300) {
      half_step = r.step;
      break;
    }
  }
  o.pass = d300 > 0.0 && late < kSaturationTol && dev(200) > 0.5 * d300 && half_step > 0 &&
           half_step < 100 && s.seconds < kMaturationSeconds;
  o.detail = "apex deviation d300=" + fmt(d300) + " m, (d300-d250)/d300=" + fmt(late) +
             " (< " + fmt(kSaturationTol) + "), d200/d300=" + fmt(dev(200) / d300) +
             " (> 0.5), first step with d >= d300/2: " + std::to_string(half_step) +
             " (< 100), " + fmt(s.seconds) + " s (< " + fmt(kMaturationSeconds) + " s)";
  return o;
}

Outcome no_remeshing(const Series& s) {
  double worst = std::numeric_limits<double>::infinity();
  bool all_positive = true;
  for (const auto& r : s.records) {
    worst = std::min(worst, r.min_area_ratio);
    all_positive = all_positive && r.min_area_ratio > 0.0;
  }
  Outcome o;
  o.pass = s.completed(kMaturationSteps) && all_positive;
  o.detail = "300-step run " + s.status() + ", min over steps of min_area_ratio=" + fmt(worst);
  return o;
}

Outcome decomposition_identity(const ScenarioConfig& cfg) {
  const double dt = cfg.time.dt;
  const double scale = cfg.sediment.rho0 * cfg.gravity.magnitude * cfg.geometry.height() *
                       cfg.geometry.element_width();
  const SimState s0 = initialize(cfg);
  const auto d0 = incremental_decomposition(s0, s0.gravity, {}, {}, dt);
  const double i1 = d0.I1.cwiseAbs().maxCoeff();
  const double i2 = d0.I2.cwiseAbs().maxCoeff();
  const double i3 = d0.I3.cwiseAbs().maxCoeff();

  const SimState s1 = apply_perturbation(initialize(cfg), resolve(cfg.perturbation, cfg.geometry),
                                         dt, cfg.stress_update, cfg.solver);
  const StepControls ctl = StepControls::from(cfg);
  const Vec2 next_g = ctl.gravity_at(1);
  const auto d1 = incremental_decomposition(s1, next_g, {}, {}, dt);
  const Vector P = step_load(s1, next_g, {});
  const Vector sum = d1.I1 + d1.I2 + d1.I3 + equilibrium_residual(s1, {}, dt);
  const double mismatch = (P - sum).cwiseAbs().maxCoeff() / scale;

  Outcome o;
  o.pass = i1 == 0.0 && i2 == 0.0 && i3 == 0.0 && mismatch < kDecompositionTol &&
           d1.I3.cwiseAbs().maxCoeff() > 0.0;
  o.detail = "t0: |I1|=" + fmt(i1) + " |I2|=" + fmt(i2) + " |I3|=" + fmt(i3) +
             " (all exactly 0); after perturbation |I3|=" + fmt(d1.I3.cwiseAbs().maxCoeff()) +
             " N, |P-(I1+I2+I3+r)|/load_scale=" + fmt(mismatch) + " (< " +
             fmt(kDecompositionTol) + ")";
  return o;
}

/// Contiguous runs of interface nodes above `threshold`, as node-index ranges.
std::vector<std::pair<int, int>> structures(const std::vector<Vec2>& line, double threshold) {
  std::vector<std::pair<int, int>> runs;
  int start = -1;
  for (int i = 0; i <= static_cast<int>(line.size()); ++i) {
    const bool above = i < static_cast<int>(line.size()) && line[i].y > threshold;
    if (above && start < 0) start = i;
    if (!above && start >= 0) {
      runs.emplace_back(start, i - 1);
      start = -1;
    }
  }
  return runs;
}

Outcome incline_sequence(const Series& s, const std::vector<int>& first_cross, double threshold) {
  Outcome o;
  const auto line = extract_interface(s.final_state.mesh);
  const auto runs = structures(line, threshold);
  std::vector<std::pair<double, int>> found;  // (x of maximum, first crossing step)
  for (const auto& [a, b] : runs) {
    int peak = a;
    int cross = std::numeric_limits<int>::max();
    for (int i = a; i <= b; ++i) {
      if (line[i].y > line[peak].y) peak = i;
      if (first_cross[i] > 0) cross = std::min(cross, first_cross[i]);
    }
    found.emplace_back(line[peak].x, cross);
  }
  std::sort(found.begin(), found.end());
  bool rightmost_first = !found.empty();
  for (const auto& f : found) rightmost_first = rightmost_first && found.back().second <= f.second;
  o.pass = s.completed(kInclineSteps) && found.size() >= 2 && rightmost_first &&
           s.seconds < kInclineSeconds;
  std::ostringstream d;
  d << "nx=" << kInclineNx << " run " << s.status() << ", structures above " << fmt(threshold)
    << " m: " << found.size() << " (>= 2)";
  for (const auto& f : found) d << " [x=" << fmt(f.first) << " crossed@" << f.second << "]";
  d << ", rightmost first: " << (rightmost_first ? "yes" : "no") << ", " << fmt(s.seconds)
    << " s (< " << fmt(kInclineSeconds) << " s)";
  o.detail = d.str();
  return o;
}

Outcome time_step_consistency(const Series& coarse, const Series& fine, double salt_height,
                              int n) {
  Outcome o;
  if (!coarse.completed(n) || !fine.completed(2 * n)) {
    o.detail = "dt run " + coarse.status() + "; dt/2 run " + fine.status();
    return o;
  }
  double worst = 0.0;
  int worst_step = 0;
  for (int k = 1; k <= n; ++k) {
    const double a = deviation(coarse.records[k - 1], salt_height);
    const double b = deviation(fine.records[2 * k - 1], salt_height);
    const double rel = std::abs(a - b) / std::max(std::abs(b), 1e-12);
    if (rel > worst) {
      worst = rel;
      worst_step = k;
    }
  }
  o.pass = worst <= kTimeStepTol;
  o.detail = "growth phase steps 1.." + std::to_string(n) +
             ": max relative apex-deviation difference=" + fmt(worst) + " at step " +
             std::to_string(worst_step) + " (<= " + fmt(kTimeStepTol) + ")";
  return o;
}

Outcome mass_conservation(const std::vector<const Series*>& runs) {
  double worst = 0.0;
  int steps = 0;
  std::string aborted;
  for (const Series* s : runs) {
    worst = std::max(worst, s->mass_drift);
    steps += static_cast<int>(s->records.size());
    if (s->failure != Failure::None) aborted += (aborted.empty() ? "" : ", ") + s->label;
  }
  Outcome o;
  o.pass = worst <= kMassTol && aborted.empty();
  o.detail = "max relative per-region mass drift=" + fmt(worst) + " (<= " + fmt(kMassTol) +
             ") over " + std::to_string(steps) + " completed steps in " +
             std::to_string(runs.size()) + " runs";
  if (!aborted.empty()) o.detail += "; runs that did not complete: " + aborted;
  return o;
}

}  // namespace

int main() {
  configure_threads_from_env();
  std::printf("acceptance suite (threads=%u)\n", thread_count());

  const ScenarioConfig diapir = preset_diapir();  // nx = 60
  const double salt_h = diapir.geometry.salt_height;

  report(1, "kernel oracle", kernel_oracle());

  ScenarioConfig unperturbed = diapir;
  unperturbed.perturbation.enabled = false;
  Series eq = run_series("equilibrium", unperturbed, 10);
  report(2, "equilibrium persistence", equilibrium_persistence(eq, unperturbed));

  Series heavy = run_series("dichotomy heavy-over-light", diapir, kDichotomySteps);
  Series light = run_series("dichotomy light-over-heavy", swapped(diapir), kDichotomySteps);
  report(3, "instability dichotomy", instability_dichotomy(heavy, light, salt_h));

  Series mature = run_series("maturation", diapir, kMaturationSteps);
  report(4, "diapir maturation", maturation(mature, salt_h));
  report(5, "no re-meshing", no_remeshing(mature));

  report(6, "incremental decomposition", decomposition_identity(diapir));

  ScenarioConfig incline = preset_incline();
  incline.geometry.nx = kInclineNx;
  const double threshold = kInclineThreshold * incline.geometry.salt_height;
  int current_step = 0;
  std::vector<int> first_cross(kInclineNx + 1, 0);
  Series tilt = run_series("incline", incline, kInclineSteps, [&](const SimState& st) {
    current_step = st.step;
    const auto line = extract_interface(st.mesh);
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (first_cross[i] == 0 && line[i].y > threshold) first_cross[i] = current_step;
    }
  });
  report(7, "inclination sequence", incline_sequence(tilt, first_cross, threshold));

  ScenarioConfig half = diapir;
  half.time.dt = 0.5 * diapir.time.dt;
  Series fine = run_series("time-step dt/2", half, 2 * kDichotomySteps);
  report(8, "time-step consistency", time_step_consistency(heavy, fine, salt_h, kDichotomySteps));

  report(9, "mass conservation", mass_conservation({&eq, &heavy, &light, &mature, &tilt, &fine}));

  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
