#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "crossover/comm.hpp"
#include "crossover/config.hpp"
#include "crossover/equivalence.hpp"
#include "crossover/metrics.hpp"
#include "crossover/scheduler.hpp"
#include "crossover/trace_io.hpp"

namespace crossover::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kRuntime = 2,
  kEquivalenceFailure = 3,
};

inline constexpr std::string_view kSweepCsvHeader =
    "rho_target,rho_actual,speedup,predicted_speedup,crossover_makespan_ns,"
    "sequential_makespan_ns";

namespace detail {

namespace fs = std::filesystem;

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

inline std::string fixed(double v, int digits) { return crossover::detail::fixed(v, digits); }

}  // namespace detail

// Metrics of the scenario's own policy; a crossover run is also compared
// against the sequential baseline of the same plan.
struct SimulationResult {
  Trace trace;
  Metrics metrics;
};

inline SimulationResult simulate_scenario(const Scenario& scenario) {
  const auto plan = scenario.plan();
  SimulationResult r;
  r.trace = schedule(plan);
  r.metrics = measure(r.trace, plan);
  if (plan.policy == SchedulePolicy::Crossover) {
    const auto baseline_plan = scenario.plan(SchedulePolicy::Sequential);
    const auto baseline = measure(schedule(baseline_plan), baseline_plan);
    r.metrics = compare(r.metrics, baseline);
  }
  return r;
}

// Writes trace.json plus one metrics file per requested format
// (metrics.json, metrics.csv, metrics.txt) and trace.chrome.json for
// "chrome-trace".
inline int cmd_simulate(const Scenario& scenario, const std::string& out_dir,
                        std::vector<std::string> formats, std::ostream& log) {
  if (formats.empty()) formats = {"json"};
  for (const auto& f : formats) {
    if (f != "json" && f != "csv" && f != "table" && f != "chrome-trace") {
      log << "error: unknown format '" << f << "' (allowed: json, csv, table, chrome-trace)\n";
      return kValidation;
    }
  }
  try {
    const auto result = simulate_scenario(scenario);
    const detail::fs::path dir(out_dir);
    detail::ensure_dir(dir);
    detail::write_file(dir / "trace.json", trace_to_json(result.trace).dump(2) + "\n");
    for (const auto& f : formats) {
      if (f == "chrome-trace") {
        detail::write_file(dir / "trace.chrome.json", chrome_trace(result.trace).dump(2) + "\n");
      } else {
        const auto fmt = report_format_from_string(f);
        const char* name = fmt == ReportFormat::Json  ? "metrics.json"
                           : fmt == ReportFormat::Csv ? "metrics.csv"
                                                      : "metrics.txt";
        detail::write_file(dir / name, report(result.metrics, fmt));
      }
    }
    log << report(result.metrics, ReportFormat::Table);
    return kOk;
  } catch (const ValidationError& e) {
    log << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kRuntime;
  }
}

// Smallest fused payload whose sync time reaches `target` on `cluster`. The
// latency term alone may already exceed the target, in which case 0.
inline std::int64_t payload_for_comm_time(Duration target, const ClusterSpec& cluster) {
  if (comm_time(std::int64_t{0}, cluster) >= target) return 0;
  std::int64_t hi = 1;
  while (comm_time(hi, cluster) < target) {
    if (hi > (std::int64_t{1} << 60)) throw DomainError("target sync time unreachable");
    hi *= 2;
  }
  std::int64_t lo = hi / 2;  // comm_time(lo) < target
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (comm_time(mid, cluster) >= target ? hi : lo) = mid;
  }
  return hi;
}

struct SweepPoint {
  double rho_target = 0.0;
  double rho_actual = 0.0;
  Ratio speedup;
  double predicted = 0.0;
  Duration crossover_makespan{0};
  Duration sequential_makespan{0};
};

// For each target ratio, every job's gradient payload (field grad_mb) is
// replaced by a single tensor sized so that sync / compute reaches the target.
inline std::vector<SweepPoint> run_sweep(const Scenario& base, double ratio_min,
                                         double ratio_max, int steps) {
  if (steps < 2) throw ConfigError("--steps must be >= 2");
  if (!(ratio_min > 0.0) || !(ratio_max <= 4.0) || ratio_min > ratio_max) {
    throw ConfigError("ratio range must satisfy 0 < ratio-min <= ratio-max <= 4");
  }
  std::vector<SweepPoint> out;
  for (int k = 0; k < steps; ++k) {
    const double rho = ratio_min + (ratio_max - ratio_min) * k / (steps - 1);
    Scenario s = base;
    for (auto& job : s.jobs) {
      const auto target = Duration(std::llround(rho * static_cast<double>(comp_time(job).count())));
      job.tensors = {TensorSpec{"grad", payload_for_comm_time(target, s.cluster)}};
    }
    const auto cplan = s.plan(SchedulePolicy::Crossover);
    const auto splan = s.plan(SchedulePolicy::Sequential);
    const auto cm = measure(schedule(cplan), cplan);
    const auto sm = measure(schedule(splan), splan);
    SweepPoint p;
    p.rho_target = rho;
    p.rho_actual = comm_comp_ratio(cplan.jobs.front(), s.cluster).to_double();
    p.speedup = *compare(cm, sm).speedup_vs_baseline;
    p.predicted = (1.0 + p.rho_actual) / std::max(1.0, p.rho_actual);
    p.crossover_makespan = cm.makespan;
    p.sequential_makespan = sm.makespan;
    out.push_back(p);
  }
  return out;
}

inline std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string out(kSweepCsvHeader);
  out += "\n";
  for (const auto& p : points) {
    out += detail::fixed(p.rho_target, 6) + "," + detail::fixed(p.rho_actual, 6) + "," +
           detail::fixed(p.speedup.to_double(), 6) + "," + detail::fixed(p.predicted, 6) + "," +
           std::to_string(p.crossover_makespan.count()) + "," +
           std::to_string(p.sequential_makespan.count()) + "\n";
  }
  return out;
}

inline int cmd_sweep(const Scenario& base, double ratio_min, double ratio_max, int steps,
                     const std::string& out_dir, std::ostream& log) {
  std::vector<SweepPoint> points;
  try {
    points = run_sweep(base, ratio_min, ratio_max, steps);
  } catch (const ConfigError& e) {
    log << "usage error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kRuntime;
  }
  try {
    const detail::fs::path dir(out_dir);
    detail::ensure_dir(dir);
    const auto csv = sweep_csv(points);
    detail::write_file(dir / "sweep.csv", csv);
    log << csv;
    return kOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kRuntime;
  }
}

struct EquivalenceOptions {
  std::uint64_t seed = 1;
  int iters = 100;
  int seeds = 5;
  std::vector<int> jobs = {1, 2, 3};
  std::vector<int> workers = {1, 2, 4};
  // Test hook: perturb job 1's update at this iteration by one ulp.
  std::optional<int> perturb_iteration;
};

inline int cmd_equivalence(const EquivalenceOptions& opt, std::ostream& log) {
  if (opt.iters < 1) {
    log << "usage error: --iters must be >= 1\n";
    return kValidation;
  }
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < opt.seeds; ++k) seeds.push_back(opt.seed + static_cast<std::uint64_t>(k));
  const int iters[] = {opt.iters};
  std::optional<sgd::Perturbation> perturb;
  if (opt.perturb_iteration) perturb = sgd::Perturbation{0, *opt.perturb_iteration, 0};
  const auto report = sgd::neutrality_suite(seeds, opt.jobs, opt.workers, iters, perturb);
  log << "cases " << report.cases.size() << "\n";
  char dev[64];
  std::snprintf(dev, sizeof dev, "%.17g", report.max_abs_deviation());
  log << "max_abs_deviation " << dev << "\n";
  if (const auto* bad = report.first_failure()) {
    const auto& d = *bad->diff.first;
    log << "FAIL first divergence: seed " << bad->seed << " jobs " << bad->jobs << " workers "
        << bad->workers << " -> job " << (d.job + 1) << " iteration " << d.iteration
        << " index " << d.index << "\n";
    return kEquivalenceFailure;
  }
  log << "PASS crossover trajectories are bitwise identical to isolated runs\n";
  return kOk;
}

inline int cmd_validate_config(const std::string& path, std::ostream& log) {
  try {
    const auto s = load_config(path);
    log << "ok: " << s.name << " (" << s.jobs.size() << " jobs, "
        << to_string(s.cluster.architecture) << ", policy " << to_string(s.policy) << ")\n";
    for (const auto& j : s.plan().jobs) {
      log << "  " << j.job_id << ": comp_ns " << comp_time(j).count() << " grad_bytes "
          << j.total_gradient_bytes() << " tensors " << j.tensors.size() << " iterations "
          << j.iterations << " rho " << comm_comp_ratio(j, s.cluster).to_double() << "\n";
    }
    return kOk;
  } catch (const ParseError& e) {
    log << "parse error: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace crossover::cli
