#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crossover/engine.hpp"
#include "crossover/errors.hpp"
#include "crossover/scheduler.hpp"
#include "crossover/units.hpp"

namespace crossover {

inline constexpr int kMetricsSchemaVersion = 1;
inline constexpr std::string_view kMetricsCsvHeader =
    "scenario,policy,job_id,iterations,period_ns,makespan_ns,gpu_util,nic_util,speedup";
inline constexpr std::string_view kAggregateRowId = "ALL";

struct JobMetrics {
  std::string job_id;
  int iterations = 0;
  // Median gap between consecutive compute starts over the middle half of
  // the gaps. For a single iteration, the job's total time.
  Duration period{0};
  Timestamp completion{0};
  double throughput = 0.0;  // iterations per second of this job

  friend bool operator==(const JobMetrics&, const JobMetrics&) = default;
};

struct Metrics {
  std::string scenario;
  std::string policy;
  Duration makespan{0};
  std::vector<JobMetrics> jobs;
  Duration gpu_busy{0};
  Duration nic_busy{0};
  double gpu_utilization = 0.0;
  double nic_utilization = 0.0;
  double aggregate_throughput = 0.0;
  std::optional<Ratio> speedup_vs_baseline;

  const JobMetrics* job(std::string_view id) const {
    for (const auto& j : jobs) {
      if (j.job_id == id) return &j;
    }
    return nullptr;
  }

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

namespace detail {

inline double per_second(std::int64_t count, Duration over) {
  if (over.count() <= 0) return 0.0;
  return static_cast<double>(count) * static_cast<double>(kNanosPerSecond) /
         static_cast<double>(over.count());
}

inline double fraction(Duration busy, Duration total, std::size_t lanes) {
  if (total.count() <= 0 || lanes == 0) return 0.0;
  return static_cast<double>(busy.count()) /
         (static_cast<double>(total.count()) * static_cast<double>(lanes));
}

inline Duration steady_period(std::vector<Timestamp> starts, Timestamp completion) {
  std::sort(starts.begin(), starts.end());
  if (starts.size() < 2) return completion - starts.front();
  std::vector<Duration> gaps;
  gaps.reserve(starts.size() - 1);
  for (std::size_t k = 1; k < starts.size(); ++k) gaps.push_back(starts[k] - starts[k - 1]);
  const std::size_t trim = gaps.size() / 4;
  std::vector<Duration> middle(gaps.begin() + static_cast<std::ptrdiff_t>(trim),
                               gaps.end() - static_cast<std::ptrdiff_t>(trim));
  std::sort(middle.begin(), middle.end());
  return middle[(middle.size() - 1) / 2];
}

}  // namespace detail

inline Metrics measure(const Trace& trace, const SchedulePlan& plan) {
  auto violations = validate_trace(trace);
  std::map<std::string, std::vector<Timestamp>> starts;
  std::map<std::string, Timestamp> completion;
  std::set<std::string> compute_lanes;
  std::set<std::string> network_lanes;
  Metrics m;
  for (const auto& s : trace.spans) {
    if (s.phase == Phase::Sync) {
      network_lanes.insert(s.lane_id);
      m.nic_busy += s.length();
    } else {
      compute_lanes.insert(s.lane_id);
      m.gpu_busy += s.length();
    }
    if (s.phase == Phase::Forward) starts[s.job_id].push_back(s.start);
    auto& c = completion[s.job_id];
    c = std::max(c, s.end);
  }
  for (const auto& j : plan.jobs) {
    const auto it = starts.find(j.job_id);
    const int seen = it == starts.end() ? 0 : static_cast<int>(it->second.size());
    if (seen != j.iterations) {
      violations.push_back("job " + j.job_id + ": trace has " + std::to_string(seen) +
                           " iterations, plan expects " + std::to_string(j.iterations));
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  m.scenario = plan.name;
  m.policy = std::string(to_string(plan.policy));
  m.makespan = trace.makespan;
  std::int64_t total_iterations = 0;
  for (const auto& j : plan.jobs) {
    JobMetrics jm;
    jm.job_id = j.job_id;
    jm.iterations = j.iterations;
    jm.completion = completion.at(j.job_id);
    jm.period = detail::steady_period(starts.at(j.job_id), jm.completion);
    jm.throughput = detail::per_second(j.iterations, jm.completion);
    total_iterations += j.iterations;
    m.jobs.push_back(std::move(jm));
  }
  m.gpu_utilization = detail::fraction(m.gpu_busy, m.makespan, compute_lanes.size());
  m.nic_utilization = detail::fraction(m.nic_busy, m.makespan, network_lanes.size());
  m.aggregate_throughput = detail::per_second(total_iterations, m.makespan);
  return m;
}

// Returns the crossover metrics annotated with baseline makespan / crossover
// makespan.
inline Metrics compare(const Metrics& crossover, const Metrics& baseline) {
  std::vector<std::string> a, b;
  for (const auto& j : crossover.jobs) a.push_back(j.job_id);
  for (const auto& j : baseline.jobs) b.push_back(j.job_id);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw ComparisonError("metrics cover different job sets");
  for (const auto& j : crossover.jobs) {
    if (baseline.job(j.job_id)->iterations != j.iterations) {
      throw ComparisonError("job " + j.job_id + " ran a different iteration count");
    }
  }
  Metrics out = crossover;
  if (crossover.makespan.count() == 0) {
    if (baseline.makespan.count() != 0) {
      throw DomainError("crossover makespan is zero but baseline is not");
    }
    out.speedup_vs_baseline = Ratio(1, 1);
  } else {
    out.speedup_vs_baseline = Ratio::of(baseline.makespan, crossover.makespan);
  }
  return out;
}

// Reporting

enum class ReportFormat { Json, Csv, Table };

inline ReportFormat report_format_from_string(std::string_view s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "table") return ReportFormat::Table;
  throw ConfigError("unknown report format '" + std::string(s) +
                    "' (expected json, csv or table)");
}

inline nlohmann::ordered_json to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["schema_version"] = kMetricsSchemaVersion;
  j["scenario"] = m.scenario;
  j["policy"] = m.policy;
  j["makespan_ns"] = m.makespan.count();
  j["gpu_busy_ns"] = m.gpu_busy.count();
  j["nic_busy_ns"] = m.nic_busy.count();
  j["gpu_utilization"] = m.gpu_utilization;
  j["nic_utilization"] = m.nic_utilization;
  j["aggregate_throughput"] = m.aggregate_throughput;
  if (m.speedup_vs_baseline) {
    j["speedup_vs_baseline"] = {{"num", m.speedup_vs_baseline->num()},
                                {"den", m.speedup_vs_baseline->den()},
                                {"value", m.speedup_vs_baseline->to_double()}};
  } else {
    j["speedup_vs_baseline"] = nullptr;
  }
  auto& jobs = j["jobs"] = nlohmann::ordered_json::array();
  for (const auto& jm : m.jobs) {
    jobs.push_back({{"job_id", jm.job_id},
                    {"iterations", jm.iterations},
                    {"period_ns", jm.period.count()},
                    {"completion_ns", jm.completion.count()},
                    {"throughput", jm.throughput}});
  }
  return j;
}

inline Metrics metrics_from_json(const nlohmann::json& j) {
  try {
    Metrics m;
    m.scenario = j.at("scenario").get<std::string>();
    m.policy = j.at("policy").get<std::string>();
    m.makespan = Duration(j.at("makespan_ns").get<std::int64_t>());
    m.gpu_busy = Duration(j.at("gpu_busy_ns").get<std::int64_t>());
    m.nic_busy = Duration(j.at("nic_busy_ns").get<std::int64_t>());
    m.gpu_utilization = j.at("gpu_utilization").get<double>();
    m.nic_utilization = j.at("nic_utilization").get<double>();
    m.aggregate_throughput = j.at("aggregate_throughput").get<double>();
    const auto& s = j.at("speedup_vs_baseline");
    if (!s.is_null()) {
      m.speedup_vs_baseline = Ratio(s.at("num").get<std::int64_t>(), s.at("den").get<std::int64_t>());
    }
    for (const auto& e : j.at("jobs")) {
      JobMetrics jm;
      jm.job_id = e.at("job_id").get<std::string>();
      jm.iterations = e.at("iterations").get<int>();
      jm.period = Duration(e.at("period_ns").get<std::int64_t>());
      jm.completion = Duration(e.at("completion_ns").get<std::int64_t>());
      jm.throughput = e.at("throughput").get<double>();
      m.jobs.push_back(std::move(jm));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("metrics", e.what());
  }
}

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string clip(std::string_view s, std::size_t width) {
  if (s.size() <= width) return std::string(s);
  return std::string(s.substr(0, width - 1)) + "~";
}

inline std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

inline std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string millis(Duration d) {
  return fixed(static_cast<double>(d.count()) / 1e6, 3);
}

}  // namespace detail

inline std::string report(const Metrics& m, ReportFormat format) {
  using namespace detail;
  std::ostringstream os;
  const std::string speedup =
      m.speedup_vs_baseline ? fixed(m.speedup_vs_baseline->to_double(), 6) : "";
  switch (format) {
    case ReportFormat::Json:
      os << to_json(m).dump(2) << "\n";
      break;
    case ReportFormat::Csv: {
      os << kMetricsCsvHeader << "\n";
      std::int64_t total = 0;
      const std::string tail = std::to_string(m.makespan.count()) + "," +
                               fixed(m.gpu_utilization, 6) + "," +
                               fixed(m.nic_utilization, 6) + "," + speedup;
      for (const auto& j : m.jobs) {
        total += j.iterations;
        os << csv_field(m.scenario) << "," << m.policy << "," << csv_field(j.job_id)
           << "," << j.iterations << "," << j.period.count() << "," << tail << "\n";
      }
      os << csv_field(m.scenario) << "," << m.policy << "," << kAggregateRowId << ","
         << total << ",," << tail << "\n";
      break;
    }
    case ReportFormat::Table: {
      os << "scenario: " << clip(m.scenario, 80) << "  policy: " << m.policy << "\n";
      os << pad_right("job", 32) << pad_left("iters", 8) << pad_left("period_ms", 14)
         << pad_left("done_ms", 16) << pad_left("iter/s", 12) << "\n";
      for (const auto& j : m.jobs) {
        os << pad_right(clip(j.job_id, 31), 32) << pad_left(std::to_string(j.iterations), 8)
           << pad_left(millis(j.period), 14) << pad_left(millis(j.completion), 16)
           << pad_left(fixed(j.throughput, 3), 12) << "\n";
      }
      os << "makespan_ms " << millis(m.makespan) << "  gpu_util "
         << fixed(m.gpu_utilization, 4) << "  nic_util " << fixed(m.nic_utilization, 4)
         << "  iter/s " << fixed(m.aggregate_throughput, 3);
      if (m.speedup_vs_baseline) os << "  speedup " << fixed(m.speedup_vs_baseline->to_double(), 4);
      os << "\n";
      break;
    }
  }
  return os.str();
}

inline std::string report(const Metrics& m, std::string_view format) {
  return report(m, report_format_from_string(format));
}

}  // namespace crossover
