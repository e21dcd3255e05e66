#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crossover/crossover.hpp"

namespace crossover::testing {

struct UnitJob {
  std::int64_t comp = 1;
  std::int64_t comm = 0;
  int iterations = 1;
};

// Ring allreduce on two workers, zero latency, 1e9 B/s: a payload of S bytes
// synchronizes in exactly S ns, so durations can be written in plain units.
inline ClusterSpec unit_cluster() {
  ClusterSpec c;
  c.workers = 2;
  c.bandwidth_bytes_per_sec = 1'000'000'000;
  c.latency_per_message = Duration(0);
  c.architecture = Architecture::RingAllreduce;
  return c;
}

inline JobProfile unit_job(std::string id, std::int64_t comp, std::int64_t comm, int iterations) {
  JobProfile j;
  j.job_id = std::move(id);
  j.forward_time = Duration(comp / 2);
  j.backward_time = Duration(comp - comp / 2);
  j.tensors = {TensorSpec{"g", comm}};
  j.iterations = iterations;
  return j;
}

inline SchedulePlan unit_plan(const std::vector<UnitJob>& jobs, SchedulePolicy policy) {
  SchedulePlan p;
  p.name = "unit";
  p.policy = policy;
  p.cluster = unit_cluster();
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    p.jobs.push_back(unit_job("J" + std::to_string(k + 1), jobs[k].comp, jobs[k].comm,
                              jobs[k].iterations));
  }
  return p;
}

inline SchedulePlan homogeneous_plan(int n, std::int64_t comp, std::int64_t comm, int iterations,
                                     SchedulePolicy policy) {
  return unit_plan(std::vector<UnitJob>(static_cast<std::size_t>(n), UnitJob{comp, comm, iterations}),
                   policy);
}

// Start times of a job's compute (forward) spans in iteration order.
inline std::vector<Timestamp> compute_starts(const Trace& trace, const std::string& job) {
  std::vector<std::pair<int, Timestamp>> v;
  for (const auto& s : trace.spans) {
    if (s.job_id == job && s.phase == Phase::Forward) v.emplace_back(s.iteration, s.start);
  }
  std::sort(v.begin(), v.end());
  std::vector<Timestamp> out;
  for (const auto& [it, t] : v) out.push_back(t);
  return out;
}

inline std::vector<const Span*> spans_of(const Trace& trace, const std::string& job, Phase phase) {
  std::vector<const Span*> out;
  for (const auto& s : trace.spans) {
    if (s.job_id == job && s.phase == phase) out.push_back(&s);
  }
  std::sort(out.begin(), out.end(),
            [](const Span* a, const Span* b) { return a->iteration < b->iteration; });
  return out;
}

// Exact steady-state cycle of a periodic schedule: the smallest p such that
// the tail of the gap sequence repeats with period p, as sum-of-p-gaps / p.
inline std::optional<Ratio> periodic_cycle(const std::vector<Timestamp>& starts,
                                           std::size_t max_period = 12) {
  if (starts.size() < 4) return std::nullopt;
  std::vector<std::int64_t> gaps;
  for (std::size_t k = 1; k < starts.size(); ++k) gaps.push_back((starts[k] - starts[k - 1]).count());
  const std::size_t tail = gaps.size() / 2;
  for (std::size_t p = 1; p <= max_period && 2 * p <= tail; ++p) {
    bool periodic = true;
    for (std::size_t t = gaps.size() - tail + p; t < gaps.size() && periodic; ++t) {
      periodic = gaps[t] == gaps[t - p];
    }
    if (periodic) {
      std::int64_t sum = 0;
      for (std::size_t t = gaps.size() - p; t < gaps.size(); ++t) sum += gaps[t];
      return Ratio(sum, static_cast<std::int64_t>(p));
    }
  }
  return std::nullopt;
}

}  // namespace crossover::testing
