#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crossover/comm.hpp"
#include "crossover/engine.hpp"
#include "crossover/errors.hpp"
#include "crossover/units.hpp"
#include "crossover/workload.hpp"

namespace crossover {

enum class SchedulePolicy { Crossover, Sequential };

inline std::string_view to_string(SchedulePolicy p) noexcept {
  return p == SchedulePolicy::Crossover ? "crossover" : "sequential";
}

inline std::optional<SchedulePolicy> policy_from_string(std::string_view s) noexcept {
  if (s == "crossover") return SchedulePolicy::Crossover;
  if (s == "sequential") return SchedulePolicy::Sequential;
  return std::nullopt;
}

// Jobs co-located on every GPU of the cluster. Vector order is the rotation
// order of the compute lane.
struct SchedulePlan {
  std::string name;
  SchedulePolicy policy = SchedulePolicy::Crossover;
  std::vector<JobProfile> jobs;
  ClusterSpec cluster;

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (jobs.empty()) out.push_back("plan has no jobs");
    std::set<std::string_view> ids;
    for (const auto& j : jobs) {
      for (auto& v : j.violations()) out.push_back(std::move(v));
      if (!ids.insert(j.job_id).second) {
        out.push_back("duplicate job_id '" + j.job_id + "'");
      }
    }
    for (auto& v : cluster.violations()) out.push_back(std::move(v));
    return out;
  }

  void validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
  }
};

// Durations the simulator needs for one job, already resolved through the
// cost models.
struct JobTiming {
  std::string job_id;
  Duration forward{0};
  Duration backward{0};
  Duration comm{0};
  int iterations = 1;

  Duration comp() const noexcept { return forward + backward; }
};

inline std::vector<JobTiming> resolve_timings(const SchedulePlan& plan) {
  plan.validate();
  std::vector<JobTiming> out;
  out.reserve(plan.jobs.size());
  for (const auto& j : plan.jobs) {
    out.push_back(JobTiming{j.job_id, j.forward_time, j.backward_time,
                            sync_time(j, plan.cluster), j.iterations});
  }
  return out;
}

struct JobRuntimeState {
  std::string job_id;
  int next_iteration = 1;
  bool awaiting_sync = false;
  int sync_of_iteration = 0;
  bool finished = false;
};

inline constexpr std::string_view kComputeLaneId = "gpu0";
inline constexpr std::string_view kNetworkLaneId = "nic0";

// Drives one representative worker: a GPU lane shared by all jobs in fixed
// rotation order and a FIFO NIC lane.
//
// Crossover: when job i's compute finishes, its sync goes to the NIC and the
// GPU moves on to the next job in rotation, which may start once its own
// previous sync has completed (iteration 1 has none). Every job ends with a
// drain sync of its last iteration.
//
// Sequential: the GPU waits for each sync to complete before the next job's
// compute begins.
class RotationPolicy final : public Policy {
 public:
  RotationPolicy(std::span<const JobTiming> jobs, SchedulePolicy mode)
      : jobs_(jobs.begin(), jobs.end()), mode_(mode) {
    state_.reserve(jobs_.size());
    for (const auto& j : jobs_) state_.push_back(JobRuntimeState{j.job_id});
  }

  const std::vector<JobRuntimeState>& state() const noexcept { return state_; }

  void start(Engine& engine) override {
    gpu_ = engine.add_lane(std::string(kComputeLaneId), LaneKind::Compute);
    nic_ = engine.add_lane(std::string(kNetworkLaneId), LaneKind::Network);
    cursor_ = jobs_.empty() ? std::nullopt : std::optional<std::size_t>(0);
    try_issue(engine);
  }

  void on_event(Engine& engine, const Event& e) override {
    const auto i = static_cast<std::size_t>(e.job_index);
    auto& st = state_.at(i);
    if (e.kind == EventKind::ComputeDone) {
      if (st.awaiting_sync) {
        throw std::logic_error("job '" + st.job_id + "' has two outstanding syncs");
      }
      compute_outstanding_ = false;
      st.awaiting_sync = true;
      st.sync_of_iteration = e.iteration;
      st.next_iteration = e.iteration + 1;
      engine.enqueue(nic_, e.job_index, st.job_id, e.iteration, jobs_[i].comm,
                     Phase::Sync);
      if (mode_ == SchedulePolicy::Crossover) {
        cursor_ = next_in_rotation(i);
        try_issue(engine);
      }
    } else {
      st.awaiting_sync = false;
      if (e.iteration == jobs_[i].iterations) st.finished = true;
      if (mode_ == SchedulePolicy::Sequential) cursor_ = next_in_rotation(i);
      try_issue(engine);
    }
  }

  std::optional<std::pair<std::string, int>> blocked() const override {
    for (const auto& st : state_) {
      if (!st.finished) {
        return std::pair{st.job_id, st.awaiting_sync ? st.sync_of_iteration
                                                     : st.next_iteration};
      }
    }
    return std::nullopt;
  }

 private:
  // First job after `from` (cyclically, `from` included last) that still has
  // compute work left.
  std::optional<std::size_t> next_in_rotation(std::size_t from) const {
    const std::size_t n = jobs_.size();
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t j = (from + k) % n;
      if (state_[j].next_iteration <= jobs_[j].iterations) return j;
    }
    return std::nullopt;
  }

  void try_issue(Engine& engine) {
    if (!cursor_ || compute_outstanding_) return;
    const std::size_t j = *cursor_;
    auto& st = state_[j];
    if (st.awaiting_sync) return;
    compute_outstanding_ = true;
    engine.enqueue(gpu_, static_cast<int>(j), st.job_id, st.next_iteration,
                   {{Phase::Forward, jobs_[j].forward},
                    {Phase::Backward, jobs_[j].backward}},
                   EventKind::ComputeDone);
  }

  std::vector<JobTiming> jobs_;
  SchedulePolicy mode_;
  std::vector<JobRuntimeState> state_;
  Engine::LaneId gpu_ = 0;
  Engine::LaneId nic_ = 0;
  std::optional<std::size_t> cursor_;
  bool compute_outstanding_ = false;
};

inline Trace simulate(std::span<const JobTiming> jobs, SchedulePolicy policy) {
  for (const auto& j : jobs) {
    if (j.iterations < 1) throw ValidationError("job '" + j.job_id + "': iterations must be >= 1");
    if (j.forward.count() < 0 || j.backward.count() < 0 || j.comm.count() < 0) {
      throw ValidationError("job '" + j.job_id + "': negative duration");
    }
  }
  Engine engine;
  RotationPolicy driver(jobs, policy);
  return engine.run(driver);
}

inline Trace schedule_crossover(const SchedulePlan& plan) {
  if (plan.policy != SchedulePolicy::Crossover) {
    throw ConfigError("schedule_crossover requires policy crossover");
  }
  return simulate(resolve_timings(plan), SchedulePolicy::Crossover);
}

inline Trace schedule_sequential(const SchedulePlan& plan) {
  if (plan.policy != SchedulePolicy::Sequential) {
    throw ConfigError("schedule_sequential requires policy sequential");
  }
  return simulate(resolve_timings(plan), SchedulePolicy::Sequential);
}

inline Trace schedule(const SchedulePlan& plan) {
  return simulate(resolve_timings(plan), plan.policy);
}

namespace detail {

inline const JobTiming& homogeneous_timing(const std::vector<JobTiming>& t) {
  for (const auto& j : t) {
    if (j.comp() != t.front().comp() || j.comm != t.front().comm) {
      throw UnsupportedError(
          "closed form requires identical compute and sync times; simulate instead");
    }
  }
  return t.front();
}

}  // namespace detail

// Steady-state time between consecutive compute starts of one job. Exact
// for homogeneous jobs only.
inline Duration steady_state_period(const SchedulePlan& plan) {
  const auto timings = resolve_timings(plan);
  const auto& j = detail::homogeneous_timing(timings);
  const auto n = static_cast<std::int64_t>(timings.size());
  if (plan.policy == SchedulePolicy::Crossover) {
    return n * std::max(j.comp(), j.comm);
  }
  return n * (j.comp() + j.comm);
}

// Sequential period over crossover period: (comp + comm) / max(comp, comm).
inline Ratio predicted_speedup(const SchedulePlan& plan) {
  const auto timings = resolve_timings(plan);
  const auto& j = detail::homogeneous_timing(timings);
  return Ratio::of(j.comp() + j.comm, std::max(j.comp(), j.comm));
}

}  // namespace crossover
