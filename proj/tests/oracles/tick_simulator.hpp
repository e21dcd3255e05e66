#pragma once

// Brute-force reference for the rotation schedules, written independently
// of the event engine: advances time one unit at a time and re-evaluates
// the start rules at every tick until nothing changes.

#include <cstdint>
#include <deque>
#include <vector>

namespace crossover::oracle {

struct TickJob {
  std::int64_t comp = 1;  // > 0
  std::int64_t comm = 0;
  int iterations = 1;
};

struct TickSpan {
  int job = 0;
  int iteration = 1;
  bool sync = false;
  std::int64_t start = 0;
  std::int64_t end = 0;

  friend bool operator==(const TickSpan&, const TickSpan&) = default;
};

struct TickResult {
  std::vector<TickSpan> compute;
  std::vector<TickSpan> sync;
  std::int64_t makespan = 0;
};

inline TickResult tick_simulate(const std::vector<TickJob>& jobs, bool crossover) {
  struct Busy {
    bool active = false;
    int job = 0;
    int iteration = 0;
    std::int64_t start = 0;
    std::int64_t left = 0;
  };
  const int n = static_cast<int>(jobs.size());
  std::vector<int> computed(jobs.size(), 0);
  std::vector<int> synced(jobs.size(), 0);
  Busy gpu, nic;
  std::deque<std::pair<int, int>> nic_queue;
  int cursor = 0;
  TickResult out;

  auto next_with_work = [&](int from) {
    for (int k = 1; k <= n; ++k) {
      const int j = (from + k) % n;
      if (computed[j] < jobs[j].iterations) return j;
    }
    return -1;
  };
  auto all_done = [&] {
    for (int j = 0; j < n; ++j) {
      if (synced[j] < jobs[j].iterations) return false;
    }
    return true;
  };

  for (std::int64_t now = 0;; ++now) {
    bool changed = true;
    while (changed) {
      changed = false;
      if (gpu.active && gpu.left == 0) {
        out.compute.push_back({gpu.job, gpu.iteration, false, gpu.start, now});
        computed[gpu.job] = gpu.iteration;
        nic_queue.emplace_back(gpu.job, gpu.iteration);
        if (crossover) cursor = next_with_work(gpu.job);
        gpu.active = false;
        changed = true;
      }
      if (nic.active && nic.left == 0) {
        out.sync.push_back({nic.job, nic.iteration, true, nic.start, now});
        synced[nic.job] = nic.iteration;
        if (!crossover) cursor = next_with_work(nic.job);
        nic.active = false;
        changed = true;
      }
      if (!nic.active && !nic_queue.empty()) {
        auto [j, it] = nic_queue.front();
        nic_queue.pop_front();
        nic = Busy{true, j, it, now, jobs[j].comm};
        changed = true;
      }
      if (!gpu.active && cursor >= 0 && synced[cursor] == computed[cursor] &&
          computed[cursor] < jobs[cursor].iterations) {
        gpu = Busy{true, cursor, computed[cursor] + 1, now, jobs[cursor].comp};
        changed = true;
      }
    }
    if (all_done()) {
      out.makespan = now;
      return out;
    }
    if (gpu.active) --gpu.left;
    if (nic.active) --nic.left;
  }
}

}  // namespace crossover::oracle
