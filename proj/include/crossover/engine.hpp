#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "crossover/errors.hpp"
#include "crossover/units.hpp"

namespace crossover {

enum class LaneKind { Compute, Network };
enum class Phase { Forward, Backward, Sync };
// Declaration order is the tie-break order between events at one instant.
enum class EventKind { ComputeDone, CommDone };

inline std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::Forward: return "forward";
    case Phase::Backward: return "backward";
    case Phase::Sync: return "sync";
  }
  return "?";
}

inline std::optional<Phase> phase_from_string(std::string_view s) noexcept {
  if (s == "forward") return Phase::Forward;
  if (s == "backward") return Phase::Backward;
  if (s == "sync") return Phase::Sync;
  return std::nullopt;
}

// Half-open occupancy interval [start, end) of one lane.
struct Span {
  std::string lane_id;
  std::string job_id;
  Phase phase = Phase::Forward;
  int iteration = 1;
  Timestamp start{0};
  Timestamp end{0};

  Duration length() const noexcept { return end - start; }

  friend bool operator==(const Span&, const Span&) = default;
};

struct Trace {
  std::vector<Span> spans;
  Timestamp makespan{0};

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct Event {
  Timestamp time{0};
  EventKind kind = EventKind::ComputeDone;
  int job_index = 0;
  std::string job_id;
  int iteration = 1;
};

// A unit of work executed back to back on one lane. Each segment becomes one
// span; completion fires a single event of `on_done` kind.
struct Task {
  int job_index = 0;
  std::string job_id;
  int iteration = 1;
  std::vector<std::pair<Phase, Duration>> segments;
  EventKind on_done = EventKind::ComputeDone;
  Timestamp enqueued_at{0};
  std::uint64_t seq = 0;

  Duration total() const noexcept {
    Duration d{0};
    for (const auto& [phase, len] : segments) d += len;
    return d;
  }
};

// An exclusive resource. Pending tasks are ordered by (enqueue time, job
// index, arrival) and the head starts at max(busy_until, enqueue time).
class Lane {
 public:
  Lane(std::string id, LaneKind kind) : id_(std::move(id)), kind_(kind) {}

  const std::string& id() const noexcept { return id_; }
  LaneKind kind() const noexcept { return kind_; }
  Timestamp busy_until() const noexcept { return busy_until_; }
  std::size_t pending() const noexcept { return fifo_.size(); }

  void enqueue(Task task) {
    for (const auto& [phase, len] : task.segments) {
      if (len.count() < 0) throw DomainError("negative task duration");
    }
    auto key = [](const Task& t) {
      return std::tuple(t.enqueued_at, t.job_index, t.seq);
    };
    auto pos = std::upper_bound(
        fifo_.begin(), fifo_.end(), task,
        [&](const Task& a, const Task& b) { return key(a) < key(b); });
    fifo_.insert(pos, std::move(task));
  }

  // Starts the head task if the lane is free at `now` and the head has
  // arrived. Appends its spans and returns the finished task with its end.
  std::optional<std::pair<Task, Timestamp>> try_start(Timestamp now,
                                                      std::vector<Span>& out) {
    if (fifo_.empty() || busy_until_ > now || fifo_.front().enqueued_at > now) {
      return std::nullopt;
    }
    Task task = std::move(fifo_.front());
    fifo_.pop_front();
    Timestamp t = std::max(busy_until_, task.enqueued_at);
    for (const auto& [phase, len] : task.segments) {
      out.push_back(Span{id_, task.job_id, phase, task.iteration, t, t + len});
      t += len;
    }
    busy_until_ = t;
    return std::pair{std::move(task), t};
  }

 private:
  std::string id_;
  LaneKind kind_;
  Timestamp busy_until_{0};
  std::deque<Task> fifo_;
};

class Engine;

// Callbacks that drive a simulation. `blocked` reports a job that has not
// finished, used to name the culprit when the event queue runs dry.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void start(Engine& engine) = 0;
  virtual void on_event(Engine& engine, const Event& event) = 0;
  virtual std::optional<std::pair<std::string, int>> blocked() const = 0;
};

class Engine {
 public:
  using LaneId = std::size_t;

  LaneId add_lane(std::string id, LaneKind kind) {
    lanes_.emplace_back(std::move(id), kind);
    return lanes_.size() - 1;
  }

  const Lane& lane(LaneId id) const { return lanes_.at(id); }
  std::size_t lane_count() const noexcept { return lanes_.size(); }
  Timestamp now() const noexcept { return now_; }

  // Queues work on a lane as of the current simulated instant.
  void enqueue(LaneId lane, int job_index, std::string job_id, int iteration,
               std::vector<std::pair<Phase, Duration>> segments,
               EventKind on_done) {
    Task t;
    t.job_index = job_index;
    t.job_id = std::move(job_id);
    t.iteration = iteration;
    t.segments = std::move(segments);
    t.on_done = on_done;
    t.enqueued_at = now_;
    t.seq = next_seq_++;
    lanes_.at(lane).enqueue(std::move(t));
  }

  void enqueue(LaneId lane, int job_index, std::string job_id, int iteration,
               Duration duration, Phase phase) {
    enqueue(lane, job_index, std::move(job_id), iteration, {{phase, duration}},
            phase == Phase::Sync ? EventKind::CommDone : EventKind::ComputeDone);
  }

  // Processes events in (time, kind, job index) order until none remain.
  // Lanes are dispatched only after every event of an instant is handled, so
  // tasks enqueued at the same instant start in job-index order.
  Trace run(Policy& policy) {
    policy.start(*this);
    dispatch();
    while (!events_.empty()) {
      now_ = events_.top().event.time;
      while (!events_.empty() && events_.top().event.time == now_) {
        Event e = events_.top().event;
        events_.pop();
        policy.on_event(*this, e);
      }
      dispatch();
    }
    if (auto stuck = policy.blocked()) {
      throw DeadlockError(stuck->first, stuck->second,
                          "no pending events at t=" + std::to_string(now_.count()) + "ns");
    }
    Trace trace;
    trace.spans = std::move(spans_);
    for (const auto& s : trace.spans) trace.makespan = std::max(trace.makespan, s.end);
    return trace;
  }

 private:
  struct Queued {
    Event event;
    std::uint64_t seq;

    friend bool operator>(const Queued& a, const Queued& b) {
      return std::tuple(a.event.time, a.event.kind, a.event.job_index, a.seq) >
             std::tuple(b.event.time, b.event.kind, b.event.job_index, b.seq);
    }
  };

  void dispatch() {
    // At most one start per lane; a zero-length task's completion event at
    // the same instant triggers the next dispatch pass.
    for (auto& lane : lanes_) {
      if (auto started = lane.try_start(now_, spans_)) {
        auto& [task, end] = *started;
        events_.push(Queued{Event{end, task.on_done, task.job_index,
                                  task.job_id, task.iteration},
                            next_seq_++});
      }
    }
  }

  std::vector<Lane> lanes_;
  std::priority_queue<Queued, std::vector<Queued>, std::greater<>> events_;
  std::vector<Span> spans_;
  Timestamp now_{0};
  std::uint64_t next_seq_ = 0;
};

// Checks lane exclusivity, per-job phase order
// (Forward_t, Backward_t, Sync_t, Forward_{t+1}) and makespan consistency.
// Each broken rule yields one message.
inline std::vector<std::string> validate_trace(const Trace& trace) {
  std::vector<std::string> out;

  std::map<std::string, std::vector<const Span*>> by_lane;
  for (const auto& s : trace.spans) {
    if (s.end < s.start) {
      out.push_back("span " + s.job_id + "/" + std::string(to_string(s.phase)) +
                    "/" + std::to_string(s.iteration) + " ends before it starts");
    }
    by_lane[s.lane_id].push_back(&s);
  }
  for (auto& [lane, spans] : by_lane) {
    std::sort(spans.begin(), spans.end(), [](const Span* a, const Span* b) {
      return std::tie(a->start, a->end) < std::tie(b->start, b->end);
    });
    std::optional<Timestamp> reach;
    for (const Span* s : spans) {
      if (reach && s->start < *reach) {
        out.push_back("lane " + lane + ": span " + s->job_id + "/" +
                      std::string(to_string(s->phase)) + "/" +
                      std::to_string(s->iteration) + " overlaps an earlier span");
      }
      reach = reach ? std::max(*reach, s->end) : s->end;
    }
  }

  struct Phases {
    std::vector<const Span*> of[3];
  };
  std::map<std::string, std::map<int, Phases>> by_job;
  for (const auto& s : trace.spans) {
    by_job[s.job_id][s.iteration].of[static_cast<int>(s.phase)].push_back(&s);
  }
  for (const auto& [job, iters] : by_job) {
    const int last = iters.rbegin()->first;
    const Span* prev_sync = nullptr;
    for (int t = 1; t <= last; ++t) {
      auto it = iters.find(t);
      const Span* ph[3] = {nullptr, nullptr, nullptr};
      for (int p = 0; p < 3; ++p) {
        const std::size_t n = it == iters.end() ? 0 : it->second.of[p].size();
        const std::string what = "job " + job + " iteration " + std::to_string(t) +
                                 ": " + std::string(to_string(static_cast<Phase>(p)));
        if (n == 0) {
          out.push_back(what + " span missing");
        } else if (n > 1) {
          out.push_back(what + " span duplicated");
        } else {
          ph[p] = it->second.of[p].front();
        }
      }
      const std::string at = "job " + job + " iteration " + std::to_string(t);
      if (prev_sync && ph[0] && ph[0]->start < prev_sync->end) {
        out.push_back(at + ": forward starts before previous sync completes");
      }
      if (ph[0] && ph[1] && ph[1]->start < ph[0]->end) {
        out.push_back(at + ": backward starts before forward ends");
      }
      if (ph[1] && ph[2] && ph[2]->start < ph[1]->end) {
        out.push_back(at + ": sync starts before backward ends");
      }
      prev_sync = ph[2];
    }
    for (const auto& [t, ph] : iters) {
      if (t < 1) out.push_back("job " + job + ": iteration " + std::to_string(t) + " < 1");
    }
  }

  Timestamp max_end{0};
  for (const auto& s : trace.spans) max_end = std::max(max_end, s.end);
  if (trace.makespan != max_end) {
    out.push_back("makespan " + std::to_string(trace.makespan.count()) +
                  " != max span end " + std::to_string(max_end.count()));
  }
  return out;
}

}  // namespace crossover
