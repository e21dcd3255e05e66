#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crossover/errors.hpp"
#include "crossover/units.hpp"
#include "crossover/workload.hpp"

namespace crossover {

enum class Architecture { ParameterServer, RingAllreduce };

inline std::string_view to_string(Architecture a) noexcept {
  return a == Architecture::ParameterServer ? "parameter_server"
                                            : "ring_allreduce";
}

struct ClusterSpec {
  int workers = 1;
  int gpus_per_worker = 1;
  std::int64_t bandwidth_bytes_per_sec = 1;
  Duration latency_per_message{0};
  Architecture architecture = Architecture::RingAllreduce;
  int ps_servers = 1;

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (workers < 1) out.push_back("cluster.workers must be >= 1");
    if (gpus_per_worker < 1) out.push_back("cluster.gpus_per_worker must be >= 1");
    if (bandwidth_bytes_per_sec <= 0) out.push_back("cluster.bandwidth must be > 0");
    if (latency_per_message.count() < 0) out.push_back("cluster.latency must be >= 0");
    if (architecture == Architecture::ParameterServer && ps_servers < 1) {
      out.push_back("cluster.ps_servers must be >= 1 for parameter_server");
    }
    return out;
  }

  void validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
  }

  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

struct SyncRequest {
  std::string job_id;
  int iteration = 1;
  FusedGradient payload;
};

namespace detail {

inline Duration checked_ns(unsigned __int128 ns) {
  if (ns > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max())) {
    throw DomainError("communication time overflows 64-bit nanoseconds");
  }
  return Duration(static_cast<std::int64_t>(ns));
}

inline unsigned __int128 ceil_div(unsigned __int128 a, unsigned __int128 b) {
  return a / b + (a % b != 0 ? 1 : 0);
}

// Bandwidth component of one synchronization carrying `bytes` in total,
// in exact nanoseconds rounded up once.
inline Duration bandwidth_term(std::int64_t bytes, const ClusterSpec& c) {
  if (bytes < 0) throw DomainError("negative payload size");
  const auto s = static_cast<unsigned __int128>(bytes);
  const auto b = static_cast<unsigned __int128>(c.bandwidth_bytes_per_sec);
  const auto ns = static_cast<unsigned __int128>(kNanosPerSecond);
  switch (c.architecture) {
    case Architecture::RingAllreduce: {
      const auto w = static_cast<unsigned __int128>(c.workers);
      if (c.workers == 1) return Duration(0);
      // 2 * ((W-1)/W) * S / B
      return checked_ns(ceil_div(2 * (w - 1) * s * ns, w * b));
    }
    case Architecture::ParameterServer:
      // push + pull through the worker NIC
      return checked_ns(ceil_div(2 * s * ns, b));
  }
  return Duration(0);
}

inline void require_architecture(const ClusterSpec& c, Architecture want) {
  if (c.architecture != want) {
    throw ConfigError("cost model for " + std::string(to_string(want)) +
                      " called on a " + std::string(to_string(c.architecture)) +
                      " cluster");
  }
}

}  // namespace detail

// Latency paid by one message: 2(W-1)α for the ring (reduce-scatter plus
// allgather steps), 2α for a parameter-server push/pull.
inline Duration latency_term(const ClusterSpec& c) {
  switch (c.architecture) {
    case Architecture::RingAllreduce:
      return 2 * (c.workers - 1) * c.latency_per_message;
    case Architecture::ParameterServer:
      return 2 * c.latency_per_message;
  }
  return Duration(0);
}

inline Duration comm_time_allreduce(std::int64_t size_bytes, const ClusterSpec& c) {
  detail::require_architecture(c, Architecture::RingAllreduce);
  if (c.workers == 1) return Duration(0);
  return latency_term(c) + detail::bandwidth_term(size_bytes, c);
}

// Server sharding does not relax the worker NIC, so ps_servers is not a term.
inline Duration comm_time_ps(std::int64_t size_bytes, const ClusterSpec& c) {
  detail::require_architecture(c, Architecture::ParameterServer);
  return latency_term(c) + detail::bandwidth_term(size_bytes, c);
}

inline Duration comm_time(std::int64_t size_bytes, const ClusterSpec& c) {
  return c.architecture == Architecture::RingAllreduce
             ? comm_time_allreduce(size_bytes, c)
             : comm_time_ps(size_bytes, c);
}

inline Duration comm_time(const SyncRequest& request, const ClusterSpec& c) {
  return comm_time(request.payload.size_bytes, c);
}

// Total time for a list of messages sent back to back. Every message pays
// the latency term; the bandwidth terms are summed exactly and rounded once,
// so the list costs the fused message plus (count - 1) latency terms.
inline Duration comm_time(std::span<const FusedGradient> messages,
                          const ClusterSpec& c) {
  std::int64_t bytes = 0;
  std::int64_t count = 0;
  for (const auto& m : messages) {
    bytes += m.size_bytes;
    count += m.message_count;
  }
  if (count == 0) return Duration(0);
  if (c.architecture == Architecture::RingAllreduce && c.workers == 1) {
    return Duration(0);
  }
  return count * latency_term(c) + detail::bandwidth_term(bytes, c);
}

// Fused-gradient synchronization time of one iteration.
inline Duration sync_time(const JobProfile& job, const ClusterSpec& c) {
  return comm_time(job.total_gradient_bytes(), c);
}

inline Ratio comm_comp_ratio(const JobProfile& job, const ClusterSpec& c) {
  const Duration comp = comp_time(job);
  if (comp.count() <= 0) {
    throw DomainError("job '" + job.job_id + "' has zero compute time");
  }
  return Ratio::of(sync_time(job, c), comp);
}

}  // namespace crossover
