#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crossover/errors.hpp"
#include "crossover/fixtures.hpp"
#include "crossover/units.hpp"

namespace crossover {

struct TensorSpec {
  std::string name;
  std::int64_t size_bytes = 0;

  friend bool operator==(const TensorSpec&, const TensorSpec&) = default;
};

// One training application: per-iteration compute cost, gradient layout and
// the iteration budget.
struct JobProfile {
  std::string job_id;
  Duration forward_time{0};
  Duration backward_time{0};
  std::vector<TensorSpec> tensors;
  int iterations = 1;

  std::int64_t total_gradient_bytes() const noexcept {
    std::int64_t total = 0;
    for (const auto& t : tensors) total += t.size_bytes;
    return total;
  }

  // Returns the list of broken invariants; empty when the profile is valid.
  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    const std::string who = "job '" + job_id + "'";
    if (job_id.empty()) out.push_back("job_id must be non-empty");
    if (forward_time.count() < 0) out.push_back(who + ": forward_time < 0");
    if (backward_time.count() < 0) out.push_back(who + ": backward_time < 0");
    if (forward_time.count() >= 0 && backward_time.count() >= 0 &&
        (forward_time + backward_time).count() == 0) {
      out.push_back(who + ": forward_time + backward_time must be > 0");
    }
    if (iterations < 1) out.push_back(who + ": iterations must be >= 1");
    if (tensors.empty()) out.push_back(who + ": tensors must be non-empty");
    std::set<std::string_view> names;
    for (const auto& t : tensors) {
      if (t.size_bytes < 0) {
        out.push_back(who + ": tensor '" + t.name + "' has negative size");
      }
      if (!names.insert(t.name).second) {
        out.push_back(who + ": duplicate tensor name '" + t.name + "'");
      }
    }
    return out;
  }

  void validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
  }

  friend bool operator==(const JobProfile&, const JobProfile&) = default;
};

// A gradient message handed to the network. Fusion produces exactly one.
struct FusedGradient {
  std::string job_id;
  int iteration = 1;
  std::int64_t size_bytes = 0;
  int message_count = 1;

  friend bool operator==(const FusedGradient&, const FusedGradient&) = default;
};

namespace detail {

inline void check_iteration(const JobProfile& job, int iteration) {
  if (iteration < 1 || iteration > job.iterations) {
    throw RangeError("iteration " + std::to_string(iteration) +
                     " outside [1, " + std::to_string(job.iterations) +
                     "] for job '" + job.job_id + "'");
  }
}

}  // namespace detail

// Concatenates every gradient tensor of the job into a single message.
inline FusedGradient fuse_gradients(const JobProfile& job, int iteration) {
  detail::check_iteration(job, iteration);
  return FusedGradient{job.job_id, iteration, job.total_gradient_bytes(), 1};
}

// One message per tensor, as a framework without fusion would send them.
inline std::vector<FusedGradient> unfused_messages(const JobProfile& job,
                                                   int iteration) {
  detail::check_iteration(job, iteration);
  std::vector<FusedGradient> out;
  out.reserve(job.tensors.size());
  for (const auto& t : job.tensors) {
    out.push_back(FusedGradient{job.job_id, iteration, t.size_bytes, 1});
  }
  return out;
}

inline Duration comp_time(const JobProfile& job) noexcept {
  return job.forward_time + job.backward_time;
}

// Bundled profiles

inline constexpr std::int64_t kBytesPerFp32 = 4;

namespace detail {

template <std::size_t N>
JobProfile profile_from_table(
    std::string id, std::int64_t forward_ns, std::int64_t backward_ns,
    const std::array<fixtures::TensorEntry, N>& table) {
  JobProfile p;
  p.job_id = std::move(id);
  p.forward_time = Duration(forward_ns);
  p.backward_time = Duration(backward_ns);
  p.tensors.reserve(N);
  for (const auto& e : table) {
    p.tensors.push_back(TensorSpec{std::string(e.name), e.elements * kBytesPerFp32});
  }
  return p;
}

}  // namespace detail

inline std::vector<std::string> bundled_profile_names() {
  return {"resnet50", "vgg16"};
}

// Looks up a bundled profile by name; the returned job_id equals the name and
// iterations is 1 until the caller overrides it.
inline std::optional<JobProfile> bundled_profile(std::string_view name) {
  if (name == "resnet50") {
    return detail::profile_from_table("resnet50", fixtures::kResnet50ForwardNs,
                                      fixtures::kResnet50BackwardNs,
                                      fixtures::kResnet50Tensors);
  }
  if (name == "vgg16") {
    return detail::profile_from_table("vgg16", fixtures::kVgg16ForwardNs,
                                      fixtures::kVgg16BackwardNs,
                                      fixtures::kVgg16Tensors);
  }
  return std::nullopt;
}

}  // namespace crossover
