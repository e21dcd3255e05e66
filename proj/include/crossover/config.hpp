#pragma once

// Scenario documents: one JSON object per file, human-scale units with
// suffixed field names, normalized once to ns / bytes / bytes-per-second.
//
// {
//   "name": "resnet50_2jobs_100g",
//   "cluster": {"workers": 16, "gpus_per_worker": 8, "bandwidth_gbps": 100,
//               "latency_us": 50, "architecture": "ring_allreduce",
//               "ps_servers": 1},
//   "scheduler": {"policy": "crossover"},
//   "iterations": 1000,
//   "jobs": [{"profile": "resnet50", "job_id": "a"},
//            {"job_id": "b", "forward_ms": 2, "backward_ms": 4,
//             "tensors": [{"name": "w", "size_mb": 10}]},
//            {"job_id": "c", "forward_ms": 1, "backward_ms": 1, "grad_mb": 3}]
// }

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crossover/comm.hpp"
#include "crossover/errors.hpp"
#include "crossover/scheduler.hpp"
#include "crossover/workload.hpp"

namespace crossover {

struct Scenario {
  std::string name;
  std::vector<JobProfile> jobs;
  ClusterSpec cluster;
  SchedulePolicy policy = SchedulePolicy::Crossover;
  std::optional<int> iterations_override;

  SchedulePlan plan() const { return plan(policy); }

  SchedulePlan plan(SchedulePolicy p) const {
    SchedulePlan out{name, p, jobs, cluster};
    if (iterations_override) {
      for (auto& j : out.jobs) j.iterations = *iterations_override;
    }
    return out;
  }
};

namespace detail {

using json = nlohmann::json;

inline constexpr double kMaxInternal = 9.0e18;

class FieldReader {
 public:
  FieldReader(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) throw ParseError(path_, "expected an object");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : obj_.items()) {
      bool known = false;
      for (auto key : keys) known = known || key == k;
      if (!known) errors_.push_back(field(k) + ": unknown field");
    }
  }

  bool has(const std::string& key) const { return obj_.contains(key); }
  const json& raw(const std::string& key) const { return obj_.at(key); }
  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  std::optional<std::string> string(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    if (!obj_[key].is_string()) throw ParseError(field(key), "expected a string");
    return obj_[key].get<std::string>();
  }

  std::optional<std::int64_t> integer(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_[key];
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < kMaxInternal) {
        return static_cast<std::int64_t>(d);
      }
    }
    throw ParseError(field(key), "expected an integer");
  }

  std::optional<int> small_int(const std::string& key) const {
    auto v = integer(key);
    if (v && (*v > std::numeric_limits<int>::max() || *v < std::numeric_limits<int>::min())) {
      errors_.push_back(field(key) + ": value out of range");
      return std::nullopt;
    }
    return v ? std::optional<int>(static_cast<int>(*v)) : std::nullopt;
  }

  // Reads a human-scale number and scales it to an internal integer.
  std::optional<std::int64_t> scaled(const std::string& key, double scale) const {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_[key];
    if (!v.is_number()) throw ParseError(field(key), "expected a number");
    const double x = v.get<double>() * scale;
    if (!std::isfinite(x) || std::fabs(x) >= kMaxInternal) {
      errors_.push_back(field(key) + ": value overflows internal 64-bit units");
      return std::nullopt;
    }
    return static_cast<std::int64_t>(std::llround(x));
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
};

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') ++line;
  }
  return line;
}

inline ClusterSpec read_cluster(const FieldReader& r, std::vector<std::string>& errors) {
  r.allow_only({"workers", "gpus_per_worker", "bandwidth_gbps", "latency_us",
                "architecture", "ps_servers"});
  ClusterSpec c;
  if (auto w = r.small_int("workers")) c.workers = *w;
  else errors.push_back(r.field("workers") + ": required");
  if (auto g = r.small_int("gpus_per_worker")) c.gpus_per_worker = *g;
  // Gbit/s to bytes/s: x * 1e9 / 8.
  if (auto b = r.scaled("bandwidth_gbps", 1e9 / 8.0)) c.bandwidth_bytes_per_sec = *b;
  else if (!r.has("bandwidth_gbps")) errors.push_back(r.field("bandwidth_gbps") + ": required");
  if (auto l = r.scaled("latency_us", 1e3)) c.latency_per_message = Duration(*l);
  if (auto a = r.string("architecture")) {
    if (*a == "ring_allreduce") c.architecture = Architecture::RingAllreduce;
    else if (*a == "parameter_server") c.architecture = Architecture::ParameterServer;
    else errors.push_back(r.field("architecture") + ": unknown value '" + *a +
                          "' (allowed: ring_allreduce, parameter_server)");
  } else {
    errors.push_back(r.field("architecture") + ": required");
  }
  if (auto p = r.small_int("ps_servers")) c.ps_servers = *p;
  return c;
}

inline std::optional<JobProfile> read_job(const FieldReader& r, std::vector<std::string>& errors) {
  r.allow_only({"profile", "job_id", "forward_ms", "backward_ms", "iterations", "tensors",
                "grad_mb"});
  JobProfile job;
  if (auto name = r.string("profile")) {
    auto p = bundled_profile(*name);
    if (!p) {
      std::string allowed;
      for (const auto& n : bundled_profile_names()) allowed += (allowed.empty() ? "" : ", ") + n;
      errors.push_back(r.field("profile") + ": unknown profile '" + *name + "' (allowed: " +
                       allowed + ")");
      return std::nullopt;
    }
    job = std::move(*p);
  } else {
    for (const char* key : {"job_id", "forward_ms", "backward_ms"}) {
      if (!r.has(key)) errors.push_back(r.field(key) + ": required without a profile");
    }
    if (r.has("tensors") == r.has("grad_mb")) {
      errors.push_back(r.field("tensors") + ": exactly one of tensors or grad_mb is required");
    }
  }
  if (auto id = r.string("job_id")) job.job_id = *id;
  if (auto f = r.scaled("forward_ms", 1e6)) job.forward_time = Duration(*f);
  if (auto b = r.scaled("backward_ms", 1e6)) job.backward_time = Duration(*b);
  if (auto it = r.small_int("iterations")) job.iterations = *it;
  if (r.has("tensors") && r.has("grad_mb")) {
    errors.push_back(r.field("tensors") + ": tensors and grad_mb are mutually exclusive");
  } else if (r.has("grad_mb")) {
    if (auto g = r.scaled("grad_mb", static_cast<double>(kBytesPerMegabyte))) {
      job.tensors = {TensorSpec{"grad", *g}};
    }
  } else if (r.has("tensors")) {
    const auto& arr = r.raw("tensors");
    if (!arr.is_array()) throw ParseError(r.field("tensors"), "expected an array");
    job.tensors.clear();
    for (std::size_t k = 0; k < arr.size(); ++k) {
      FieldReader t(arr[k], r.field("tensors") + "[" + std::to_string(k) + "]", errors);
      t.allow_only({"name", "size_mb"});
      TensorSpec spec;
      if (auto n = t.string("name")) spec.name = *n;
      else errors.push_back(t.field("name") + ": required");
      if (auto s = t.scaled("size_mb", static_cast<double>(kBytesPerMegabyte))) spec.size_bytes = *s;
      else if (!t.has("size_mb")) errors.push_back(t.field("size_mb") + ": required");
      job.tensors.push_back(std::move(spec));
    }
  }
  return job;
}

}  // namespace detail

// Parses and validates a scenario document. `source` names the input in
// error messages.
inline Scenario parse_scenario(const std::string& text, const std::string& source = "config") {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ":line " + std::to_string(detail::line_of(text, e.byte)), e.what());
  }

  std::vector<std::string> errors;
  Scenario s;
  detail::FieldReader root(doc, "", errors);
  root.allow_only({"name", "cluster", "scheduler", "iterations", "jobs"});
  if (auto n = root.string("name")) s.name = *n;
  else errors.push_back("name: required");

  if (root.has("cluster")) {
    s.cluster = detail::read_cluster(detail::FieldReader(root.raw("cluster"), "cluster", errors),
                                     errors);
  } else {
    errors.push_back("cluster: required");
  }

  if (root.has("scheduler")) {
    detail::FieldReader sched(root.raw("scheduler"), "scheduler", errors);
    sched.allow_only({"policy"});
    if (auto p = sched.string("policy")) {
      if (auto policy = policy_from_string(*p)) s.policy = *policy;
      else errors.push_back("scheduler.policy: unknown value '" + *p +
                            "' (allowed: crossover, sequential)");
    }
  }

  s.iterations_override = root.small_int("iterations");

  if (!root.has("jobs") || !root.raw("jobs").is_array() || root.raw("jobs").empty()) {
    errors.push_back("jobs: required non-empty array");
  } else {
    const auto& jobs = root.raw("jobs");
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      detail::FieldReader r(jobs[k], "jobs[" + std::to_string(k) + "]", errors);
      const bool has_iterations = r.has("iterations");
      if (auto job = detail::read_job(r, errors)) {
        if (!has_iterations && !s.iterations_override) {
          errors.push_back(r.field("iterations") +
                           ": required when no top-level iterations is given");
        }
        s.jobs.push_back(std::move(*job));
      }
    }
  }

  if (errors.empty()) {
    for (auto& v : s.plan().violations()) errors.push_back(std::move(v));
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return s;
}

inline Scenario load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

}  // namespace crossover
