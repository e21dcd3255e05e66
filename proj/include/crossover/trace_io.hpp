#pragma once

#include <algorithm>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "crossover/engine.hpp"
#include "crossover/errors.hpp"

namespace crossover {

// Span trace as a JSON array, in recording order.
inline nlohmann::ordered_json trace_to_json(const Trace& trace) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& s : trace.spans) {
    out.push_back({{"lane", s.lane_id},
                   {"job", s.job_id},
                   {"phase", to_string(s.phase)},
                   {"iteration", s.iteration},
                   {"start_ns", s.start.count()},
                   {"end_ns", s.end.count()}});
  }
  return out;
}

inline Trace trace_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("trace", "expected a JSON array of spans");
  Trace trace;
  std::size_t k = 0;
  for (const auto& e : j) {
    const std::string where = "trace[" + std::to_string(k++) + "]";
    try {
      Span s;
      s.lane_id = e.at("lane").get<std::string>();
      s.job_id = e.at("job").get<std::string>();
      const auto phase = phase_from_string(e.at("phase").get<std::string>());
      if (!phase) throw ParseError(where + ".phase", "unknown phase");
      s.phase = *phase;
      s.iteration = e.at("iteration").get<int>();
      s.start = Timestamp(e.at("start_ns").get<std::int64_t>());
      s.end = Timestamp(e.at("end_ns").get<std::int64_t>());
      trace.makespan = std::max(trace.makespan, s.end);
      trace.spans.push_back(std::move(s));
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(where, ex.what());
    }
  }
  return trace;
}

// Chrome trace-event document: one complete ("X") event per span with
// microsecond timestamps, one tid per lane in order of first appearance.
inline nlohmann::ordered_json chrome_trace(const Trace& trace) {
  std::map<std::string, int> tids;
  for (const auto& s : trace.spans) tids.emplace(s.lane_id, static_cast<int>(tids.size()));
  auto events = nlohmann::ordered_json::array();
  for (const auto& s : trace.spans) {
    events.push_back({{"name", s.job_id + " " + std::string(to_string(s.phase)) + " #" +
                                   std::to_string(s.iteration)},
                      {"cat", to_string(s.phase)},
                      {"ph", "X"},
                      {"ts", static_cast<double>(s.start.count()) / 1000.0},
                      {"dur", static_cast<double>(s.length().count()) / 1000.0},
                      {"pid", 0},
                      {"tid", tids.at(s.lane_id)},
                      {"args", {{"lane", s.lane_id},
                                {"job", s.job_id},
                                {"iteration", s.iteration}}}});
  }
  nlohmann::ordered_json doc;
  doc["traceEvents"] = std::move(events);
  doc["displayTimeUnit"] = "ns";
  return doc;
}

}  // namespace crossover
