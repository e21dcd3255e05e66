#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crossover {

// Iteration index or other argument outside its documented range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Cluster or policy configuration that an operation cannot accept.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Closed forms that only hold for homogeneous job sets.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ComparisonError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DeadlockError : public std::runtime_error {
 public:
  DeadlockError(std::string job_id, int iteration, const std::string& context)
      : std::runtime_error("deadlock: job '" + job_id + "' iteration " +
                           std::to_string(iteration) + " can never start" +
                           (context.empty() ? "" : " (" + context + ")")),
        job_id_(std::move(job_id)),
        iteration_(iteration) {}

  const std::string& job_id() const noexcept { return job_id_; }
  int iteration() const noexcept { return iteration_; }

 private:
  std::string job_id_;
  int iteration_;
};

// Malformed input document. `where` is "line N" or a JSON field path.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

// A well-formed value that violates a domain invariant, or a rejected trace.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)),
        violations_(std::move(violations)) {}

  explicit ValidationError(const std::string& violation)
      : ValidationError(std::vector<std::string>{violation}) {}

  const std::vector<std::string>& violations() const noexcept {
    return violations_;
  }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace crossover
