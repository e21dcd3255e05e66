#pragma once

#include <chrono>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "crossover/errors.hpp"

namespace crossover {

// All simulated time is integral nanoseconds. A timestamp is the offset from
// simulation start.
using Duration = std::chrono::nanoseconds;
using Timestamp = std::chrono::nanoseconds;

inline constexpr std::int64_t kNanosPerSecond = 1'000'000'000;
inline constexpr std::int64_t kBytesPerMegabyte = 1'000'000;

// Exact non-negative rational, always stored in lowest terms with den > 0.
class Ratio {
 public:
  constexpr Ratio() = default;

  Ratio(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw DomainError("ratio with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  static Ratio of(Duration num, Duration den) {
    return Ratio(num.count(), den.count());
  }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend bool operator==(const Ratio& a, const Ratio& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend bool operator<(const Ratio& a, const Ratio& b) noexcept {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Ratio& a, const Ratio& b) noexcept {
    return !(b < a);
  }
  friend bool operator>(const Ratio& a, const Ratio& b) noexcept {
    return b < a;
  }
  friend bool operator>=(const Ratio& a, const Ratio& b) noexcept {
    return !(a < b);
  }

  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Ratio& r) {
    return os << r.str();
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace crossover
