#include <gtest/gtest.h>

#include <random>

#include "crossover/comm.hpp"

namespace crossover {
namespace {

using std::chrono::microseconds;
using std::chrono::milliseconds;

ClusterSpec ring(int workers, std::int64_t bytes_per_sec, Duration alpha) {
  ClusterSpec c;
  c.workers = workers;
  c.bandwidth_bytes_per_sec = bytes_per_sec;
  c.latency_per_message = alpha;
  c.architecture = Architecture::RingAllreduce;
  return c;
}

ClusterSpec ps(int workers, std::int64_t bytes_per_sec, Duration alpha) {
  ClusterSpec c = ring(workers, bytes_per_sec, alpha);
  c.architecture = Architecture::ParameterServer;
  c.ps_servers = 2;
  return c;
}

constexpr std::int64_t k100Gbps = 12'500'000'000;
constexpr std::int64_t k10Gbps = 1'250'000'000;
constexpr std::int64_t kMB = kBytesPerMegabyte;

TEST(RingAllreduce, SingleWorkerIsFree) {
  EXPECT_EQ(comm_time_allreduce(0, ring(1, k100Gbps, microseconds(10))), Duration(0));
  EXPECT_EQ(comm_time_allreduce(400 * kMB, ring(1, k100Gbps, microseconds(10))), Duration(0));
}

TEST(RingAllreduce, ZeroPayloadPaysOnlyLatency) {
  EXPECT_EQ(comm_time_allreduce(0, ring(4, k100Gbps, microseconds(10))), microseconds(60));
}

TEST(RingAllreduce, FourWorkers400MB) {
  // 2*3*5us + 2*(3/4)*400e6/12.5e9 s, evaluated with exact rationals
  EXPECT_EQ(comm_time_allreduce(400 * kMB, ring(4, k100Gbps, microseconds(5))),
            Duration(48'030'000));
}

TEST(RingAllreduce, RoundsUpToWholeNanoseconds) {
  // 2*(1/2)*1 byte / 3 B/s = 1/3 s
  EXPECT_EQ(comm_time_allreduce(1, ring(2, 3, Duration(0))), Duration(333'333'334));
}

TEST(RingAllreduce, WrongArchitectureIsConfigError) {
  EXPECT_THROW(comm_time_allreduce(1, ps(4, k100Gbps, Duration(0))), ConfigError);
  EXPECT_THROW(comm_time_ps(1, ring(4, k100Gbps, Duration(0))), ConfigError);
}

TEST(ParameterServer, ZeroPayload) {
  EXPECT_EQ(comm_time_ps(0, ps(4, k100Gbps, microseconds(10))), microseconds(20));
}

TEST(ParameterServer, PushPull125MBOn10G) {
  EXPECT_EQ(comm_time_ps(125 * kMB, ps(4, k10Gbps, Duration(0))), milliseconds(200));
}

TEST(ParameterServer, IndependentOfWorkerCount) {
  EXPECT_EQ(comm_time_ps(125 * kMB, ps(2, k10Gbps, microseconds(3))),
            comm_time_ps(125 * kMB, ps(16, k10Gbps, microseconds(3))));
}

TEST(ParameterServer, Fused400MB) {
  SyncRequest r{"j", 1, FusedGradient{"j", 1, 400 * kMB, 1}};
  EXPECT_EQ(comm_time(r, ps(4, k100Gbps, microseconds(5))), Duration(64'010'000));
}

TEST(CommTime, UnfusedPaysOneLatencySetPerExtraMessage) {
  const auto c = ring(4, k100Gbps, microseconds(5));
  const std::vector<FusedGradient> unfused{{"j", 1, 100 * kMB, 1}, {"j", 1, 300 * kMB, 1}};
  const std::vector<FusedGradient> fused{{"j", 1, 400 * kMB, 1}};
  EXPECT_EQ(comm_time(unfused, c) - comm_time(fused, c), 2 * 3 * microseconds(5));
  EXPECT_EQ(comm_time(fused, c), comm_time_allreduce(400 * kMB, c));
}

TEST(CommTime, LatencyFreeFusionIsNeutral) {
  const auto c = ring(4, k100Gbps, Duration(0));
  const std::vector<FusedGradient> unfused{{"j", 1, 100 * kMB, 1}, {"j", 1, 300 * kMB, 1}};
  EXPECT_EQ(comm_time(unfused, c), comm_time_allreduce(400 * kMB, c));
}

TEST(CommCompRatio, ExactRational) {
  JobProfile j;
  j.job_id = "j";
  j.forward_time = milliseconds(1);
  j.backward_time = milliseconds(1);
  j.tensors = {{"g", 1'000'000}};
  // W=2, zero latency, 1e9 B/s: 1e6 bytes take 1 ms.
  auto c = ring(2, 1'000'000'000, Duration(0));
  EXPECT_EQ(comm_comp_ratio(j, c), Ratio(1, 2));
  j.forward_time = Duration(500'000);
  j.backward_time = Duration(500'000);
  EXPECT_EQ(comm_comp_ratio(j, c), Ratio(1, 1));
  j.forward_time = j.backward_time = Duration(0);
  EXPECT_THROW(comm_comp_ratio(j, c), DomainError);
}

TEST(CommCompRatio, Resnet50On100GbpsSixteenWorkers) {
  const auto p = *bundled_profile("resnet50");
  const auto c = ring(16, k100Gbps, microseconds(50));
  const auto r = comm_comp_ratio(p, c);
  // Golden: 16'834'220 ns / 156 ms, from exact rational evaluation.
  EXPECT_EQ(sync_time(p, c), Duration(16'834'220));
  EXPECT_EQ(r, Ratio(16'834'220, 156'000'000));
  EXPECT_GT(r.to_double(), 0.0);
  EXPECT_LT(r.to_double(), 1.0);
}

TEST(ClusterSpec, Invariants) {
  EXPECT_TRUE(ring(4, k100Gbps, Duration(0)).violations().empty());
  EXPECT_EQ(ring(0, k100Gbps, Duration(0)).violations().size(), 1u);
  EXPECT_EQ(ring(4, 0, Duration(0)).violations().size(), 1u);
  EXPECT_EQ(ring(4, 1, Duration(-1)).violations().size(), 1u);
  auto c = ps(4, k100Gbps, Duration(0));
  c.ps_servers = 0;
  EXPECT_EQ(c.violations().size(), 1u);
}

// Randomized: monotone in size and latency, antitone in bandwidth; fusion
// never costs more and the gap is exactly (count-1) latency terms.
TEST(CommProperty, MonotonicityAndFusionDominance) {
  std::mt19937_64 rng(7);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  for (int trial = 0; trial < 2000; ++trial) {
    const bool use_ring = trial % 2 == 0;
    auto c = use_ring ? ring(static_cast<int>(pick(1, 32)), pick(1, k100Gbps), Duration(pick(0, 100'000)))
                      : ps(static_cast<int>(pick(1, 32)), pick(1, k100Gbps), Duration(pick(0, 100'000)));
    const std::int64_t s = pick(0, 1'000'000'000);
    const std::int64_t ds = pick(0, 1'000'000);
    EXPECT_LE(comm_time(s, c), comm_time(s + ds, c));
    auto slower = c;
    slower.bandwidth_bytes_per_sec = std::max<std::int64_t>(1, c.bandwidth_bytes_per_sec / 2);
    EXPECT_LE(comm_time(s, c), comm_time(s, slower));
    auto laggy = c;
    laggy.latency_per_message += Duration(pick(0, 1000));
    EXPECT_LE(comm_time(s, c), comm_time(s, laggy));
    EXPECT_EQ(comm_time(s, c), comm_time(s, c));

    std::vector<FusedGradient> parts;
    std::int64_t total = 0;
    const int count = static_cast<int>(pick(1, 20));
    for (int k = 0; k < count; ++k) {
      parts.push_back({"j", 1, pick(0, 50'000'000), 1});
      total += parts.back().size_bytes;
    }
    const Duration fused = comm_time(total, c);
    const Duration unfused = comm_time(parts, c);
    EXPECT_LE(fused, unfused);
    const Duration lat = use_ring && c.workers == 1 ? Duration(0) : latency_term(c);
    EXPECT_EQ(unfused - fused, (count - 1) * lat);
    if (count > 1 && lat.count() > 0) {
      EXPECT_LT(fused, unfused);
    }
  }
}

}  // namespace
}  // namespace crossover
