#include <gtest/gtest.h>

#include <numeric>

#include "crossover/workload.hpp"

namespace crossover {
namespace {

JobProfile two_tensor_job() {
  JobProfile j;
  j.job_id = "j";
  j.forward_time = std::chrono::milliseconds(1);
  j.backward_time = std::chrono::milliseconds(2);
  j.tensors = {{"a", 100 * kBytesPerMegabyte}, {"b", 300 * kBytesPerMegabyte}};
  j.iterations = 5;
  return j;
}

TEST(Workload, FuseSumsTensorSizesIntoOneMessage) {
  const auto f = fuse_gradients(two_tensor_job(), 1);
  EXPECT_EQ(f.size_bytes, 400 * kBytesPerMegabyte);
  EXPECT_EQ(f.message_count, 1);
  EXPECT_EQ(f.iteration, 1);
  EXPECT_EQ(f.job_id, "j");
}

TEST(Workload, FuseZeroByteTensor) {
  auto j = two_tensor_job();
  j.tensors = {{"empty", 0}};
  const auto f = fuse_gradients(j, 3);
  EXPECT_EQ(f.size_bytes, 0);
  EXPECT_EQ(f.message_count, 1);
}

TEST(Workload, IterationOutOfRangeIsRangeError) {
  const auto j = two_tensor_job();
  EXPECT_THROW(fuse_gradients(j, 0), RangeError);
  EXPECT_THROW(fuse_gradients(j, 6), RangeError);
  EXPECT_THROW(unfused_messages(j, 0), RangeError);
  EXPECT_NO_THROW(fuse_gradients(j, 5));
}

TEST(Workload, UnfusedIsOneMessagePerTensor) {
  const auto msgs = unfused_messages(two_tensor_job(), 2);
  ASSERT_EQ(msgs.size(), 2u);
  EXPECT_EQ(msgs[0].size_bytes, 100 * kBytesPerMegabyte);
  EXPECT_EQ(msgs[1].size_bytes, 300 * kBytesPerMegabyte);
  for (const auto& m : msgs) EXPECT_EQ(m.message_count, 1);
}

TEST(Workload, SingleTensorUnfusedEqualsFused) {
  auto j = two_tensor_job();
  j.tensors = {{"only", 1234}};
  const auto msgs = unfused_messages(j, 4);
  ASSERT_EQ(msgs.size(), 1u);
  EXPECT_EQ(msgs[0], fuse_gradients(j, 4));
}

TEST(Workload, CompTimeIsForwardPlusBackward) {
  EXPECT_EQ(comp_time(two_tensor_job()), std::chrono::milliseconds(3));
  auto j = two_tensor_job();
  j.forward_time = Duration(0);
  j.backward_time = std::chrono::milliseconds(5);
  EXPECT_EQ(comp_time(j), std::chrono::milliseconds(5));
}

TEST(Workload, ProfileInvariants) {
  EXPECT_TRUE(two_tensor_job().violations().empty());
  auto j = two_tensor_job();
  j.forward_time = Duration(0);
  j.backward_time = Duration(0);
  EXPECT_EQ(j.violations().size(), 1u);
  j = two_tensor_job();
  j.iterations = 0;
  EXPECT_EQ(j.violations().size(), 1u);
  j = two_tensor_job();
  j.tensors.clear();
  EXPECT_EQ(j.violations().size(), 1u);
  j = two_tensor_job();
  j.tensors.push_back({"a", 1});
  EXPECT_EQ(j.violations().size(), 1u);
  j = two_tensor_job();
  j.tensors[0].size_bytes = -1;
  EXPECT_THROW(j.validate(), ValidationError);
}

// Fixture constants: parameter counts of the torchvision models, fp32.
TEST(BundledProfiles, Resnet50) {
  const auto p = bundled_profile("resnet50");
  ASSERT_TRUE(p);
  EXPECT_TRUE(p->violations().empty());
  EXPECT_EQ(p->tensors.size(), 161u);
  EXPECT_EQ(p->total_gradient_bytes(), 25'557'032LL * 4);  // ~97.5 MiB
  EXPECT_NEAR(static_cast<double>(p->total_gradient_bytes()) / (1 << 20), 97.5, 0.05);
  EXPECT_EQ(fuse_gradients(*p, 1).size_bytes, 102'228'128);
  EXPECT_EQ(unfused_messages(*p, 1).size(), 161u);
  EXPECT_EQ(comp_time(*p), Duration(fixtures::kResnet50ForwardNs + fixtures::kResnet50BackwardNs));
  EXPECT_EQ(comp_time(*p), std::chrono::milliseconds(156));
}

TEST(BundledProfiles, Vgg16) {
  const auto p = bundled_profile("vgg16");
  ASSERT_TRUE(p);
  EXPECT_TRUE(p->violations().empty());
  EXPECT_EQ(p->tensors.size(), 32u);
  EXPECT_EQ(p->total_gradient_bytes(), 138'357'544LL * 4);
  EXPECT_EQ(comp_time(*p), std::chrono::milliseconds(246));
  EXPECT_FALSE(bundled_profile("alexnet"));
}

// Conservation and single-message fusion across every bundled profile and
// a spread of iterations.
TEST(WorkloadProperty, FusionConservesBytes) {
  for (const auto& name : bundled_profile_names()) {
    auto p = *bundled_profile(name);
    p.iterations = 7;
    for (int t = 1; t <= p.iterations; ++t) {
      const auto msgs = unfused_messages(p, t);
      const auto total = std::accumulate(msgs.begin(), msgs.end(), std::int64_t{0},
                                         [](std::int64_t s, const FusedGradient& m) { return s + m.size_bytes; });
      const auto fused = fuse_gradients(p, t);
      EXPECT_EQ(total, fused.size_bytes) << name << " t=" << t;
      EXPECT_EQ(fused.message_count, 1);
    }
  }
}

}  // namespace
}  // namespace crossover
