#include <gtest/gtest.h>

#include "crossover/config.hpp"

namespace crossover {
namespace {

const std::string kDir = CROSSOVER_SCENARIO_DIR;

std::string minimal(const std::string& cluster_extra = "", const std::string& policy = "crossover") {
  return R"({"name": "t", "iterations": 2,
  "cluster": {"workers": 2, "bandwidth_gbps": 8, "architecture": "ring_allreduce")" +
         cluster_extra + R"(},
  "scheduler": {"policy": ")" + policy + R"("},
  "jobs": [{"job_id": "a", "forward_ms": 1.5, "backward_ms": 0.25, "grad_mb": 2}]})";
}

TEST(LoadConfig, BundledResnetScenario) {
  const auto s = load_config(kDir + "/resnet50_2jobs_100g.json");
  EXPECT_EQ(s.name, "resnet50_2jobs_100g");
  ASSERT_EQ(s.jobs.size(), 2u);
  EXPECT_EQ(s.jobs[0].job_id, "resnet50-a");
  EXPECT_EQ(s.jobs[0].tensors.size(), 161u);
  EXPECT_EQ(s.cluster.workers, 16);
  EXPECT_EQ(s.cluster.bandwidth_bytes_per_sec, 12'500'000'000);
  EXPECT_EQ(s.cluster.latency_per_message, std::chrono::microseconds(50));
  EXPECT_EQ(s.cluster.architecture, Architecture::RingAllreduce);
  EXPECT_EQ(s.policy, SchedulePolicy::Crossover);
  EXPECT_EQ(s.plan().jobs[1].iterations, 1000);
}

TEST(LoadConfig, EveryBundledScenarioIsValid) {
  for (const char* f : {"golden_2jobs.json", "resnet50_2jobs_100g.json", "resnet50_2jobs_ps_100g.json",
                        "resnet50_2jobs_ps_56g.json", "vgg16_2jobs_100g.json",
                        "mixed_resnet50_vgg16_10g.json"}) {
    EXPECT_NO_THROW(load_config(kDir + "/" + f)) << f;
  }
}

TEST(LoadConfig, UnitsNormalizedOnce) {
  const auto s = parse_scenario(minimal(", \"latency_us\": 2.5"));
  EXPECT_EQ(s.jobs[0].forward_time, Duration(1'500'000));
  EXPECT_EQ(s.jobs[0].backward_time, Duration(250'000));
  EXPECT_EQ(s.jobs[0].total_gradient_bytes(), 2'000'000);
  EXPECT_EQ(s.cluster.bandwidth_bytes_per_sec, 1'000'000'000);
  EXPECT_EQ(s.cluster.latency_per_message, Duration(2'500));
}

TEST(LoadConfig, ZeroBandwidthIsValidationError) {
  auto text = minimal();
  text.replace(text.find("\"bandwidth_gbps\": 8"), 19, "\"bandwidth_gbps\": 0");
  try {
    parse_scenario(text);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("bandwidth"), std::string::npos);
  }
}

TEST(LoadConfig, UnknownPolicyListsAllowedValues) {
  try {
    parse_scenario(minimal("", "greedy"));
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("crossover"), std::string::npos);
    EXPECT_NE(msg.find("sequential"), std::string::npos);
  }
}

TEST(LoadConfig, SyntaxErrorReportsLine) {
  try {
    parse_scenario("{\n  \"name\": \"x\",\n  \"cluster\": {,\n}", "bad.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where(), "bad.json:line 3");
  }
}

TEST(LoadConfig, WrongTypeNamesField) {
  auto text = minimal();
  text.replace(text.find("\"forward_ms\": 1.5"), 17, "\"forward_ms\": \"1\"");
  try {
    parse_scenario(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where(), "jobs[0].forward_ms");
  }
}

TEST(LoadConfig, UnknownFieldRejected) {
  auto text = minimal();
  text.replace(text.find("\"forward_ms\""), 12, "\"forward_ns\"");
  EXPECT_THROW(parse_scenario(text), ValidationError);
}

TEST(LoadConfig, OverflowRejected) {
  auto text = minimal();
  text.replace(text.find("\"grad_mb\": 2"), 12, "\"grad_mb\": 1e20");
  EXPECT_THROW(parse_scenario(text), ValidationError);
}

TEST(LoadConfig, UnknownProfileAndArchitecture) {
  auto text = minimal();
  text.replace(text.find("{\"job_id\""), 1, "{\"profile\": \"alexnet\", ");
  EXPECT_THROW(parse_scenario(text), ValidationError);
  auto arch = minimal();
  arch.replace(arch.find("ring_allreduce"), 14, "tree");
  EXPECT_THROW(parse_scenario(arch), ValidationError);
}

TEST(LoadConfig, MissingFile) { EXPECT_THROW(load_config(kDir + "/nope.json"), ParseError); }

TEST(LoadConfig, IterationsRequired) {
  auto text = minimal();
  text.replace(text.find("\"iterations\": 2,"), 16, "");
  EXPECT_THROW(parse_scenario(text), ValidationError);
}

TEST(LoadConfig, ExplicitTensorList) {
  const auto s = parse_scenario(R"({"name": "t", "iterations": 1,
    "cluster": {"workers": 1, "bandwidth_gbps": 1, "architecture": "parameter_server"},
    "jobs": [{"job_id": "a", "forward_ms": 1, "backward_ms": 1,
              "tensors": [{"name": "w", "size_mb": 1}, {"name": "b", "size_mb": 0.5}]}]})");
  ASSERT_EQ(s.jobs[0].tensors.size(), 2u);
  EXPECT_EQ(s.jobs[0].tensors[1].size_bytes, 500'000);
  EXPECT_EQ(s.cluster.ps_servers, 1);
}

}  // namespace
}  // namespace crossover
