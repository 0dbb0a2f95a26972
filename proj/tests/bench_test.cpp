#include "clakap/bench.hpp"

#include <gtest/gtest.h>

namespace clakap {
namespace {

class BenchCounts : public ::testing::TestWithParam<const char*> {};

TEST_P(BenchCounts, HundredSessionsPerParty) {
  DeterministicRandom rng(5);
  const BenchReport report = run_bench(Curve::named(GetParam()), 100, rng);
  EXPECT_EQ(report.sessions, 100u);
  EXPECT_EQ(report.agreements, 100u);
  for (const OpCounter& ops : {report.initiator, report.responder}) {
    EXPECT_EQ(ops.scalar_mults, 500u);
    EXPECT_EQ(ops.hash_evals, 200u);
    EXPECT_EQ(ops.point_adds, 300u);
    EXPECT_EQ(ops.scalar_adds, 100u);
  }
  const std::string text = format_report(report);
  EXPECT_NE(text.find("scalar_mults=500"), std::string::npos) << text;
  EXPECT_NE(text.find("point_adds=300"), std::string::npos) << text;
  EXPECT_NE(text.find("note:"), std::string::npos) << text;
}

INSTANTIATE_TEST_SUITE_P(Profiles, BenchCounts, ::testing::Values("toy-17", "p256"));

TEST(Bench, ZeroSessions) {
  DeterministicRandom rng(5);
  const BenchReport report = run_bench(Curve::named("toy-17"), 0, rng);
  EXPECT_EQ(report.sessions, 0u);
  EXPECT_EQ(report.ms_per_agreement, 0.0);
  EXPECT_EQ(report.initiator, OpCounter{});
}

}  // namespace
}  // namespace clakap
