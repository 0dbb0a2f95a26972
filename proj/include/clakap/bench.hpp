#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "clakap/ec_group.hpp"
#include "clakap/key_agreement.hpp"
#include "clakap/random.hpp"

namespace clakap {

struct BenchReport {
  std::string profile;
  std::size_t sessions = 0;
  std::size_t agreements = 0;
  OpCounter initiator;
  OpCounter responder;
  double total_ms = 0;
  double ms_per_agreement = 0;
};

// One KGC and two users, then `sessions` honest agreements between them.
// Only the agreements are timed.
BenchReport run_bench(std::shared_ptr<const Curve> curve, std::size_t sessions, RandomSource& rng);

// Multi-line summary including the per-session operation counts.
std::string format_report(const BenchReport& report);

}  // namespace clakap
