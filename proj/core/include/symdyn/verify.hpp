#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace symdyn {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Invariant suites behind `symdyn verify`: "exact" (combinatorial
/// invariants that must hold on every input), "statistical" (seeded
/// Monte-Carlo bounds) or "all".
std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed);

}  // namespace symdyn
