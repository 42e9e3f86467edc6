#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace modspec {

struct CriterionResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
  double seconds;  // wall time; never part of the formatted line
};

/// One line, "[PASS] 3 perturbation: ...". Contains no timing, so repeated runs
/// print identical text.
std::string format_result(const CriterionResult& r);

// Invariant sweeps, numbered as in the README. Every instance is drawn from a
// SplitMix64 stream derived from `seed`.
CriterionResult verify_module_invariants(std::uint64_t seed);       // 0
CriterionResult verify_diagonalization(std::uint64_t seed);         // 1
CriterionResult verify_uniqueness(std::uint64_t seed);              // 2
CriterionResult verify_perturbation(std::uint64_t seed);            // 3
CriterionResult verify_minimax(std::uint64_t seed);                 // 4
CriterionResult verify_exchange_ordering(std::uint64_t seed);       // 5
CriterionResult verify_weak_diagonalization(std::uint64_t seed);    // 6
CriterionResult verify_harper(std::uint64_t seed);                  // 7

std::vector<CriterionResult> run_verification(std::uint64_t seed);

}  // namespace modspec
