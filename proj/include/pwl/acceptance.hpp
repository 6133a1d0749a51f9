#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pwl {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  /// Threads for the runs whose counts are compared against one thread.
  int workers = 4;
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool all_passed() const;
};

/// Runs criteria 1..12 in order. The report holds no timings, so two runs
/// with equal options print the same bytes.
AcceptanceReport run_acceptance(const AcceptanceOptions& opt = {});

/// Criteria 1..11 only; criterion 12 runs this twice.
AcceptanceReport run_acceptance_core(const AcceptanceOptions& opt);

/// One "PASS|FAIL  id  name: detail" line per criterion and a summary line.
std::string acceptance_text(const AcceptanceReport& r);

/// Exact count of the (4, 4) folding net in two dimensions at seed 0.
inline constexpr std::size_t kFolding2dCount = 55;

}  // namespace pwl
