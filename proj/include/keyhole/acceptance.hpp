// SPDX-License-Identifier: Apache-2.0
//
// The acceptance battery: one entry per release gate, each checking a
// cross-engine or engine-vs-simulation property at a pinned tolerance.
// Shared between the `self-test` CLI subcommand and the ctest suite.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace keyhole {

enum class AcceptLevel { Fast, Full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured vs required, or the failure description
};

/// Runs the battery, printing one pass/fail line per criterion to `log`.
std::vector<CriterionResult> run_acceptance(AcceptLevel level, std::ostream& log);

}  // namespace keyhole
