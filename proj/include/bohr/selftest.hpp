#pragma once

#include <cstdint>
#include <ostream>

namespace bohr {

struct SelftestResult {
  int passed = 0;
  int failed = 0;
};

// Runs the invariant sweep across every module at desk scale, printing
// one "[PASS] name" / "[FAIL] name: detail" line per invariant and a
// summary line. Output bytes depend only on the seed; there are no
// timestamps or machine-specific fields.
SelftestResult run_selftest(std::ostream& out, std::uint64_t seed = 1);

}  // namespace bohr
