#pragma once

#include <iosfwd>

namespace vs {

struct SuiteOptions {
  bool quick = false;  // reduced family sizes for development runs
};

// Runs every verification criterion, printing one PASS/FAIL line each.
// Returns the number of failed criteria.
int run_acceptance_suite(std::ostream& os, const SuiteOptions& opt = {});

}  // namespace vs
