// End-to-end validation: every closed-form reproduction and invariant the
// project promises, each reported as a named pass/fail with measured values
// next to expected ones.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sqpulse {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationOptions {
    bool fast = false;           // skip Monte-Carlo checks
    std::uint64_t seed = 424242;  // seed for the stochastic checks
};

// Runs the full suite in a fixed order; deterministic for a fixed seed.
std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

}  // namespace sqpulse
