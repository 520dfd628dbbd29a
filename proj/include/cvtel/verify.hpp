// Named invariant checklist shared by the `verify` CLI command and the
// acceptance suite's release gate.
#pragma once

#include <string>
#include <vector>

namespace cvtel::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct Config {
    bool fast = true;       // fast: headline identities + module invariants
    int n_small = 8;        // truncation used by the cheap checks
    bool inject_fault = false;  // test hook: perturb one check input
};

/// Runs the checklist; every entry carries its own pass/fail verdict.
std::vector<CheckResult> run_verification(const Config& cfg);

/// True iff every check passed.
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace cvtel::verify
