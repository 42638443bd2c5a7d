#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mcmccert {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20260815ULL;
    unsigned workers = 1;   // 0 = hardware concurrency
    bool quick = false;     // shrink the longest simulations
};

// Runs the full self-check suite: certified-plan arithmetic against reference
// values, root/argmax solvers against dense referees, and the simulation
// soundness experiments.  Every check is deterministic given the seed.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opt);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace mcmccert
