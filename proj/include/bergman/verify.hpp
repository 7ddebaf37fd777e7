#pragma once

#include <string>
#include <vector>

#include "bergman/scenario.hpp"

namespace bergman {

struct Assertion {
    std::string name;
    double value = 0.0;
    double lo = -1e308;  // inclusive bracket
    double hi = 1e308;
    bool pass = false;
    int criterion = 0;  // acceptance criterion number, 0 = module invariant
    std::string note;

    static Assertion in(std::string name, double value, double lo, double hi, int crit = 0,
                        std::string note = "");
    static Assertion le(std::string name, double value, double hi, int crit = 0,
                        std::string note = "");
    static Assertion ge(std::string name, double value, double lo, int crit = 0,
                        std::string note = "");
    static Assertion truth(std::string name, bool ok, int crit = 0, std::string note = "");
};

struct SuiteResult {
    std::string suite;
    std::vector<Assertion> assertions;
    double wall_time_ms = 0.0;

    bool pass() const;
    int fail_count() const;
};

struct VerifyOptions {
    int a_grid_J = 10;  // dyadic depth of the a-grid in operator scans
    int quad_J = 10;    // disk quadrature depth for functionals
    int oracle_N = 64;
};

// Suites: weights geometry kernels thm1 thm2 thm3 thm4 thm5 thm6 cor7.
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const VerifyOptions& opts);

// Acceptance-criterion blocks 1..10 (11, determinism, lives with the runner).
std::vector<Assertion> run_criterion(int k, const VerifyOptions& opts);

// Deterministic machine-readable summary (no timings inside).
ordered_json summary_json(const std::vector<SuiteResult>& results);

}  // namespace bergman
