#pragma once

#include <string>
#include <vector>

namespace npasym {

struct CheckResult {
    std::string name;
    double value = 0.0;  // worst observed defect
    double tol = 0.0;
    bool pass() const { return value <= tol; }
};

// Algebraic identities of the elasticity symbols and the symbol calculus,
// sampled over random materials and covectors (fixed seed).
std::vector<CheckResult> identity_suite(unsigned seed = 20240601, int samples = 50);

}  // namespace npasym
