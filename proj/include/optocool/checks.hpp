#pragma once

// Oracle-equivalence self-test behind `optocool check`: numeric steady
// states against the closed forms, plus the structural invariants.

#include <string>
#include <vector>

#include "optocool/model.hpp"

namespace optocool {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<CheckResult> run_checks(const PhysicalParams& base);

}  // namespace optocool
