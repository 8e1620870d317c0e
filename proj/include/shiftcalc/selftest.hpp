#pragma once

#include <string>

namespace shiftcalc {

struct SelftestReport {
    bool ok = true;
    std::string first_failure; // first failing identity, empty when ok
    std::string text;          // full line-per-check report
};

// Install check: certified-window validation at tiny parameters plus the
// field / linear-algebra smoke suite. `inject_binom_fault` flips one table
// entry so the defect-detection path can be exercised from tests.
SelftestReport selftest(bool inject_binom_fault = false);

} // namespace shiftcalc
