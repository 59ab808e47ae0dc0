#pragma once

#include <string>
#include <vector>

#include "progeny/io.hpp"

namespace gw::acceptance {

// One shipped requirement, checked at its stated tolerance. A criterion
// marked expected_fail is implemented faithfully but known not to hold at
// the stated index/tolerance; it is reported honestly and excluded from the
// default gate only when the caller asks for that.
struct CriterionResult {
    std::string id;
    std::string label;
    bool pass = false;
    bool expected_fail = false;
    std::string detail;
    double elapsed_ms = 0.0;
};

struct Options {
    bool skip_expected_fail = false;
    std::vector<std::string> only; // empty = run everything
};

// The documented closed-form discrepancy comparison: quoted closed forms
// for the n = 2..5 coefficients of b*u/(1-(1-u)^b) against the direct
// expansion. The quoted forms exceed the expansion by exactly n!.
io::Json discrepancy_report();

std::vector<CriterionResult> run_all(const Options& opts = {});

// "[PASS] 1  label  (12.3 ms)  detail"
std::string format_line(const CriterionResult& r);

} // namespace gw::acceptance
