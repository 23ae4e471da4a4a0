// Acceptance gate: runs every criterion of the suite at its pinned tolerance
// and prints one pass/fail line per criterion.  Exit code 0 iff all pass.

#include <cstdio>
#include <iostream>

#include "tslab/report.hpp"

int main() {
    tslab::Config cfg;  // defaults: pinned profiles and seed per criterion
    tslab::SuiteResult res = tslab::run_suite("acceptance", cfg);
    for (const auto& row : res.rows) {
        std::printf("%s %-28s %8.0f ms  %s\n", row.ok ? "[PASS]" : "[FAIL]", row.id.c_str(), row.wall_ms,
                    row.note.c_str());
        for (const auto& [k, v] : row.values) std::printf("        %s = %s\n", k.c_str(), v.c_str());
    }
    std::printf("%s\n", res.all_ok ? "ACCEPTANCE: ALL PASS" : "ACCEPTANCE: FAILURES PRESENT");
    return res.all_ok ? 0 : 1;
}
