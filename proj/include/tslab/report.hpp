#pragma once

#include <map>
#include <string>
#include <vector>

#include "tslab/config.hpp"

namespace tslab {

// One experiment row.  Every numeric output carries a provenance tag in its
// value map ("exact", "bound", "measured"); reports append as JSON lines.
struct ReportRow {
    std::string id;
    bool ok = false;
    std::map<std::string, std::string> values;  // ordered for determinism
    std::string note;
    double wall_ms = 0;
};

struct SuiteResult {
    std::string suite;
    std::vector<ReportRow> rows;
    bool all_ok = true;

    // value columns only; used by the determinism criterion
    std::string value_digest() const;
    std::string to_jsonl() const;
    std::string to_table() const;
};

// suite in {"acceptance", "estimates", "games"}
SuiteResult run_suite(const std::string& suite, const Config& cfg);

}  // namespace tslab
