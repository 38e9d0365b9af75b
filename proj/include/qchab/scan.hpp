#pragma once

#include <string>
#include <vector>

#include "qchab/report_io.hpp"

namespace qchab::scan {

struct Options {
    long from = 1;
    long to = 1;
    std::string rank_source_path;  // empty: no rank data, verdict columns stay empty
    std::string cache_dir;         // empty: caching disabled
    int jobs = 1;
};

struct ScanRow {
    long level = 0;
    long genus = 0;
    std::string factor_summary;  // e.g. "1 + 2 + 2" with "^m" marking multiplicity
    long ns_lower_bound = 0;
    long classical_bound = 0;
    long quadratic_bound = 0;
    bool has_rank = false;
    crit::RankInput rank;
    crit::Verdict classical_verdict = crit::Verdict::Unknown;
    crit::Verdict quadratic_verdict = crit::Verdict::Unknown;
};

struct ScanResult {
    std::vector<ScanRow> rows;       // one per level in range with genus >= 2, ascending
    std::string summary;
    std::vector<std::string> warnings;  // cache problems; never fatal
};

// Scans the inclusive level range, decomposing every level of genus >= 2
// (cache-aware, up to `jobs` levels in parallel) and evaluating both bounds.
// Verifies that every row of genus >= 3 has NS rank lower bound >= 2 (and so
// a quadratic bound of at least genus + 1); a violation is an internal
// inconsistency.  Throws UsageError for an empty range and SchemaError for a
// bad rank source file.
ScanResult run_scan(const Options& opt);

// Fixed-width text table plus the summary line.
std::string format_scan_text(const ScanResult& r);

}  // namespace qchab::scan
