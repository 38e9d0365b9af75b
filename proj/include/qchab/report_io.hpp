#pragma once

#include <functional>
#include <map>
#include <string>

#include "qchab/criterion.hpp"

namespace qchab::io {

// Version stamped into every emitted JSON document and cache file name;
// bumping it invalidates caches.
inline constexpr int kSchemaVersion = 1;

enum class Format { Text, Json };

// "text" or "json"; anything else throws UsageError.
Format parse_format(const std::string& s);

struct ParsedFile {
    decomp::Decomposition decomposition;
    crit::RankInput rank;
};

// Parses and fully validates an external decomposition description.  The
// tool's own JSON reports parse back losslessly (unknown keys are ignored).
// Every rejection is a SchemaError naming the offending field path.
ParsedFile parse_decomposition_file(const std::string& bytes);

// Deterministic serialization of a criterion report.  The JSON form doubles
// as a decomposition file; the text form is a fixed-width table containing
// exactly one verdict line per condition.
std::string emit_report(const crit::CriterionReport& r, Format format);

// Rank source for scans: a JSON object mapping decimal levels to rank
// objects ({"exact": r} or {"interval": {"lo": a, "hi": b}}).
std::map<long, crit::RankInput> parse_rank_source(const std::string& bytes);

// Cache layer for computed decompositions: one file per level.
std::string cache_file_name(long level);  // "level-<N>.v<schema_version>.json"
std::string decomposition_to_cache_json(const decomp::Decomposition& d);
// Throws SchemaError if the bytes are not a valid cache entry for this level.
decomp::Decomposition decomposition_from_cache_json(const std::string& bytes,
                                                    long expected_level);

// Computes the decomposition for a level, consulting and maintaining the
// cache directory when one is given (atomic write: temp file + rename).
// A corrupt cache entry is reported through `warn` and recomputed.
decomp::Decomposition cached_jacobian_factors(long level, const std::string& cache_dir,
                                              const std::function<void(const std::string&)>& warn);

}  // namespace qchab::io
