#include "qchab/report_io.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "qchab/modular_symbols.hpp"

namespace qchab::io {

namespace {

using json = nlohmann::ordered_json;

// Upper bounds keeping ingested arithmetic far away from overflow.
constexpr long kMaxCount = 1000000000L;       // degrees, multiplicities, ranks
constexpr long kMaxGenus = 1000000000000L;    // genus and degree*multiplicity sums

[[noreturn]] void reject(const std::string& path, const std::string& why) {
    throw SchemaError(path + ": " + why);
}

long require_count(const json& j, const std::string& path, long lo, long hi) {
    if (!j.is_number_integer())
        reject(path, "expected an integer");
    const auto v = j.get<long long>();
    if (v < lo || v > hi)
        reject(path, "expected an integer in [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    return static_cast<long>(v);
}

std::string require_string(const json& j, const std::string& path) {
    if (!j.is_string() || j.get<std::string>().empty())
        reject(path, "expected a nonempty string");
    return j.get<std::string>();
}

// A minimal-polynomial coefficient: a JSON integer, or a decimal string for
// values outside the 64-bit range.
Int coefficient_from_json(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        std::size_t digits_from = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (s.size() == digits_from) reject(path, "expected a decimal integer string");
        for (std::size_t i = digits_from; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') reject(path, "expected a decimal integer string");
        return Int(s, 10);
    }
    reject(path, "expected an integer (or a decimal string for large values)");
}

json coefficient_to_json(const Int& c) {
    static const Int lo(std::numeric_limits<long>::min());
    static const Int hi(std::numeric_limits<long>::max());
    if (c >= lo && c <= hi) return json(static_cast<long long>(c.get_si()));
    return json(c.get_str());
}

crit::RankInput rank_from_json(const json& j, const std::string& path) {
    if (j.is_null()) return crit::RankInput::unknown();
    if (!j.is_object()) reject(path, "expected an object with 'exact' or 'interval'");
    const bool has_exact = j.contains("exact");
    const bool has_interval = j.contains("interval");
    if (has_exact == has_interval)
        reject(path, "expected exactly one of 'exact' or 'interval'");
    if (has_exact) {
        const long r = require_count(j["exact"], path + ".exact", 0, kMaxCount);
        return crit::RankInput::exact(r);
    }
    const json& iv = j["interval"];
    if (!iv.is_object() || !iv.contains("lo") || !iv.contains("hi"))
        reject(path + ".interval", "expected an object with 'lo' and 'hi'");
    const long lo = require_count(iv["lo"], path + ".interval.lo", 0, kMaxCount);
    const long hi = require_count(iv["hi"], path + ".interval.hi", 0, kMaxCount);
    if (lo > hi) reject(path + ".interval", "requires lo <= hi");
    return crit::RankInput::interval(lo, hi);
}

json rank_to_json(const crit::RankInput& r) {
    json j = json::object();
    switch (r.kind) {
        case crit::RankInput::Kind::Exact:
            j["exact"] = r.lo;
            break;
        case crit::RankInput::Kind::Interval:
            j["interval"] = {{"lo", r.lo}, {"hi", r.hi}};
            break;
        case crit::RankInput::Kind::Unknown:
            break;
    }
    return j;
}

json factors_to_json(const decomp::Decomposition& d) {
    json arr = json::array();
    for (const decomp::IsogenyFactor& f : d.factors) {
        json jf = json::object();
        jf["label"] = f.label;
        jf["degree"] = f.degree;
        jf["class"] = f.field_class.kind == poly::FieldClass::Kind::CM ? "cm" : "real";
        jf["multiplicity"] = f.multiplicity;
        if (f.field_poly) {
            json coeffs = json::array();
            for (const Int& c : f.field_poly->coeffs()) coeffs.push_back(coefficient_to_json(c));
            jf["min_poly"] = std::move(coeffs);
        }
        arr.push_back(std::move(jf));
    }
    return arr;
}

decomp::Decomposition decomposition_from_json(const json& root, const std::string& where) {
    if (!root.is_object()) reject(where.empty() ? "document" : where, "expected a JSON object");
    auto at = [&](const std::string& key) { return where.empty() ? key : where + "." + key; };

    decomp::Decomposition d;
    d.source = decomp::Decomposition::Source::Ingested;
    if (!root.contains("curve_label")) reject(at("curve_label"), "required field is missing");
    d.label = require_string(root["curve_label"], at("curve_label"));

    if (!root.contains("factors") || !root["factors"].is_array())
        reject(at("factors"), "required field must be an array");
    long genus_sum = 0;
    const json& factors = root["factors"];
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const std::string path = at("factors[" + std::to_string(i) + "]");
        const json& jf = factors[i];
        if (!jf.is_object()) reject(path, "expected an object");
        decomp::IsogenyFactor f;

        if (!jf.contains("degree")) reject(path + ".degree", "required field is missing");
        f.degree = require_count(jf["degree"], path + ".degree", 1, kMaxCount);

        if (!jf.contains("class")) reject(path + ".class", "required field is missing");
        const std::string cls = require_string(jf["class"], path + ".class");
        if (cls == "real") {
            f.field_class = poly::FieldClass{poly::FieldClass::Kind::TotallyReal, 0};
        } else if (cls == "cm") {
            if (f.degree % 2 != 0) reject(path, "cm class requires an even degree");
            f.field_class =
                poly::FieldClass{poly::FieldClass::Kind::CM, static_cast<int>(f.degree / 2)};
        } else {
            reject(path + ".class", "expected \"real\" or \"cm\"");
        }

        f.multiplicity = jf.contains("multiplicity")
                             ? require_count(jf["multiplicity"], path + ".multiplicity", 1,
                                             kMaxCount)
                             : 1;

        if (jf.contains("label")) f.label = require_string(jf["label"], path + ".label");
        else f.label = d.label + "." + std::to_string(i + 1);

        if (jf.contains("min_poly") && !jf["min_poly"].is_null()) {
            const json& mp = jf["min_poly"];
            if (!mp.is_array() || mp.empty())
                reject(path + ".min_poly", "expected a nonempty coefficient array");
            std::vector<Int> coeffs;
            coeffs.reserve(mp.size());
            for (std::size_t k = 0; k < mp.size(); ++k)
                coeffs.push_back(coefficient_from_json(
                    mp[k], path + ".min_poly[" + std::to_string(k) + "]"));
            f.field_poly = poly::IntPolynomial(std::move(coeffs));
        }

        genus_sum += f.degree * f.multiplicity;
        if (genus_sum > kMaxGenus) reject(at("factors"), "factor dimensions are unreasonably large");
        d.factors.push_back(std::move(f));
    }

    d.genus = root.contains("genus") && !root["genus"].is_null()
                  ? require_count(root["genus"], at("genus"), 0, kMaxGenus)
                  : genus_sum;

    decomp::validate(d, /*ingested=*/true);
    return d;
}

void write_file_atomically(const std::filesystem::path& target, const std::string& bytes) {
    namespace fs = std::filesystem;
    fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << bytes;
        out.flush();
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string describe_source(const decomp::Decomposition& d) {
    if (d.source == decomp::Decomposition::Source::Computed)
        return "computed(level " + std::to_string(d.level) + ")";
    return "ingested(" + d.label + ")";
}

std::string field_class_text(const poly::FieldClass& c) {
    return c.kind == poly::FieldClass::Kind::CM ? "CM" : "totally real";
}

std::string rank_text(const crit::RankInput& r) {
    switch (r.kind) {
        case crit::RankInput::Kind::Exact: return "exact " + std::to_string(r.lo);
        case crit::RankInput::Kind::Interval:
            return "interval [" + std::to_string(r.lo) + ", " + std::to_string(r.hi) + "]";
        case crit::RankInput::Kind::Unknown: return "not provided";
    }
    throw InternalError("unreachable rank kind");
}

std::string emit_text(const crit::CriterionReport& r) {
    std::ostringstream out;
    const decomp::Decomposition& d = r.decomposition;
    auto row = [&](const std::string& key, std::string value) {
        while (!value.empty() && value.back() == ' ') value.pop_back();
        out << "  " << std::left << std::setw(22) << key << value << "\n";
    };
    out << "quadratic chabauty criterion report (schema " << kSchemaVersion << ")\n";
    out << std::string(72, '-') << "\n";
    row("source", describe_source(d));
    row("curve", d.label);
    row("genus", std::to_string(d.genus));
    row("factors", std::to_string(d.factors.size()));
    for (const decomp::IsogenyFactor& f : d.factors) {
        std::ostringstream line;
        line << "degree " << std::left << std::setw(4) << f.degree << "multiplicity "
             << std::left << std::setw(4) << f.multiplicity << std::setw(14)
             << field_class_text(f.field_class);
        if (f.field_poly) line << f.field_poly->to_string();
        row("  " + f.label, line.str());
    }
    row("ns rank lower bound", std::to_string(r.ns_lower_bound));
    row("classical bound", "B1 = " + std::to_string(r.classical_bound) +
                               "   (condition: rank J(Q) < " +
                               std::to_string(r.classical_bound) + ")");
    row("quadratic bound", "B2 = " + std::to_string(r.quadratic_bound) +
                               "   (condition: rank J(Q) < " +
                               std::to_string(r.quadratic_bound) + ")");
    row("rank input", rank_text(r.rank));
    row("classical verdict", crit::to_string(r.classical_verdict));
    row("quadratic verdict", crit::to_string(r.quadratic_verdict));
    row("scope", r.conclusion_scope);
    row("sharpness", r.sharpness_note);
    out << std::string(72, '-') << "\n";
    return out.str();
}

std::string emit_json(const crit::CriterionReport& r) {
    const decomp::Decomposition& d = r.decomposition;
    json j = json::object();
    j["schema_version"] = kSchemaVersion;
    j["source"] = describe_source(d);
    j["curve_label"] = d.label;
    if (d.source == decomp::Decomposition::Source::Computed) j["level"] = d.level;
    j["genus"] = d.genus;
    j["factors"] = factors_to_json(d);
    j["ns_lower_bound"] = r.ns_lower_bound;
    j["classical_bound"] = r.classical_bound;
    j["quadratic_bound"] = r.quadratic_bound;
    if (r.rank.kind != crit::RankInput::Kind::Unknown) j["rank"] = rank_to_json(r.rank);
    j["classical_verdict"] = crit::to_string(r.classical_verdict);
    j["quadratic_verdict"] = crit::to_string(r.quadratic_verdict);
    j["conclusion_scope"] = r.conclusion_scope;
    j["sharpness_note"] = r.sharpness_note;
    return j.dump(2) + "\n";
}

}  // namespace

Format parse_format(const std::string& s) {
    if (s == "text") return Format::Text;
    if (s == "json") return Format::Json;
    throw UsageError("unknown format '" + s + "' (expected text or json)");
}

ParsedFile parse_decomposition_file(const std::string& bytes) {
    json root;
    try {
        root = json::parse(bytes);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    ParsedFile p;
    try {
        p.decomposition = decomposition_from_json(root, "");
    } catch (const MixedSignatureError& e) {
        throw SchemaError(std::string("min_poly classification: ") + e.what());
    }
    p.rank = root.contains("rank") ? rank_from_json(root["rank"], "rank")
                                   : crit::RankInput::unknown();
    return p;
}

std::string emit_report(const crit::CriterionReport& r, Format format) {
    return format == Format::Json ? emit_json(r) : emit_text(r);
}

std::map<long, crit::RankInput> parse_rank_source(const std::string& bytes) {
    json root;
    try {
        root = json::parse(bytes);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("rank source: malformed JSON: ") + e.what());
    }
    if (!root.is_object())
        throw SchemaError("rank source: expected a JSON object mapping levels to ranks");
    std::map<long, crit::RankInput> ranks;
    for (const auto& [key, value] : root.items()) {
        long level = 0;
        try {
            std::size_t used = 0;
            level = std::stol(key, &used);
            if (used != key.size() || level < 1) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw SchemaError("rank source: key '" + key + "' is not a positive level");
        }
        ranks[level] = rank_from_json(value, "rank source['" + key + "']");
        if (ranks[level].kind == crit::RankInput::Kind::Unknown)
            throw SchemaError("rank source['" + key + "']: null rank entries are not allowed");
    }
    return ranks;
}

std::string cache_file_name(long level) {
    return "level-" + std::to_string(level) + ".v" + std::to_string(kSchemaVersion) + ".json";
}

std::string decomposition_to_cache_json(const decomp::Decomposition& d) {
    QCHAB_CHECK(d.source == decomp::Decomposition::Source::Computed,
                "only computed decompositions are cached");
    json j = json::object();
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "decomposition-cache";
    j["level"] = d.level;
    j["curve_label"] = d.label;
    j["genus"] = d.genus;
    j["factors"] = factors_to_json(d);
    return j.dump(2) + "\n";
}

decomp::Decomposition decomposition_from_cache_json(const std::string& bytes,
                                                    long expected_level) {
    json root;
    try {
        root = json::parse(bytes);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) throw SchemaError("cache entry: expected a JSON object");
    if (!root.contains("schema_version") || !root["schema_version"].is_number_integer() ||
        root["schema_version"].get<long long>() != kSchemaVersion)
        throw SchemaError("cache entry: schema_version mismatch");
    if (!root.contains("kind") || root["kind"] != "decomposition-cache")
        throw SchemaError("cache entry: wrong kind");
    if (!root.contains("level") ||
        require_count(root["level"], "cache entry.level", 1, kMaxCount) != expected_level)
        throw SchemaError("cache entry: level mismatch");

    decomp::Decomposition d;
    try {
        d = decomposition_from_json(root, "cache entry");
    } catch (const MixedSignatureError& e) {
        throw SchemaError(std::string("cache entry min_poly classification: ") + e.what());
    }
    d.source = decomp::Decomposition::Source::Computed;
    d.level = expected_level;
    for (std::size_t i = 0; i < d.factors.size(); ++i)
        if (!d.factors[i].field_poly)
            throw SchemaError("cache entry.factors[" + std::to_string(i) +
                              "].min_poly: mandatory for computed decompositions");
    // A computed decomposition must also satisfy the closed-form genus value.
    if (d.genus != ms::genus_formula(expected_level).genus)
        throw SchemaError("cache entry: genus disagrees with the level");
    return d;
}

decomp::Decomposition cached_jacobian_factors(
    long level, const std::string& cache_dir,
    const std::function<void(const std::string&)>& warn) {
    namespace fs = std::filesystem;
    const bool caching = !cache_dir.empty();
    const fs::path path = caching ? fs::path(cache_dir) / cache_file_name(level) : fs::path();

    if (caching) {
        std::error_code ec;
        if (fs::exists(path, ec)) {
            std::ifstream in(path, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            if (in.bad()) {
                warn("cache file " + path.string() + " is unreadable; recomputing");
            } else {
                try {
                    return decomposition_from_cache_json(buf.str(), level);
                } catch (const SchemaError& e) {
                    warn("cache file " + path.string() + " is invalid (" + e.what() +
                         "); recomputing");
                }
            }
        }
    }

    decomp::Decomposition d = decomp::jacobian_factors(level);
    if (caching) {
        try {
            write_file_atomically(path, decomposition_to_cache_json(d));
        } catch (const std::exception& e) {
            warn("cannot write cache file " + path.string() + " (" + e.what() + ")");
        }
    }
    return d;
}

}  // namespace qchab::io
