#include "qchab/scan.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "qchab/modular_symbols.hpp"

namespace qchab::scan {

namespace {

std::string summarize_factors(const decomp::Decomposition& d) {
    std::string s;
    for (const decomp::IsogenyFactor& f : d.factors) {
        if (!s.empty()) s += " + ";
        s += std::to_string(f.degree);
        if (f.field_class.kind == poly::FieldClass::Kind::CM) s += "cm";
        if (f.multiplicity > 1) s += "^" + std::to_string(f.multiplicity);
    }
    return s;
}

std::string read_whole_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open rank source file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw UsageError("cannot read rank source file: " + path);
    return buf.str();
}

}  // namespace

ScanResult run_scan(const Options& opt) {
    if (opt.from < 1 || opt.to < opt.from)
        throw UsageError("scan range must satisfy 1 <= from <= to");
    if (opt.jobs < 1) throw UsageError("--jobs must be at least 1");

    std::map<long, crit::RankInput> ranks;
    if (!opt.rank_source_path.empty())
        ranks = io::parse_rank_source(read_whole_file(opt.rank_source_path));

    ScanResult result;
    std::mutex mu;  // guards result.rows, result.warnings, first_error
    std::exception_ptr first_error;
    std::atomic<long> next{opt.from};
    std::atomic<bool> stop{false};

    auto worker = [&]() {
        for (;;) {
            if (stop.load(std::memory_order_relaxed)) return;
            const long level = next.fetch_add(1);
            if (level > opt.to) return;
            try {
                if (ms::genus_formula(level).genus < 2) continue;
                auto warn = [&](const std::string& msg) {
                    std::lock_guard<std::mutex> lock(mu);
                    result.warnings.push_back(msg);
                };
                decomp::Decomposition d =
                    io::cached_jacobian_factors(level, opt.cache_dir, warn);

                ScanRow row;
                row.level = level;
                row.genus = d.genus;
                row.factor_summary = summarize_factors(d);
                const crit::Bounds b = crit::bounds(d);
                row.ns_lower_bound = b.ns_lower_bound;
                row.classical_bound = b.classical_bound;
                row.quadratic_bound = b.quadratic_bound;
                if (auto it = ranks.find(level); it != ranks.end()) {
                    row.has_rank = true;
                    row.rank = it->second;
                    const crit::CriterionReport rep = crit::evaluate(d, it->second);
                    row.classical_verdict = rep.classical_verdict;
                    row.quadratic_verdict = rep.quadratic_verdict;
                }
                std::lock_guard<std::mutex> lock(mu);
                result.rows.push_back(std::move(row));
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    const long span = opt.to - opt.from + 1;
    const int jobs = static_cast<int>(std::min<long>(opt.jobs, span));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::sort(result.rows.begin(), result.rows.end(),
              [](const ScanRow& a, const ScanRow& b) { return a.level < b.level; });
    std::sort(result.warnings.begin(), result.warnings.end());

    long rows3 = 0;
    for (const ScanRow& row : result.rows) {
        if (row.genus < 3) continue;
        ++rows3;
        QCHAB_CHECK(row.ns_lower_bound >= 2,
                    "NS rank lower bound below 2 at genus >= 3, level " +
                        std::to_string(row.level));
        QCHAB_CHECK(row.quadratic_bound >= row.genus + 1,
                    "quadratic bound below genus + 1 at genus >= 3, level " +
                        std::to_string(row.level));
    }
    std::ostringstream summary;
    summary << "levels " << opt.from << ".." << opt.to << ": " << result.rows.size()
            << " of genus >= 2; " << rows3
            << " of genus >= 3, each with NS rank lower bound >= 2 and quadratic bound >= "
               "genus + 1";
    result.summary = summary.str();
    return result;
}

std::string format_scan_text(const ScanResult& r) {
    std::ostringstream out;
    out << std::left << std::setw(7) << "level" << std::right << std::setw(6) << "genus"
        << std::setw(6) << "rNS" << std::setw(5) << "B1" << std::setw(5) << "B2" << "  "
        << std::left << std::setw(16) << "rank" << std::setw(10) << "classical"
        << std::setw(10) << "quadratic" << "factors" << "\n";
    out << std::string(88, '-') << "\n";
    for (const ScanRow& row : r.rows) {
        std::string rank_col = "-";
        std::string classical_col = "-";
        std::string quadratic_col = "-";
        if (row.has_rank) {
            rank_col = row.rank.kind == crit::RankInput::Kind::Exact
                           ? std::to_string(row.rank.lo)
                           : "[" + std::to_string(row.rank.lo) + ", " +
                                 std::to_string(row.rank.hi) + "]";
            classical_col = crit::to_string(row.classical_verdict);
            quadratic_col = crit::to_string(row.quadratic_verdict);
        }
        out << std::left << std::setw(7) << row.level << std::right << std::setw(6)
            << row.genus << std::setw(6) << row.ns_lower_bound << std::setw(5)
            << row.classical_bound << std::setw(5) << row.quadratic_bound << "  "
            << std::left << std::setw(16) << rank_col << std::setw(10) << classical_col
            << std::setw(10) << quadratic_col << row.factor_summary << "\n";
    }
    out << std::string(88, '-') << "\n";
    out << r.summary << "\n";
    return out.str();
}

}  // namespace qchab::scan
