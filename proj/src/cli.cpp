#include "qchab/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qchab/modular_symbols.hpp"
#include "qchab/scan.hpp"

namespace qchab::cli {

namespace {

crit::RankInput parse_rank_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw UsageError("--rank-range expects LO:HI (got '" + s + "')");
    long lo = 0, hi = 0;
    try {
        std::size_t used = 0;
        lo = std::stol(s.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(s);
        const std::string rest = s.substr(colon + 1);
        hi = std::stol(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw UsageError("--rank-range expects LO:HI with integer bounds (got '" + s + "')");
    }
    if (lo < 0 || lo > hi)
        throw UsageError("--rank-range expects 0 <= LO <= HI (got '" + s + "')");
    return crit::RankInput::interval(lo, hi);
}

std::string read_whole_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw UsageError("cannot read file: " + path);
    return buf.str();
}

void warn_to_stderr(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

int run_gamma0(long level, const crit::RankInput& rank, io::Format format,
               const std::string& cache_dir) {
    if (ms::genus_formula(level).genus < 1)
        throw UsageError("level " + std::to_string(level) +
                         ": the curve has genus 0, so there is nothing to decompose");
    decomp::Decomposition d = io::cached_jacobian_factors(level, cache_dir, warn_to_stderr);
    std::cout << io::emit_report(crit::evaluate(d, rank), format);
    return 0;
}

int run_from_json(const std::string& path, io::Format format) {
    const io::ParsedFile parsed = io::parse_decomposition_file(read_whole_file(path));
    std::cout << io::emit_report(crit::evaluate(parsed.decomposition, parsed.rank), format);
    return 0;
}

int run_scan_verb(const scan::Options& opt) {
    const scan::ScanResult result = scan::run_scan(opt);
    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << scan::format_scan_text(result);
    return 0;
}

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"exact evaluation of classical and quadratic Chabauty bounds for the "
                 "Jacobians of the modular curves X0(N)"};
    app.require_subcommand(1);

    // gamma0
    auto* gamma0 = app.add_subcommand(
        "gamma0", "decompose the Jacobian of X0(N) and evaluate both bounds");
    long level = 0;
    long rank_exact = -1;
    std::string rank_range, format_name = "text", cache_dir;
    gamma0->add_option("--level", level, "level N of the curve X0(N)")
        ->required()
        ->check(CLI::PositiveNumber);
    auto* rank_opt =
        gamma0->add_option("--rank", rank_exact, "exact Mordell-Weil rank of J0(N)(Q)")
            ->check(CLI::NonNegativeNumber);
    gamma0->add_option("--rank-range", rank_range, "Mordell-Weil rank interval LO:HI")
        ->excludes(rank_opt);
    gamma0->add_option("--format", format_name, "output format (text or json)")
        ->check(CLI::IsMember({"text", "json"}));
    gamma0->add_option("--cache", cache_dir, "directory for cached decompositions");

    // from-json
    auto* from_json = app.add_subcommand(
        "from-json", "evaluate both bounds for an externally supplied decomposition");
    std::string json_path, fj_format_name = "text";
    from_json->add_option("file", json_path, "decomposition description (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    from_json->add_option("--format", fj_format_name, "output format (text or json)")
        ->check(CLI::IsMember({"text", "json"}));

    // scan
    auto* scan_cmd = app.add_subcommand(
        "scan", "decompose and evaluate every level of genus >= 2 in a range");
    scan::Options scan_opt;
    scan_cmd->add_option("--from", scan_opt.from, "first level (inclusive)")
        ->required()
        ->check(CLI::PositiveNumber);
    scan_cmd->add_option("--to", scan_opt.to, "last level (inclusive)")
        ->required()
        ->check(CLI::PositiveNumber);
    scan_cmd->add_option("--rank-source", scan_opt.rank_source_path,
                         "JSON file mapping levels to known ranks");
    scan_cmd->add_option("--jobs", scan_opt.jobs, "number of parallel workers")
        ->check(CLI::PositiveNumber);
    scan_cmd->add_option("--cache", scan_opt.cache_dir,
                         "directory for cached decompositions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the error message
        return code == 0 ? 0 : 1;
    }

    if (gamma0->parsed()) {
        crit::RankInput rank = crit::RankInput::unknown();
        if (!rank_range.empty()) rank = parse_rank_range(rank_range);
        else if (rank_exact >= 0) rank = crit::RankInput::exact(rank_exact);
        return run_gamma0(level, rank, io::parse_format(format_name), cache_dir);
    }
    if (from_json->parsed()) return run_from_json(json_path, io::parse_format(fj_format_name));
    if (scan_cmd->parsed()) return run_scan_verb(scan_opt);
    throw InternalError("no subcommand dispatched");
}

}  // namespace

int run(int argc, const char* const* argv) {
    try {
        return dispatch(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        // Mixed-signature classification of computed data and any other
        // unexpected failure is an engine bug.
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace qchab::cli
