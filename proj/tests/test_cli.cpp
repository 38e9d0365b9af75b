// End-to-end tests of the command-line interface, run in-process with
// captured standard streams.

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qchab/cli.hpp"
#include "qchab/report_io.hpp"

using nlohmann::ordered_json;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("qchab");
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    CliResult r;
    try {
        r.code = qchab::cli::run(static_cast<int>(argv.size()), argv.data());
    } catch (...) {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        throw;
    }
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
  public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("qchab-cli-test-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::filesystem::path file(const std::string& name, const std::string& bytes) const {
        const std::filesystem::path p = path_ / name;
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        out << bytes;
        return p;
    }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

}  // namespace

TEST_CASE("gamma0 reproduces the rank-2 genus-2 example in JSON") {
    CliResult r = run_cli({"gamma0", "--level", "23", "--rank", "2", "--format", "json"});
    REQUIRE(r.code == 0);
    ordered_json j = ordered_json::parse(r.out);
    CHECK(j["source"] == "computed(level 23)");
    CHECK(j["level"] == 23);
    CHECK(j["genus"] == 2);
    CHECK(j["ns_lower_bound"] == 2);
    CHECK(j["classical_bound"] == 2);
    CHECK(j["quadratic_bound"] == 3);
    CHECK(j["rank"]["exact"] == 2);
    CHECK(j["classical_verdict"] == "Fails");
    CHECK(j["quadratic_verdict"] == "Holds");
    REQUIRE(j["factors"].size() == 1);
    CHECK(j["factors"][0]["degree"] == 2);
    CHECK(j["factors"][0]["class"] == "real");
    CHECK(j["factors"][0]["min_poly"] == ordered_json::array({-1, 1, 1}));
}

TEST_CASE("gamma0 defaults to the text format") {
    CliResult r = run_cli({"gamma0", "--level", "23", "--rank", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("quadratic chabauty criterion report") != std::string::npos);
    CHECK(r.out.find("x^2 + x - 1") != std::string::npos);
    CHECK(r.out.find("Holds") != std::string::npos);
    CHECK(r.err.empty());
}

TEST_CASE("gamma0 with a rank interval and with no rank at all") {
    CliResult r = run_cli({"gamma0", "--level", "23", "--rank-range", "1:2",
                           "--format", "json"});
    REQUIRE(r.code == 0);
    ordered_json j = ordered_json::parse(r.out);
    CHECK(j["rank"]["interval"]["lo"] == 1);
    CHECK(j["rank"]["interval"]["hi"] == 2);
    CHECK(j["classical_verdict"] == "Unknown");  // straddles B1 = 2
    CHECK(j["quadratic_verdict"] == "Holds");    // hi = 2 < B2 = 3

    CliResult r2 = run_cli({"gamma0", "--level", "23", "--format", "json"});
    REQUIRE(r2.code == 0);
    ordered_json j2 = ordered_json::parse(r2.out);
    CHECK(!j2.contains("rank"));
    CHECK(j2["classical_verdict"] == "Unknown");
    CHECK(j2["quadratic_verdict"] == "Unknown");
}

TEST_CASE("gamma0 usage errors exit with code 1") {
    // Genus 0: nothing to decompose.
    CliResult r = run_cli({"gamma0", "--level", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("genus 0") != std::string::npos);

    // Mutually exclusive rank inputs.
    CHECK(run_cli({"gamma0", "--level", "23", "--rank", "2", "--rank-range", "0:3"}).code == 1);
    // Malformed rank ranges.
    CHECK(run_cli({"gamma0", "--level", "23", "--rank-range", "5:2"}).code == 1);
    CHECK(run_cli({"gamma0", "--level", "23", "--rank-range", "abc"}).code == 1);
    CHECK(run_cli({"gamma0", "--level", "23", "--rank-range", "3"}).code == 1);
    CHECK(run_cli({"gamma0", "--level", "23", "--rank-range", "1:x"}).code == 1);
    CHECK(run_cli({"gamma0", "--level", "23", "--rank-range", "-1:2"}).code == 1);
    // Validator rejections.
    CHECK(run_cli({"gamma0", "--level", "0"}).code == 1);
    CHECK(run_cli({"gamma0", "--level", "23", "--rank", "-3"}).code == 1);
    CHECK(run_cli({"gamma0", "--level", "23", "--format", "xml"}).code == 1);
    CHECK(run_cli({"gamma0"}).code == 1);  // --level is required
    // Unknown flags and subcommands.
    CHECK(run_cli({"gamma0", "--level", "23", "--bogus"}).code == 1);
    CHECK(run_cli({"frobnicate"}).code == 1);
    CHECK(run_cli({}).code == 1);  // a subcommand is required
}

TEST_CASE("help exits successfully") {
    CliResult r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("gamma0") != std::string::npos);
    CHECK(r.out.find("from-json") != std::string::npos);
    CHECK(r.out.find("scan") != std::string::npos);
}

TEST_CASE("from-json ingests an external decomposition") {
    TempDir dir;
    // A genus-2 curve whose Jacobian factor is a CM quadratic orbit and whose
    // Mordell-Weil rank is 0: the quadratic bound is 2 and the condition holds.
    const auto file = dir.file("cm.json", R"js({
      "curve_label": "X1(13)",
      "factors": [{"degree": 2, "class": "cm"}],
      "rank": {"exact": 0}
    })js");
    CliResult r = run_cli({"from-json", file.string(), "--format", "json"});
    REQUIRE(r.code == 0);
    ordered_json j = ordered_json::parse(r.out);
    CHECK(j["source"] == "ingested(X1(13))");
    CHECK(!j.contains("level"));
    CHECK(j["genus"] == 2);
    CHECK(j["ns_lower_bound"] == 1);
    CHECK(j["quadratic_bound"] == 2);
    CHECK(j["classical_verdict"] == "Holds");
    CHECK(j["quadratic_verdict"] == "Holds");
}

TEST_CASE("from-json round trips the tool's own JSON reports") {
    TempDir dir;
    CliResult first = run_cli({"gamma0", "--level", "37", "--rank", "2",
                               "--format", "json"});
    REQUIRE(first.code == 0);
    const auto file = dir.file("report.json", first.out);
    CliResult second = run_cli({"from-json", file.string(), "--format", "json"});
    REQUIRE(second.code == 0);
    ordered_json a = ordered_json::parse(first.out);
    ordered_json b = ordered_json::parse(second.out);
    // Source flips from computed to ingested; the mathematical content is
    // unchanged.
    CHECK(b["source"] == "ingested(X0(37))");
    CHECK(a["factors"] == b["factors"]);
    CHECK(a["genus"] == b["genus"]);
    CHECK(a["ns_lower_bound"] == b["ns_lower_bound"]);
    CHECK(a["classical_bound"] == b["classical_bound"]);
    CHECK(a["quadratic_bound"] == b["quadratic_bound"]);
    CHECK(a["rank"] == b["rank"]);
    CHECK(a["classical_verdict"] == b["classical_verdict"]);
    CHECK(a["quadratic_verdict"] == b["quadratic_verdict"]);
}

TEST_CASE("from-json rejects bad inputs with exit code 1") {
    TempDir dir;
    const auto bad = dir.file("bad.json", R"({"curve_label": "C", "factors": [
        {"degree": 3, "class": "cm"}]})");
    CliResult r = run_cli({"from-json", bad.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("even degree") != std::string::npos);

    const auto garbled = dir.file("garbled.json", "{{{");
    CHECK(run_cli({"from-json", garbled.string()}).code == 1);

    // Nonexistent path is caught by the option validator.
    CHECK(run_cli({"from-json", (dir.path() / "missing.json").string()}).code == 1);
    // Missing positional.
    CHECK(run_cli({"from-json"}).code == 1);
}

TEST_CASE("scan prints one row per level of genus at least 2") {
    TempDir dir;
    const auto ranks = dir.file("ranks.json", R"({"22": {"exact": 1}, "23": {"exact": 2}})");
    CliResult r = run_cli({"scan", "--from", "20", "--to", "30",
                           "--rank-source", ranks.string()});
    REQUIRE(r.code == 0);
    // Genus >= 2 levels in [20, 30]: 22, 23, 26, 28, 29, 30.
    std::vector<std::string> rows;
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line.find_first_of("0123456789") == 0) rows.push_back(line);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].substr(0, 2) == "22");
    CHECK(rows[0].find("1^2") != std::string::npos);
    CHECK(rows[0].find("Holds") != std::string::npos);  // rank 1 < B1 = 2
    CHECK(rows[1].substr(0, 2) == "23");
    CHECK(rows[1].find("Fails") != std::string::npos);  // classical at rank 2
    CHECK(rows[1].find("Holds") != std::string::npos);  // quadratic at rank 2
    // Levels without rank data show no verdicts.
    CHECK(rows[2].substr(0, 2) == "26");
    CHECK(rows[2].find("-") != std::string::npos);
    CHECK(rows[2].find("Holds") == std::string::npos);
    // The summary counts match the table.
    CHECK(r.out.find("levels 20..30") != std::string::npos);
    CHECK(r.out.find("6 of genus >= 2") != std::string::npos);
}

TEST_CASE("scan validates its options") {
    CHECK(run_cli({"scan", "--from", "5", "--to", "3"}).code == 1);
    CHECK(run_cli({"scan", "--from", "0", "--to", "3"}).code == 1);
    CHECK(run_cli({"scan", "--from", "1", "--to", "5", "--jobs", "0"}).code == 1);
    CHECK(run_cli({"scan", "--from", "1"}).code == 1);  // --to required
    TempDir dir;
    CHECK(run_cli({"scan", "--from", "1", "--to", "5", "--rank-source",
                   (dir.path() / "none.json").string()})
              .code == 1);
    const auto bad = dir.file("bad.json", R"({"x": {"exact": 1}})");
    CHECK(run_cli({"scan", "--from", "1", "--to", "5", "--rank-source", bad.string()}).code == 1);
}

TEST_CASE("the cache makes gamma0 runs reproducible and survives corruption") {
    TempDir dir;
    const std::string cache = (dir.path() / "cache").string();
    CliResult cold = run_cli({"gamma0", "--level", "39", "--format", "json",
                              "--cache", cache});
    REQUIRE(cold.code == 0);
    const auto entry = std::filesystem::path(cache) / qchab::io::cache_file_name(39);
    CHECK(std::filesystem::exists(entry));

    CliResult warm = run_cli({"gamma0", "--level", "39", "--format", "json",
                              "--cache", cache});
    REQUIRE(warm.code == 0);
    CHECK(warm.out == cold.out);
    CHECK(warm.err.empty());

    {
        std::ofstream out(entry, std::ios::binary | std::ios::trunc);
        out << "corrupt";
    }
    CliResult repaired = run_cli({"gamma0", "--level", "39", "--format", "json",
                                  "--cache", cache});
    REQUIRE(repaired.code == 0);
    CHECK(repaired.out == cold.out);
    CHECK(repaired.err.find("warning:") != std::string::npos);

    // The corrupted entry was rewritten.
    CliResult again = run_cli({"gamma0", "--level", "39", "--format", "json",
                               "--cache", cache});
    CHECK(again.err.empty());
    CHECK(again.out == cold.out);
}

TEST_CASE("scan uses the cache directory too") {
    TempDir dir;
    const std::string cache = (dir.path() / "cache").string();
    CliResult a = run_cli({"scan", "--from", "22", "--to", "26", "--cache", cache});
    REQUIRE(a.code == 0);
    CHECK(std::filesystem::exists(std::filesystem::path(cache) /
                                  qchab::io::cache_file_name(23)));
    CliResult b = run_cli({"scan", "--from", "22", "--to", "26", "--cache", cache});
    CHECK(b.out == a.out);

    // Warm scans agree regardless of worker count.
    CliResult c = run_cli({"scan", "--from", "22", "--to", "26", "--cache", cache,
                           "--jobs", "3"});
    CHECK(c.out == a.out);
}
