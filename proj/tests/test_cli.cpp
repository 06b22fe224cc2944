#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "support.hpp"

using testsupport::CliResult;
using testsupport::run_cli;
using testsupport::slurp;

namespace {

const std::string kDataDir = LEVELBAND_TEST_DATA_DIR;

std::string tmp_path(const std::string& name) {
    return "/tmp/levelband_cli_" + std::to_string(::getpid()) + "_" + name;
}

struct TmpFile {
    explicit TmpFile(const std::string& name) : path(tmp_path(name)) {}
    ~TmpFile() { std::remove(path.c_str()); }
    std::string path;
};

} // namespace

TEST_CASE("help output is stable and lists every default") {
    const std::vector<std::pair<std::string, std::string>> pages = {
        {"help_root.txt", ""},
        {"help_verify.txt", "verify"},
        {"help_contour.txt", "contour"},
        {"help_curvature.txt", "curvature"},
        {"help_critical_points.txt", "critical-points"},
    };
    for (const auto& [golden, sub] : pages) {
        std::vector<std::string> args;
        if (!sub.empty()) args.push_back(sub);
        args.push_back("--help");
        const CliResult r = run_cli(args);
        CHECK(r.exit_code == 0);
        const std::string expected = slurp(kDataDir + "/" + golden);
        REQUIRE_MESSAGE(!expected.empty(), "missing golden file ", golden);
        CHECK_MESSAGE(r.out == expected, "stale golden ", golden);
    }
    // Defaults that must be visible in the verify help page.
    const CliResult v = run_cli({"verify", "--help"});
    for (const char* needle : {"256", "16", "4", "1e-08", "1e-09", "json"})
        CHECK_MESSAGE(v.out.find(needle) != std::string::npos, "default ", needle,
                      " not shown in help");
}

TEST_CASE("verify emits a parseable json report") {
    const CliResult r = run_cli({"verify", "--field", "x^2+y^2", "--a", "1", "--b", "4",
                                 "--res", "128"});
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["band"]["a"] == 1.0);
    CHECK(j["band"]["b"] == 4.0);
    CHECK(j["case"] == "main");
    REQUIRE(j["components"].size() == 1);
    CHECK(j["components"][0]["sigma"] == 1);
    CHECK(j["components"][0]["touches_boundary"] == false);
    CHECK(j["rel_error_direct"].get<double>() <= 1e-2);
    CHECK(j["rel_error_coarea"].get<double>() <= 1e-2);
}

TEST_CASE("verify text format renders the verdict lines") {
    const CliResult r = run_cli({"verify", "--field", "gaussian", "--a", "0.3", "--b", "0.7",
                                 "--res", "96", "--format", "text"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("LHS") != std::string::npos);
    CHECK(r.out.find("RHS") != std::string::npos);
    CHECK(r.out.find("sigma=-1") != std::string::npos);
}

TEST_CASE("verify writes the report to --out when asked") {
    TmpFile out("report.json");
    const CliResult r = run_cli({"verify", "--field", "gaussian", "--a", "0.3", "--b", "0.7",
                                 "--res", "96", "--out", out.path});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    const auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j["case"] == "main");
}

TEST_CASE("non-compact bands exit 2 unless a report file is requested") {
    const CliResult bare = run_cli({"verify", "--field", "x", "--a", "0", "--b", "1",
                                    "--res", "64"});
    CHECK(bare.exit_code == 2);
    CHECK(bare.out.empty());
    CHECK(bare.err.find("NonCompactLevel") != std::string::npos);

    TmpFile out("case3.json");
    const CliResult kept = run_cli({"verify", "--field", "x", "--a", "0", "--b", "1",
                                    "--res", "64", "--out", out.path});
    CHECK(kept.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j["case"] == "case3");
    CHECK(j["rhs"].is_null());
}

TEST_CASE("an empty band exits 2 with a diagnostic") {
    const CliResult r = run_cli({"verify", "--field", "paraboloid", "--a", "100", "--b", "101",
                                 "--res", "64"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("BandEmpty") != std::string::npos);
}

TEST_CASE("usage errors exit 1 and name the offending option") {
    const CliResult missing = run_cli({"verify", "--a", "1", "--b", "4"});
    CHECK(missing.exit_code == 1);
    CHECK(missing.err.find("--field") != std::string::npos);

    const CliResult swapped = run_cli({"verify", "--field", "paraboloid", "--a", "4",
                                       "--b", "1"});
    CHECK(swapped.exit_code == 1);
    CHECK(swapped.err.find("--a/--b") != std::string::npos);

    const CliResult coarse = run_cli({"verify", "--field", "paraboloid", "--a", "1",
                                      "--b", "4", "--res", "16"});
    CHECK(coarse.exit_code == 1);
    CHECK(coarse.err.find("--res") != std::string::npos);

    const CliResult window = run_cli({"verify", "--field", "paraboloid", "--a", "1", "--b",
                                      "4", "--window", "0,1,2"});
    CHECK(window.exit_code == 1);
    CHECK(window.err.find("--window") != std::string::npos);

    const CliResult unknown = run_cli({"verify", "--field", "frobnicator", "--a", "1",
                                       "--b", "4"});
    CHECK(unknown.exit_code == 1);
    CHECK(unknown.err.find("--field") != std::string::npos);

    const CliResult syntax = run_cli({"verify", "--field", "x + * y", "--a", "0", "--b", "1"});
    CHECK(syntax.exit_code == 1);
    CHECK(syntax.err.find("offset 4") != std::string::npos);

    const CliResult format = run_cli({"verify", "--field", "paraboloid", "--a", "1", "--b",
                                      "4", "--format", "xml"});
    CHECK(format.exit_code == 1);
}

TEST_CASE("config file supplies options and explicit flags override it") {
    TmpFile cfg("verify.cfg");
    {
        std::ofstream out(cfg.path);
        out << "[verify]\n"
               "field = \"gaussian\"\n"
               "a = 0.3\n"
               "b = 0.7\n"
               "res = 64\n";
    }
    const CliResult from_cfg = run_cli({"--config", cfg.path, "verify"});
    REQUIRE(from_cfg.exit_code == 0);
    const auto j1 = nlohmann::json::parse(from_cfg.out);
    CHECK(j1["band"]["b"] == 0.7);

    const CliResult overridden = run_cli({"--config", cfg.path, "verify", "--b", "0.5"});
    REQUIRE(overridden.exit_code == 0);
    const auto j2 = nlohmann::json::parse(overridden.out);
    CHECK(j2["band"]["b"] == 0.5);
}

TEST_CASE("contour subcommand writes CSV and SVG files") {
    TmpFile csv("contour.csv");
    TmpFile svg("contour.svg");
    const CliResult r = run_cli({"contour", "--field", "gaussian", "--level", "0.5",
                                 "--res", "96", "--csv", csv.path, "--svg", svg.path});
    REQUIRE(r.exit_code == 0);
    const std::string head = slurp(csv.path);
    CHECK(head.rfind("level,component,vertex_index,x,y\n", 0) == 0);
    const std::string picture = slurp(svg.path);
    CHECK(picture.rfind("<svg", 0) == 0);
    CHECK(picture.find("</svg>") != std::string::npos);
}

TEST_CASE("curvature prints the documented frame exactly") {
    const CliResult r = run_cli({"curvature", "--field", "paraboloid", "--at", "1,0"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out == "kappa=1\nT=(0, 1)\nN=(-1, 0)\nd2_T_f=2\ngrad_norm=2\n");

    const CliResult e = run_cli({"curvature", "--field", "ellipse_quadratic:2,1", "--at",
                                 "2,0"});
    REQUIRE(e.exit_code == 0);
    CHECK(e.out.find("kappa=2\n") == 0);

    const CliResult crit = run_cli({"curvature", "--field", "paraboloid", "--at", "0,0"});
    CHECK(crit.exit_code == 2);
}

TEST_CASE("critical-points lists the two_bump extrema") {
    const CliResult r = run_cli({"critical-points", "--field", "two_bump:2"});
    REQUIRE(r.exit_code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
    CHECK(r.out.find("kind=saddle") != std::string::npos);
    CHECK(r.out.find("kind=max") != std::string::npos);

    const CliResult none = run_cli({"critical-points", "--field", "linear"});
    REQUIRE(none.exit_code == 0);
    CHECK(none.out == "no critical points found\n");
}

TEST_CASE("grid files load through the field designator") {
    TmpFile grid("field.grid");
    {
        std::ofstream out(grid.path);
        out << "65 65\n-3 3 -3 3\n";
        for (int j = 0; j < 65; ++j) {
            for (int i = 0; i < 65; ++i) {
                const double x = -3.0 + 6.0 * i / 64.0;
                const double y = -3.0 + 6.0 * j / 64.0;
                out << (x * x + y * y) << (i + 1 < 65 ? ' ' : '\n');
            }
        }
    }
    const CliResult r = run_cli({"verify", "--field", grid.path, "--a", "1", "--b", "4",
                                 "--res", "96"});
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["case"] == "main");
    REQUIRE(j["components"].size() == 1);
    CHECK(j["components"][0]["sigma"] == 1);
}
