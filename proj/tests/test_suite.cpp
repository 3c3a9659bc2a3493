#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tentlab/suite.hpp"

using namespace tentlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SuiteConfig tiny_suite() {
    SuiteConfig cfg = SuiteConfig::from_json_text(R"({
      "seed": 5,
      "dim": 1,
      "half_width": 2.0,
      "t_min": 0.25,
      "t_max": 1.0,
      "resolution_ladder": "48x6,64x6",
      "checks": [
        { "name": "fubini", "instances": 4, "rs": [2.0] },
        { "name": "double_average", "samples": 100 },
        { "name": "rdf_properties", "triples": 3, "depth": 10 }
      ]
    })");
    return cfg;
}

}  // namespace

TEST_CASE("resolution ladders parse strictly") {
    const auto rungs = parse_ladder("64x8,128x16");
    REQUIRE(rungs.size() == 2);
    CHECK(rungs[0].cells == 64);
    CHECK(rungs[0].levels == 8);
    CHECK(rungs[1].cells == 128);
    CHECK(rungs[1].levels == 16);
    CHECK(parse_ladder("32x4").size() == 1);
    CHECK_THROWS_AS((void)parse_ladder(""), ConfigError);
    CHECK_THROWS_AS((void)parse_ladder("64"), ConfigError);
    CHECK_THROWS_AS((void)parse_ladder("64x"), ConfigError);
    CHECK_THROWS_AS((void)parse_ladder("ax8"), ConfigError);
    CHECK_THROWS_AS((void)parse_ladder("1x8"), ConfigError);
    CHECK_THROWS_AS((void)parse_ladder("64x0"), ConfigError);
    CHECK_THROWS_AS((void)parse_ladder("64x8,"), ConfigError);
}

TEST_CASE("configs parse with defaults and explicit globals") {
    const SuiteConfig min = SuiteConfig::from_json_text(R"({"checks": []})");
    CHECK(min.seed == 1);
    CHECK(min.dim == 1);
    CHECK(min.emit_json);
    CHECK(!min.emit_csv);
    CHECK(min.checks.empty());

    const SuiteConfig cfg = SuiteConfig::from_json_text(R"({
      "seed": 9,
      "dim": 2,
      "half_width": 3.0,
      "t_min": 0.5,
      "t_max": 2.0,
      "resolution_ladder": "32x4,64x8",
      "output_dir": "/tmp/somewhere",
      "format": "both",
      "timing": true,
      "jobs": 2,
      "checks": [ { "name": "fubini" }, { "name": "double_average", "expect": "fail" } ]
    })");
    CHECK(cfg.seed == 9);
    CHECK(cfg.dim == 2);
    CHECK(cfg.half_width == 3.0);
    CHECK(cfg.ladder.size() == 2);
    CHECK(cfg.output_dir == "/tmp/somewhere");
    CHECK(cfg.emit_json);
    CHECK(cfg.emit_csv);
    CHECK(cfg.timing);
    CHECK(cfg.jobs == 2);
    REQUIRE(cfg.checks.size() == 2);
    CHECK(!cfg.checks[0].expect_fail);
    CHECK(cfg.checks[1].expect_fail);

    const LadderParams lp = cfg.ladder_params();
    CHECK(lp.dim == 2);
    CHECK(lp.seed == 9);
    CHECK(lp.ladder.size() == 2);
}

TEST_CASE("syntax errors carry the line number") {
    try {
        (void)SuiteConfig::from_json_text("{\n  \"seed\": oops\n}", "config");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("config:2") != std::string::npos);
    }
}

TEST_CASE("semantic check errors name the element and its line") {
    const std::string text =
        "{\n"
        "  \"seed\": 3,\n"
        "  \"checks\": [\n"
        "    { \"name\": \"fubini\" },\n"
        "    { \"name\": \"bogus_check\" }\n"
        "  ]\n"
        "}\n";
    try {
        (void)SuiteConfig::from_json_text(text, "config");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("config:5: checks[1]") != std::string::npos);
        CHECK(msg.find("unknown check name 'bogus_check'") != std::string::npos);
    }
}

TEST_CASE("global validation rejects out-of-range settings") {
    CHECK_THROWS_WITH_AS((void)SuiteConfig::from_json_text(R"({"sneed": 1})", "config"),
                         doctest::Contains("unknown key 'sneed'"), ConfigError);
    CHECK_THROWS_WITH_AS((void)SuiteConfig::from_json_text(R"({"dim": 3})", "config"),
                         doctest::Contains("'dim' must be 1 or 2"), ConfigError);
    CHECK_THROWS_AS((void)SuiteConfig::from_json_text(R"({"half_width": -1.0})", "config"),
                    ConfigError);
    CHECK_THROWS_WITH_AS(
        (void)SuiteConfig::from_json_text(R"({"t_min": 2.0, "t_max": 1.0})", "config"),
        doctest::Contains("0 < t_min < t_max"), ConfigError);
    CHECK_THROWS_WITH_AS((void)SuiteConfig::from_json_text(R"({"format": "xml"})", "config"),
                         doctest::Contains("'format' must be json, csv, or both"), ConfigError);
    CHECK_THROWS_AS((void)SuiteConfig::from_json_text(R"({"jobs": -1})", "config"), ConfigError);
    CHECK_THROWS_AS((void)SuiteConfig::from_json_text(R"({"seed": -4})", "config"), ConfigError);
    CHECK_THROWS_AS((void)SuiteConfig::from_json_text(R"({"resolution_ladder": "64"})", "config"),
                    ConfigError);
    CHECK_THROWS_AS((void)SuiteConfig::from_json_text(R"(["not an object"])", "config"),
                    ConfigError);
}

TEST_CASE("check validation guards names, parameters, and preconditions") {
    auto cfg_with = [](const std::string& check_json) {
        return std::string(R"({"checks": [)") + check_json + "]}";
    };
    CHECK_THROWS_WITH_AS(
        (void)SuiteConfig::from_json_text(cfg_with(R"({"name": "fubini", "bogus": 1})")),
        doctest::Contains("unknown parameter 'bogus'"), ConfigError);
    CHECK_THROWS_WITH_AS(
        (void)SuiteConfig::from_json_text(cfg_with(R"({"name": "maximal_tent_strong"})")),
        doctest::Contains("missing required parameter 'p'"), ConfigError);
    CHECK_THROWS_WITH_AS(
        (void)SuiteConfig::from_json_text(cfg_with(R"({"name": "fubini", "expect": "pass"})")),
        doctest::Contains("'expect' may only be \"fail\""), ConfigError);
    CHECK_THROWS_WITH_AS(
        (void)SuiteConfig::from_json_text(
            cfg_with(R"({"name": "fractional", "alpha": 0.5, "p": 2.0, "q": 3.0})")),
        doctest::Contains("exponent relation"), ConfigError);
    CHECK_THROWS_WITH_AS(
        (void)SuiteConfig::from_json_text(
            cfg_with(R"({"name": "extrapolation", "operator": "riesz:2.0"})")),
        doctest::Contains("0 < alpha < n"), ConfigError);
    CHECK_THROWS_WITH_AS(
        (void)SuiteConfig::from_json_text(
            cfg_with(R"({"name": "averaged_weight_class", "weight": "nope:1", "p": 2.0})")),
        doctest::Contains("bad weight descriptor"), ConfigError);
    // Dimension-dependent operator validation.
    CHECK_THROWS_WITH_AS(
        (void)SuiteConfig::from_json_text(
            R"({"dim": 2, "checks": [{"name": "extrapolation", "operator": "hilbert"}]})"),
        doctest::Contains("requires dim = 1"), ConfigError);
}

TEST_CASE("an empty suite runs to a clean exit") {
    const SuiteConfig cfg = SuiteConfig::from_json_text(R"({"checks": []})");
    const SuiteResult res = run_suite(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.reports.empty());
    const std::string json = report_json_text(cfg, res.reports);
    const auto back = parse_report_json(json);
    CHECK(back.empty());
    const std::string csv = report_csv_text(res.reports);
    CHECK(csv == "name,status,expect_fail,as_designed,bound,slack\n");
}

TEST_CASE("a small suite passes, keeps config order, and emits stable reports") {
    SuiteConfig cfg = tiny_suite();
    cfg.jobs = 3;
    const SuiteResult res = run_suite(cfg);
    CHECK(res.exit_code == 0);
    REQUIRE(res.reports.size() == 3);
    CHECK(res.reports[0].name == "fubini");
    CHECK(res.reports[1].name == "double_average");
    CHECK(res.reports[2].name == "rdf_properties");
    for (const auto& r : res.reports) CHECK(r.as_designed());

    const std::string once = report_json_text(cfg, res.reports);
    const SuiteResult res2 = run_suite(cfg);
    const std::string twice = report_json_text(cfg, res2.reports);
    CHECK(once == twice);

    std::uint64_t seed = 0;
    const auto back = parse_report_json(once, &seed);
    CHECK(seed == cfg.seed);
    REQUIRE(back.size() == res.reports.size());
    for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == res.reports[i]);

    const std::string csv = report_csv_text(res.reports);
    CHECK(csv.find("fubini,pass,false,true") != std::string::npos);
}

TEST_CASE("negative controls invert the exit logic") {
    SuiteConfig cfg = SuiteConfig::from_json_text(R"({
      "t_max": 1.0,
      "resolution_ladder": "48x5,64x5",
      "checks": [
        { "name": "offdiag_decay", "operator": "identity", "M_claim": 2.0,
          "targets": [ { "p": 2.0, "weight": "const:1" } ], "expect": "fail" }
      ]
    })");
    const SuiteResult res = run_suite(cfg);
    CHECK(res.exit_code == 0);
    REQUIRE(res.reports.size() == 1);
    CHECK(res.reports[0].status == CheckStatus::Fail);
    CHECK(res.reports[0].expect_fail);
    bool noted = false;
    for (const auto& n : res.reports[0].notes) {
        if (n == "expected-fail: pass") noted = true;
    }
    CHECK(noted);

    // The same check without the control marker is a hard failure.
    SuiteConfig cfg2 = SuiteConfig::from_json_text(R"({
      "t_max": 1.0,
      "resolution_ladder": "48x5,64x5",
      "checks": [
        { "name": "offdiag_decay", "operator": "identity", "M_claim": 2.0,
          "targets": [ { "p": 2.0, "weight": "const:1" } ] }
      ]
    })");
    const SuiteResult res2 = run_suite(cfg2);
    CHECK(res2.exit_code == 1);
    CHECK(res2.reports[0].status == CheckStatus::Fail);
    CHECK(!res2.reports[0].as_designed());

    // A passing check marked expect-fail violates the design and fails the run.
    SuiteConfig cfg3 = SuiteConfig::from_json_text(R"({
      "t_max": 1.0,
      "resolution_ladder": "48x5",
      "checks": [ { "name": "fubini", "instances": 2, "expect": "fail" } ]
    })");
    const SuiteResult res3 = run_suite(cfg3);
    CHECK(res3.exit_code == 1);
    CHECK(res3.reports[0].status == CheckStatus::Pass);
    CHECK(!res3.reports[0].as_designed());
}

TEST_CASE("report files land in the configured directory") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tentlab_suite_files_test";
    fs::remove_all(dir);
    SuiteConfig cfg = tiny_suite();
    cfg.checks.resize(1);
    cfg.output_dir = dir.string();
    cfg.emit_csv = true;
    const SuiteResult res = run_suite(cfg);
    const auto paths = write_report_files(cfg, res.reports);
    REQUIRE(paths.size() == 2);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "summary.csv"));
    CHECK(slurp((dir / "report.json").string()) == report_json_text(cfg, res.reports));
    fs::remove_all(dir);
}

TEST_CASE("plot emission tabulates traces and keeps decay files log-safe") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tentlab_plot_test";
    fs::remove_all(dir);

    CheckReport with_psi;
    with_psi.name = "maximal_tent_strong";
    with_psi.traces.push_back(
        Trace{"psi", "weight_constant", "operator_constant",
              {{1.0, 2.0}, {1.5, 2.5}, {2.0, 3.0}, {3.0, 3.5}}});
    CheckReport with_decay;
    with_decay.name = "offdiag_decay";
    with_decay.traces.push_back(
        Trace{"offdiag", "separation_over_t", "ratio", {{0.0, 1.0}, {1.0, 0.0}, {2.0, 0.0}}});

    const auto paths = emit_plot_data({with_psi, with_decay}, dir.string());
    REQUIRE(paths.size() == 2);

    const std::string psi_text = slurp(paths[0]);
    CHECK(psi_text.find("# weight_constant operator_constant") != std::string::npos);
    int psi_rows = 0;
    for (char ch : psi_text) {
        if (ch == '\n') ++psi_rows;
    }
    CHECK(psi_rows == 5);  // header + four points

    const std::string od_text = slurp(paths[1]);
    int od_rows = 0;
    for (char ch : od_text) {
        if (ch == '\n') ++od_rows;
    }
    CHECK(od_rows == 2);  // header + the single positive-ratio point

    CHECK(emit_plot_data({}, dir.string()).empty());
    fs::remove_all(dir);
}

TEST_CASE("non-finite measurements survive the JSON round trip") {
    SuiteConfig cfg = SuiteConfig::from_json_text(R"({"checks": []})");
    CheckReport rep;
    rep.name = "double_average";
    rep.status = CheckStatus::Pass;
    rep.measure("inf_value", kInfinity);
    rep.measure("neg_inf", -kInfinity);
    rep.measure("nan_value", std::nan(""));
    const std::string text = report_json_text(cfg, {rep});
    const auto back = parse_report_json(text);
    REQUIRE(back.size() == 1);
    REQUIRE(back[0].measured.size() == 3);
    CHECK(back[0].measured[0].second == kInfinity);
    CHECK(back[0].measured[1].second == -kInfinity);
    CHECK(back[0].measured[2].second != back[0].measured[2].second);
}
