// tentlab: run declarative suites of weighted tent-space checks and emit
// reproducible reports (JSON/CSV) plus plot-ready columnar data.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tentlab/suite.hpp"

namespace {

int read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open '" << path << "'\n";
        return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& seed_str,
            const std::string& ladder_str, int jobs, const std::string& format,
            const std::string& output_dir, bool timing) {
    std::string text;
    if (const int rc = read_file(config_path, text)) return rc;

    tentlab::SuiteConfig cfg;
    try {
        cfg = tentlab::SuiteConfig::from_json_text(text, config_path);
        if (!seed_str.empty()) cfg.seed = std::stoull(seed_str);
        if (!ladder_str.empty()) cfg.ladder = tentlab::parse_ladder(ladder_str);
        if (jobs >= 0) cfg.jobs = jobs;
        if (!format.empty()) {
            cfg.emit_json = format == "json" || format == "both";
            cfg.emit_csv = format == "csv" || format == "both";
        }
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (timing) cfg.timing = true;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const tentlab::SuiteResult result = tentlab::run_suite(cfg);
    for (const tentlab::CheckReport& r : result.reports) {
        std::string line = "[" + tentlab::to_string(r.status) + "] " + r.name;
        if (r.expect_fail)
            line += r.status == tentlab::CheckStatus::Fail ? "  (expected-fail: pass)"
                                                           : "  (expected-fail: VIOLATED)";
        std::cout << line << "\n";
    }
    try {
        for (const std::string& path : tentlab::write_report_files(cfg, result.reports))
            std::cout << "wrote " << path << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return result.exit_code;
}

int cmd_plot(const std::string& report_path, const std::string& output_dir) {
    std::string text;
    if (const int rc = read_file(report_path, text)) return rc;
    try {
        const auto reports = tentlab::parse_report_json(text);
        const auto written = tentlab::emit_plot_data(reports, output_dir);
        for (const std::string& path : written) std::cout << "wrote " << path << "\n";
        if (written.empty()) std::cout << "no traces to plot\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted tent-space check runner"};
    app.require_subcommand(1);

    std::string config_path, seed_str, ladder_str, format, output_dir, report_path;
    std::string plot_output = ".";
    int jobs = -1;
    bool timing = false;

    CLI::App* run = app.add_subcommand("run", "execute a suite from a JSON config");
    run->add_option("config", config_path, "path to the suite config")->required();
    run->add_option("--seed", seed_str, "override the global seed");
    run->add_option("--resolution-ladder", ladder_str,
                    "override the resolution ladder, e.g. 64x8,128x16");
    run->add_option("--jobs", jobs, "number of concurrent checks (0 = hardware width)");
    run->add_option("--format", format, "report formats to write")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    run->add_option("--output", output_dir, "output directory for reports");
    run->add_flag("--timing", timing, "record per-check runtimes (and a timestamp) in the report");

    CLI::App* plot = app.add_subcommand("plot", "emit columnar plot data from a JSON report");
    plot->add_option("report", report_path, "path to a report.json")->required();
    plot->add_option("--output", plot_output, "output directory for .dat files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (run->parsed()) return cmd_run(config_path, seed_str, ladder_str, jobs, format, output_dir, timing);
    return cmd_plot(report_path, plot_output);
}
