#pragma once

// Suite layer: declarative configuration of check runs, parallel execution
// with deterministic report ordering, and reproducible report emission
// (byte-stable JSON, CSV summary, columnar plot data).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tentlab/verify.hpp"

namespace tentlab {

/// Configuration problem (syntax or semantics). The message already carries
/// file/line context where available; callers map it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckInvocation {
    std::string name;             // registered check name
    nlohmann::ordered_json params;  // check-specific parameters (may be empty)
    bool expect_fail = false;     // negative control: as-designed iff it fails
};

/// Parse "64x8,128x16" into resolution rungs.
[[nodiscard]] std::vector<Rung> parse_ladder(const std::string& text);

struct SuiteConfig {
    std::uint64_t seed = 1;
    int dim = 1;
    double half_width = 2.0;
    double t_min = 0.25;
    double t_max = 2.0;
    std::vector<Rung> ladder = {{64, 8}, {128, 16}};
    std::string output_dir = ".";
    bool emit_json = true;
    bool emit_csv = false;
    bool timing = false;
    int jobs = 0;  // 0 = one thread per check up to hardware width
    std::vector<CheckInvocation> checks;

    /// Parse and validate a JSON config. Throws ConfigError with a
    /// line-numbered diagnostic on syntax errors and on invalid check
    /// invocations (unknown name, missing/ill-typed/out-of-range parameters).
    [[nodiscard]] static SuiteConfig from_json_text(const std::string& text,
                                                    const std::string& source_name = "config");

    [[nodiscard]] LadderParams ladder_params() const;
};

struct SuiteResult {
    std::vector<CheckReport> reports;  // one per invocation, in config order
    int exit_code = 0;                 // 0 iff every report is as designed
};

/// Execute all configured checks (concurrently; results in config order).
/// A check that throws at runtime yields a report with status "error" and the
/// suite continues.
[[nodiscard]] SuiteResult run_suite(const SuiteConfig& config);

/// Deterministic JSON report: fixed field order, 17-significant-digit floats,
/// no timestamps unless timing is enabled.
[[nodiscard]] std::string report_json_text(const SuiteConfig& config,
                                           const std::vector<CheckReport>& reports);

/// One-line-per-check CSV summary.
[[nodiscard]] std::string report_csv_text(const std::vector<CheckReport>& reports);

/// Inverse of report_json_text: re-parse a written report. Round-trips to
/// structures equal to the originals (runtime is informational only).
[[nodiscard]] std::vector<CheckReport> parse_report_json(const std::string& text,
                                                         std::uint64_t* seed_out = nullptr);

/// Write the configured report files into config.output_dir; returns the
/// paths written.
std::vector<std::string> write_report_files(const SuiteConfig& config,
                                            const std::vector<CheckReport>& reports);

/// Write whitespace-separated two-column files, one per trace carried by the
/// reports (curve tabulations and decay profiles). Decay-profile rows with
/// nonpositive ratios are dropped so the files stay log-plottable. Returns
/// the paths written; a report with no traces produces no files.
std::vector<std::string> emit_plot_data(const std::vector<CheckReport>& reports,
                                        const std::string& out_dir);

}  // namespace tentlab
