#pragma once

#include <optional>
#include <string>
#include <vector>

#include "machlimit/diagnostics.hpp"
#include "machlimit/run_config.hpp"

namespace machlimit {

struct RunOutcome {
    std::string dir;
    NormReport report;
    int steps = 0;
    // linear-only compressible runs also report the worst per-coefficient
    // deviation from the closed-form propagator
    std::optional<double> linear_max_deviation;
};

/// Execute one run into `out_dir`: config snapshot, per-channel norm CSVs,
/// field snapshots, report.json, manifest.json. Throws on config or solver
/// errors (the CLI maps those to a nonzero exit).
RunOutcome run_experiment(const RunConfig& cfg, const std::string& out_dir);

struct SweepMember {
    double eps = 0.0;
    std::string dir;
    bool ok = false;
    std::string error;
    LimitNorms norms;
};

struct SweepOutcome {
    std::string dir;
    std::vector<SweepMember> members;
    bool all_ok = false;
    bool rate_monotone = false;
    bool critical_monotone = false;
    std::optional<RateFit> fit_rate;
    std::optional<RateFit> fit_critical;
};

/// Mach-number sweep: one shared initial datum, one incompressible
/// reference run, one compressible member per eps, then the rate fit and a
/// markdown report. Member failures flag the report as partial instead of
/// aborting the sweep.
SweepOutcome run_sweep(const RunConfig& cfg, const std::string& out_dir);

struct AnalyzeOutcome {
    bool checksums_ok = false;
    bool reports_match = false;
    std::vector<std::string> messages;
};

/// Rebuild every report in a run or sweep directory from the persisted
/// CSV/config files alone and verify manifest checksums.
AnalyzeOutcome analyze_directory(const std::string& dir);

/// Closed-form solution of the linearized system at time t (complex
/// eigen-decomposition per mode; independent of the stepper's formulas).
CompressibleState linear_analytic_state(const CompressibleState& init, double t);

} // namespace machlimit
