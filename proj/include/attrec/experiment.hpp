#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "attrec/config.hpp"
#include "attrec/forward_operator.hpp"
#include "attrec/resolution.hpp"
#include "attrec/signal.hpp"

namespace attrec {

// Forward simulation over all configured distances.
struct ForwardRun {
    Signal phantom;
    std::vector<double> r;
    std::vector<Signal> clean;
    std::vector<Signal> noisy;
    std::vector<double> wrap_ratios;
    std::vector<double> factor_deviations;
    std::vector<ResolutionReport> reports; // empty when alpha0 = 0
};

ForwardRun run_forward(const ExperimentConfig& cfg);

struct MethodOutcome {
    std::string method; // "tsvd" or "dr<iters>"
    double resolve_rate = 0.0;
    bool resolved = false;       // resolve_rate >= 0.5
    double valley_ratio = 0.0;   // from the first repeat
};

struct BenchmarkRow {
    double separation_s = 0.0;
    double separation_m = 0.0; // scaled by c at the cut-off
    std::vector<MethodOutcome> methods;
};

struct BenchmarkRun {
    double r = 0.0;
    ResolutionReport report;
    std::vector<BenchmarkRow> rows;
    // method -> smallest resolved separation in seconds, NaN when none
    std::vector<std::pair<std::string, double>> smallest_resolved_s;
};

// Two-source separability study. The largest r is the headline run; every
// other configured r is rerun with the same protocol.
struct BenchmarkResult {
    BenchmarkRun headline;
    std::vector<BenchmarkRun> per_r;
};

// Runs the configured separation grid: explicit separations_s when set,
// otherwise separation_factors times the resolution limit at the largest r.
BenchmarkResult run_benchmark(const ExperimentConfig& cfg, std::size_t repeats_override = 0);

// Explicit separation list in seconds. Needs at least 3 entries spanning both
// sides of the headline resolution limit. repeats_override replaces
// cfg.benchmark.repeats when nonzero; repeat k draws noise with seed
// cfg.seed + k and a row counts as resolved when at least half the repeats
// resolve.
BenchmarkResult run_benchmark(const ExperimentConfig& cfg,
                              const std::vector<double>& separations_s,
                              std::size_t repeats_override);

void write_benchmark_csv(const std::filesystem::path& path, const BenchmarkResult& res);
void write_benchmark_json(const std::filesystem::path& path, const BenchmarkResult& res);

// Writes aligned plot data as CSV (time column plus one normalized column per
// series, peak magnitude 1) and a standalone SVG line plot of the same data.
void emit_plot_data(const std::filesystem::path& csv_path,
                    const std::filesystem::path& svg_path,
                    const std::vector<std::pair<std::string, Signal>>& series);

} // namespace attrec
