#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scoredecomp/recalib.hpp"
#include "scoredecomp/synthgen.hpp"

// Resampling-based uncertainty for the decomposition pipeline: bootstrap in
// two modes, repeated-split robustness tables, one-sided Wilcoxon signed-rank
// tests with Holm correction, and win-rates.

namespace scoredecomp {

/// Disjoint train/calibration/test index sets from a seeded permutation.
struct SplitIndices {
    std::vector<std::size_t> train, calib, test;
};

SplitIndices split_data(std::size_t n, const std::array<double, 3>& fractions,
                        std::uint64_t seed);

/// The full train -> calibrate -> test composition on synthetic data.
struct PipelineSpec {
    DGPConfig dgp;  // n is the TOTAL sample size; split by `fractions`
    std::vector<std::string> methods = {"s1", "s12", "average", "stacking"};
    CalibratorMethod calibrator = CalibratorMethod::Isotonic;
    CalibratorConfig calibrator_config;
    std::array<double, 3> fractions = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

/// Metric columns produced per method, in order: brier_raw, brier_recal,
/// logloss_raw, logloss_recal, rel_brier, rel_log, lcs.
const std::vector<std::string>& pipeline_metric_names();

/// One full pipeline run at the given seed; map method -> metric row.
std::map<std::string, std::vector<double>> run_pipeline_metrics(const PipelineSpec& spec,
                                                                std::uint64_t seed);

enum class BootstrapMode { CalibrationOnly, EndToEnd };

struct BootstrapCell {
    double mean = 0.0;
    double sd = 0.0;
    double lo = 0.0;  // 2.5% percentile
    double hi = 0.0;  // 97.5% percentile
};

struct BootstrapResult {
    std::string mode;
    int replicates = 0;
    int dropped = 0;  // degenerate single-class resamples
    std::uint64_t seed = 0;
    std::map<std::string, std::map<std::string, BootstrapCell>> cells;  // method -> metric

    std::string to_json() const;
};

/// CalibrationOnly resamples the calibration split with the base models
/// held fixed; EndToEnd resamples train and calibration and refits
/// everything. Metrics are evaluated on the untouched test split.
BootstrapResult bootstrap_pipeline(const PipelineSpec& spec, BootstrapMode mode, int replicates,
                                   std::uint64_t seed);

/// R rows of named metrics per method; row r of every method uses the same
/// seed, which is what makes paired comparisons valid.
struct ReplicateTable {
    std::vector<std::string> metrics;
    struct MethodRows {
        std::string method;
        std::vector<std::uint64_t> seeds;
        std::vector<std::vector<double>> rows;
    };
    std::vector<MethodRows> methods;

    std::string to_csv() const;
};

struct SummaryCell {
    double mean = 0.0;
    double sd = 0.0;
    bool sd_defined = true;  // false when R == 1
};

using TableSummary = std::map<std::string, std::map<std::string, SummaryCell>>;

/// Row r uses seed base_seed + r, rerunning the whole pipeline.
ReplicateTable repeated_splits(const PipelineSpec& spec, int replicates,
                               std::uint64_t base_seed);

TableSummary summarize(const ReplicateTable& table);

std::string summary_to_json(const TableSummary& summary);

struct WilcoxonResult {
    double p = 1.0;
    double w_plus = 0.0;  // signed-rank statistic of positive deltas
    int effective_n = 0;  // after dropping zeros
    bool exact = false;   // exact enumeration (n <= 20) vs normal approximation
    bool all_zero = false;
};

/// One-sided signed-rank test of H1: deltas < 0. Zeros dropped, ties
/// midranked; exact p by enumerating all 2^n sign patterns when the
/// effective n is at most 20, normal approximation with continuity
/// correction beyond.
WilcoxonResult wilcoxon_one_sided(const std::vector<double>& deltas);

/// Holm step-down adjustment, returned in the original order.
std::vector<double> holm_correct(const std::vector<double>& pvals);

/// Fraction of strictly negative deltas.
double win_rate(const std::vector<double>& deltas);

struct ComparisonRow {
    std::string method;
    std::string metric;
    double delta_mean = 0.0;
    double delta_sd = 0.0;
    double win = 0.0;
    double p_raw = 1.0;
    double p_holm = 1.0;
    bool exact = false;
};

/// Split-wise deltas (method - reference) per metric; Holm applied across
/// methods within each metric. Refuses tables whose per-row seeds differ
/// between methods.
std::vector<ComparisonRow> paired_comparison(const ReplicateTable& table,
                                             const std::string& reference,
                                             const std::vector<std::string>& metrics);

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows);

}  // namespace scoredecomp
