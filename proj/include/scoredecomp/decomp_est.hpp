#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scoredecomp/losses.hpp"

// Empirical estimators of the decomposition terms on binary scored samples,
// calibration metrics (LCS, ICI, Brier, log-loss), reliability diagrams and
// report assembly.

namespace scoredecomp {

/// Aligned arrays of scores and binary outcomes, optionally with the true
/// conditional probability (synthetic oracle) and opaque feature rows.
struct ScoredSample {
    std::vector<double> scores;
    std::vector<int> outcomes;
    std::vector<double> oracle_q;                 // empty when absent
    std::vector<std::vector<double>> features;    // empty when absent

    ScoredSample() = default;
    ScoredSample(std::vector<double> s, std::vector<int> y, std::vector<double> q = {});

    std::size_t size() const { return scores.size(); }
    bool has_oracle() const { return !oracle_q.empty(); }
};

/// A fitted monotone map s -> P(Y=1 | S=s); any callable works so exact
/// population maps can stand in for fitted calibrators.
using CalibrationMap = std::function<double(double)>;

CalibrationMap identity_map();

/// Conditional mean outcome per distinct score value, fitted on the whole
/// sample. Exact on population enumerations; queries between observed
/// scores snap to the nearest one.
CalibrationMap exact_conditional_calibrator(const ScoredSample& sample);

/// Mean divergence d(S_i, C(S_i)).
double reliability_hat(const ProperLoss& loss, const ScoredSample& sample,
                       const CalibrationMap& calibrated);

/// Mean divergence d(C(S_i), q_i); requires the oracle column.
double grouping_hat(const ProperLoss& loss, const ScoredSample& sample,
                    const CalibrationMap& calibrated);

// Overloads over precomputed per-point calibrated values, for cross-fitting
// where the fitted map differs by fold.
double reliability_hat(const ProperLoss& loss, const ScoredSample& sample,
                       const std::vector<double>& calibrated);
double grouping_hat(const ProperLoss& loss, const ScoredSample& sample,
                    const std::vector<double>& calibrated);
double lcs(const ScoredSample& sample, const std::vector<double>& calibrated);
double ici(const ScoredSample& sample, const std::vector<double>& calibrated);

/// Mean generalized entropy of the oracle probabilities.
double irreducible_hat(const ProperLoss& loss, const ScoredSample& sample);

/// Local calibration score: mean squared gap (S_i - g(S_i))^2.
double lcs(const ScoredSample& sample, const CalibrationMap& g);

/// Integrated calibration index: mean absolute gap |S_i - g(S_i)|.
double ici(const ScoredSample& sample, const CalibrationMap& g);

struct MeanScores {
    double brier = 0.0;
    double logloss = 0.0;
    int logloss_clamped = 0;  // points where the probability floor engaged
};

MeanScores mean_scores(const ScoredSample& sample);

struct DiagramBin {
    double mean_score = 0.0;
    double emp_freq = 0.0;
    double mass = 0.0;
};

/// Quantile bins (ties kept in one bin, so masses may be unequal); per-bin
/// mean score and empirical outcome frequency.
std::vector<DiagramBin> reliability_diagram(const ScoredSample& sample, int bins);

std::string diagram_to_csv(const std::vector<DiagramBin>& bins);

struct LossComponents {
    double reliability = 0.0;
    std::optional<double> grouping;
    std::optional<double> irreducible;
    double total = 0.0;
    std::optional<double> residual;  // total minus the available parts
};

struct ReportMetadata {
    std::string calibrator;     // fitted kind, or "exact" for population maps
    std::string fit_protocol;   // e.g. "split", "cross_fit_5", "population"
    std::vector<std::size_t> split_sizes;
    std::uint64_t seed = 0;
    int logloss_clamped = 0;
    std::string log_base = "nats";
};

struct DecompositionReport {
    std::map<std::string, LossComponents> per_loss;  // keyed "brier", "logloss"
    ReportMetadata metadata;

    std::string to_json() const;
};

/// Assembles reliability/grouping/irreducible and totals for the requested
/// losses; grouping, irreducible and residual only when the oracle exists.
DecompositionReport decompose_sample(const ScoredSample& sample, const CalibrationMap& calibrated,
                                     const std::vector<ProperLoss>& losses,
                                     ReportMetadata metadata = {});

DecompositionReport decompose_sample(const ScoredSample& sample,
                                     const std::vector<double>& calibrated,
                                     const std::vector<ProperLoss>& losses,
                                     ReportMetadata metadata = {});

}  // namespace scoredecomp
