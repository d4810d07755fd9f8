#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scoredecomp/decomp_est.hpp"
#include "scoredecomp/finite_world.hpp"
#include "scoredecomp/recalib.hpp"

// Synthetic data with known ground truth: Gaussian-copula covariates,
// a closed-form conditional probability surface, misspecified logistic
// base models, ensembles, score quantization, and exact filtration demos.

namespace scoredecomp {

enum class Surface { Main, AppendixSim };

struct DGPConfig {
    double rho = 0.0;
    std::size_t n = 10000;
    std::uint64_t seed = 1;
    Surface surface = Surface::Main;
};

struct SyntheticDataset {
    std::vector<double> x1, x2;
    std::vector<int> y;
    std::vector<double> q;  // true P(Y=1 | X), recomputable from (x1, x2)

    std::size_t size() const { return x1.size(); }
    SyntheticDataset subset(const std::vector<std::size_t>& idx) const;
};

/// (X1, X2) with uniform marginals and Gaussian-copula dependence rho;
/// Z1 = e1, Z2 = rho*e1 + sqrt(1-rho^2)*e2, X_j = Phi(Z_j).
std::pair<std::vector<double>, std::vector<double>> sample_copula(const DGPConfig& config);

/// True conditional probability at (x1, x2), strictly inside (0, 1).
double true_q(double x1, double x2, Surface surface);

SyntheticDataset sample_dataset(const DGPConfig& config);

/// Logistic model over arbitrary feature columns; intercept first.
struct LogisticModel {
    std::vector<double> coef;  // size 1 + #features
    bool converged = true;
    bool separation = false;

    double predict_row(const std::vector<double>& features) const;
    std::vector<double> predict(const std::vector<std::vector<double>>& columns) const;
};

/// Maximum likelihood by IRLS (tolerance 1e-10, 100 iterations); detected
/// separation falls back to a ridge 1e-8 refit and sets the flag.
LogisticModel fit_logistic_columns(const std::vector<std::vector<double>>& columns,
                                   const std::vector<int>& y);

/// Fits on a synthetic dataset using the selected covariates, e.g. {0} for
/// x1-only, {0, 1} for both, {} for intercept-only.
LogisticModel fit_logistic(const SyntheticDataset& data, const std::vector<int>& features);

std::vector<double> predict_logistic(const LogisticModel& model, const SyntheticDataset& data,
                                     const std::vector<int>& features);

std::vector<double> ensemble_average(const std::vector<double>& s1, const std::vector<double>& s2);

/// Meta-logistic model on the pair of base scores, trained on the
/// calibration split.
LogisticModel ensemble_stack(const std::vector<double>& s1_calib,
                             const std::vector<double>& s2_calib,
                             const std::vector<int>& calib_outcomes);

/// Maps each score to the midpoint of its cell in a uniform m-cell grid.
std::vector<double> quantize_score(const std::vector<double>& scores, int levels);

// ---------------------------------------------------------------------------
// Filtration demos on exact finite spaces

struct BoostStage {
    double brier_risk = 0.0;    // E[(Y - eta_t)^2] at this stage
    double brier_gain = 0.0;    // E[(eta_{t+1} - eta_t)^2], 0 at the last stage
    double logloss_gain = 0.0;  // E[KL(Q_{t+1} || Q_t)], 0 at the last stage
    double mutual_info = 0.0;   // H(Y|F_t) - H(Y|F_{t+1}), 0 at the last stage
};

struct BoostingDemo {
    FiniteSpace space;
    std::vector<Partition> filtration;  // F_0 ... F_T
    std::vector<BoostStage> stages;     // T+1 rows
    TelescopeDecomposition brier;
    TelescopeDecomposition logloss;
};

/// Random binary space and refining filtration; the stage predictor is the
/// Bayes law at each level, so risks decrease and gains telescope exactly.
BoostingDemo boosting_demo(int space_size, int depth, std::uint64_t seed);

struct StagewiseRecalibration {
    double pre_loss = 0.0;
    double reliability_removed = 0.0;
    double post_loss = 0.0;
};

/// Population recalibration of a stage score: project onto the sigma-algebra
/// generated by the score's values. post_loss = pre_loss - reliability_removed.
StagewiseRecalibration stagewise_recalibrate(const FiniteSpace& space, const Partition& part,
                                             const BlockPredictor& score, const ProperLoss& loss);

// ---------------------------------------------------------------------------
// The synthetic experiment (base models -> ensembles -> recalibration)

struct VariantMetrics {
    std::string variant;
    double lcs_raw = 0.0, lcs_recal = 0.0;
    double ici_raw = 0.0;
    double auc_raw = 0.0, auc_recal = 0.0;
    // Keyed "brier" / "logloss".
    std::map<std::string, double> rel_raw, grp_raw, irr, total_raw;
    std::map<std::string, double> rel_recal, grp_recal, total_recal;
};

struct SynthExperimentConfig {
    DGPConfig dgp;  // n is the size of EACH of the three independent splits
    CalibratorMethod calibrator = CalibratorMethod::Isotonic;
    CalibratorConfig calibrator_config;
    int quantize_levels = 8;
};

/// Runs the full pipeline for one rho: three independent draws
/// (train/calibration/test), base models s1 (x1), s2 (x2), s12 (both),
/// their average, and a quantized s12; per-variant metrics before and
/// after recalibration, with oracle-based grouping and irreducible terms.
std::vector<VariantMetrics> run_synth_experiment(const SynthExperimentConfig& config);

}  // namespace scoredecomp
