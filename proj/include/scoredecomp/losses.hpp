#pragma once

#include <cstddef>
#include <vector>

// Proper losses on a finite label set: pointwise loss, conditional risk,
// generalized entropy and the induced divergence (regret).
//
// Binary convention: a distribution over {0,1} is identified with the
// probability of label 1, and the Brier loss is the scalar (p1 - y)^2.
// Multi-class Brier is the full squared Euclidean distance to the one-hot
// vector. All log-loss quantities are in nats.

namespace scoredecomp {

/// A point of the probability simplex over K >= 2 labels.
class ProbVector {
public:
    explicit ProbVector(std::vector<double> probs);

    /// Bernoulli distribution over {0,1} as (1-q, q).
    static ProbVector bernoulli(double q);
    /// Point mass at `label` among `k` labels.
    static ProbVector onehot(int label, int k);

    int size() const { return static_cast<int>(probs_.size()); }
    double operator[](int i) const { return probs_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& probs() const { return probs_; }

    /// Probability of label 1 (binary shorthand, valid for any K >= 2).
    double positive() const { return probs_[1]; }

    bool operator==(const ProbVector& other) const { return probs_ == other.probs_; }

private:
    std::vector<double> probs_;
};

/// Outcome label in {0, ..., K-1}; label 1 is the positive class in binary.
struct Outcome {
    int label = 0;
};

enum class LossKind { Brier, LogLoss };

/// A strictly proper loss. `clamp_epsilon` floors probabilities before the
/// logarithm so empirical scores at exactly 0 or 1 stay finite.
struct ProperLoss {
    LossKind kind = LossKind::Brier;
    double clamp_epsilon = 1e-12;

    static ProperLoss brier() { return {LossKind::Brier, 1e-12}; }
    static ProperLoss logloss(double eps = 1e-12) { return {LossKind::LogLoss, eps}; }
};

/// l(p, y). Brier: squared Euclidean distance to onehot(y), reported as the
/// scalar (p1 - y)^2 when K == 2. LogLoss: -log p_y in nats.
double pointwise_loss(const ProperLoss& loss, const ProbVector& p, Outcome y);

/// Conditional risk L(p, q) = sum_y q_y l(p, y).
double conditional_risk(const ProperLoss& loss, const ProbVector& p, const ProbVector& q);

/// Generalized entropy E(q) = L(q, q). Shannon entropy for log-loss,
/// q(1-q) for binary Brier.
double entropy(const ProperLoss& loss, const ProbVector& q);

/// Divergence d(p, q) = L(p, q) - E(q) >= 0. Squared distance for Brier,
/// KL(q || p) for log-loss. Rounding residue above -1e-12 is clamped to 0.
double divergence(const ProperLoss& loss, const ProbVector& p, const ProbVector& q);

// Scalar fast paths for binary problems; identical values to the ProbVector
// versions with bernoulli() arguments, without the allocation.
double binary_pointwise_loss(const ProperLoss& loss, double p, int y);
double binary_entropy(const ProperLoss& loss, double q);
double binary_divergence(const ProperLoss& loss, double p, double q);

}  // namespace scoredecomp
