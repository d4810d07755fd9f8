#include "scoredecomp/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace scoredecomp {

namespace {

constexpr double kSimplexTol = 1e-12;

void check_same_dim(const ProbVector& p, const ProbVector& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("ProbVector dimension mismatch");
}

}  // namespace

ProbVector::ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2)
        throw std::invalid_argument("ProbVector needs K >= 2 labels");
    double sum = 0.0;
    for (double v : probs_) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("ProbVector coordinate outside [0, 1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSimplexTol)
        throw std::invalid_argument("ProbVector coordinates do not sum to 1");
}

ProbVector ProbVector::bernoulli(double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("bernoulli probability outside [0, 1]");
    return ProbVector({1.0 - q, q});
}

ProbVector ProbVector::onehot(int label, int k) {
    if (label < 0 || label >= k)
        throw std::invalid_argument("onehot label out of range");
    std::vector<double> v(static_cast<std::size_t>(k), 0.0);
    v[static_cast<std::size_t>(label)] = 1.0;
    return ProbVector(std::move(v));
}

double pointwise_loss(const ProperLoss& loss, const ProbVector& p, Outcome y) {
    if (y.label < 0 || y.label >= p.size())
        throw std::invalid_argument("outcome label out of range for prediction");
    switch (loss.kind) {
        case LossKind::Brier: {
            if (p.size() == 2) {
                const double d = p[1] - (y.label == 1 ? 1.0 : 0.0);
                return d * d;
            }
            double s = 0.0;
            for (int j = 0; j < p.size(); ++j) {
                const double d = p[j] - (j == y.label ? 1.0 : 0.0);
                s += d * d;
            }
            return s;
        }
        case LossKind::LogLoss:
            return -std::log(std::max(p[y.label], loss.clamp_epsilon));
    }
    throw std::logic_error("unreachable loss kind");
}

double conditional_risk(const ProperLoss& loss, const ProbVector& p, const ProbVector& q) {
    check_same_dim(p, q);
    double r = 0.0;
    for (int y = 0; y < q.size(); ++y)
        if (q[y] > 0.0) r += q[y] * pointwise_loss(loss, p, Outcome{y});
    return r;
}

double entropy(const ProperLoss& loss, const ProbVector& q) {
    return conditional_risk(loss, q, q);
}

double divergence(const ProperLoss& loss, const ProbVector& p, const ProbVector& q) {
    check_same_dim(p, q);
    double d = conditional_risk(loss, p, q) - entropy(loss, q);
    if (d < 0.0) {
        if (d < -1e-12)
            throw std::logic_error("divergence negative beyond rounding tolerance");
        d = 0.0;
    }
    return d;
}

double binary_pointwise_loss(const ProperLoss& loss, double p, int y) {
    switch (loss.kind) {
        case LossKind::Brier: {
            const double d = p - (y == 1 ? 1.0 : 0.0);
            return d * d;
        }
        case LossKind::LogLoss: {
            const double py = y == 1 ? p : 1.0 - p;
            return -std::log(std::max(py, loss.clamp_epsilon));
        }
    }
    throw std::logic_error("unreachable loss kind");
}

double binary_entropy(const ProperLoss& loss, double q) {
    switch (loss.kind) {
        case LossKind::Brier:
            return q * (1.0 - q);
        case LossKind::LogLoss: {
            double h = 0.0;
            if (q > 0.0) h -= q * std::log(std::max(q, loss.clamp_epsilon));
            if (q < 1.0) h -= (1.0 - q) * std::log(std::max(1.0 - q, loss.clamp_epsilon));
            return h;
        }
    }
    throw std::logic_error("unreachable loss kind");
}

double binary_divergence(const ProperLoss& loss, double p, double q) {
    double d = 0.0;
    switch (loss.kind) {
        case LossKind::Brier:
            d = (p - q) * (p - q);
            break;
        case LossKind::LogLoss: {
            d = q * binary_pointwise_loss(loss, p, 1) + (1.0 - q) * binary_pointwise_loss(loss, p, 0)
                - binary_entropy(loss, q);
            break;
        }
    }
    if (d < 0.0) {
        if (d < -1e-12)
            throw std::logic_error("divergence negative beyond rounding tolerance");
        d = 0.0;
    }
    return d;
}

}  // namespace scoredecomp
