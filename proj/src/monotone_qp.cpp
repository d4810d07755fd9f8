#include "scoredecomp/monotone_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace scoredecomp {

namespace {

/// Group labels 0..m-1 for consecutive coefficients chained by active
/// difference constraints.
std::vector<int> groups_from_active(const std::vector<bool>& active, int k) {
    std::vector<int> group(static_cast<std::size_t>(k));
    int g = 0;
    group[0] = 0;
    for (int i = 1; i < k; ++i) {
        if (!active[static_cast<std::size_t>(i - 1)]) ++g;
        group[static_cast<std::size_t>(i)] = g;
    }
    return group;
}

Eigen::VectorXd solve_reduced(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                              const std::vector<int>& group, int m) {
    const int k = static_cast<int>(g.size());
    Eigen::MatrixXd Hr = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd gr = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < k; ++i) {
        gr[group[static_cast<std::size_t>(i)]] += g[i];
        for (int j = 0; j < k; ++j)
            Hr(group[static_cast<std::size_t>(i)], group[static_cast<std::size_t>(j)]) += H(i, j);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(Hr);
    Eigen::VectorXd z;
    if (llt.info() == Eigen::Success) {
        z = llt.solve(gr);
    } else {
        // Rank-deficient reduced Hessian; fall back to a tiny ridge.
        const double ridge = 1e-12 * (1.0 + Hr.diagonal().maxCoeff());
        z = (Hr + ridge * Eigen::MatrixXd::Identity(m, m)).llt().solve(gr);
    }
    Eigen::VectorXd beta(k);
    for (int i = 0; i < k; ++i) beta[i] = z[group[static_cast<std::size_t>(i)]];
    return beta;
}

}  // namespace

MonotoneQpSolution solve_monotone_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& g) {
    const int k = static_cast<int>(g.size());
    if (H.rows() != k || H.cols() != k)
        throw std::invalid_argument("quadratic term does not match gradient size");
    MonotoneQpSolution sol;
    if (k == 1) {
        sol.beta = Eigen::VectorXd::Constant(1, g[0] / H(0, 0));
        sol.multipliers = Eigen::VectorXd::Zero(0);
        return sol;
    }

    const double scale = 1.0 + H.cwiseAbs().maxCoeff() + g.cwiseAbs().maxCoeff();
    const double drop_tol = 1e-11 * scale;

    // Start from the fully pooled (constant) solution, which is feasible.
    std::vector<bool> active(static_cast<std::size_t>(k - 1), true);
    std::vector<int> group = groups_from_active(active, k);
    Eigen::VectorXd beta = solve_reduced(H, g, group, 1);

    const int max_iter = 50 + 20 * k;
    int iter = 0;
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(k - 1);
    for (; iter < max_iter; ++iter) {
        group = groups_from_active(active, k);
        const int m = group[static_cast<std::size_t>(k - 1)] + 1;
        const Eigen::VectorXd candidate = solve_reduced(H, g, group, m);

        // Blocking constraints among the inactive set.
        double alpha = 1.0;
        int blocking = -1;
        for (int i = 0; i < k - 1; ++i) {
            if (active[static_cast<std::size_t>(i)]) continue;
            const double slack_now = beta[i + 1] - beta[i];
            const double slack_cand = candidate[i + 1] - candidate[i];
            const double delta = slack_cand - slack_now;
            if (slack_cand < 0.0 && delta < 0.0) {
                const double a = std::max(0.0, slack_now / (-delta));
                if (a < alpha) {
                    alpha = a;
                    blocking = i;
                }
            }
        }

        if (blocking >= 0) {
            beta += alpha * (candidate - beta);
            active[static_cast<std::size_t>(blocking)] = true;
            continue;
        }

        beta = candidate;
        // Multipliers by prefix sums of the gradient within each group.
        const Eigen::VectorXd r = H * beta - g;
        lambda.setZero();
        double running = 0.0;
        for (int i = 0; i < k - 1; ++i) {
            running += r[i];
            if (active[static_cast<std::size_t>(i)])
                lambda[i] = -running;
            else
                running = 0.0;
        }
        double worst = 0.0;
        int worst_idx = -1;
        for (int i = 0; i < k - 1; ++i) {
            if (active[static_cast<std::size_t>(i)] && lambda[i] < worst) {
                worst = lambda[i];
                worst_idx = i;
            }
        }
        if (worst_idx < 0 || worst >= -drop_tol) break;
        active[static_cast<std::size_t>(worst_idx)] = false;
    }
    sol.converged = iter < max_iter;
    sol.iterations = iter;
    sol.beta = beta;
    sol.multipliers = lambda.cwiseMax(0.0);

    // KKT diagnostics.
    Eigen::VectorXd resid = H * beta - g;
    for (int i = 0; i < k - 1; ++i) {
        resid[i] += sol.multipliers[i];
        resid[i + 1] -= sol.multipliers[i];
    }
    sol.stationarity_inf = resid.cwiseAbs().maxCoeff();
    sol.min_slack = std::numeric_limits<double>::infinity();
    sol.complementarity = 0.0;
    sol.min_multiplier = 0.0;
    for (int i = 0; i < k - 1; ++i) {
        const double slack = beta[i + 1] - beta[i];
        sol.min_slack = std::min(sol.min_slack, slack);
        sol.complementarity = std::max(sol.complementarity, std::abs(sol.multipliers[i] * slack));
        sol.min_multiplier = std::min(sol.min_multiplier, sol.multipliers[i]);
    }
    return sol;
}

}  // namespace scoredecomp
