#pragma once

#include <Eigen/Dense>

namespace scoredecomp {

/// Solution of  min 1/2 b'Hb - g'b  subject to  b_{i+1} - b_i >= 0,
/// solved by a primal active-set method that merges adjacent coefficients
/// while their ordering constraint is active. Exact in finitely many steps
/// for positive definite H.
struct MonotoneQpSolution {
    Eigen::VectorXd beta;
    Eigen::VectorXd multipliers;  // one per difference constraint, 0 when inactive
    int iterations = 0;
    bool converged = true;

    // KKT diagnostics against the solved objective.
    double stationarity_inf = 0.0;  // ||Hb - g - A'lambda||_inf
    double complementarity = 0.0;   // max_i |lambda_i * slack_i|
    double min_slack = 0.0;         // min_i (b_{i+1} - b_i)
    double min_multiplier = 0.0;
};

MonotoneQpSolution solve_monotone_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& g);

}  // namespace scoredecomp
