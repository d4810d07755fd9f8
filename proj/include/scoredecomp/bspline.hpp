#pragma once

#include <vector>

#include <Eigen/Dense>

namespace scoredecomp {

/// Clamped cubic B-spline basis on [0, 1] with k >= 4 functions and
/// uniformly spaced interior knots. Nondecreasing coefficients imply a
/// nondecreasing spline, which is what the monotone fit exploits.
class CubicBsplineBasis {
public:
    explicit CubicBsplineBasis(int size);
    explicit CubicBsplineBasis(std::vector<double> knots);

    int size() const { return size_; }
    const std::vector<double>& knots() const { return knots_; }

    /// All k basis values at x in [0, 1].
    Eigen::VectorXd evaluate(double x) const;

    /// All k basis derivatives at x.
    Eigen::VectorXd derivative(double x) const;

    /// Rows of basis values at each evaluation point.
    Eigen::MatrixXd design(const std::vector<double>& xs) const;

    /// Second-difference matrix on coefficients, (k-2) x k.
    Eigen::MatrixXd second_difference() const;

private:
    int find_span(double x) const;

    int size_ = 0;
    std::vector<double> knots_;  // length size_ + 4 (degree 3, clamped)
};

}  // namespace scoredecomp
