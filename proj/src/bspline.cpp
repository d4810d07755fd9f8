#include "scoredecomp/bspline.hpp"

#include <algorithm>
#include <stdexcept>

namespace scoredecomp {

namespace {
constexpr int kDegree = 3;

std::vector<double> uniform_clamped_knots(int size) {
    if (size < 4) throw std::invalid_argument("cubic basis needs k >= 4");
    std::vector<double> knots;
    knots.reserve(static_cast<std::size_t>(size) + 4);
    for (int i = 0; i < 4; ++i) knots.push_back(0.0);
    const int interior = size - 4;
    for (int j = 1; j <= interior; ++j)
        knots.push_back(static_cast<double>(j) / static_cast<double>(interior + 1));
    for (int i = 0; i < 4; ++i) knots.push_back(1.0);
    return knots;
}
}  // namespace

CubicBsplineBasis::CubicBsplineBasis(int size)
    : size_(size), knots_(uniform_clamped_knots(size)) {}

CubicBsplineBasis::CubicBsplineBasis(std::vector<double> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 8) throw std::invalid_argument("knot vector too short for a cubic basis");
    size_ = static_cast<int>(knots_.size()) - 4;
}

int CubicBsplineBasis::find_span(double x) const {
    // Last span [t_mu, t_{mu+1}) with t_mu <= x; x == 1 maps to the final span.
    if (x >= knots_[static_cast<std::size_t>(size_)]) return size_ - 1;
    if (x <= knots_[kDegree]) return kDegree;
    const auto it = std::upper_bound(knots_.begin() + kDegree, knots_.begin() + size_, x);
    return static_cast<int>(it - knots_.begin()) - 1;
}

Eigen::VectorXd CubicBsplineBasis::evaluate(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    const int mu = find_span(x);
    double N[kDegree + 1] = {1.0, 0.0, 0.0, 0.0};
    double left[kDegree + 1], right[kDegree + 1];
    for (int j = 1; j <= kDegree; ++j) {
        left[j] = x - knots_[static_cast<std::size_t>(mu + 1 - j)];
        right[j] = knots_[static_cast<std::size_t>(mu + j)] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = N[r] / (right[r + 1] + left[j - r]);
            N[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        N[j] = saved;
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(size_);
    for (int j = 0; j <= kDegree; ++j) out[mu - kDegree + j] = N[j];
    return out;
}

Eigen::VectorXd CubicBsplineBasis::derivative(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    const int mu = find_span(x);
    // Degree-2 basis values on the same span.
    double N[kDegree] = {1.0, 0.0, 0.0};
    double left[kDegree], right[kDegree];
    for (int j = 1; j <= kDegree - 1; ++j) {
        left[j] = x - knots_[static_cast<std::size_t>(mu + 1 - j)];
        right[j] = knots_[static_cast<std::size_t>(mu + j)] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = N[r] / (right[r + 1] + left[j - r]);
            N[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        N[j] = saved;
    }
    // B'_l = 3 * (M_l / (t_{l+3} - t_l) - M_{l+1} / (t_{l+4} - t_{l+1}))
    // where M are the degree-2 functions, nonzero for l in [mu-2, mu].
    auto deg2 = [&](int l) -> double {
        const int offset = l - (mu - (kDegree - 1));
        return (offset >= 0 && offset <= kDegree - 1) ? N[offset] : 0.0;
    };
    Eigen::VectorXd out = Eigen::VectorXd::Zero(size_);
    for (int l = mu - kDegree; l <= mu; ++l) {
        if (l < 0 || l >= size_) continue;
        double v = 0.0;
        const double d1 = knots_[static_cast<std::size_t>(l + kDegree)] - knots_[static_cast<std::size_t>(l)];
        if (d1 > 0.0) v += deg2(l) / d1;
        const double d2 =
            knots_[static_cast<std::size_t>(l + kDegree + 1)] - knots_[static_cast<std::size_t>(l + 1)];
        if (d2 > 0.0) v -= deg2(l + 1) / d2;
        out[l] = kDegree * v;
    }
    return out;
}

Eigen::MatrixXd CubicBsplineBasis::design(const std::vector<double>& xs) const {
    Eigen::MatrixXd B(static_cast<Eigen::Index>(xs.size()), size_);
    for (std::size_t i = 0; i < xs.size(); ++i) B.row(static_cast<Eigen::Index>(i)) = evaluate(xs[i]);
    return B;
}

Eigen::MatrixXd CubicBsplineBasis::second_difference() const {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(size_ - 2, size_);
    for (int i = 0; i < size_ - 2; ++i) {
        D(i, i) = 1.0;
        D(i, i + 1) = -2.0;
        D(i, i + 2) = 1.0;
    }
    return D;
}

}  // namespace scoredecomp
