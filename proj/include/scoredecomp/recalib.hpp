#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "scoredecomp/bspline.hpp"
#include "scoredecomp/monotone_qp.hpp"

// Monotone post-hoc recalibrators: PAV isotonic regression, logistic
// scaling, quantile binning, and the two-step monotone C^2 calibrator
// (kernel pre-smoothing followed by a shape-constrained spline fit with
// identity or logit link). Every fitted map is nondecreasing on [0, 1].

namespace scoredecomp {

/// Raised when a fit needs both outcome classes and the data has one.
class single_class_error : public std::runtime_error {
public:
    explicit single_class_error(const std::string& what) : std::runtime_error(what) {}
};

/// Design points sorted ascending with responses and nonnegative weights.
struct SortedSample {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> w;

    SortedSample(std::vector<double> x_in, std::vector<double> y_in, std::vector<double> w_in);

    /// Sorts (score, response) pairs; unit weights unless provided.
    static SortedSample from_unsorted(const std::vector<double>& scores,
                                      const std::vector<double>& responses,
                                      const std::vector<double>& weights = {});
};

/// Right-continuous step fit from isotonic regression.
struct IsotonicFit {
    std::vector<double> breakpoints;  // ascending, distinct
    std::vector<double> values;       // nondecreasing

    double predict(double s) const;
};

/// Weighted isotone least squares on a chain, solved by pool-adjacent-
/// violators. Ties in x are pre-merged by weighted mean.
IsotonicFit pav_isotonic(const SortedSample& sample);

/// g(s) = sigmoid(a*s + b), a >= 0.
struct PlattFit {
    double a = 1.0;
    double b = 0.0;
    bool converged = true;
    bool slope_clamped = false;  // negative MLE slope projected to 0

    double predict(double s) const;
};

PlattFit platt_fit(const std::vector<double>& scores, const std::vector<int>& outcomes);

/// Nadaraya-Watson pre-smoothing on a grid with the compact triweight
/// kernel. Grid points with zero kernel mass are dropped and reported.
struct KernelPresmooth {
    std::vector<double> grid;
    std::vector<double> pseudo;  // smoothed responses
    std::vector<double> mass;    // kernel mass per grid point
    std::vector<double> dropped_grid;
    double bandwidth = 0.0;
};

double triweight_kernel(double u);

KernelPresmooth kernel_presmooth(const std::vector<double>& scores,
                                 const std::vector<double>& responses,
                                 const std::vector<double>& grid, double bandwidth);

enum class SplineLink { Identity, Logit };

struct MonotoneSplineFit {
    std::vector<double> knots;
    std::vector<double> coefficients;  // nondecreasing
    SplineLink link = SplineLink::Logit;
    double lambda = 0.0;
    double bandwidth = 0.0;  // provenance of the pre-smoothing step
    bool converged = true;   // IRLS warning flag
    double kkt_stationarity = 0.0;
    double kkt_complementarity = 0.0;
    double kkt_min_slack = 0.0;

    double predict(double s) const;
    /// Derivative of the fitted map at s (chain rule through the link).
    double derivative(double s) const;
};

/// Step B of the monotone fit: weighted penalized least squares over a
/// cubic B-spline basis with nondecreasing coefficients. The logit link
/// minimizes the penalized Bernoulli deviance by constrained IRLS, each
/// inner step the same QP with working responses and weights.
MonotoneSplineFit monotone_spline_fit(const KernelPresmooth& pre, int basis_size, double lambda,
                                      SplineLink link);

/// Quantile-bin means, pooled by PAV so the map stays nondecreasing.
struct BinnedFit {
    std::vector<double> edges;   // interior bin edges, ascending
    std::vector<double> values;  // one per bin, nondecreasing

    double predict(double s) const;
};

enum class CalibratorMethod { Isotonic, Platt, MonotoneSpline, Binned };

std::string method_name(CalibratorMethod method);
CalibratorMethod method_from_name(const std::string& name);

struct SplineConfig {
    int grid_size = 101;
    int basis_size = 15;
    double bandwidth = 0.08;
    double lambda = -1.0;  // negative selects lambda by 5-fold CV deviance
    SplineLink link = SplineLink::Logit;
    std::vector<double> lambda_grid = {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
};

struct CalibratorConfig {
    SplineConfig spline;
    int bins = 10;
};

/// A fitted monotone map [0,1] -> [0,1] with introspection.
class Calibrator {
public:
    using Fit = std::variant<IsotonicFit, PlattFit, MonotoneSplineFit, BinnedFit>;

    explicit Calibrator(Fit fit) : fit_(std::move(fit)) {}

    /// Out-of-range queries are clamped into [0, 1].
    double predict(double s) const;
    double operator()(double s) const { return predict(s); }

    CalibratorMethod method() const;
    const Fit& fit() const { return fit_; }

    std::string to_json() const;
    static Calibrator from_json(const std::string& text);

private:
    Fit fit_;
};

Calibrator fit_calibrator(CalibratorMethod method, const std::vector<double>& scores,
                          const std::vector<int>& outcomes,
                          const CalibratorConfig& config = {});

/// Mann-Whitney AUC with midrank tie handling; needs both classes.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& outcomes);

}  // namespace scoredecomp
