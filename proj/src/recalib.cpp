#include "scoredecomp/recalib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

namespace scoredecomp {

namespace {

using ordered_json = nlohmann::ordered_json;

double sigmoid(double eta) {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double softplus(double eta) {
    return std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta)));
}

void check_binary_outcomes(const std::vector<int>& outcomes) {
    for (int y : outcomes)
        if (y != 0 && y != 1) throw std::invalid_argument("outcomes must be 0 or 1");
}

void check_unit_scores(const std::vector<double>& scores) {
    for (double s : scores)
        if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("scores must lie in [0, 1]");
}

int count_positive(const std::vector<int>& outcomes) {
    return static_cast<int>(std::count(outcomes.begin(), outcomes.end(), 1));
}

}  // namespace

SortedSample::SortedSample(std::vector<double> x_in, std::vector<double> y_in,
                           std::vector<double> w_in)
    : x(std::move(x_in)), y(std::move(y_in)), w(std::move(w_in)) {
    if (x.empty() || x.size() != y.size() || x.size() != w.size())
        throw std::invalid_argument("SortedSample needs aligned nonempty x, y, w");
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0 && x[i] < x[i - 1]) throw std::invalid_argument("x must be nondecreasing");
        if (w[i] < 0.0) throw std::invalid_argument("weights must be nonnegative");
        total += w[i];
    }
    if (!(total > 0.0)) throw std::invalid_argument("total weight must be positive");
}

SortedSample SortedSample::from_unsorted(const std::vector<double>& scores,
                                         const std::vector<double>& responses,
                                         const std::vector<double>& weights) {
    if (scores.size() != responses.size())
        throw std::invalid_argument("scores and responses must align");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> x, y, w;
    x.reserve(order.size());
    y.reserve(order.size());
    w.reserve(order.size());
    for (std::size_t i : order) {
        x.push_back(scores[i]);
        y.push_back(responses[i]);
        w.push_back(weights.empty() ? 1.0 : weights[i]);
    }
    return SortedSample(std::move(x), std::move(y), std::move(w));
}

double IsotonicFit::predict(double s) const {
    if (s <= breakpoints.front()) return values.front();
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
    return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

IsotonicFit pav_isotonic(const SortedSample& sample) {
    // Merge exact ties in x by weighted mean so the chain order is strict.
    std::vector<double> x, y, w;
    for (std::size_t i = 0; i < sample.x.size(); ++i) {
        if (!x.empty() && sample.x[i] == x.back()) {
            const double wi = sample.w[i];
            const double tot = w.back() + wi;
            if (tot > 0.0) y.back() += (sample.y[i] - y.back()) * (wi / tot);
            w.back() = tot;
        } else {
            x.push_back(sample.x[i]);
            y.push_back(sample.y[i]);
            w.push_back(sample.w[i]);
        }
    }

    // Pool adjacent violators over the merged chain.
    std::vector<double> level(y.size()), weight(y.size());
    std::vector<std::size_t> start(y.size());
    std::size_t top = 0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        level[top] = y[j];
        weight[top] = w[j];
        start[top] = j;
        ++top;
        while (top >= 2 && level[top - 2] >= level[top - 1]) {
            const double tot = weight[top - 2] + weight[top - 1];
            if (tot > 0.0)
                level[top - 2] += (level[top - 1] - level[top - 2]) * (weight[top - 1] / tot);
            weight[top - 2] = tot;
            --top;
        }
    }

    IsotonicFit fit;
    fit.breakpoints = std::move(x);
    fit.values.resize(fit.breakpoints.size());
    for (std::size_t b = 0; b < top; ++b) {
        const std::size_t end = (b + 1 < top) ? start[b + 1] : fit.breakpoints.size();
        for (std::size_t j = start[b]; j < end; ++j) fit.values[j] = level[b];
    }
    return fit;
}

double PlattFit::predict(double s) const { return sigmoid(a * s + b); }

namespace {

/// Penalized logistic IRLS on design [1, s]; returns (intercept, slope).
struct LogisticResult {
    double intercept = 0.0;
    double slope = 0.0;
    bool converged = false;
};

LogisticResult penalized_logistic_1d(const std::vector<double>& s, const std::vector<int>& y,
                                     double ridge, bool slope_free) {
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::Vector2d theta(0.0, 0.0);
    auto objective = [&](const Eigen::Vector2d& t) {
        double f = ridge * (t[0] * t[0] + t[1] * t[1]);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double eta = t[0] + t[1] * s[static_cast<std::size_t>(i)];
            f += softplus(eta) - (y[static_cast<std::size_t>(i)] == 1 ? eta : 0.0);
        }
        return f;
    };
    double f = objective(theta);
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::Vector2d grad(2.0 * ridge * theta[0], 2.0 * ridge * theta[1]);
        Eigen::Matrix2d hess = 2.0 * ridge * Eigen::Matrix2d::Identity();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double xi = s[static_cast<std::size_t>(i)];
            const double mu = sigmoid(theta[0] + theta[1] * xi);
            const double r = mu - (y[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0);
            const double wv = std::max(mu * (1.0 - mu), 1e-10);
            grad[0] += r;
            grad[1] += r * xi;
            hess(0, 0) += wv;
            hess(0, 1) += wv * xi;
            hess(1, 1) += wv * xi * xi;
        }
        hess(1, 0) = hess(0, 1);
        Eigen::Vector2d step;
        if (slope_free) {
            step = hess.ldlt().solve(grad);
        } else {
            step = Eigen::Vector2d(grad[0] / hess(0, 0), 0.0);
        }
        Eigen::Vector2d candidate = theta - step;
        double fc = objective(candidate);
        int halvings = 0;
        while (fc > f && halvings < 40) {
            candidate = 0.5 * (theta + candidate);
            fc = objective(candidate);
            ++halvings;
        }
        const double change = std::abs(f - fc);
        theta = candidate;
        f = fc;
        if (change < 1e-10 * (1.0 + std::abs(f))) {
            converged = true;
            break;
        }
    }
    return {theta[0], theta[1], converged};
}

}  // namespace

PlattFit platt_fit(const std::vector<double>& scores, const std::vector<int>& outcomes) {
    if (scores.size() != outcomes.size() || scores.size() < 2)
        throw std::invalid_argument("platt_fit needs >= 2 aligned samples");
    check_binary_outcomes(outcomes);
    const int pos = count_positive(outcomes);
    if (pos == 0 || pos == static_cast<int>(outcomes.size()))
        throw single_class_error("platt_fit: only one outcome class present");

    auto res = penalized_logistic_1d(scores, outcomes, 1e-6, true);
    PlattFit fit;
    fit.converged = res.converged;
    if (res.slope < 0.0) {
        // Project onto the monotone family: slope 0, refit intercept.
        const auto flat = penalized_logistic_1d(scores, outcomes, 1e-6, false);
        fit.a = 0.0;
        fit.b = flat.intercept;
        fit.converged = flat.converged;
        fit.slope_clamped = true;
    } else {
        fit.a = res.slope;
        fit.b = res.intercept;
    }
    return fit;
}

double triweight_kernel(double u) {
    if (std::abs(u) > 1.0) return 0.0;
    const double t = 1.0 - u * u;
    return 35.0 / 32.0 * t * t * t;
}

KernelPresmooth kernel_presmooth(const std::vector<double>& scores,
                                 const std::vector<double>& responses,
                                 const std::vector<double>& grid, double bandwidth) {
    if (scores.size() != responses.size())
        throw std::invalid_argument("scores and responses must align");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
    KernelPresmooth out;
    out.bandwidth = bandwidth;
    for (double t : grid) {
        double mass = 0.0, weighted = 0.0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            const double k = triweight_kernel((t - scores[i]) / bandwidth);
            mass += k;
            weighted += k * responses[i];
        }
        if (mass > 0.0) {
            out.grid.push_back(t);
            out.pseudo.push_back(weighted / mass);
            out.mass.push_back(mass);
        } else {
            out.dropped_grid.push_back(t);
        }
    }
    return out;
}

double MonotoneSplineFit::predict(double s) const {
    const CubicBsplineBasis basis(knots);
    const Eigen::VectorXd b = basis.evaluate(std::clamp(s, 0.0, 1.0));
    double eta = 0.0;
    for (int l = 0; l < basis.size(); ++l) eta += b[l] * coefficients[static_cast<std::size_t>(l)];
    if (link == SplineLink::Logit) return sigmoid(eta);
    return std::clamp(eta, 0.0, 1.0);
}

double MonotoneSplineFit::derivative(double s) const {
    const CubicBsplineBasis basis(knots);
    s = std::clamp(s, 0.0, 1.0);
    const Eigen::VectorXd db = basis.derivative(s);
    double deta = 0.0;
    for (int l = 0; l < basis.size(); ++l) deta += db[l] * coefficients[static_cast<std::size_t>(l)];
    if (link == SplineLink::Identity) return deta;
    const Eigen::VectorXd b = basis.evaluate(s);
    double eta = 0.0;
    for (int l = 0; l < basis.size(); ++l) eta += b[l] * coefficients[static_cast<std::size_t>(l)];
    const double mu = sigmoid(eta);
    return mu * (1.0 - mu) * deta;
}

MonotoneSplineFit monotone_spline_fit(const KernelPresmooth& pre, int basis_size, double lambda,
                                      SplineLink link) {
    if (pre.grid.empty()) throw std::invalid_argument("no usable pre-smoothed grid points");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    const CubicBsplineBasis basis(basis_size);
    const Eigen::MatrixXd B = basis.design(pre.grid);
    const Eigen::MatrixXd D = basis.second_difference();
    const Eigen::MatrixXd P = lambda * (D.transpose() * D);
    const auto m = static_cast<Eigen::Index>(pre.grid.size());
    Eigen::VectorXd v(m), ytilde(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        v[j] = pre.mass[static_cast<std::size_t>(j)];
        ytilde[j] = pre.pseudo[static_cast<std::size_t>(j)];
    }

    MonotoneSplineFit fit;
    fit.knots = basis.knots();
    fit.link = link;
    fit.lambda = lambda;
    fit.bandwidth = pre.bandwidth;

    MonotoneQpSolution sol;
    if (link == SplineLink::Identity) {
        const Eigen::MatrixXd H = B.transpose() * v.asDiagonal() * B + P;
        const Eigen::VectorXd g = B.transpose() * (v.cwiseProduct(ytilde));
        sol = solve_monotone_qp(H, g);
        fit.converged = sol.converged;
    } else {
        // Constrained IRLS for the penalized Bernoulli deviance.
        auto objective = [&](const Eigen::VectorXd& beta) {
            const Eigen::VectorXd eta = B * beta;
            double f = 0.5 * lambda * (D * beta).squaredNorm();
            for (Eigen::Index j = 0; j < m; ++j)
                f += v[j] * (softplus(eta[j]) - ytilde[j] * eta[j]);
            return f;
        };
        const double mean_y =
            std::clamp(v.dot(ytilde) / v.sum(), 1e-6, 1.0 - 1e-6);
        Eigen::VectorXd beta =
            Eigen::VectorXd::Constant(basis_size, std::log(mean_y / (1.0 - mean_y)));
        double f = objective(beta);
        fit.converged = false;
        for (int iter = 0; iter < 200; ++iter) {
            const Eigen::VectorXd eta = B * beta;
            Eigen::VectorXd wv(m), z(m);
            for (Eigen::Index j = 0; j < m; ++j) {
                const double mu = sigmoid(eta[j]);
                const double su = std::max(mu * (1.0 - mu), 1e-10);
                wv[j] = v[j] * su;
                z[j] = eta[j] + (ytilde[j] - mu) / su;
            }
            const Eigen::MatrixXd H = B.transpose() * wv.asDiagonal() * B + P;
            const Eigen::VectorXd g = B.transpose() * (wv.cwiseProduct(z));
            sol = solve_monotone_qp(H, g);
            Eigen::VectorXd candidate = sol.beta;
            double fc = objective(candidate);
            int halvings = 0;
            while (fc > f && halvings < 30) {
                // Convex combinations of feasible points stay feasible.
                candidate = 0.5 * (beta + candidate);
                fc = objective(candidate);
                ++halvings;
            }
            const double change = std::abs(f - fc);
            beta = candidate;
            f = fc;
            if (change < 1e-10 * (1.0 + std::abs(f))) {
                fit.converged = true;
                break;
            }
        }
        sol.beta = beta;
    }

    fit.coefficients.assign(sol.beta.data(), sol.beta.data() + sol.beta.size());
    fit.kkt_stationarity = sol.stationarity_inf;
    fit.kkt_complementarity = sol.complementarity;
    fit.kkt_min_slack = sol.min_slack;
    return fit;
}

double BinnedFit::predict(double s) const {
    const auto it = std::upper_bound(edges.begin(), edges.end(), s);
    return values[static_cast<std::size_t>(it - edges.begin())];
}

double Calibrator::predict(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    return std::visit([s](const auto& f) { return f.predict(s); }, fit_);
}

CalibratorMethod Calibrator::method() const {
    switch (fit_.index()) {
        case 0: return CalibratorMethod::Isotonic;
        case 1: return CalibratorMethod::Platt;
        case 2: return CalibratorMethod::MonotoneSpline;
        default: return CalibratorMethod::Binned;
    }
}

std::string method_name(CalibratorMethod method) {
    switch (method) {
        case CalibratorMethod::Isotonic: return "isotonic";
        case CalibratorMethod::Platt: return "platt";
        case CalibratorMethod::MonotoneSpline: return "spline";
        case CalibratorMethod::Binned: return "binned";
    }
    throw std::logic_error("unreachable calibrator method");
}

CalibratorMethod method_from_name(const std::string& name) {
    if (name == "isotonic") return CalibratorMethod::Isotonic;
    if (name == "platt") return CalibratorMethod::Platt;
    if (name == "spline") return CalibratorMethod::MonotoneSpline;
    if (name == "binned") return CalibratorMethod::Binned;
    throw std::invalid_argument("unknown calibrator method: " + name);
}

std::string Calibrator::to_json() const {
    ordered_json doc;
    doc["kind"] = method_name(method());
    std::visit(
        [&doc](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, IsotonicFit>) {
                doc["breakpoints"] = f.breakpoints;
                doc["values"] = f.values;
            } else if constexpr (std::is_same_v<T, PlattFit>) {
                doc["a"] = f.a;
                doc["b"] = f.b;
                doc["converged"] = f.converged;
                doc["slope_clamped"] = f.slope_clamped;
            } else if constexpr (std::is_same_v<T, MonotoneSplineFit>) {
                doc["link"] = f.link == SplineLink::Logit ? "logit" : "identity";
                doc["knots"] = f.knots;
                doc["coefficients"] = f.coefficients;
                doc["lambda"] = f.lambda;
                doc["bandwidth"] = f.bandwidth;
                doc["converged"] = f.converged;
            } else {
                doc["edges"] = f.edges;
                doc["values"] = f.values;
            }
        },
        fit_);
    return doc.dump(2);
}

Calibrator Calibrator::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "isotonic") {
        IsotonicFit f;
        f.breakpoints = doc.at("breakpoints").get<std::vector<double>>();
        f.values = doc.at("values").get<std::vector<double>>();
        return Calibrator(std::move(f));
    }
    if (kind == "platt") {
        PlattFit f;
        f.a = doc.at("a").get<double>();
        f.b = doc.at("b").get<double>();
        f.converged = doc.value("converged", true);
        f.slope_clamped = doc.value("slope_clamped", false);
        return Calibrator(f);
    }
    if (kind == "spline") {
        MonotoneSplineFit f;
        f.link = doc.at("link").get<std::string>() == "logit" ? SplineLink::Logit
                                                              : SplineLink::Identity;
        f.knots = doc.at("knots").get<std::vector<double>>();
        f.coefficients = doc.at("coefficients").get<std::vector<double>>();
        f.lambda = doc.value("lambda", 0.0);
        f.bandwidth = doc.value("bandwidth", 0.0);
        f.converged = doc.value("converged", true);
        return Calibrator(std::move(f));
    }
    if (kind == "binned") {
        BinnedFit f;
        f.edges = doc.at("edges").get<std::vector<double>>();
        f.values = doc.at("values").get<std::vector<double>>();
        return Calibrator(std::move(f));
    }
    throw std::invalid_argument("unknown calibrator kind in JSON: " + kind);
}

namespace {

std::vector<double> even_grid(int size) {
    std::vector<double> grid(static_cast<std::size_t>(size));
    for (int j = 0; j < size; ++j)
        grid[static_cast<std::size_t>(j)] = static_cast<double>(j) / static_cast<double>(size - 1);
    return grid;
}

double bernoulli_deviance(double y, double p) {
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    return -2.0 * (y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

MonotoneSplineFit fit_spline_path(const std::vector<double>& scores,
                                  const std::vector<int>& outcomes, const SplineConfig& cfg,
                                  double lambda) {
    std::vector<double> responses(outcomes.size());
    std::transform(outcomes.begin(), outcomes.end(), responses.begin(),
                   [](int y) { return static_cast<double>(y); });
    const auto pre =
        kernel_presmooth(scores, responses, even_grid(cfg.grid_size), cfg.bandwidth);
    return monotone_spline_fit(pre, cfg.basis_size, lambda, cfg.link);
}

double select_lambda_cv(const std::vector<double>& scores, const std::vector<int>& outcomes,
                        const SplineConfig& cfg) {
    const int folds = 5;
    if (static_cast<int>(scores.size()) < 4 * folds) return 1.0;
    double best_lambda = cfg.lambda_grid.front();
    double best_dev = std::numeric_limits<double>::infinity();
    for (const double lambda : cfg.lambda_grid) {
        double dev = 0.0;
        for (int f = 0; f < folds; ++f) {
            std::vector<double> train_s, valid_s;
            std::vector<int> train_y, valid_y;
            for (std::size_t i = 0; i < scores.size(); ++i) {
                if (static_cast<int>(i % folds) == f) {
                    valid_s.push_back(scores[i]);
                    valid_y.push_back(outcomes[i]);
                } else {
                    train_s.push_back(scores[i]);
                    train_y.push_back(outcomes[i]);
                }
            }
            const auto fit = fit_spline_path(train_s, train_y, cfg, lambda);
            for (std::size_t i = 0; i < valid_s.size(); ++i)
                dev += bernoulli_deviance(valid_y[i], fit.predict(valid_s[i]));
        }
        if (dev < best_dev) {
            best_dev = dev;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

BinnedFit fit_binned(const std::vector<double>& scores, const std::vector<int>& outcomes,
                     int bins) {
    const auto n = scores.size();
    bins = std::max(1, std::min<int>(bins, static_cast<int>(n)));
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    // Interior quantile edges, deduplicated under heavy ties.
    std::vector<double> edges;
    for (int j = 1; j < bins; ++j) {
        const double pos = static_cast<double>(j) * static_cast<double>(n - 1) /
                           static_cast<double>(bins);
        const auto lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        const double q = sorted[lo] + frac * (sorted[std::min(lo + 1, n - 1)] - sorted[lo]);
        if (edges.empty() || q > edges.back()) edges.push_back(q);
    }
    const std::size_t nbins = edges.size() + 1;
    std::vector<double> mass(nbins, 0.0), mean(nbins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto b = static_cast<std::size_t>(
            std::upper_bound(edges.begin(), edges.end(), scores[i]) - edges.begin());
        mass[b] += 1.0;
        mean[b] += (static_cast<double>(outcomes[i]) - mean[b]) / mass[b];
    }
    // Drop empty bins, keeping the edge that separates surviving neighbours.
    BinnedFit fit;
    std::vector<double> kept_mass;
    for (std::size_t b = 0; b < nbins; ++b) {
        if (mass[b] == 0.0) continue;
        if (!fit.values.empty()) fit.edges.push_back(edges[b - 1]);
        fit.values.push_back(mean[b]);
        kept_mass.push_back(mass[b]);
    }
    if (fit.values.size() > 1) {
        // Restore monotonicity by pooling adjacent bins.
        std::vector<double> idx(fit.values.size());
        std::iota(idx.begin(), idx.end(), 0.0);
        const auto iso = pav_isotonic(SortedSample(idx, fit.values, kept_mass));
        fit.values = iso.values;
    }
    return fit;
}

}  // namespace

Calibrator fit_calibrator(CalibratorMethod method, const std::vector<double>& scores,
                          const std::vector<int>& outcomes, const CalibratorConfig& config) {
    if (scores.empty() || scores.size() != outcomes.size())
        throw std::invalid_argument("fit_calibrator needs aligned nonempty scores and outcomes");
    check_unit_scores(scores);
    check_binary_outcomes(outcomes);
    switch (method) {
        case CalibratorMethod::Isotonic: {
            std::vector<double> responses(outcomes.begin(), outcomes.end());
            return Calibrator(pav_isotonic(SortedSample::from_unsorted(scores, responses)));
        }
        case CalibratorMethod::Platt:
            return Calibrator(platt_fit(scores, outcomes));
        case CalibratorMethod::MonotoneSpline: {
            SplineConfig cfg = config.spline;
            const double lambda =
                cfg.lambda >= 0.0 ? cfg.lambda : select_lambda_cv(scores, outcomes, cfg);
            return Calibrator(fit_spline_path(scores, outcomes, cfg, lambda));
        }
        case CalibratorMethod::Binned:
            return Calibrator(fit_binned(scores, outcomes, config.bins));
    }
    throw std::logic_error("unreachable calibrator method");
}

double roc_auc(const std::vector<double>& scores, const std::vector<int>& outcomes) {
    if (scores.size() != outcomes.size() || scores.empty())
        throw std::invalid_argument("roc_auc needs aligned nonempty scores and outcomes");
    check_binary_outcomes(outcomes);
    const auto n = scores.size();
    const int pos = count_positive(outcomes);
    if (pos == 0 || pos == static_cast<int>(n))
        throw single_class_error("roc_auc: only one outcome class present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t)
            if (outcomes[order[t]] == 1) rank_sum_pos += midrank;
        i = j + 1;
    }
    const double npos = pos;
    const double nneg = static_cast<double>(n) - npos;
    return (rank_sum_pos - npos * (npos + 1.0) / 2.0) / (npos * nneg);
}

}  // namespace scoredecomp
