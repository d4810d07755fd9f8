#include "scoredecomp/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

#include "scoredecomp/normal.hpp"

namespace scoredecomp {

namespace {

double sigmoid(double eta) {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

// Stream tags for the independent RNG lanes of one dataset draw.
constexpr std::uint64_t kStreamCopula = 11;
constexpr std::uint64_t kStreamOutcome = 13;

}  // namespace

SyntheticDataset SyntheticDataset::subset(const std::vector<std::size_t>& idx) const {
    SyntheticDataset out;
    out.x1.reserve(idx.size());
    out.x2.reserve(idx.size());
    out.y.reserve(idx.size());
    out.q.reserve(idx.size());
    for (std::size_t i : idx) {
        out.x1.push_back(x1[i]);
        out.x2.push_back(x2[i]);
        out.y.push_back(y[i]);
        out.q.push_back(q[i]);
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> sample_copula(const DGPConfig& config) {
    if (!(std::abs(config.rho) < 1.0)) throw std::invalid_argument("|rho| must be < 1");
    if (config.n < 1) throw std::invalid_argument("n must be >= 1");
    CounterRng rng(config.seed, kStreamCopula);
    std::vector<double> x1(config.n), x2(config.n);
    const double root = std::sqrt(1.0 - config.rho * config.rho);
    for (std::size_t i = 0; i < config.n; ++i) {
        const double e1 = rng.next_normal();
        const double e2 = rng.next_normal();
        x1[i] = normal_cdf(e1);
        x2[i] = normal_cdf(config.rho * e1 + root * e2);
    }
    return {std::move(x1), std::move(x2)};
}

double true_q(double x1, double x2, Surface surface) {
    const double psi = std::exp((x1 - x2) * (x1 - x2) * (x1 - x2)) - 1.0;
    double eta = 0.0;
    switch (surface) {
        case Surface::Main:
            eta = 2.5 * ((x1 + x2) - 1.0) + 2.0 * psi;
            break;
        case Surface::AppendixSim:
            eta = x1 + x2 + psi;
            break;
    }
    return sigmoid(eta);
}

SyntheticDataset sample_dataset(const DGPConfig& config) {
    SyntheticDataset data;
    auto [x1, x2] = sample_copula(config);
    data.x1 = std::move(x1);
    data.x2 = std::move(x2);
    data.q.resize(config.n);
    data.y.resize(config.n);
    CounterRng rng(config.seed, kStreamOutcome);
    for (std::size_t i = 0; i < config.n; ++i) {
        data.q[i] = true_q(data.x1[i], data.x2[i], config.surface);
        data.y[i] = rng.next_uniform() < data.q[i] ? 1 : 0;
    }
    return data;
}

double LogisticModel::predict_row(const std::vector<double>& features) const {
    if (features.size() + 1 != coef.size())
        throw std::invalid_argument("feature count does not match model");
    double eta = coef[0];
    for (std::size_t j = 0; j < features.size(); ++j) eta += coef[j + 1] * features[j];
    return sigmoid(eta);
}

std::vector<double> LogisticModel::predict(const std::vector<std::vector<double>>& columns) const {
    if (columns.size() + 1 != coef.size())
        throw std::invalid_argument("column count does not match model");
    const std::size_t n = columns.empty() ? 0 : columns[0].size();
    std::vector<double> out;
    if (columns.empty()) return out;
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double eta = coef[0];
        for (std::size_t j = 0; j < columns.size(); ++j) eta += coef[j + 1] * columns[j][i];
        out[i] = sigmoid(eta);
    }
    return out;
}

namespace {

struct IrlsOutcome {
    Eigen::VectorXd theta;
    bool converged = false;
    bool diverged = false;
};

IrlsOutcome logistic_irls(const Eigen::MatrixXd& X, const std::vector<int>& y, double ridge,
                          int max_iter) {
    const auto n = X.rows();
    const auto p = X.cols();
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
    auto objective = [&](const Eigen::VectorXd& t) {
        double f = 0.5 * ridge * t.squaredNorm();
        const Eigen::VectorXd eta = X * t;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double e = eta[i];
            f += std::max(e, 0.0) + std::log1p(std::exp(-std::abs(e)));
            if (y[static_cast<std::size_t>(i)] == 1) f -= e;
        }
        return f;
    };
    double f = objective(theta);
    IrlsOutcome out;
    for (int iter = 0; iter < max_iter; ++iter) {
        const Eigen::VectorXd eta = X * theta;
        Eigen::VectorXd grad = ridge * theta;
        Eigen::MatrixXd hess = ridge * Eigen::MatrixXd::Identity(p, p);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = sigmoid(eta[i]);
            const double r = mu - (y[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0);
            const double wv = std::max(mu * (1.0 - mu), 1e-10);
            grad += r * X.row(i).transpose();
            hess += wv * (X.row(i).transpose() * X.row(i));
        }
        Eigen::VectorXd candidate = theta - hess.ldlt().solve(grad);
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
        if (theta.cwiseAbs().maxCoeff() > 1e3) {
            out.diverged = true;
            break;
        }
        if (change < 1e-10 * (1.0 + std::abs(f))) {
            out.converged = true;
            break;
        }
    }
    out.theta = theta;
    return out;
}

}  // namespace

LogisticModel fit_logistic_columns(const std::vector<std::vector<double>>& columns,
                                   const std::vector<int>& y) {
    if (y.size() < 2) throw std::invalid_argument("fit_logistic needs >= 2 samples");
    for (const auto& col : columns)
        if (col.size() != y.size()) throw std::invalid_argument("feature column misaligned");
    const int pos = static_cast<int>(std::count(y.begin(), y.end(), 1));
    if (pos == 0 || pos == static_cast<int>(y.size()))
        throw single_class_error("fit_logistic: only one outcome class present");

    const auto n = static_cast<Eigen::Index>(y.size());
    const auto p = static_cast<Eigen::Index>(columns.size()) + 1;
    Eigen::MatrixXd X(n, p);
    X.col(0).setOnes();
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            X(i, static_cast<Eigen::Index>(j) + 1) = columns[j][static_cast<std::size_t>(i)];

    LogisticModel model;
    auto mle = logistic_irls(X, y, 0.0, 100);
    if (!mle.converged || mle.diverged) {
        // Separation or non-convergence: ridge fallback keeps the optimum finite.
        auto ridge = logistic_irls(X, y, 1e-8, 500);
        model.separation = true;
        model.converged = ridge.converged;
        mle.theta = ridge.theta;
    }
    model.coef.assign(mle.theta.data(), mle.theta.data() + mle.theta.size());
    return model;
}

LogisticModel fit_logistic(const SyntheticDataset& data, const std::vector<int>& features) {
    std::vector<std::vector<double>> columns;
    for (int f : features) {
        if (f == 0)
            columns.push_back(data.x1);
        else if (f == 1)
            columns.push_back(data.x2);
        else
            throw std::invalid_argument("feature index must be 0 (x1) or 1 (x2)");
    }
    return fit_logistic_columns(columns, data.y);
}

std::vector<double> predict_logistic(const LogisticModel& model, const SyntheticDataset& data,
                                     const std::vector<int>& features) {
    std::vector<double> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::vector<double> row;
        for (int f : features) row.push_back(f == 0 ? data.x1[i] : data.x2[i]);
        out[i] = model.predict_row(row);
    }
    return out;
}

std::vector<double> ensemble_average(const std::vector<double>& s1,
                                     const std::vector<double>& s2) {
    if (s1.size() != s2.size()) throw std::invalid_argument("score vectors must align");
    std::vector<double> out(s1.size());
    for (std::size_t i = 0; i < s1.size(); ++i) out[i] = 0.5 * (s1[i] + s2[i]);
    return out;
}

LogisticModel ensemble_stack(const std::vector<double>& s1_calib,
                             const std::vector<double>& s2_calib,
                             const std::vector<int>& calib_outcomes) {
    return fit_logistic_columns({s1_calib, s2_calib}, calib_outcomes);
}

std::vector<double> quantize_score(const std::vector<double>& scores, int levels) {
    if (levels < 2) throw std::invalid_argument("quantization needs >= 2 levels");
    std::vector<double> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const int cell = std::min(levels - 1,
                                  static_cast<int>(scores[i] * static_cast<double>(levels)));
        out[i] = (static_cast<double>(cell) + 0.5) / static_cast<double>(levels);
    }
    return out;
}

BoostingDemo boosting_demo(int space_size, int depth, std::uint64_t seed) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (space_size < 2) throw std::invalid_argument("space needs >= 2 atoms");
    CounterRng rng(seed, 17);
    BoostingDemo demo{random_space(space_size, 2, rng),
                      random_filtration(space_size, depth + 1, rng),
                      {},
                      {},
                      {}};
    const ProperLoss brier = ProperLoss::brier();
    const ProperLoss ll = ProperLoss::logloss();
    const BlockPredictor t0 = conditional_law(demo.space, demo.filtration.front());
    demo.brier = telescope_decompose(demo.space, demo.filtration, t0, brier);
    demo.logloss = telescope_decompose(demo.space, demo.filtration, t0, ll);

    demo.stages.resize(demo.filtration.size());
    for (std::size_t t = 0; t < demo.filtration.size(); ++t) {
        const BlockPredictor qt = conditional_law(demo.space, demo.filtration[t]);
        demo.stages[t].brier_risk =
            direct_expected_loss(demo.space, demo.filtration[t], qt, brier);
        if (t + 1 < demo.filtration.size()) {
            demo.stages[t].brier_gain = demo.brier.gains[t];
            demo.stages[t].logloss_gain = demo.logloss.gains[t];
            demo.stages[t].mutual_info = conditional_entropy(demo.space, demo.filtration[t], ll) -
                                         conditional_entropy(demo.space, demo.filtration[t + 1], ll);
        }
    }
    return demo;
}

StagewiseRecalibration stagewise_recalibrate(const FiniteSpace& space, const Partition& part,
                                             const BlockPredictor& score,
                                             const ProperLoss& loss) {
    if (score.block_count() != part.block_count)
        throw std::invalid_argument("score not declared against this partition");
    // Sigma-algebra generated by the score: blocks with equal values merge.
    std::map<std::vector<double>, int> value_block;
    std::vector<int> merged_of_block(static_cast<std::size_t>(part.block_count));
    for (int b = 0; b < part.block_count; ++b) {
        const auto& key = score.value_of_block[static_cast<std::size_t>(b)].probs();
        const auto [it, inserted] =
            value_block.emplace(key, static_cast<int>(value_block.size()));
        merged_of_block[static_cast<std::size_t>(b)] = it->second;
    }
    std::vector<int> block_of_atom(static_cast<std::size_t>(part.n_atoms()));
    for (int w = 0; w < part.n_atoms(); ++w)
        block_of_atom[static_cast<std::size_t>(w)] = merged_of_block[static_cast<std::size_t>(
            part.block_of_atom[static_cast<std::size_t>(w)])];
    const Partition sigma_score(std::move(block_of_atom), static_cast<int>(value_block.size()));

    BlockPredictor projected;
    projected.value_of_block.resize(static_cast<std::size_t>(sigma_score.block_count),
                                    score.value_of_block.front());
    for (int b = 0; b < part.block_count; ++b)
        projected.value_of_block[static_cast<std::size_t>(merged_of_block[static_cast<std::size_t>(b)])] =
            score.value_of_block[static_cast<std::size_t>(b)];

    const auto one = one_level_decompose(space, sigma_score, projected, loss);
    StagewiseRecalibration out;
    out.pre_loss = one.total;
    out.reliability_removed = one.regret;
    out.post_loss = one.entropy_term;
    return out;
}

namespace {

struct VariantScores {
    std::string name;
    std::vector<double> calib, test;
};

}  // namespace

std::vector<VariantMetrics> run_synth_experiment(const SynthExperimentConfig& config) {
    // Three independent draws with distinct seeds derived from the base seed.
    DGPConfig dgp = config.dgp;
    dgp.seed = mix64(config.dgp.seed) + 1;
    const SyntheticDataset train = sample_dataset(dgp);
    dgp.seed = mix64(config.dgp.seed) + 2;
    const SyntheticDataset calib = sample_dataset(dgp);
    dgp.seed = mix64(config.dgp.seed) + 3;
    const SyntheticDataset test = sample_dataset(dgp);

    const LogisticModel m1 = fit_logistic(train, {0});
    const LogisticModel m2 = fit_logistic(train, {1});
    const LogisticModel m12 = fit_logistic(train, {0, 1});

    const std::vector<double> s1_c = predict_logistic(m1, calib, {0});
    const std::vector<double> s1_t = predict_logistic(m1, test, {0});
    const std::vector<double> s2_c = predict_logistic(m2, calib, {1});
    const std::vector<double> s2_t = predict_logistic(m2, test, {1});
    const std::vector<double> s12_c = predict_logistic(m12, calib, {0, 1});
    const std::vector<double> s12_t = predict_logistic(m12, test, {0, 1});

    std::vector<VariantScores> variants;
    variants.push_back({"s1", s1_c, s1_t});
    variants.push_back({"s2", s2_c, s2_t});
    variants.push_back({"s12", s12_c, s12_t});
    variants.push_back({"avg", ensemble_average(s1_c, s2_c), ensemble_average(s1_t, s2_t)});
    variants.push_back({"quant", quantize_score(s12_c, config.quantize_levels),
                        quantize_score(s12_t, config.quantize_levels)});

    const std::vector<ProperLoss> losses = {ProperLoss::brier(), ProperLoss::logloss()};
    std::vector<VariantMetrics> out;
    for (const auto& v : variants) {
        VariantMetrics m;
        m.variant = v.name;
        const Calibrator chat =
            fit_calibrator(config.calibrator, v.calib, calib.y, config.calibrator_config);
        const CalibrationMap raw_map = [&chat](double s) { return chat.predict(s); };
        const ScoredSample raw_sample(v.test, test.y, test.q);

        m.lcs_raw = lcs(raw_sample, raw_map);
        m.ici_raw = ici(raw_sample, raw_map);
        m.auc_raw = roc_auc(v.test, test.y);
        const MeanScores raw_totals = mean_scores(raw_sample);
        m.total_raw["brier"] = raw_totals.brier;
        m.total_raw["logloss"] = raw_totals.logloss;
        for (const auto& loss : losses) {
            const std::string key = loss.kind == LossKind::Brier ? "brier" : "logloss";
            m.rel_raw[key] = reliability_hat(loss, raw_sample, raw_map);
            m.grp_raw[key] = grouping_hat(loss, raw_sample, raw_map);
            m.irr[key] = irreducible_hat(loss, raw_sample);
        }

        // Recalibrated score: apply the fitted map, then refit a calibrator
        // for the recalibrated score on the calibration split.
        std::vector<double> recal_c(v.calib.size()), recal_t(v.test.size());
        std::transform(v.calib.begin(), v.calib.end(), recal_c.begin(), raw_map);
        std::transform(v.test.begin(), v.test.end(), recal_t.begin(), raw_map);
        const Calibrator chat2 =
            fit_calibrator(config.calibrator, recal_c, calib.y, config.calibrator_config);
        const CalibrationMap recal_map = [&chat2](double s) { return chat2.predict(s); };
        const ScoredSample recal_sample(recal_t, test.y, test.q);

        m.lcs_recal = lcs(recal_sample, recal_map);
        m.auc_recal = roc_auc(recal_t, test.y);
        const MeanScores recal_totals = mean_scores(recal_sample);
        m.total_recal["brier"] = recal_totals.brier;
        m.total_recal["logloss"] = recal_totals.logloss;
        for (const auto& loss : losses) {
            const std::string key = loss.kind == LossKind::Brier ? "brier" : "logloss";
            m.rel_recal[key] = reliability_hat(loss, recal_sample, recal_map);
            m.grp_recal[key] = grouping_hat(loss, recal_sample, recal_map);
        }
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace scoredecomp
