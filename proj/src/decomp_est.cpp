#include "scoredecomp/decomp_est.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "scoredecomp/csv.hpp"

namespace scoredecomp {

namespace {

using ordered_json = nlohmann::ordered_json;

void require_nonempty(const ScoredSample& sample) {
    if (sample.size() == 0) throw std::invalid_argument("sample is empty");
}

void require_oracle(const ScoredSample& sample) {
    if (!sample.has_oracle()) throw std::invalid_argument("sample has no oracle probabilities");
}

std::string loss_key(const ProperLoss& loss) {
    return loss.kind == LossKind::Brier ? "brier" : "logloss";
}

}  // namespace

ScoredSample::ScoredSample(std::vector<double> s, std::vector<int> y, std::vector<double> q)
    : scores(std::move(s)), outcomes(std::move(y)), oracle_q(std::move(q)) {
    if (scores.size() != outcomes.size())
        throw std::invalid_argument("scores and outcomes must align");
    if (!oracle_q.empty() && oracle_q.size() != scores.size())
        throw std::invalid_argument("oracle probabilities must align with scores");
    for (double v : scores)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("score outside [0, 1]");
    for (int v : outcomes)
        if (v != 0 && v != 1) throw std::invalid_argument("outcome must be 0 or 1");
    for (double v : oracle_q)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("oracle_q outside [0, 1]");
}

CalibrationMap identity_map() {
    return [](double s) { return s; };
}

CalibrationMap exact_conditional_calibrator(const ScoredSample& sample) {
    require_nonempty(sample);
    std::vector<std::pair<double, std::pair<double, double>>> acc;  // score -> (sum, count)
    std::vector<std::size_t> order(sample.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sample.scores[a] < sample.scores[b]; });
    for (std::size_t i : order) {
        if (acc.empty() || sample.scores[i] != acc.back().first)
            acc.push_back({sample.scores[i], {0.0, 0.0}});
        acc.back().second.first += sample.outcomes[i];
        acc.back().second.second += 1.0;
    }
    std::vector<double> keys, means;
    keys.reserve(acc.size());
    means.reserve(acc.size());
    for (const auto& [s, sc] : acc) {
        keys.push_back(s);
        means.push_back(sc.first / sc.second);
    }
    return [keys = std::move(keys), means = std::move(means)](double s) {
        const auto it = std::lower_bound(keys.begin(), keys.end(), s);
        std::size_t idx;
        if (it == keys.end())
            idx = keys.size() - 1;
        else if (it == keys.begin())
            idx = 0;
        else {
            // Snap to the nearer neighbour, ties to the left.
            const auto hi = static_cast<std::size_t>(it - keys.begin());
            idx = (keys[hi] - s < s - keys[hi - 1]) ? hi : hi - 1;
        }
        return means[idx];
    };
}

namespace {

std::vector<double> apply_map(const ScoredSample& sample, const CalibrationMap& g) {
    std::vector<double> out(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) out[i] = g(sample.scores[i]);
    return out;
}

void check_calibrated(const ScoredSample& sample, const std::vector<double>& calibrated) {
    if (calibrated.size() != sample.size())
        throw std::invalid_argument("calibrated values must align with the sample");
}

}  // namespace

double reliability_hat(const ProperLoss& loss, const ScoredSample& sample,
                       const std::vector<double>& calibrated) {
    require_nonempty(sample);
    check_calibrated(sample, calibrated);
    double acc = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i)
        acc += binary_divergence(loss, sample.scores[i], calibrated[i]);
    return acc / static_cast<double>(sample.size());
}

double grouping_hat(const ProperLoss& loss, const ScoredSample& sample,
                    const std::vector<double>& calibrated) {
    require_nonempty(sample);
    require_oracle(sample);
    check_calibrated(sample, calibrated);
    double acc = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i)
        acc += binary_divergence(loss, calibrated[i], sample.oracle_q[i]);
    return acc / static_cast<double>(sample.size());
}

double lcs(const ScoredSample& sample, const std::vector<double>& calibrated) {
    require_nonempty(sample);
    check_calibrated(sample, calibrated);
    double acc = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double d = sample.scores[i] - calibrated[i];
        acc += d * d;
    }
    return acc / static_cast<double>(sample.size());
}

double ici(const ScoredSample& sample, const std::vector<double>& calibrated) {
    require_nonempty(sample);
    check_calibrated(sample, calibrated);
    double acc = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i)
        acc += std::abs(sample.scores[i] - calibrated[i]);
    return acc / static_cast<double>(sample.size());
}

double reliability_hat(const ProperLoss& loss, const ScoredSample& sample,
                       const CalibrationMap& calibrated) {
    return reliability_hat(loss, sample, apply_map(sample, calibrated));
}

double grouping_hat(const ProperLoss& loss, const ScoredSample& sample,
                    const CalibrationMap& calibrated) {
    return grouping_hat(loss, sample, apply_map(sample, calibrated));
}

double irreducible_hat(const ProperLoss& loss, const ScoredSample& sample) {
    require_nonempty(sample);
    require_oracle(sample);
    double acc = 0.0;
    for (double q : sample.oracle_q) acc += binary_entropy(loss, q);
    return acc / static_cast<double>(sample.size());
}

double lcs(const ScoredSample& sample, const CalibrationMap& g) {
    return lcs(sample, apply_map(sample, g));
}

double ici(const ScoredSample& sample, const CalibrationMap& g) {
    return ici(sample, apply_map(sample, g));
}

MeanScores mean_scores(const ScoredSample& sample) {
    require_nonempty(sample);
    const ProperLoss brier = ProperLoss::brier();
    const ProperLoss ll = ProperLoss::logloss();
    MeanScores out;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        out.brier += binary_pointwise_loss(brier, sample.scores[i], sample.outcomes[i]);
        out.logloss += binary_pointwise_loss(ll, sample.scores[i], sample.outcomes[i]);
        const double py = sample.outcomes[i] == 1 ? sample.scores[i] : 1.0 - sample.scores[i];
        if (py < ll.clamp_epsilon) ++out.logloss_clamped;
    }
    out.brier /= static_cast<double>(sample.size());
    out.logloss /= static_cast<double>(sample.size());
    return out;
}

std::vector<DiagramBin> reliability_diagram(const ScoredSample& sample, int bins) {
    require_nonempty(sample);
    const auto n = sample.size();
    if (bins < 1) throw std::invalid_argument("bin count must be >= 1");
    if (static_cast<std::size_t>(bins) > n)
        throw std::invalid_argument("more bins than sample points");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sample.scores[a] < sample.scores[b];
    });

    std::vector<DiagramBin> out;
    std::size_t start = 0;
    for (int b = 0; b < bins && start < n; ++b) {
        std::size_t end = (b + 1 == bins)
                              ? n
                              : static_cast<std::size_t>(static_cast<double>(n) *
                                                         static_cast<double>(b + 1) /
                                                         static_cast<double>(bins));
        if (end <= start) end = start + 1;
        // Ties never straddle a bin boundary; extend to cover the whole run.
        while (end < n &&
               sample.scores[order[end]] == sample.scores[order[end - 1]])
            ++end;
        DiagramBin bin;
        for (std::size_t i = start; i < end; ++i) {
            bin.mass += 1.0;
            bin.mean_score += (sample.scores[order[i]] - bin.mean_score) / bin.mass;
            bin.emp_freq +=
                (static_cast<double>(sample.outcomes[order[i]]) - bin.emp_freq) / bin.mass;
        }
        out.push_back(bin);
        start = end;
    }
    return out;
}

std::string diagram_to_csv(const std::vector<DiagramBin>& bins) {
    std::ostringstream os;
    os << "bin,mean_score,emp_freq,mass\n";
    for (std::size_t b = 0; b < bins.size(); ++b)
        os << b << ',' << format_double(bins[b].mean_score) << ','
           << format_double(bins[b].emp_freq) << ',' << format_double(bins[b].mass) << '\n';
    return os.str();
}

std::string DecompositionReport::to_json() const {
    ordered_json doc;
    ordered_json losses = ordered_json::object();
    for (const auto& [key, comp] : per_loss) {
        ordered_json c;
        c["reliability"] = comp.reliability;
        if (comp.grouping) c["grouping"] = *comp.grouping;
        if (comp.irreducible) c["irreducible"] = *comp.irreducible;
        c["total"] = comp.total;
        if (comp.residual) c["residual"] = *comp.residual;
        losses[key] = std::move(c);
    }
    doc["losses"] = std::move(losses);
    ordered_json meta;
    meta["calibrator"] = metadata.calibrator;
    meta["fit_protocol"] = metadata.fit_protocol;
    meta["split_sizes"] = metadata.split_sizes;
    meta["seed"] = metadata.seed;
    meta["logloss_clamped"] = metadata.logloss_clamped;
    meta["log_base"] = metadata.log_base;
    doc["metadata"] = std::move(meta);
    return doc.dump(2);
}

DecompositionReport decompose_sample(const ScoredSample& sample,
                                     const std::vector<double>& calibrated,
                                     const std::vector<ProperLoss>& losses,
                                     ReportMetadata metadata) {
    require_nonempty(sample);
    check_calibrated(sample, calibrated);
    DecompositionReport report;
    const MeanScores totals = mean_scores(sample);
    metadata.logloss_clamped = totals.logloss_clamped;
    for (const auto& loss : losses) {
        LossComponents comp;
        comp.reliability = reliability_hat(loss, sample, calibrated);
        comp.total = loss.kind == LossKind::Brier ? totals.brier : totals.logloss;
        if (sample.has_oracle()) {
            comp.grouping = grouping_hat(loss, sample, calibrated);
            comp.irreducible = irreducible_hat(loss, sample);
            comp.residual = comp.total - (comp.reliability + *comp.grouping + *comp.irreducible);
        }
        report.per_loss[loss_key(loss)] = comp;
    }
    report.metadata = std::move(metadata);
    return report;
}

DecompositionReport decompose_sample(const ScoredSample& sample, const CalibrationMap& calibrated,
                                     const std::vector<ProperLoss>& losses,
                                     ReportMetadata metadata) {
    return decompose_sample(sample, apply_map(sample, calibrated), losses, std::move(metadata));
}

}  // namespace scoredecomp
