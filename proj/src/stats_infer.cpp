#include "scoredecomp/stats_infer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "scoredecomp/csv.hpp"
#include "scoredecomp/normal.hpp"
#include "scoredecomp/parallel.hpp"
#include "scoredecomp/rng.hpp"

namespace scoredecomp {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kStreamSplit = 23;
constexpr std::uint64_t kStreamBootstrap = 29;

class degenerate_replicate : public std::runtime_error {
public:
    degenerate_replicate() : std::runtime_error("single-class resample") {}
};

bool single_class(const std::vector<int>& y) {
    const auto pos = std::count(y.begin(), y.end(), 1);
    return pos == 0 || pos == static_cast<long>(y.size());
}

}  // namespace

SplitIndices split_data(std::size_t n, const std::array<double, 3>& fractions,
                        std::uint64_t seed) {
    double cum = 0.0;
    for (double f : fractions) {
        if (!(f > 0.0)) throw std::invalid_argument("split fractions must be positive");
        cum += f;
    }
    if (cum > 1.0 + 1e-9) throw std::invalid_argument("split fractions must sum to at most 1");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng rng(seed, kStreamSplit);
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[rng.next_below(i)]);

    const auto b1 = static_cast<std::size_t>(static_cast<double>(n) * fractions[0]);
    const auto b2 =
        static_cast<std::size_t>(static_cast<double>(n) * (fractions[0] + fractions[1]));
    const auto b3 = static_cast<std::size_t>(static_cast<double>(n) *
                                             (fractions[0] + fractions[1] + fractions[2]));
    SplitIndices out;
    out.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(b1));
    out.calib.assign(perm.begin() + static_cast<std::ptrdiff_t>(b1),
                     perm.begin() + static_cast<std::ptrdiff_t>(b2));
    out.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(b2),
                    perm.begin() + static_cast<std::ptrdiff_t>(b3));
    if (out.train.empty() || out.calib.empty() || out.test.empty())
        throw std::invalid_argument("a split is empty at this n");
    return out;
}

const std::vector<std::string>& pipeline_metric_names() {
    static const std::vector<std::string> names = {"brier_raw", "brier_recal", "logloss_raw",
                                                   "logloss_recal", "rel_brier", "rel_log",
                                                   "lcs"};
    return names;
}

namespace {

/// Base-model scores per method on the calibration and test splits.
struct PipelineScores {
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per_method;
    std::vector<int> y_calib, y_test;
};

std::vector<double> gather_scores(const LogisticModel& model, const SyntheticDataset& data,
                                  const std::vector<int>& features) {
    return predict_logistic(model, data, features);
}

PipelineScores build_scores(const PipelineSpec& spec, const SyntheticDataset& train,
                            const SyntheticDataset& calib, const SyntheticDataset& test) {
    if (single_class(train.y) || single_class(calib.y)) throw degenerate_replicate();
    PipelineScores out;
    out.y_calib = calib.y;
    out.y_test = test.y;

    const bool want_s1 = std::count(spec.methods.begin(), spec.methods.end(), "s1") > 0;
    const bool want_s2 = std::count(spec.methods.begin(), spec.methods.end(), "s2") > 0;
    const bool want_s12 = std::count(spec.methods.begin(), spec.methods.end(), "s12") > 0;
    const bool want_avg = std::count(spec.methods.begin(), spec.methods.end(), "average") > 0;
    const bool want_stack = std::count(spec.methods.begin(), spec.methods.end(), "stacking") > 0;

    std::vector<double> s1_c, s1_t, s2_c, s2_t;
    if (want_s1 || want_avg || want_stack) {
        const LogisticModel m1 = fit_logistic(train, {0});
        s1_c = gather_scores(m1, calib, {0});
        s1_t = gather_scores(m1, test, {0});
        if (want_s1) out.per_method["s1"] = {s1_c, s1_t};
    }
    if (want_s2 || want_avg || want_stack) {
        const LogisticModel m2 = fit_logistic(train, {1});
        s2_c = gather_scores(m2, calib, {1});
        s2_t = gather_scores(m2, test, {1});
        if (want_s2) out.per_method["s2"] = {s2_c, s2_t};
    }
    if (want_s12) {
        const LogisticModel m12 = fit_logistic(train, {0, 1});
        out.per_method["s12"] = {gather_scores(m12, calib, {0, 1}),
                                 gather_scores(m12, test, {0, 1})};
    }
    if (want_avg)
        out.per_method["average"] = {ensemble_average(s1_c, s2_c), ensemble_average(s1_t, s2_t)};
    if (want_stack) {
        const LogisticModel meta = ensemble_stack(s1_c, s2_c, calib.y);
        out.per_method["stacking"] = {meta.predict({s1_c, s2_c}), meta.predict({s1_t, s2_t})};
    }
    return out;
}

std::vector<double> method_metric_row(const std::vector<double>& calib_scores,
                                      const std::vector<int>& y_calib,
                                      const std::vector<double>& test_scores,
                                      const std::vector<int>& y_test,
                                      CalibratorMethod calibrator,
                                      const CalibratorConfig& config) {
    if (single_class(y_calib)) throw degenerate_replicate();
    const Calibrator chat = fit_calibrator(calibrator, calib_scores, y_calib, config);
    const CalibrationMap g = [&chat](double s) { return chat.predict(s); };

    const ScoredSample raw(test_scores, y_test);
    const MeanScores raw_scores = mean_scores(raw);
    std::vector<double> recal(test_scores.size());
    std::transform(test_scores.begin(), test_scores.end(), recal.begin(), g);
    const ScoredSample recal_sample(recal, y_test);
    const MeanScores recal_scores = mean_scores(recal_sample);

    return {raw_scores.brier,
            recal_scores.brier,
            raw_scores.logloss,
            recal_scores.logloss,
            reliability_hat(ProperLoss::brier(), raw, g),
            reliability_hat(ProperLoss::logloss(), raw, g),
            lcs(raw, g)};
}

SyntheticDataset resample(const SyntheticDataset& data, const std::vector<std::size_t>& pool,
                          CounterRng& rng) {
    std::vector<std::size_t> idx(pool.size());
    for (auto& i : idx) i = pool[rng.next_below(pool.size())];
    return data.subset(idx);
}

}  // namespace

std::map<std::string, std::vector<double>> run_pipeline_metrics(const PipelineSpec& spec,
                                                                std::uint64_t seed) {
    DGPConfig dgp = spec.dgp;
    dgp.seed = seed;
    const SyntheticDataset data = sample_dataset(dgp);
    const SplitIndices idx = split_data(data.size(), spec.fractions, seed);
    const SyntheticDataset train = data.subset(idx.train);
    const SyntheticDataset calib = data.subset(idx.calib);
    const SyntheticDataset test = data.subset(idx.test);
    const PipelineScores scores = build_scores(spec, train, calib, test);
    std::map<std::string, std::vector<double>> out;
    for (const auto& method : spec.methods) {
        const auto& [c, t] = scores.per_method.at(method);
        out[method] = method_metric_row(c, scores.y_calib, t, scores.y_test, spec.calibrator,
                                        spec.calibrator_config);
    }
    return out;
}

namespace {

BootstrapCell summarize_cell(std::vector<double> values) {
    BootstrapCell cell;
    const auto r = values.size();
    for (double v : values) cell.mean += v;
    cell.mean /= static_cast<double>(r);
    if (r > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - cell.mean) * (v - cell.mean);
        cell.sd = std::sqrt(ss / static_cast<double>(r - 1));
    }
    std::sort(values.begin(), values.end());
    auto quantile = [&values](double alpha) {
        const double pos = alpha * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    cell.lo = quantile(0.025);
    cell.hi = quantile(0.975);
    return cell;
}

}  // namespace

std::string BootstrapResult::to_json() const {
    ordered_json doc;
    doc["mode"] = mode;
    doc["replicates"] = replicates;
    doc["dropped"] = dropped;
    doc["seed"] = seed;
    ordered_json methods = ordered_json::object();
    for (const auto& [method, metrics] : cells) {
        ordered_json m = ordered_json::object();
        for (const auto& [metric, cell] : metrics) {
            ordered_json c;
            c["mean"] = cell.mean;
            c["sd"] = cell.sd;
            c["ci_lo"] = cell.lo;
            c["ci_hi"] = cell.hi;
            m[metric] = std::move(c);
        }
        methods[method] = std::move(m);
    }
    doc["methods"] = std::move(methods);
    return doc.dump(2);
}

BootstrapResult bootstrap_pipeline(const PipelineSpec& spec, BootstrapMode mode, int replicates,
                                   std::uint64_t seed) {
    if (replicates < 2) throw std::invalid_argument("bootstrap needs R >= 2");
    DGPConfig dgp = spec.dgp;
    dgp.seed = seed;
    const SyntheticDataset data = sample_dataset(dgp);
    const SplitIndices idx = split_data(data.size(), spec.fractions, seed);
    const SyntheticDataset train = data.subset(idx.train);
    const SyntheticDataset calib = data.subset(idx.calib);
    const SyntheticDataset test = data.subset(idx.test);

    // Base pipeline on the original splits; calibration-only mode keeps
    // these scores (and the stacking meta-model) fixed.
    const PipelineScores base = build_scores(spec, train, calib, test);

    std::vector<std::size_t> all_train(train.size()), all_calib(calib.size());
    std::iota(all_train.begin(), all_train.end(), 0);
    std::iota(all_calib.begin(), all_calib.end(), 0);

    struct ReplicateRow {
        bool ok = false;
        std::map<std::string, std::vector<double>> per_method;
    };
    std::vector<ReplicateRow> rows(static_cast<std::size_t>(replicates));
    parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t r) {
        CounterRng rng(seed + static_cast<std::uint64_t>(r) * 7919 + 1, kStreamBootstrap);
        ReplicateRow row;
        try {
            if (mode == BootstrapMode::CalibrationOnly) {
                std::vector<std::size_t> draw(calib.size());
                for (auto& i : draw) i = rng.next_below(calib.size());
                std::vector<int> y_calib(draw.size());
                for (std::size_t i = 0; i < draw.size(); ++i) y_calib[i] = calib.y[draw[i]];
                for (const auto& method : spec.methods) {
                    const auto& [c, t] = base.per_method.at(method);
                    std::vector<double> c_draw(draw.size());
                    for (std::size_t i = 0; i < draw.size(); ++i) c_draw[i] = c[draw[i]];
                    row.per_method[method] =
                        method_metric_row(c_draw, y_calib, t, base.y_test, spec.calibrator,
                                          spec.calibrator_config);
                }
            } else {
                const SyntheticDataset train_b = resample(train, all_train, rng);
                const SyntheticDataset calib_b = resample(calib, all_calib, rng);
                const PipelineScores scores = build_scores(spec, train_b, calib_b, test);
                for (const auto& method : spec.methods) {
                    const auto& [c, t] = scores.per_method.at(method);
                    row.per_method[method] =
                        method_metric_row(c, scores.y_calib, t, scores.y_test, spec.calibrator,
                                          spec.calibrator_config);
                }
            }
            row.ok = true;
        } catch (const degenerate_replicate&) {
            row.ok = false;
        } catch (const single_class_error&) {
            row.ok = false;
        }
        rows[r] = std::move(row);
    });

    BootstrapResult out;
    out.mode = mode == BootstrapMode::CalibrationOnly ? "calibration_only" : "end_to_end";
    out.replicates = replicates;
    out.seed = seed;
    const auto& names = pipeline_metric_names();
    for (const auto& method : spec.methods) {
        std::map<std::string, std::vector<double>> columns;
        for (const auto& row : rows) {
            if (!row.ok) continue;
            const auto& vals = row.per_method.at(method);
            for (std::size_t m = 0; m < names.size(); ++m) columns[names[m]].push_back(vals[m]);
        }
        for (auto& [metric, values] : columns)
            out.cells[method][metric] = summarize_cell(std::move(values));
    }
    out.dropped = replicates - static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                                              [](const auto& r) { return r.ok; }));
    return out;
}

std::string ReplicateTable::to_csv() const {
    std::ostringstream os;
    os << "method,seed";
    for (const auto& m : metrics) os << ',' << m;
    os << '\n';
    for (const auto& rows : methods)
        for (std::size_t r = 0; r < rows.rows.size(); ++r) {
            os << rows.method << ',' << rows.seeds[r];
            for (double v : rows.rows[r]) os << ',' << format_double(v);
            os << '\n';
        }
    return os.str();
}

ReplicateTable repeated_splits(const PipelineSpec& spec, int replicates,
                               std::uint64_t base_seed) {
    if (replicates < 1) throw std::invalid_argument("repeated_splits needs R >= 1");
    ReplicateTable table;
    table.metrics = pipeline_metric_names();
    for (const auto& method : spec.methods) {
        ReplicateTable::MethodRows rows;
        rows.method = method;
        rows.seeds.resize(static_cast<std::size_t>(replicates));
        rows.rows.resize(static_cast<std::size_t>(replicates));
        table.methods.push_back(std::move(rows));
    }
    std::vector<std::map<std::string, std::vector<double>>> results(
        static_cast<std::size_t>(replicates));
    parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t r) {
        results[r] = run_pipeline_metrics(spec, base_seed + r);
    });
    for (std::size_t r = 0; r < results.size(); ++r)
        for (auto& rows : table.methods) {
            rows.seeds[r] = base_seed + r;
            rows.rows[r] = results[r].at(rows.method);
        }
    return table;
}

TableSummary summarize(const ReplicateTable& table) {
    TableSummary out;
    for (const auto& rows : table.methods) {
        const auto r = rows.rows.size();
        for (std::size_t m = 0; m < table.metrics.size(); ++m) {
            SummaryCell cell;
            for (const auto& row : rows.rows) cell.mean += row[m];
            cell.mean /= static_cast<double>(r);
            if (r > 1) {
                double ss = 0.0;
                for (const auto& row : rows.rows)
                    ss += (row[m] - cell.mean) * (row[m] - cell.mean);
                cell.sd = std::sqrt(ss / static_cast<double>(r - 1));
            } else {
                cell.sd_defined = false;
            }
            out[rows.method][table.metrics[m]] = cell;
        }
    }
    return out;
}

std::string summary_to_json(const TableSummary& summary) {
    ordered_json doc = ordered_json::object();
    for (const auto& [method, metrics] : summary) {
        ordered_json m = ordered_json::object();
        for (const auto& [metric, cell] : metrics) {
            ordered_json c;
            c["mean"] = cell.mean;
            c["sd"] = cell.sd;
            c["sd_defined"] = cell.sd_defined;
            m[metric] = std::move(c);
        }
        doc[method] = std::move(m);
    }
    return doc.dump(2);
}

WilcoxonResult wilcoxon_one_sided(const std::vector<double>& deltas) {
    if (deltas.empty()) throw std::invalid_argument("wilcoxon needs nonempty deltas");
    std::vector<double> nz;
    for (double d : deltas)
        if (d != 0.0) nz.push_back(d);
    WilcoxonResult res;
    res.effective_n = static_cast<int>(nz.size());
    if (nz.empty()) {
        res.all_zero = true;
        res.p = 1.0;
        return res;
    }

    // Midranks of |deltas|.
    const auto n = nz.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(nz[a]) < std::abs(nz[b]); });
    std::vector<double> rank(n);
    double tie_correction = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(nz[order[j + 1]]) == std::abs(nz[order[i]])) ++j;
        const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        const double t = static_cast<double>(j - i + 1);
        tie_correction += t * t * t - t;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        i = j + 1;
    }

    double w_plus = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        if (nz[k] > 0.0) w_plus += rank[k];
    res.w_plus = w_plus;

    if (n <= 20) {
        res.exact = true;
        // Small-sample p by full enumeration of sign assignments.
        const std::uint64_t patterns = std::uint64_t{1} << n;
        std::uint64_t count = 0;
        for (std::uint64_t mask = 0; mask < patterns; ++mask) {
            double w = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                if (mask & (std::uint64_t{1} << k)) w += rank[k];
            if (w <= w_plus + 1e-9) ++count;
        }
        res.p = static_cast<double>(count) / static_cast<double>(patterns);
    } else {
        const double dn = static_cast<double>(n);
        const double mean = dn * (dn + 1.0) / 4.0;
        const double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_correction / 48.0;
        const double z = (w_plus - mean + 0.5) / std::sqrt(var);
        res.p = normal_cdf(z);
    }
    res.p = std::min(std::max(res.p, 1e-300), 1.0);
    return res;
}

std::vector<double> holm_correct(const std::vector<double>& pvals) {
    if (pvals.empty()) throw std::invalid_argument("holm_correct needs nonempty p-values");
    for (double p : pvals)
        if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p-values must lie in (0, 1]");
    const auto m = pvals.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double scaled =
            std::min(1.0, static_cast<double>(m - i) * pvals[order[i]]);
        running = std::max(running, scaled);
        adjusted[order[i]] = running;
    }
    return adjusted;
}

double win_rate(const std::vector<double>& deltas) {
    if (deltas.empty()) throw std::invalid_argument("win_rate needs nonempty deltas");
    const auto wins = std::count_if(deltas.begin(), deltas.end(), [](double d) { return d < 0.0; });
    return static_cast<double>(wins) / static_cast<double>(deltas.size());
}

std::vector<ComparisonRow> paired_comparison(const ReplicateTable& table,
                                             const std::string& reference,
                                             const std::vector<std::string>& metrics) {
    const ReplicateTable::MethodRows* ref = nullptr;
    for (const auto& rows : table.methods)
        if (rows.method == reference) ref = &rows;
    if (ref == nullptr) throw std::invalid_argument("reference method not in table: " + reference);
    for (const auto& rows : table.methods)
        if (rows.seeds != ref->seeds)
            throw std::invalid_argument("replicate seeds differ between methods; not paired");

    std::vector<ComparisonRow> out;
    for (const auto& metric : metrics) {
        const auto mit = std::find(table.metrics.begin(), table.metrics.end(), metric);
        if (mit == table.metrics.end())
            throw std::invalid_argument("metric not in table: " + metric);
        const auto m = static_cast<std::size_t>(mit - table.metrics.begin());

        std::vector<ComparisonRow> block;
        std::vector<double> raw_ps;
        for (const auto& rows : table.methods) {
            if (rows.method == reference) continue;
            std::vector<double> deltas(rows.rows.size());
            for (std::size_t r = 0; r < rows.rows.size(); ++r)
                deltas[r] = rows.rows[r][m] - ref->rows[r][m];
            ComparisonRow row;
            row.method = rows.method;
            row.metric = metric;
            for (double d : deltas) row.delta_mean += d;
            row.delta_mean /= static_cast<double>(deltas.size());
            if (deltas.size() > 1) {
                double ss = 0.0;
                for (double d : deltas) ss += (d - row.delta_mean) * (d - row.delta_mean);
                row.delta_sd = std::sqrt(ss / static_cast<double>(deltas.size() - 1));
            }
            row.win = win_rate(deltas);
            const auto test = wilcoxon_one_sided(deltas);
            row.p_raw = test.p;
            row.exact = test.exact;
            raw_ps.push_back(test.p);
            block.push_back(std::move(row));
        }
        if (!block.empty()) {
            const auto adjusted = holm_correct(raw_ps);
            for (std::size_t b = 0; b < block.size(); ++b) block[b].p_holm = adjusted[b];
        }
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream os;
    os << "method,metric,delta_mean,delta_sd,win_rate,p_raw,p_holm,exact\n";
    for (const auto& row : rows)
        os << row.method << ',' << row.metric << ',' << format_double(row.delta_mean) << ','
           << format_double(row.delta_sd) << ',' << format_double(row.win) << ','
           << format_double(row.p_raw) << ',' << format_double(row.p_holm) << ','
           << (row.exact ? "exact" : "normal") << '\n';
    return os.str();
}

}  // namespace scoredecomp
