// Command-line front end: decomposition reports on score files, the
// synthetic experiment sweep, the miscalibrated-average counterexample,
// filtration demos, robustness tables, and the exact identity suite.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scoredecomp/csv.hpp"
#include "scoredecomp/decomp_est.hpp"
#include "scoredecomp/finite_world.hpp"
#include "scoredecomp/losses.hpp"
#include "scoredecomp/recalib.hpp"
#include "scoredecomp/rng.hpp"
#include "scoredecomp/stats_infer.hpp"
#include "scoredecomp/synthgen.hpp"

namespace sd = scoredecomp;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Loads the JSON config (if --config appears anywhere) and rejects keys
/// outside the allowed set for the active command.
nlohmann::json load_config(int argc, char** argv, const std::set<std::string>& allowed) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg(argv[i]);
        if (arg == "--config" && i + 1 < argc)
            path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0)
            path = arg.substr(9);
    }
    if (path.empty()) return nlohmann::json::object();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(sd::read_text_file(path));
    } catch (const std::exception& e) {
        throw config_error(std::string("config file: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("config file must hold a JSON object");
    for (const auto& [key, value] : doc.items())
        if (!allowed.count(key)) throw config_error("unknown config key: " + key);
    return doc;
}

std::vector<sd::ProperLoss> losses_from_flag(const std::string& flag) {
    if (flag == "brier") return {sd::ProperLoss::brier()};
    if (flag == "logloss") return {sd::ProperLoss::logloss()};
    if (flag == "both") return {sd::ProperLoss::brier(), sd::ProperLoss::logloss()};
    throw config_error("loss must be brier, logloss or both");
}

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

// ---------------------------------------------------------------------------
// decompose

struct DecomposeArgs {
    std::string input;
    std::string calibrator = "isotonic";
    std::string loss = "both";
    int folds = 5;
    int bins = 10;
    bool exact_calibrator = false;
    std::string calibrator_file;
    std::string save_calibrator;
    std::uint64_t seed = 1;
    std::string out = ".";
};

int run_decompose(const DecomposeArgs& args) {
    const sd::ScoredSample sample = sd::read_score_file(args.input);
    const int pos = static_cast<int>(
        std::count(sample.outcomes.begin(), sample.outcomes.end(), 1));
    if (pos == 0 || pos == static_cast<int>(sample.size()))
        throw sd::single_class_error("score file holds a single outcome class");

    const auto losses = losses_from_flag(args.loss);
    const sd::CalibratorMethod method = sd::method_from_name(args.calibrator);

    sd::ScoredSample eval = sample;
    std::vector<double> calibrated(sample.size());
    sd::ReportMetadata meta;
    meta.seed = args.seed;
    meta.calibrator = args.calibrator;

    if (args.exact_calibrator) {
        const auto exact = sd::exact_conditional_calibrator(sample);
        for (std::size_t i = 0; i < sample.size(); ++i) calibrated[i] = exact(sample.scores[i]);
        meta.calibrator = "exact";
        meta.fit_protocol = "population";
        meta.split_sizes = {sample.size()};
    } else if (!args.calibrator_file.empty()) {
        const auto loaded = sd::Calibrator::from_json(sd::read_text_file(args.calibrator_file));
        for (std::size_t i = 0; i < sample.size(); ++i)
            calibrated[i] = loaded.predict(sample.scores[i]);
        meta.calibrator = sd::method_name(loaded.method());
        meta.fit_protocol = "preloaded";
        meta.split_sizes = {sample.size()};
    } else if (args.folds >= 2) {
        // K-fold cross-fitting over a seeded permutation.
        const auto n = sample.size();
        if (static_cast<std::size_t>(args.folds) > n)
            throw config_error("more folds than rows");
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        sd::CounterRng rng(args.seed, 41);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_below(i)]);
        for (int f = 0; f < args.folds; ++f) {
            std::vector<double> fit_s;
            std::vector<int> fit_y;
            std::vector<std::size_t> hold;
            for (std::size_t r = 0; r < n; ++r) {
                if (static_cast<int>(r % static_cast<std::size_t>(args.folds)) == f)
                    hold.push_back(perm[r]);
                else {
                    fit_s.push_back(sample.scores[perm[r]]);
                    fit_y.push_back(sample.outcomes[perm[r]]);
                }
            }
            const auto fold_fit = sd::fit_calibrator(method, fit_s, fit_y);
            for (std::size_t i : hold) calibrated[i] = fold_fit.predict(sample.scores[i]);
        }
        meta.fit_protocol = "cross_fit_" + std::to_string(args.folds);
        meta.split_sizes = {n};
    } else {
        // Single split: fit on the first half of a seeded permutation,
        // evaluate on the rest.
        const auto n = sample.size();
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        sd::CounterRng rng(args.seed, 41);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_below(i)]);
        const std::size_t half = n / 2;
        if (half == 0 || half == n) throw config_error("sample too small for a split");
        std::vector<double> fit_s;
        std::vector<int> fit_y;
        for (std::size_t r = 0; r < half; ++r) {
            fit_s.push_back(sample.scores[perm[r]]);
            fit_y.push_back(sample.outcomes[perm[r]]);
        }
        const auto split_fit = sd::fit_calibrator(method, fit_s, fit_y);
        std::vector<double> es, eq;
        std::vector<int> ey;
        for (std::size_t r = half; r < n; ++r) {
            es.push_back(sample.scores[perm[r]]);
            ey.push_back(sample.outcomes[perm[r]]);
            if (sample.has_oracle()) eq.push_back(sample.oracle_q[perm[r]]);
        }
        eval = sd::ScoredSample(std::move(es), std::move(ey), std::move(eq));
        calibrated.resize(eval.size());
        for (std::size_t i = 0; i < eval.size(); ++i)
            calibrated[i] = split_fit.predict(eval.scores[i]);
        meta.fit_protocol = "split";
        meta.split_sizes = {half, n - half};
    }

    const auto report = sd::decompose_sample(eval, calibrated, losses, meta);
    sd::write_text_file(out_path(args.out, "decomposition.json"), report.to_json());
    const auto diagram = sd::reliability_diagram(eval, std::min<int>(args.bins,
                                                                     static_cast<int>(eval.size())));
    sd::write_text_file(out_path(args.out, "reliability_diagram.csv"),
                        sd::diagram_to_csv(diagram));

    if (!args.save_calibrator.empty()) {
        const auto full_fit = sd::fit_calibrator(method, sample.scores, sample.outcomes);
        sd::write_text_file(args.save_calibrator, full_fit.to_json());
    }
    std::cout << report.to_json() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
    std::vector<double> rho;
    std::size_t n = 10000;
    std::uint64_t seed = 1;
    std::string calibrator = "isotonic";
    std::string surface = "main";
    int quant_levels = 8;
    std::string out = ".";
};

const char* kSynthHeader =
    "rho,variant,lcs_raw,lcs_recal,ici_raw,auc_raw,auc_recal,"
    "brier_rel_raw,brier_grp_raw,brier_irr,brier_total_raw,"
    "brier_rel_recal,brier_grp_recal,brier_total_recal,"
    "logloss_rel_raw,logloss_grp_raw,logloss_irr,logloss_total_raw,"
    "logloss_rel_recal,logloss_grp_recal,logloss_total_recal";

int run_synth(const SynthArgs& args) {
    std::vector<double> rhos = args.rho;
    if (rhos.empty())
        for (int i = -9; i <= 9; ++i) rhos.push_back(static_cast<double>(i) / 10.0);

    std::ostringstream csv;
    csv << kSynthHeader << '\n';
    // Per-variant across-rho means of the headline columns.
    std::map<std::string, std::map<std::string, double>> sums;
    std::map<std::string, int> counts;
    for (std::size_t r = 0; r < rhos.size(); ++r) {
        sd::SynthExperimentConfig cfg;
        cfg.dgp.rho = rhos[r];
        cfg.dgp.n = args.n;
        cfg.dgp.seed = args.seed + r;
        cfg.dgp.surface =
            args.surface == "appendix_sim" ? sd::Surface::AppendixSim : sd::Surface::Main;
        cfg.calibrator = sd::method_from_name(args.calibrator);
        cfg.quantize_levels = args.quant_levels;
        const auto metrics = sd::run_synth_experiment(cfg);
        for (const auto& m : metrics) {
            csv << sd::format_double(rhos[r]) << ',' << m.variant;
            const double cols[] = {m.lcs_raw,
                                   m.lcs_recal,
                                   m.ici_raw,
                                   m.auc_raw,
                                   m.auc_recal,
                                   m.rel_raw.at("brier"),
                                   m.grp_raw.at("brier"),
                                   m.irr.at("brier"),
                                   m.total_raw.at("brier"),
                                   m.rel_recal.at("brier"),
                                   m.grp_recal.at("brier"),
                                   m.total_recal.at("brier"),
                                   m.rel_raw.at("logloss"),
                                   m.grp_raw.at("logloss"),
                                   m.irr.at("logloss"),
                                   m.total_raw.at("logloss"),
                                   m.rel_recal.at("logloss"),
                                   m.grp_recal.at("logloss"),
                                   m.total_recal.at("logloss")};
            for (double c : cols) csv << ',' << sd::format_double(c);
            csv << '\n';
            sums[m.variant]["lcs_raw"] += m.lcs_raw;
            sums[m.variant]["lcs_recal"] += m.lcs_recal;
            sums[m.variant]["brier_rel_raw"] += m.rel_raw.at("brier");
            sums[m.variant]["brier_grp_raw"] += m.grp_raw.at("brier");
            counts[m.variant] += 1;
        }
    }
    sd::write_text_file(out_path(args.out, "synth_metrics.csv"), csv.str());

    ordered_json summary = ordered_json::object();
    for (const auto& [variant, cols] : sums) {
        ordered_json v = ordered_json::object();
        for (const auto& [name, total] : cols) v[name] = total / counts.at(variant);
        summary[variant] = std::move(v);
    }
    sd::write_text_file(out_path(args.out, "synth_summary.json"), summary.dump(2));
    std::cout << "synth: wrote " << rhos.size() << " rho cells to " << args.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// counterexample

int run_counterexample() {
    const auto fix = sd::counterexample_average();
    const sd::ProperLoss brier = sd::ProperLoss::brier();

    const auto law_s1 = sd::conditional_law(fix.space, fix.part_s1);
    const auto law_avg = sd::conditional_law(fix.space, fix.part_avg);
    std::cout << "Two calibrated scores whose average is miscalibrated\n";
    std::cout << "component s1: E[Y|s1=0.25] = "
              << sd::format_double(law_s1.value_of_block[0].positive())
              << ", E[Y|s1=0.75] = " << sd::format_double(law_s1.value_of_block[1].positive())
              << "\n";
    const auto law_s2 = sd::conditional_law(fix.space, fix.part_s2);
    std::cout << "component s2: E[Y|s2=0.25] = "
              << sd::format_double(law_s2.value_of_block[0].positive())
              << ", E[Y|s2=0.75] = " << sd::format_double(law_s2.value_of_block[1].positive())
              << "\n";
    std::cout << "average:      E[Y|avg=0.25] = "
              << sd::format_double(law_avg.value_of_block[0].positive())
              << ", E[Y|avg=0.5] = " << sd::format_double(law_avg.value_of_block[1].positive())
              << ", E[Y|avg=0.75] = " << sd::format_double(law_avg.value_of_block[2].positive())
              << "\n";

    const double rel_s1 = sd::one_level_decompose(fix.space, fix.part_s1, fix.s1, brier).regret;
    const double rel_s2 = sd::one_level_decompose(fix.space, fix.part_s2, fix.s2, brier).regret;
    const double rel_avg = sd::one_level_decompose(fix.space, fix.part_avg, fix.avg, brier).regret;
    std::cout << "brier reliability: s1 = " << sd::format_double(rel_s1)
              << ", s2 = " << sd::format_double(rel_s2)
              << ", average = " << sd::format_double(rel_avg) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// boost

struct BoostArgs {
    int depth = 3;
    int atoms = 8;
    std::uint64_t seed = 1;
    std::string out = ".";
};

int run_boost(const BoostArgs& args) {
    const auto demo = sd::boosting_demo(args.atoms, args.depth, args.seed);
    std::ostringstream csv;
    csv << "stage,brier_risk,brier_gain,logloss_gain,mutual_info\n";
    for (std::size_t t = 0; t < demo.stages.size(); ++t) {
        const auto& s = demo.stages[t];
        csv << t << ',' << sd::format_double(s.brier_risk) << ','
            << sd::format_double(s.brier_gain) << ',' << sd::format_double(s.logloss_gain) << ','
            << sd::format_double(s.mutual_info) << '\n';
    }
    sd::write_text_file(out_path(args.out, "boost_stages.csv"), csv.str());
    std::cout << csv.str();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// robustness

struct RobustnessArgs {
    int replicates = 50;
    std::size_t n = 2000;
    double rho = 0.0;
    std::uint64_t seed = 1;
    std::string calibrator = "isotonic";
    std::string reference = "average";
    std::string out = ".";
};

int run_robustness(const RobustnessArgs& args) {
    sd::PipelineSpec spec;
    spec.dgp.rho = args.rho;
    spec.dgp.n = args.n;
    spec.calibrator = sd::method_from_name(args.calibrator);
    const auto table = sd::repeated_splits(spec, args.replicates, args.seed);
    sd::write_text_file(out_path(args.out, "replicates.csv"), table.to_csv());
    const auto summary = sd::summarize(table);
    sd::write_text_file(out_path(args.out, "robustness_summary.json"),
                        sd::summary_to_json(summary));
    const auto comparison =
        sd::paired_comparison(table, args.reference, {"logloss_recal", "rel_log"});
    sd::write_text_file(out_path(args.out, "comparison.csv"), sd::comparison_to_csv(comparison));
    std::cout << sd::comparison_to_csv(comparison);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// identities

int run_identities(int count, std::uint64_t seed) {
    const auto res = sd::identity_sweep(count, seed);
    std::cout << "identity residuals over " << res.spaces << " random spaces\n";
    std::cout << "one_level:       " << sd::format_double(res.max_one_level) << "\n";
    std::cout << "chain:           " << sd::format_double(res.max_chain) << "\n";
    std::cout << "four_term:       " << sd::format_double(res.max_four_term) << "\n";
    std::cout << "urc:             " << sd::format_double(res.max_urc) << "\n";
    std::cout << "telescope:       " << sd::format_double(res.max_telescope) << "\n";
    std::cout << "tower:           " << sd::format_double(res.max_tower) << "\n";
    std::cout << "total_variance:  " << sd::format_double(res.max_total_variance_gap) << "\n";
    std::cout << "info_gain:       " << sd::format_double(res.max_info_gap) << "\n";
    std::cout << "max_residual:    " << sd::format_double(res.max_residual()) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proper-loss decompositions of probabilistic scores"};
    app.require_subcommand(1);

    DecomposeArgs dec;
    SynthArgs synth;
    BoostArgs boost;
    RobustnessArgs robust;
    int id_count = 100;
    std::uint64_t id_seed = 1;
    std::string config_path;  // consumed in load_config; registered so CLI11 accepts it

    auto* cmd_dec = app.add_subcommand("decompose", "decomposition report for a score CSV");
    cmd_dec->add_option("--input", dec.input, "CSV with header score,outcome[,oracle_q]")
        ->required();
    cmd_dec->add_option("--calibrator", dec.calibrator, "isotonic|platt|spline|binned");
    cmd_dec->add_option("--loss", dec.loss, "brier|logloss|both");
    cmd_dec->add_option("--folds", dec.folds, "K-fold cross-fitting (1 = single split)");
    cmd_dec->add_option("--bins", dec.bins, "reliability diagram bins");
    cmd_dec->add_flag("--exact-calibrator", dec.exact_calibrator,
                      "population conditional means per distinct score");
    cmd_dec->add_option("--calibrator-file", dec.calibrator_file, "load a saved calibrator JSON");
    cmd_dec->add_option("--save-calibrator", dec.save_calibrator,
                        "fit on the whole file and save JSON here");
    cmd_dec->add_option("--seed", dec.seed, "fold assignment seed");
    cmd_dec->add_option("--out", dec.out, "output directory");
    cmd_dec->add_option("--config", config_path, "JSON config file");

    auto* cmd_synth = app.add_subcommand("synth", "synthetic experiment sweep over rho");
    cmd_synth->add_option("--rho", synth.rho, "rho values (default -0.9..0.9 step 0.1)");
    cmd_synth->add_option("--n", synth.n, "samples per split");
    cmd_synth->add_option("--seed", synth.seed, "base seed");
    cmd_synth->add_option("--calibrator", synth.calibrator, "isotonic|platt|spline|binned");
    cmd_synth->add_option("--surface", synth.surface, "main|appendix_sim");
    cmd_synth->add_option("--quant-levels", synth.quant_levels, "quantization cells");
    cmd_synth->add_option("--out", synth.out, "output directory");
    cmd_synth->add_option("--config", config_path, "JSON config file");

    auto* cmd_ce = app.add_subcommand("counterexample",
                                      "calibrated components, miscalibrated average");

    auto* cmd_boost = app.add_subcommand("boost", "telescoping gains along a random filtration");
    cmd_boost->add_option("--depth", boost.depth, "number of refinement steps");
    cmd_boost->add_option("--atoms", boost.atoms, "atoms of the random space");
    cmd_boost->add_option("--seed", boost.seed, "seed");
    cmd_boost->add_option("--out", boost.out, "output directory");
    cmd_boost->add_option("--config", config_path, "JSON config file");

    auto* cmd_rob = app.add_subcommand("robustness", "repeated splits and paired comparisons");
    cmd_rob->add_option("--R", robust.replicates, "replicates");
    cmd_rob->add_option("--n", robust.n, "total sample size per replicate");
    cmd_rob->add_option("--rho", robust.rho, "copula correlation");
    cmd_rob->add_option("--seed", robust.seed, "base seed");
    cmd_rob->add_option("--calibrator", robust.calibrator, "isotonic|platt|spline|binned");
    cmd_rob->add_option("--reference", robust.reference, "reference method");
    cmd_rob->add_option("--out", robust.out, "output directory");
    cmd_rob->add_option("--config", config_path, "JSON config file");

    auto* cmd_id = app.add_subcommand("identities", "exact identity suite on random spaces");
    cmd_id->add_option("--count", id_count, "number of random spaces");
    cmd_id->add_option("--seed", id_seed, "seed");

    try {
        // Config file values become defaults; explicit flags then override
        // them during the normal parse.
        app.parse(argc, argv);

        if (cmd_dec->parsed()) {
            const auto cfg = load_config(argc, argv,
                                         {"input", "calibrator", "loss", "folds", "bins", "seed",
                                          "out"});
            if (cmd_dec->count("--input") == 0 && cfg.contains("input"))
                dec.input = cfg["input"].get<std::string>();
            if (cmd_dec->count("--calibrator") == 0 && cfg.contains("calibrator"))
                dec.calibrator = cfg["calibrator"].get<std::string>();
            if (cmd_dec->count("--loss") == 0 && cfg.contains("loss"))
                dec.loss = cfg["loss"].get<std::string>();
            if (cmd_dec->count("--folds") == 0 && cfg.contains("folds"))
                dec.folds = cfg["folds"].get<int>();
            if (cmd_dec->count("--bins") == 0 && cfg.contains("bins"))
                dec.bins = cfg["bins"].get<int>();
            if (cmd_dec->count("--seed") == 0 && cfg.contains("seed"))
                dec.seed = cfg["seed"].get<std::uint64_t>();
            if (cmd_dec->count("--out") == 0 && cfg.contains("out"))
                dec.out = cfg["out"].get<std::string>();
            return run_decompose(dec);
        }
        if (cmd_synth->parsed()) {
            const auto cfg = load_config(argc, argv,
                                         {"rho", "n", "seed", "calibrator", "surface",
                                          "quant_levels", "out"});
            if (cmd_synth->count("--rho") == 0 && cfg.contains("rho"))
                synth.rho = cfg["rho"].get<std::vector<double>>();
            if (cmd_synth->count("--n") == 0 && cfg.contains("n"))
                synth.n = cfg["n"].get<std::size_t>();
            if (cmd_synth->count("--seed") == 0 && cfg.contains("seed"))
                synth.seed = cfg["seed"].get<std::uint64_t>();
            if (cmd_synth->count("--calibrator") == 0 && cfg.contains("calibrator"))
                synth.calibrator = cfg["calibrator"].get<std::string>();
            if (cmd_synth->count("--surface") == 0 && cfg.contains("surface"))
                synth.surface = cfg["surface"].get<std::string>();
            if (cmd_synth->count("--quant-levels") == 0 && cfg.contains("quant_levels"))
                synth.quant_levels = cfg["quant_levels"].get<int>();
            if (cmd_synth->count("--out") == 0 && cfg.contains("out"))
                synth.out = cfg["out"].get<std::string>();
            if (synth.surface != "main" && synth.surface != "appendix_sim")
                throw config_error("surface must be main or appendix_sim");
            return run_synth(synth);
        }
        if (cmd_ce->parsed()) return run_counterexample();
        if (cmd_boost->parsed()) {
            const auto cfg = load_config(argc, argv, {"depth", "atoms", "seed", "out"});
            if (cmd_boost->count("--depth") == 0 && cfg.contains("depth"))
                boost.depth = cfg["depth"].get<int>();
            if (cmd_boost->count("--atoms") == 0 && cfg.contains("atoms"))
                boost.atoms = cfg["atoms"].get<int>();
            if (cmd_boost->count("--seed") == 0 && cfg.contains("seed"))
                boost.seed = cfg["seed"].get<std::uint64_t>();
            if (cmd_boost->count("--out") == 0 && cfg.contains("out"))
                boost.out = cfg["out"].get<std::string>();
            return run_boost(boost);
        }
        if (cmd_rob->parsed()) {
            const auto cfg = load_config(argc, argv,
                                         {"R", "n", "rho", "seed", "calibrator", "reference",
                                          "out"});
            if (cmd_rob->count("--R") == 0 && cfg.contains("R"))
                robust.replicates = cfg["R"].get<int>();
            if (cmd_rob->count("--n") == 0 && cfg.contains("n"))
                robust.n = cfg["n"].get<std::size_t>();
            if (cmd_rob->count("--rho") == 0 && cfg.contains("rho"))
                robust.rho = cfg["rho"].get<double>();
            if (cmd_rob->count("--seed") == 0 && cfg.contains("seed"))
                robust.seed = cfg["seed"].get<std::uint64_t>();
            if (cmd_rob->count("--calibrator") == 0 && cfg.contains("calibrator"))
                robust.calibrator = cfg["calibrator"].get<std::string>();
            if (cmd_rob->count("--reference") == 0 && cfg.contains("reference"))
                robust.reference = cfg["reference"].get<std::string>();
            if (cmd_rob->count("--out") == 0 && cfg.contains("out"))
                robust.out = cfg["out"].get<std::string>();
            return run_robustness(robust);
        }
        if (cmd_id->parsed()) return run_identities(id_count, id_seed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitInput;
    } catch (const sd::single_class_error& e) {
        std::cerr << "degenerate data: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const sd::csv_format_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
