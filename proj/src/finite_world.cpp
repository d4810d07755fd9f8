#include "scoredecomp/finite_world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace scoredecomp {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_partition_matches(const FiniteSpace& space, const Partition& partition) {
    if (partition.n_atoms() != space.n_atoms())
        throw std::invalid_argument("partition does not cover the space's atoms");
}

void check_predictor_matches(const Partition& partition, const BlockPredictor& T,
                             const FiniteSpace& space) {
    if (T.block_count() != partition.block_count)
        throw std::invalid_argument("predictor not declared against this partition");
    for (const auto& p : T.value_of_block)
        if (p.size() != space.n_labels())
            throw std::invalid_argument("predictor label dimension mismatch");
}

void check_nested(const Partition& coarse, const Partition& fine) {
    if (!coarse.coarser_than(fine))
        throw std::invalid_argument("partitions are not nested");
}

std::vector<double> block_masses(const FiniteSpace& space, const Partition& partition) {
    std::vector<double> mass(static_cast<std::size_t>(partition.block_count), 0.0);
    for (int w = 0; w < space.n_atoms(); ++w)
        mass[static_cast<std::size_t>(partition.block_of_atom[static_cast<std::size_t>(w)])] +=
            space.atom_probs[static_cast<std::size_t>(w)];
    return mass;
}

/// E[d(F, G)] where F lives on partA and G on partB, integrated atom-wise.
double expected_divergence(const FiniteSpace& space, const Partition& partA,
                           const BlockPredictor& F, const Partition& partB,
                           const BlockPredictor& G, const ProperLoss& loss) {
    double acc = 0.0;
    for (int w = 0; w < space.n_atoms(); ++w) {
        const auto& p = F.value_of_block[static_cast<std::size_t>(
            partA.block_of_atom[static_cast<std::size_t>(w)])];
        const auto& q = G.value_of_block[static_cast<std::size_t>(
            partB.block_of_atom[static_cast<std::size_t>(w)])];
        acc += space.atom_probs[static_cast<std::size_t>(w)] * divergence(loss, p, q);
    }
    return acc;
}

double expected_entropy(const FiniteSpace& space, const Partition& partition,
                        const BlockPredictor& Q, const ProperLoss& loss) {
    const auto mass = block_masses(space, partition);
    double acc = 0.0;
    for (int b = 0; b < partition.block_count; ++b)
        acc += mass[static_cast<std::size_t>(b)] *
               entropy(loss, Q.value_of_block[static_cast<std::size_t>(b)]);
    return acc;
}

}  // namespace

FiniteSpace::FiniteSpace(std::vector<double> probs, std::vector<ProbVector> rows)
    : atom_probs(std::move(probs)), chance(std::move(rows)) {
    if (atom_probs.empty() || atom_probs.size() != chance.size())
        throw std::invalid_argument("FiniteSpace needs one chance row per atom");
    double sum = 0.0;
    for (double p : atom_probs) {
        if (!(p > 0.0)) throw std::invalid_argument("atom probabilities must be positive");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("atom probabilities must sum to 1");
    for (const auto& row : chance)
        if (row.size() != chance.front().size())
            throw std::invalid_argument("chance rows must share one label set");
}

ProbVector FiniteSpace::marginal() const {
    std::vector<double> m(static_cast<std::size_t>(n_labels()), 0.0);
    for (int w = 0; w < n_atoms(); ++w)
        for (int y = 0; y < n_labels(); ++y)
            m[static_cast<std::size_t>(y)] += atom_probs[static_cast<std::size_t>(w)] *
                                              chance[static_cast<std::size_t>(w)][y];
    return ProbVector(std::move(m));
}

Partition::Partition(std::vector<int> blocks, int count)
    : block_of_atom(std::move(blocks)), block_count(count) {
    if (block_of_atom.empty() || block_count <= 0)
        throw std::invalid_argument("partition must have atoms and blocks");
    std::vector<bool> seen(static_cast<std::size_t>(block_count), false);
    for (int b : block_of_atom) {
        if (b < 0 || b >= block_count)
            throw std::invalid_argument("block index out of range");
        seen[static_cast<std::size_t>(b)] = true;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }))
        throw std::invalid_argument("partition has an empty block");
}

Partition Partition::trivial(int n_atoms) {
    return Partition(std::vector<int>(static_cast<std::size_t>(n_atoms), 0), 1);
}

Partition Partition::discrete(int n_atoms) {
    std::vector<int> blocks(static_cast<std::size_t>(n_atoms));
    std::iota(blocks.begin(), blocks.end(), 0);
    return Partition(std::move(blocks), n_atoms);
}

bool Partition::coarser_than(const Partition& finer) const {
    if (finer.n_atoms() != n_atoms()) return false;
    // Each fine block must map into a single coarse block.
    std::vector<int> coarse_of_fine(static_cast<std::size_t>(finer.block_count), -1);
    for (int w = 0; w < n_atoms(); ++w) {
        const auto fb = static_cast<std::size_t>(finer.block_of_atom[static_cast<std::size_t>(w)]);
        const int cb = block_of_atom[static_cast<std::size_t>(w)];
        if (coarse_of_fine[fb] == -1)
            coarse_of_fine[fb] = cb;
        else if (coarse_of_fine[fb] != cb)
            return false;
    }
    return true;
}

BlockPredictor BlockPredictor::constant(const ProbVector& p, int blocks) {
    return BlockPredictor{std::vector<ProbVector>(static_cast<std::size_t>(blocks), p)};
}

BlockPredictor conditional_law(const FiniteSpace& space, const Partition& partition) {
    check_partition_matches(space, partition);
    const int K = space.n_labels();
    std::vector<std::vector<double>> acc(static_cast<std::size_t>(partition.block_count),
                                         std::vector<double>(static_cast<std::size_t>(K), 0.0));
    const auto mass = block_masses(space, partition);
    for (int w = 0; w < space.n_atoms(); ++w) {
        const auto b = static_cast<std::size_t>(partition.block_of_atom[static_cast<std::size_t>(w)]);
        for (int y = 0; y < K; ++y)
            acc[b][static_cast<std::size_t>(y)] += space.atom_probs[static_cast<std::size_t>(w)] *
                                                   space.chance[static_cast<std::size_t>(w)][y];
    }
    BlockPredictor out;
    out.value_of_block.reserve(acc.size());
    for (int b = 0; b < partition.block_count; ++b) {
        auto& row = acc[static_cast<std::size_t>(b)];
        double sum = 0.0;
        for (auto& v : row) {
            v /= mass[static_cast<std::size_t>(b)];
            v = std::clamp(v, 0.0, 1.0);
            sum += v;
        }
        // Absorb rounding so the row stays a simplex point exactly.
        for (auto& v : row) v /= sum;
        out.value_of_block.emplace_back(row);
    }
    return out;
}

double direct_expected_loss(const FiniteSpace& space, const Partition& partition,
                            const BlockPredictor& T, const ProperLoss& loss) {
    check_partition_matches(space, partition);
    check_predictor_matches(partition, T, space);
    double acc = 0.0;
    for (int w = 0; w < space.n_atoms(); ++w) {
        const auto& p = T.value_of_block[static_cast<std::size_t>(
            partition.block_of_atom[static_cast<std::size_t>(w)])];
        for (int y = 0; y < space.n_labels(); ++y) {
            const double qy = space.chance[static_cast<std::size_t>(w)][y];
            if (qy > 0.0)
                acc += space.atom_probs[static_cast<std::size_t>(w)] * qy *
                       pointwise_loss(loss, p, Outcome{y});
        }
    }
    return acc;
}

OneLevelDecomposition one_level_decompose(const FiniteSpace& space, const Partition& partition,
                                          const BlockPredictor& T, const ProperLoss& loss) {
    check_partition_matches(space, partition);
    check_predictor_matches(partition, T, space);
    const BlockPredictor Q = conditional_law(space, partition);
    OneLevelDecomposition out;
    out.regret = expected_divergence(space, partition, T, partition, Q, loss);
    out.entropy_term = expected_entropy(space, partition, Q, loss);
    out.total = out.regret + out.entropy_term;
    return out;
}

ChainDecomposition chain_decompose(const FiniteSpace& space, const Partition& partA,
                                   const Partition& partB, const BlockPredictor& T,
                                   const ProperLoss& loss) {
    check_partition_matches(space, partA);
    check_partition_matches(space, partB);
    check_predictor_matches(partA, T, space);
    check_nested(partA, partB);
    const BlockPredictor QA = conditional_law(space, partA);
    const BlockPredictor QB = conditional_law(space, partB);
    ChainDecomposition out;
    out.reliability = expected_divergence(space, partA, T, partA, QA, loss);
    out.grouping = expected_divergence(space, partA, QA, partB, QB, loss);
    out.entropy_term = expected_entropy(space, partB, QB, loss);
    return out;
}

FourTermDecomposition four_term_decompose(const FiniteSpace& space, const Partition& partS,
                                          const Partition& partX, const Partition& partZ,
                                          const BlockPredictor& T, const ProperLoss& loss) {
    check_partition_matches(space, partS);
    check_partition_matches(space, partX);
    check_partition_matches(space, partZ);
    check_predictor_matches(partS, T, space);
    check_nested(partS, partX);
    check_nested(partX, partZ);
    const BlockPredictor QS = conditional_law(space, partS);
    const BlockPredictor QX = conditional_law(space, partX);
    const BlockPredictor QZ = conditional_law(space, partZ);
    FourTermDecomposition out;
    out.reliability = expected_divergence(space, partS, T, partS, QS, loss);
    out.grouping = expected_divergence(space, partS, QS, partX, QX, loss);
    out.chance_heterogeneity = expected_divergence(space, partX, QX, partZ, QZ, loss);
    out.intrinsic = expected_entropy(space, partZ, QZ, loss);
    return out;
}

UrcDecomposition urc_decompose(const FiniteSpace& space, const Partition& partS,
                               const BlockPredictor& S, const ProperLoss& loss) {
    check_partition_matches(space, partS);
    check_predictor_matches(partS, S, space);
    const BlockPredictor C = conditional_law(space, partS);
    const ProbVector climatology = space.marginal();
    const Partition one_block = Partition::trivial(space.n_atoms());
    const BlockPredictor clim_pred = BlockPredictor::constant(climatology, 1);
    UrcDecomposition out;
    out.uncertainty = entropy(loss, climatology);
    out.resolution = expected_divergence(space, one_block, clim_pred, partS, C, loss);
    out.reliability = expected_divergence(space, partS, S, partS, C, loss);
    return out;
}

double TelescopeDecomposition::total() const {
    double t = initial_regret + final_entropy;
    for (double g : gains) t += g;
    return t;
}

TelescopeDecomposition telescope_decompose(const FiniteSpace& space,
                                           const std::vector<Partition>& filtration,
                                           const BlockPredictor& T, const ProperLoss& loss) {
    if (filtration.empty()) throw std::invalid_argument("filtration must be nonempty");
    for (const auto& part : filtration) check_partition_matches(space, part);
    for (std::size_t t = 0; t + 1 < filtration.size(); ++t)
        check_nested(filtration[t], filtration[t + 1]);
    check_predictor_matches(filtration.front(), T, space);

    std::vector<BlockPredictor> laws;
    laws.reserve(filtration.size());
    for (const auto& part : filtration) laws.push_back(conditional_law(space, part));

    TelescopeDecomposition out;
    out.initial_regret =
        expected_divergence(space, filtration.front(), T, filtration.front(), laws.front(), loss);
    for (std::size_t t = 0; t + 1 < filtration.size(); ++t)
        out.gains.push_back(expected_divergence(space, filtration[t], laws[t], filtration[t + 1],
                                                laws[t + 1], loss));
    out.final_entropy = expected_entropy(space, filtration.back(), laws.back(), loss);
    return out;
}

double tower_check(const FiniteSpace& space, const Partition& partA, const Partition& partB) {
    check_partition_matches(space, partA);
    check_partition_matches(space, partB);
    check_nested(partA, partB);
    const BlockPredictor QA = conditional_law(space, partA);
    const BlockPredictor QB = conditional_law(space, partB);
    const auto massB = block_masses(space, partB);

    // Block-average QB over each coarse block of partA.
    const int K = space.n_labels();
    std::vector<std::vector<double>> avg(static_cast<std::size_t>(partA.block_count),
                                         std::vector<double>(static_cast<std::size_t>(K), 0.0));
    std::vector<double> massA(static_cast<std::size_t>(partA.block_count), 0.0);
    std::vector<int> coarse_of_fine(static_cast<std::size_t>(partB.block_count), -1);
    for (int w = 0; w < space.n_atoms(); ++w)
        coarse_of_fine[static_cast<std::size_t>(partB.block_of_atom[static_cast<std::size_t>(w)])] =
            partA.block_of_atom[static_cast<std::size_t>(w)];
    for (int fb = 0; fb < partB.block_count; ++fb) {
        const auto cb = static_cast<std::size_t>(coarse_of_fine[static_cast<std::size_t>(fb)]);
        massA[cb] += massB[static_cast<std::size_t>(fb)];
        for (int y = 0; y < K; ++y)
            avg[cb][static_cast<std::size_t>(y)] +=
                massB[static_cast<std::size_t>(fb)] * QB.value_of_block[static_cast<std::size_t>(fb)][y];
    }
    double gap = 0.0;
    for (int cb = 0; cb < partA.block_count; ++cb)
        for (int y = 0; y < K; ++y)
            gap = std::max(gap, std::abs(QA.value_of_block[static_cast<std::size_t>(cb)][y] -
                                         avg[static_cast<std::size_t>(cb)][static_cast<std::size_t>(y)] /
                                             massA[static_cast<std::size_t>(cb)]));
    return gap;
}

double conditional_entropy(const FiniteSpace& space, const Partition& partition,
                           const ProperLoss& loss) {
    return expected_entropy(space, partition, conditional_law(space, partition), loss);
}

FiniteSpace two_state_space(double q1, double q2) {
    return FiniteSpace({0.5, 0.5}, {ProbVector::bernoulli(q1), ProbVector::bernoulli(q2)});
}

CounterexampleAverage::CounterexampleAverage()
    : space({0.25, 0.25, 0.25, 0.25},
            {ProbVector::bernoulli(0.0), ProbVector::bernoulli(0.5), ProbVector::bernoulli(0.5),
             ProbVector::bernoulli(1.0)}),
      // Atom order: (s1, s2) = (.25,.25), (.25,.75), (.75,.25), (.75,.75).
      part_s1({0, 0, 1, 1}, 2),
      part_s2({0, 1, 0, 1}, 2),
      part_avg({0, 1, 1, 2}, 3),
      part_full(Partition::discrete(4)),
      s1{{ProbVector::bernoulli(0.25), ProbVector::bernoulli(0.75)}},
      s2{{ProbVector::bernoulli(0.25), ProbVector::bernoulli(0.75)}},
      avg{{ProbVector::bernoulli(0.25), ProbVector::bernoulli(0.5), ProbVector::bernoulli(0.75)}} {}

CounterexampleAverage counterexample_average() { return CounterexampleAverage{}; }

FiniteSpace random_space(int n_atoms, int n_labels, CounterRng& rng) {
    auto exp_draws = [&rng](int count) {
        std::vector<double> v(static_cast<std::size_t>(count));
        double sum = 0.0;
        for (auto& x : v) {
            x = -std::log(rng.next_uniform());
            sum += x;
        }
        for (auto& x : v) x /= sum;
        return v;
    };
    std::vector<double> probs = exp_draws(n_atoms);
    std::vector<ProbVector> rows;
    rows.reserve(static_cast<std::size_t>(n_atoms));
    for (int w = 0; w < n_atoms; ++w) rows.emplace_back(exp_draws(n_labels));
    return FiniteSpace(std::move(probs), std::move(rows));
}

Partition random_partition(int n_atoms, int blocks, CounterRng& rng) {
    if (blocks < 1 || blocks > n_atoms)
        throw std::invalid_argument("block count must lie in [1, n_atoms]");
    // Seed each block with one atom, then scatter the rest.
    std::vector<int> atoms(static_cast<std::size_t>(n_atoms));
    std::iota(atoms.begin(), atoms.end(), 0);
    for (int i = n_atoms - 1; i > 0; --i)
        std::swap(atoms[static_cast<std::size_t>(i)],
                  atoms[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i + 1)))]);
    std::vector<int> block_of_atom(static_cast<std::size_t>(n_atoms), -1);
    for (int b = 0; b < blocks; ++b) block_of_atom[static_cast<std::size_t>(atoms[static_cast<std::size_t>(b)])] = b;
    for (int i = blocks; i < n_atoms; ++i)
        block_of_atom[static_cast<std::size_t>(atoms[static_cast<std::size_t>(i)])] =
            static_cast<int>(rng.next_below(static_cast<std::uint64_t>(blocks)));
    return Partition(std::move(block_of_atom), blocks);
}

Partition random_coarsening(const Partition& finer, int blocks, CounterRng& rng) {
    const Partition merge = random_partition(finer.block_count, blocks, rng);
    std::vector<int> block_of_atom(static_cast<std::size_t>(finer.n_atoms()));
    for (int w = 0; w < finer.n_atoms(); ++w)
        block_of_atom[static_cast<std::size_t>(w)] = merge.block_of_atom[static_cast<std::size_t>(
            finer.block_of_atom[static_cast<std::size_t>(w)])];
    return Partition(std::move(block_of_atom), blocks);
}

std::vector<Partition> random_filtration(int n_atoms, int length, CounterRng& rng) {
    if (length < 1) throw std::invalid_argument("filtration length must be >= 1");
    // Draw block counts nondecreasing in [1, n_atoms], then coarsen backwards.
    std::vector<int> counts(static_cast<std::size_t>(length));
    for (auto& c : counts) c = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_atoms)));
    std::sort(counts.begin(), counts.end());
    std::vector<Partition> filtration;
    filtration.reserve(static_cast<std::size_t>(length));
    Partition fine = random_partition(n_atoms, counts.back(), rng);
    filtration.push_back(fine);
    for (int t = length - 2; t >= 0; --t)
        filtration.insert(filtration.begin(),
                          random_coarsening(filtration.front(), counts[static_cast<std::size_t>(t)], rng));
    return filtration;
}

BlockPredictor random_predictor(const Partition& partition, int n_labels, CounterRng& rng) {
    BlockPredictor out;
    out.value_of_block.reserve(static_cast<std::size_t>(partition.block_count));
    for (int b = 0; b < partition.block_count; ++b) {
        std::vector<double> row(static_cast<std::size_t>(n_labels));
        double sum = 0.0;
        for (auto& x : row) {
            x = -std::log(rng.next_uniform());
            sum += x;
        }
        for (auto& x : row) x /= sum;
        out.value_of_block.emplace_back(std::move(row));
    }
    return out;
}

double IdentitySweepResult::max_residual() const {
    return std::max({max_one_level, max_chain, max_four_term, max_urc, max_telescope, max_tower,
                     max_total_variance_gap, max_info_gap});
}

IdentitySweepResult identity_sweep(int count, std::uint64_t seed) {
    IdentitySweepResult res;
    res.spaces = count;
    const ProperLoss losses[] = {ProperLoss::brier(), ProperLoss::logloss()};
    for (int i = 0; i < count; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        const int n = 2 + static_cast<int>(rng.next_below(11));  // [2, 12]
        const int K = 2 + static_cast<int>(rng.next_below(3));   // {2, 3, 4}
        const FiniteSpace space = random_space(n, K, rng);
        auto chain = random_filtration(n, 2, rng);
        const Partition& partS = chain[0];
        const Partition& partX = chain[1];
        const Partition partZ = Partition::discrete(n);
        const BlockPredictor T = random_predictor(partS, K, rng);

        for (const auto& loss : losses) {
            const double direct_S = direct_expected_loss(space, partS, T, loss);

            const auto one = one_level_decompose(space, partS, T, loss);
            res.max_one_level = std::max(res.max_one_level, std::abs(one.total - direct_S));

            const auto two = chain_decompose(space, partS, partX, T, loss);
            res.max_chain = std::max(res.max_chain, std::abs(two.total() - direct_S));

            const auto four = four_term_decompose(space, partS, partX, partZ, T, loss);
            res.max_four_term = std::max(res.max_four_term, std::abs(four.total() - direct_S));

            const auto urc = urc_decompose(space, partS, T, loss);
            res.max_urc = std::max(res.max_urc, std::abs(urc.total() - direct_S));

            std::vector<Partition> filtration = {partS, partX, partZ};
            const auto tel = telescope_decompose(space, filtration, T, loss);
            res.max_telescope = std::max(res.max_telescope, std::abs(tel.total() - direct_S));

            if (loss.kind == LossKind::LogLoss) {
                // Information gain cross-check per refinement step.
                for (std::size_t t = 0; t + 1 < filtration.size(); ++t) {
                    const double gain = tel.gains[t];
                    const double hdiff = conditional_entropy(space, filtration[t], loss) -
                                         conditional_entropy(space, filtration[t + 1], loss);
                    res.max_info_gap = std::max(res.max_info_gap, std::abs(gain - hdiff));
                }
            }
        }

        res.max_tower = std::max(res.max_tower, tower_check(space, partS, partX));

        if (K == 2) {
            // Law of total variance: E[C(1-C)] = E[Q(1-Q)] + E[(C-Q)^2].
            const auto C = conditional_law(space, partS);
            const auto Q = conditional_law(space, partX);
            double lhs = 0.0, irr = 0.0, grp = 0.0;
            for (int w = 0; w < n; ++w) {
                const double pw = space.atom_probs[static_cast<std::size_t>(w)];
                const double c = C.value_of_block[static_cast<std::size_t>(
                                      partS.block_of_atom[static_cast<std::size_t>(w)])]
                                     .positive();
                const double q = Q.value_of_block[static_cast<std::size_t>(
                                      partX.block_of_atom[static_cast<std::size_t>(w)])]
                                     .positive();
                lhs += pw * c * (1.0 - c);
                irr += pw * q * (1.0 - q);
                grp += pw * (c - q) * (c - q);
            }
            res.max_total_variance_gap =
                std::max(res.max_total_variance_gap, std::abs(lhs - (irr + grp)));
        }
    }
    return res;
}

std::string space_to_json(const FiniteSpace& space,
                          const std::map<std::string, Partition>& partitions) {
    ordered_json doc;
    doc["atom_probs"] = space.atom_probs;
    ordered_json chance = ordered_json::array();
    for (const auto& row : space.chance) chance.push_back(row.probs());
    doc["chance"] = std::move(chance);
    ordered_json parts = ordered_json::object();
    for (const auto& [name, part] : partitions) parts[name] = part.block_of_atom;
    doc["partitions"] = std::move(parts);
    return doc.dump(2);
}

SpaceDocument space_from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    std::vector<double> probs = doc.at("atom_probs").get<std::vector<double>>();
    std::vector<ProbVector> rows;
    for (const auto& row : doc.at("chance")) rows.emplace_back(row.get<std::vector<double>>());
    FiniteSpace space(std::move(probs), std::move(rows));
    std::map<std::string, Partition> partitions;
    if (doc.contains("partitions")) {
        for (const auto& [name, blocks] : doc.at("partitions").items()) {
            auto b = blocks.get<std::vector<int>>();
            const int count = b.empty() ? 0 : *std::max_element(b.begin(), b.end()) + 1;
            partitions.emplace(name, Partition(std::move(b), count));
        }
    }
    return SpaceDocument{std::move(space), std::move(partitions)};
}

}  // namespace scoredecomp
