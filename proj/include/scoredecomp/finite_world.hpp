#pragma once

#include <map>
#include <string>
#include <vector>

#include "scoredecomp/losses.hpp"
#include "scoredecomp/rng.hpp"

// Exact discrete probability spaces with partitions as sigma-algebras.
// Every decomposition identity is computable to machine precision here,
// which makes this module the ground-truth oracle for the estimators.

namespace scoredecomp {

/// A finite probability space: atom weights plus the per-atom conditional
/// label law (the objective chance at the finest level).
struct FiniteSpace {
    std::vector<double> atom_probs;   // n positive entries summing to 1
    std::vector<ProbVector> chance;   // n rows, one label law per atom

    FiniteSpace(std::vector<double> probs, std::vector<ProbVector> rows);

    int n_atoms() const { return static_cast<int>(atom_probs.size()); }
    int n_labels() const { return chance.front().size(); }

    /// Marginal label law sum_w P(w) Pi(w).
    ProbVector marginal() const;
};

/// Partition of the atom set; blocks are the generating sets of a
/// sub-sigma-algebra. Block indices are contiguous from 0, no empty blocks.
struct Partition {
    std::vector<int> block_of_atom;
    int block_count = 0;

    Partition(std::vector<int> blocks, int count);

    static Partition trivial(int n_atoms);   // single block
    static Partition discrete(int n_atoms);  // one block per atom

    int n_atoms() const { return static_cast<int>(block_of_atom.size()); }

    /// True when every block of `finer` lies inside one block of *this,
    /// i.e. *this generates a coarser sigma-algebra.
    bool coarser_than(const Partition& finer) const;
};

/// One prediction per block of a partition.
struct BlockPredictor {
    std::vector<ProbVector> value_of_block;

    int block_count() const { return static_cast<int>(value_of_block.size()); }

    /// Constant predictor (same law on every block).
    static BlockPredictor constant(const ProbVector& p, int blocks);
};

/// Conditional law Q_A per block: sum_{w in b} P(w) Pi(w) / P(b).
BlockPredictor conditional_law(const FiniteSpace& space, const Partition& partition);

/// E[l(T, Y)] summed directly over atoms and labels; the reference value
/// every decomposition below must reproduce.
double direct_expected_loss(const FiniteSpace& space, const Partition& partition,
                            const BlockPredictor& T, const ProperLoss& loss);

struct OneLevelDecomposition {
    double regret = 0.0;        // E[d(T, Q_A)]
    double entropy_term = 0.0;  // E[E(Q_A)]
    double total = 0.0;
};

OneLevelDecomposition one_level_decompose(const FiniteSpace& space, const Partition& partition,
                                          const BlockPredictor& T, const ProperLoss& loss);

struct ChainDecomposition {
    double reliability = 0.0;   // E[d(T, Q_A)]
    double grouping = 0.0;      // E[d(Q_A, Q_B)]
    double entropy_term = 0.0;  // E[E(Q_B)]
    double total() const { return reliability + grouping + entropy_term; }
};

/// Requires partA coarser than partB and T declared against partA.
ChainDecomposition chain_decompose(const FiniteSpace& space, const Partition& partA,
                                   const Partition& partB, const BlockPredictor& T,
                                   const ProperLoss& loss);

struct FourTermDecomposition {
    double reliability = 0.0;
    double grouping = 0.0;
    double chance_heterogeneity = 0.0;
    double intrinsic = 0.0;
    double total() const { return reliability + grouping + chance_heterogeneity + intrinsic; }
};

/// Requires the coarsening chain partS <= partX <= partZ.
FourTermDecomposition four_term_decompose(const FiniteSpace& space, const Partition& partS,
                                          const Partition& partX, const Partition& partZ,
                                          const BlockPredictor& T, const ProperLoss& loss);

struct UrcDecomposition {
    double uncertainty = 0.0;  // E(marginal)
    double resolution = 0.0;   // E[d(marginal, C)]
    double reliability = 0.0;  // E[d(S, C)]
    double total() const { return uncertainty - resolution + reliability; }
};

UrcDecomposition urc_decompose(const FiniteSpace& space, const Partition& partS,
                               const BlockPredictor& S, const ProperLoss& loss);

struct TelescopeDecomposition {
    double initial_regret = 0.0;
    std::vector<double> gains;  // one per refinement step
    double final_entropy = 0.0;
    double total() const;
};

/// Filtration ordered coarse to fine; T declared against the coarsest level.
TelescopeDecomposition telescope_decompose(const FiniteSpace& space,
                                           const std::vector<Partition>& filtration,
                                           const BlockPredictor& T, const ProperLoss& loss);

/// Max over blocks and labels of |Q_A - block-average of Q_B|; the tower
/// property makes this < 1e-12 for nested partitions.
double tower_check(const FiniteSpace& space, const Partition& partA, const Partition& partB);

/// Expected entropy of the conditional law at a partition; conditional
/// Shannon entropy H(Y | partition) under log-loss.
double conditional_entropy(const FiniteSpace& space, const Partition& partition,
                           const ProperLoss& loss);

// ---------------------------------------------------------------------------
// Fixtures

/// Binary two-atom space with equal weights and positive-class chances
/// (q1, q2); the classic host of a perfectly calibrated constant score
/// that still loses all discrimination.
FiniteSpace two_state_space(double q1, double q2);

/// Two individually calibrated scores on four equally likely states whose
/// average is miscalibrated.
struct CounterexampleAverage {
    FiniteSpace space;
    Partition part_s1, part_s2, part_avg, part_full;
    BlockPredictor s1, s2, avg;

    CounterexampleAverage();
};

CounterexampleAverage counterexample_average();

// ---------------------------------------------------------------------------
// Random instances for property sweeps

/// Full-support random space: atom weights and chance rows are normalized
/// exponential draws.
FiniteSpace random_space(int n_atoms, int n_labels, CounterRng& rng);

/// Random partition of n atoms into exactly `blocks` nonempty blocks.
Partition random_partition(int n_atoms, int blocks, CounterRng& rng);

/// Random coarsening of `finer` into exactly `blocks` nonempty blocks.
Partition random_coarsening(const Partition& finer, int blocks, CounterRng& rng);

/// Random nested filtration coarse-to-fine of the given length ending in a
/// partition with at most n_atoms blocks.
std::vector<Partition> random_filtration(int n_atoms, int length, CounterRng& rng);

/// Random predictor declared against a partition.
BlockPredictor random_predictor(const Partition& partition, int n_labels, CounterRng& rng);

// ---------------------------------------------------------------------------
// Identity sweep (library surface for the `identities` CLI command)

struct IdentitySweepResult {
    double max_one_level = 0.0;
    double max_chain = 0.0;
    double max_four_term = 0.0;
    double max_urc = 0.0;
    double max_telescope = 0.0;
    double max_tower = 0.0;
    double max_total_variance_gap = 0.0;  // E[C(1-C)] vs E[Q(1-Q)] + E[(C-Q)^2]
    double max_info_gap = 0.0;            // log-loss grouping vs entropy difference
    int spaces = 0;

    double max_residual() const;
};

/// Runs every decomposition on `count` random spaces (n in [2,12],
/// K in {2,3,4}) under both losses and returns the worst residuals.
IdentitySweepResult identity_sweep(int count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// JSON fixture serialization

/// Serializes atom_probs, the chance matrix and named partitions.
std::string space_to_json(const FiniteSpace& space,
                          const std::map<std::string, Partition>& partitions);

struct SpaceDocument {
    FiniteSpace space;
    std::map<std::string, Partition> partitions;
};

SpaceDocument space_from_json(const std::string& text);

}  // namespace scoredecomp
