#pragma once

#include "plq/pauli_algebra.hpp"
#include "plq/lattice_model.hpp"
#include "plq/verifier.hpp"

namespace plq {

/// Region bookkeeping around a site set S: the boundary B holds the sites of
/// S lying in some (geometric) plaquette that leaves S; I is the rest of S
/// and E the rest of the lattice.
struct RegionSpec {
    SiteList S, B, I, E;
    SiteList A, X, Y;  // operator support and split sets, when used
};

RegionSpec boundary_of(const LatticeModel& model, const SiteList& s);

/// Outcome of the exterior/interior split of H_B. When one of the two
/// interaction algebras is simple the factorization
/// H_B = H_{B->E} (x) H_{B->I} exists and is returned; otherwise the
/// obstructing central structure is reported.
struct ExtIntResult {
    bool factorized = false;
    bool ext_is_left = true;  // iso maps H_B -> H_left (x) H_right; left = A^E or A^I
    BlockFactorization factorization;
    SiteList boundary;
    std::vector<long> boundary_dims;

    // Obstruction data (when !factorized): central elements of the
    // non-simple algebras, plus a minimal central decomposition of the
    // interior algebra when it is small enough to densify.
    std::vector<LocalOperator> obstructing_central;
    std::optional<CentralDecomposition> obstructing_decomposition;
    int interior_center_log2 = 0;  // log2 of the interior algebra's center dimension (Pauli path)
    int exterior_center_log2 = 0;
};

ExtIntResult ext_int_factorization(const LatticeModel& model, const RegionSpec& region,
                                   const AlgebraOptions& opts = {});

/// One summand of a breakable decomposition: ordered factors with supports
/// and term-algebra commutation flags.
struct BreakFactor {
    LocalOperator op;
    bool commutes_with_terms = false;
    double max_term_commutator = 0.0;
};
struct BreakTerm {
    std::vector<BreakFactor> factors;  // apply left to right as written
};
struct BreakDecomposition {
    std::vector<BreakTerm> terms;
    double reconstruction_residual = 0.0;
};

/// Lemma-style two-set split: O (supported on A, commuting with every Q_Z
/// meeting E) = sum_a O^a_{XuB} O^a_{Bu(AnI)} with the first factors
/// commuting with the whole term algebra.
BreakDecomposition break_two(const LocalOperator& o, const RegionSpec& region,
                             const LatticeModel& model, const ExtIntResult& split);

/// Theorem-style three-set split on (XuB, I, YuB); requires no plaquette to
/// meet both X and Y and O to commute with the term algebra.
BreakDecomposition break_three(const LocalOperator& o, const RegionSpec& region,
                               const LatticeModel& model, const ExtIntResult& split);

/// Anticommutation obstruction for toric-code columns: T = product of the
/// light plaquettes' sigma^z generators (equal to the boundary-ring string),
/// split into top/bottom halves at height ly/2.
struct ToricObstructionReport {
    bool t_matches_ring = false;      // product over light plaquettes == ring string
    double comm_with_T = 0.0;         // ||[O, T]|| scale-free: 0 or 2
    double anti_with_Tt = 0.0;        // ||{O, T^t}|| scale-free
    double anti_with_Tb = 0.0;
    bool obstruction_confirmed = false;  // commutes with T, anticommutes with both halves
};
ToricObstructionReport obstruction_witness_toric(const LatticeModel& model, const PauliString& o);

/// Holes analysis: per-hole factorization, per-hole zero-energy verdicts, the
/// H = H_E + H_I split, and a coarse-grained two-body grouping of H_E.
struct HoleReport {
    RegionSpec region;
    ExtIntResult split;
    long zero_count = -1;  // zero-energy states of the hole Hamiltonian H_i
};
struct HolesSplitResult {
    bool all_factorized = false;
    std::vector<HoleReport> holes;
    std::vector<int> exterior_term_indices;  // H_E terms (indices into model.terms())
    std::vector<int> interior_term_indices;
    long exterior_zero_count = -1;  // -1 when not computable at desk scale
    bool interior_has_zero = false;
    std::vector<SiteList> coarse_supersites;            // Voronoi-style grouping
    std::vector<std::pair<int, int>> coarse_term_pairs; // term index -> supersite pair
};
HolesSplitResult holes_split(const LatticeModel& model, const std::vector<SiteList>& holes,
                             const AlgebraOptions& opts = {});

/// Witness built from per-interval minimal central projectors on chosen
/// columns (the intervals are the column segments outside hole interiors),
/// selected by desk-scale search over block tuples against exact counts.
struct IntervalWitnessResult {
    bool found = false;
    Witness witness;
    std::vector<std::vector<int>> tried_tuples;
    long exterior_zero_count = 0;
};
IntervalWitnessResult column_interval_witness(const LatticeModel& model,
                                              const HolesSplitResult& holes,
                                              const std::vector<int>& columns,
                                              const AlgebraOptions& opts = {});

}  // namespace plq
