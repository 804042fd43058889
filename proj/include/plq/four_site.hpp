#pragma once

#include "plq/verifier.hpp"
#include "plq/synthetic.hpp"

namespace plq {

/// The grouped problem H = Q12X + Q2X3 on four factors (1, 2, X, 3), held on
/// virtual sites so the generic operator machinery applies: factor k lives on
/// Site{k, 0} with the order (1, 2, X, 3).
struct FourSiteProblem {
    std::vector<long> dims;  // d1, d2, dX, d3
    LocalOperator q12x;      // support {v1, v2, vX}
    LocalOperator q2x3;      // support {v2, vX, v3}
    std::vector<double> weights;  // generic positive weights used in q2x3
    std::uint64_t seed = 0;

    // provenance, when built from a lattice column
    int column = -1;
    int center = -1;
    std::string grouping;

    static Site v1() { return {0, 0}; }
    static Site v2() { return {1, 0}; }
    static Site vx() { return {2, 0}; }
    static Site v3() { return {3, 0}; }

    double commutator_residual() const { return commutator_norm(q12x, q2x3); }
    double min_eigenvalue(const LocalOperator& q) const;
};

enum class Grouping { BothNeighbors, LeftOnly };

/// The 4-site problem centered at vertical coordinate i of column C:
/// site 1 = column sites below i, site 2 = (C, i), site 3 = sites above i,
/// X = the neighboring column(s). Q2X3 is the generically weighted sum of
/// the terms below-excluded (v(Z) > i); weights are uniform [1, 2], seeded.
FourSiteProblem four_site_from_column(const LatticeModel& model, int c, int i,
                                      Grouping grouping, std::uint64_t seed);

FourSiteProblem four_site_from_pair(const RandomFourSite& rfs, std::uint64_t seed);

/// One block of the boundary algebra.
struct BoundaryBlock {
    OperatorAlgebra algebra;     // B^a, on virtual sites (2, 3)
    LocalOperator projector;     // P^a
    bool annihilates_ground = false;
    std::vector<Mat> x_matrices; // action on the ground basis, aligned with algebra.basis
    double invariance_residual = 0.0;  // || O Psi - Psi X ||
};

struct BoundaryAlgebraResult {
    bool empty_ground = false;
    std::vector<BoundaryBlock> blocks;
    long d_ba = 0;               // dimension of the boundary algebra
    Mat ground_basis;            // columns: zero states of Q2X3 on (2, X, 3)
    LocalOperator ground_projector;  // P^0_{2X3} on (2, X, 3)
    LocalOperator unit;          // 1_BA = sum of non-annihilating P^a, on (2, 3)
};

BoundaryAlgebraResult boundary_algebra(const FourSiteProblem& p,
                                       const AlgebraOptions& opts = {});

struct IsoCheckReport {
    bool dimensions_preserved = true;
    double max_multiplicativity_residual = 0.0;
    double max_invariance_residual = 0.0;
    int blocks_checked = 0;
    int blocks_annihilating = 0;
};
/// Verifies the block-wise isomorphism onto the effective boundary algebra:
/// dimension preservation and multiplicativity of O -> X on basis pairs.
IsoCheckReport effective_iso_check(const BoundaryAlgebraResult& r);

enum class BoundVariant { Spec, Proj, Coro, Coro2 };

struct BoundCheckReport {
    BoundVariant variant;
    bool hypotheses_hold = false;
    std::vector<std::string> hypothesis_notes;
    long d_ba = 0;
    double bound_value = 0.0;
    bool satisfied = false;  // d_ba <= bound (only meaningful when hypotheses hold)
    long k_rank = 0;
    long d31 = 0;
};

/// Mechanically checks the variant's hypotheses and evaluates the dimension
/// bound on the boundary algebra.
BoundCheckReport bound_check(const FourSiteProblem& p, BoundVariant variant,
                             const AlgebraOptions& opts = {});

/// O_C = O_mps + O_perp via the sequential boundary-algebra-unit conjugation
/// sweep over centers j = 2 .. ly-2.
struct MpsPerpResult {
    MPO o_mps;
    MPO o_perp;
    std::vector<long> sweep_bond_dims;       // max bond of O(j) after each step
    double perp_window_product_norm = 0.0;   // ||O_perp P_window|| and reverse
    double mps_projector_residual = -1.0;    // set when input is a projector
    double sum_residual = 0.0;               // ||O_mps + O_perp - O_C||
    long bond_cap = 0;                       // the lemma bound used as cap
};
MpsPerpResult mps_perp_decompose(const LatticeModel& model, int c, const MPO& o_c,
                                 Grouping grouping, std::uint64_t seed,
                                 const AlgebraOptions& opts = {});

/// End-to-end witness construction: per-column minimal central projectors,
/// consistency search against exact counts, mps replacement, emission.
struct Theorem3Result {
    bool found = false;
    std::string reason;
    long zero_count = 0;
    Witness witness;
    std::vector<int> chosen_tuple;
    std::vector<long> witness_bond_dims;
};
Theorem3Result theorem3_witness(const LatticeModel& model, std::uint64_t seed = 31337,
                                const AlgebraOptions& opts = {});

/// Recognizes a projector as a product prod (1 + s_k g_k)/2 of commuting
/// signed Pauli strings on the given support; empty when not of that form.
std::vector<PauliString> recognize_pauli_projector(const LocalOperator& p,
                                                   const PauliContext& ctx);

}  // namespace plq
