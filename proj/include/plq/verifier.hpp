#pragma once

#include "plq/column_window.hpp"

namespace plq {

/// A zero-energy witness: one projector per covered column, as an MPO on that
/// column's sites. Coverage may be sparse; gaps are collapsed into supersite
/// blocks during verification.
struct Witness {
    struct Entry {
        int column = 0;
        MPO op;
    };
    std::vector<Entry> entries;  // sorted by column

    bool covers_all(int lx) const {
        if (static_cast<int>(entries.size()) != lx) return false;
        for (int c = 0; c < lx; ++c)
            if (entries[c].column != c) return false;
        return true;
    }
};

enum class Verdict { Accept, Reject, Unable };

struct VerificationReport {
    Verdict verdict = Verdict::Unable;
    std::string reason;
    std::vector<double> projector_residuals;    // per witness entry
    std::vector<double> commutation_residuals;  // per window, Eq-style [P_C, P_{C-1,C}]
    std::vector<double> proportionality_residuals;
    std::vector<cplx> constants;  // the c_C sequence
    double final_trace = 0.0;     // tr(rho_last P_last)
    double total_trace = 0.0;     // prod c_C * final_trace
    long max_bond_seen = 0;

    bool accepted() const { return verdict == Verdict::Accept; }
};

struct VerifierOptions {
    long bond_cap = 4096;
    double positivity_tol = 1e-10;
    double commutation_tol = 1e-8;
    double proportionality_tol = 1e-8;
    double projector_tol = 1e-8;
    double mpo_threshold = kMpoDefaultThreshold;
};

/// Lemma-style witness verification: checks the window commutations, then
/// propagates column by column recording the proportionality constants c_C,
/// and accepts iff every c_C and the final trace are positive.
VerificationReport verify_witness(const LatticeModel& model, const Witness& witness,
                                  const VerifierOptions& opts = {});

/// tr(prod_Z P_Z), the number of zero-energy states. Uses the exact
/// stabilizer path for Pauli models; otherwise a threaded dense trace
/// (total dimension <= dense_cap()).
struct ZeroCount {
    long count = 0;
    double raw_trace = 0.0;
    bool used_stabilizer_path = false;
};
ZeroCount brute_force_zero_count(const LatticeModel& model);

/// tr(prod_k W_k * prod_Z P_Z) for extra projector factors W_k (dense path),
/// used by witness-search routines. All factors must commute for the result
/// to be a count; the caller interprets the raw trace.
double restricted_zero_trace(const LatticeModel& model, const std::vector<LocalOperator>& extra);

/// phi_C = sum_a P^a tr(P^a rho)/tr(P^a): the central reduction of rho.
MPO phi_reduce(const MPO& rho, const CentralDecomposition& decomp,
               double threshold = kMpoDefaultThreshold);

/// Mask test for a column operator: checks
/// tr_{C-1 u C}(O_{C-1} P_{C-1,C} O_C P_{C,C+1}) = x tr_C(O_C P_{C,C+1})
/// over seeded random O_{C-1} draws, plus an exhaustive sweep of a complete
/// operator basis of column C-1 when `exhaustive`.
struct MaskReport {
    double max_deviation = 0.0;
    std::vector<cplx> x_values;
    bool is_mask = false;
    std::uint64_t seed = 0;
    int samples = 0;
    bool exhaustive = false;
};
MaskReport is_mask(const LocalOperator& o_c, const LatticeModel& model, int column, int samples,
                   std::uint64_t seed, bool exhaustive = true, double tol = 1e-9);

/// Interaction algebra of the term algebra of columns [c_lo, c_hi] on column
/// `region_col` (dense, desk scale).
OperatorAlgebra column_interaction_algebra(const LatticeModel& model, int c_lo, int c_hi,
                                           int region_col, const AlgebraOptions& opts = {});

}  // namespace plq
