#pragma once

#include "plq/algebra.hpp"
#include "plq/mpo.hpp"

namespace plq {

/// F-symbol data of a multiplicity-free self-dual string-net theory.
/// Label 0 is the identity particle. F^{ijm}_{kln} is nonzero only when the
/// four triples (i,j,m), (k,l,m), (j,k,n), (i,n,l) are admissible.
class FSymbolTable {
  public:
    FSymbolTable() = default;
    FSymbolTable(int n_labels, std::vector<char> fusion, std::vector<cplx> f,
                 std::vector<double> qdims = {});

    int n_labels() const { return n_; }
    bool admissible(int a, int b, int c) const { return fusion_[(a * n_ + b) * n_ + c] != 0; }
    cplx f(int i, int j, int m, int k, int l, int n) const {
        return f_[((((i * n_ + j) * n_ + m) * n_ + k) * n_ + l) * n_ + n];
    }
    const std::vector<double>& quantum_dims() const { return qdims_; }
    const std::vector<char>& fusion() const { return fusion_; }
    const std::vector<cplx>& f_raw() const { return f_; }

  private:
    int n_ = 0;
    std::vector<char> fusion_;
    std::vector<cplx> f_;
    std::vector<double> qdims_;
};

/// The Z2 theory: labels {0,1}, fusion = parity, all admissible F entries 1.
FSymbolTable z2_table();

/// Numeric pentagon solve for the 2-label Fibonacci fusion rules
/// (tau x tau = 1 + tau), canonical gauge (positive mixing entries).
/// Deterministic given the seed; residual driven below 1e-13.
FSymbolTable solve_fibonacci_table(std::uint64_t seed = 7);

struct PentagonReport {
    double max_residual = 0.0;
    long equations_checked = 0;
};
PentagonReport pentagon_check(const FSymbolTable& table);

/// A closed string operator acting on n fused (e_a, a) sites, each of
/// physical dimension n_labels^2 with the fused index e*n_labels + a.
struct LoopSpec {
    int n = 3;
};

/// Periodic matrix product operator for a loop: uniform bond dimension
/// n_labels^2 with the auxiliary pair (beta_a, beta_a') carried on the bonds;
/// the trace over the auxiliary chain closes the loop.
struct LoopMpo {
    std::vector<MpoTensor> tensors;  // l = r = bond for every site
    long bond = 0;

    long length() const { return static_cast<long>(tensors.size()); }
};

/// Dense matrix of B^s_l from the product-of-F formula (diagonal in every
/// e_a); guarded by a 2^24-entry cap.
Mat b_loop_dense(const FSymbolTable& table, int s, const LoopSpec& loop);

/// The same operator as a periodic MPO with bond dimension n_labels^2.
LoopMpo b_loop_mpo(const FSymbolTable& table, int s, const LoopSpec& loop);

/// Dense matrix of a periodic loop MPO (row-streamed internally).
Mat loop_to_dense(const LoopMpo& mpo);

/// Frobenius distance between a loop MPO and a dense matrix, streamed row by
/// row so no second dense copy is formed.
double loop_mpo_dense_diff(const LoopMpo& mpo, const Mat& dense);

/// Open-boundary exact-rank recompression of the loop operator (via its
/// dense form; desk scale only). Returns the open MPO's bond dimensions.
std::vector<long> loop_compressed_bond_dims(const LoopMpo& mpo,
                                            double threshold = kMpoDefaultThreshold);

/// Desk-scale single-loop string-net instance: the flux projector built from
/// sum_s d_s B^s_l / D and the per-vertex admissibility projectors, all on
/// the loop's fused sites (virtual sites {k, 0}).
struct StringNetPatch {
    SiteList sites;
    std::vector<long> dims;
    LocalOperator flux_projector;
    std::vector<LocalOperator> vertex_projectors;
};
StringNetPatch string_net_patch(const FSymbolTable& table, const LoopSpec& loop);

struct CentralityReport {
    double max_commutator = 0.0;
    double center_membership_residual = 0.0;
};
/// Commutators of B against every term, and the residual of B against the
/// center of the interaction algebra of the terms on the loop.
CentralityReport verify_central(const LocalOperator& b, const std::vector<LocalOperator>& terms,
                                const SiteList& loop_sites, const std::vector<long>& loop_dims,
                                const AlgebraOptions& opts = {});

}  // namespace plq
