#pragma once

#include "plq/local_operator.hpp"

namespace plq {

/// One MPO core: indices (left bond, right bond, row physical, col physical),
/// stored flat with q fastest.
struct MpoTensor {
    long l = 1, r = 1, p = 1, q = 1;
    std::vector<cplx> data;

    MpoTensor() = default;
    MpoTensor(long l_, long r_, long p_, long q_)
        : l(l_), r(r_), p(p_), q(q_), data(static_cast<std::size_t>(l_) * r_ * p_ * q_, 0.0) {}

    cplx& at(long il, long ir, long ip, long iq) {
        return data[((il * r + ir) * p + ip) * q + iq];
    }
    cplx at(long il, long ir, long ip, long iq) const {
        return data[((il * r + ir) * p + ip) * q + iq];
    }
};

/// A matrix product operator over a chain of sites with open boundaries
/// (boundary bonds have dimension 1).
class MPO {
  public:
    MPO() = default;
    explicit MPO(std::vector<MpoTensor> tensors);

    long length() const { return static_cast<long>(tensors_.size()); }
    const MpoTensor& tensor(long i) const { return tensors_[i]; }
    MpoTensor& tensor(long i) { return tensors_[i]; }
    std::vector<long> bond_dims() const;  // interior bonds, length-1 entries
    long max_bond() const;
    std::vector<long> phys_dims() const;
    long total_phys_dim() const;

    static MPO identity(const std::vector<long>& phys_dims);
    /// Bond-dimension-1 MPO from per-site factors.
    static MPO product_operator(const std::vector<Mat>& factors);

    MPO scaled(cplx factor) const;
    MPO adjoint_mpo() const;

  private:
    std::vector<MpoTensor> tensors_;
};

/// Default exact-rank truncation threshold (relative to the largest singular
/// value at each bond).
inline constexpr double kMpoDefaultThreshold = 1e-12;

/// Tensor-train factorization of a dense operator via successive SVD splits.
MPO mpo_from_dense(const Mat& op, const std::vector<long>& phys_dims,
                   double threshold = kMpoDefaultThreshold);
MPO mpo_from_dense(const LocalOperator& op, double threshold = kMpoDefaultThreshold);

/// Dense matrix of the MPO; guarded by dense_cap().
Mat mpo_to_dense(const MPO& mpo);

/// Operator product a*b (bond dimensions multiply; compress afterwards).
MPO mpo_multiply(const MPO& a, const MPO& b);

/// a + coeff*b as a direct sum (exact).
MPO mpo_add(const MPO& a, const MPO& b, cplx coeff = 1.0);

/// Exact-rank (or thresholded) recompression; result is left-canonical.
MPO mpo_compress(const MPO& mpo, double threshold = kMpoDefaultThreshold);

cplx mpo_trace(const MPO& mpo);
/// tr(a*b) by transfer contraction (no product MPO is formed).
cplx mpo_trace_product(const MPO& a, const MPO& b);
/// tr(a^dagger b).
cplx mpo_hs_inner(const MPO& a, const MPO& b);
/// Cancellation-safe Hilbert-Schmidt norm via QR canonicalization.
double mpo_norm(const MPO& mpo);

struct Proportionality {
    bool is_proportional = false;
    cplx x = 0.0;
    double residual = 0.0;
    bool degenerate = false;  // both operators ~ zero
};
/// Tests a ~ x*b with x = tr(b^dag a)/tr(b^dag b); proportional iff
/// ||a - x b|| <= rel_tol * max(||a||, ||b||). Contraction only, no dense.
Proportionality mpo_proportionality(const MPO& a, const MPO& b, double rel_tol = 1e-8);

/// Expands each physical index by an identity factor: when `op_first` the new
/// physical index is (p, e), otherwise (e, p), with e running over extra_dims.
MPO mpo_tensor_identity(const MPO& mpo, const std::vector<long>& extra_dims, bool op_first);

}  // namespace plq
