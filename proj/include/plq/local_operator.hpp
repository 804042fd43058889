#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "plq/sites.hpp"

namespace plq {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Thrown when a computation would exceed a configured dimension or memory cap.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Global dense-dimension cap (total Hilbert dimension for densified objects).
/// Overridable through the CENTRAL_MPO_CAP environment variable.
long dense_cap();
/// Cap for dense eigensolves; min(dense_cap(), 4096) by default.
long eigen_cap();

/// A dense operator together with the sites it acts on.
///
/// The matrix is (prod dims) x (prod dims), with the first support site the
/// most significant tensor factor. Support is kept sorted in canonical
/// (column-major) site order.
class LocalOperator {
  public:
    LocalOperator() = default;

    /// Builds from possibly unsorted support; the matrix is permuted to
    /// canonical order.
    LocalOperator(SiteList support, std::vector<long> dims, Mat matrix);

    const SiteList& support() const { return support_; }
    const std::vector<long>& site_dims() const { return dims_; }
    const Mat& matrix() const { return mat_; }
    Mat& matrix() { return mat_; }
    long dim() const { return mat_.rows(); }
    const SiteIndexer& indexer() const { return idx_; }

    LocalOperator adjoint() const;
    double hs_norm() const { return mat_.norm(); }
    cplx trace() const { return mat_.trace(); }

    /// Embeds into a larger support, tensoring identity on the new sites.
    LocalOperator embedded(const SiteList& target_support,
                           const std::vector<long>& target_dims) const;

    /// Identity on the given support.
    static LocalOperator identity(SiteList support, std::vector<long> dims);

    /// Zero operator on the given support.
    static LocalOperator zero(SiteList support, std::vector<long> dims);

  private:
    SiteList support_;
    std::vector<long> dims_;
    Mat mat_;
    SiteIndexer idx_;
};

/// tr(A^dagger B); both must share support.
cplx hs_inner(const LocalOperator& a, const LocalOperator& b);

/// Product a*b on the union support.
LocalOperator op_multiply(const LocalOperator& a, const LocalOperator& b);

/// a + coeff*b on the union support.
LocalOperator op_add(const LocalOperator& a, const LocalOperator& b, cplx coeff = 1.0);

/// Commutator [a, b] on the union support.
LocalOperator op_commutator(const LocalOperator& a, const LocalOperator& b);

/// Frobenius norm of [a, b] without forming union embeddings twice.
double commutator_norm(const LocalOperator& a, const LocalOperator& b);

/// Partial trace over the complement of `keep` inside op.support().
/// keep must be a subset of the support; the result lives on `keep`.
LocalOperator partial_trace(const LocalOperator& op, const SiteList& keep);

/// Operator Schmidt split: writes op = sum_k L_k (x) R_k with L_k on
/// `left_sites` and R_k on the remaining support sites, the families
/// orthogonal in Hilbert-Schmidt norm with non-increasing weights.
/// Returned pairs are (L_k, R_k); singular values are folded into L_k with
/// the phase gauge making L_k's largest-magnitude entry real positive.
struct SchmidtTerm {
    LocalOperator left;
    LocalOperator right;
    double weight;  // singular value before gauge fixing
};
std::vector<SchmidtTerm> operator_schmidt(const LocalOperator& op, const SiteList& left_sites,
                                          double rel_tol = 1e-12);

/// kron with the first argument most significant.
Mat kron(const Mat& a, const Mat& b);

/// The operator's matrix permuted from canonical support order into the given
/// site order (which must be a permutation of the support).
Mat matrix_in_site_order(const LocalOperator& op, const SiteList& order);

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

}  // namespace plq
