#pragma once

#include <optional>

#include "plq/local_operator.hpp"
#include "plq/random.hpp"

namespace plq {

/// A *-closed operator algebra on a fixed support, held as a
/// Hilbert-Schmidt-orthonormal basis. Generators are kept when known; center
/// computations use them instead of the full basis.
struct OperatorAlgebra {
    SiteList support;
    std::vector<long> dims;
    std::vector<LocalOperator> basis;      // HS-orthonormal
    std::vector<LocalOperator> generators; // optional, same support
    bool closed_flag = false;
    bool region_was_disjoint = false;  // interaction_algebra on a disjoint region

    std::size_t dimension() const { return basis.size(); }
    long space_dim() const { return basis.empty() ? 0 : basis.front().dim(); }

    /// Residual of projecting op onto span(basis).
    double membership_residual(const LocalOperator& op) const;
    /// Max |tr(bi^dag bj) - delta_ij|.
    double orthonormality_residual() const;
    /// Max residual of basis products against the span (closure witness).
    double closure_residual() const;
};

struct AlgebraOptions {
    std::size_t max_basis = 1u << 20;
    double drop_tol = 1e-10;   // discard directions below this after projection
    double zero_tol = 1e-9;    // numerical-rank threshold in center/null-space work
};

/// Gram-Schmidt in operator space. Returns an HS-orthonormal basis of the
/// span; inputs with residual below opts.drop_tol after projection are dropped.
std::vector<LocalOperator> hs_orthonormalize(const std::vector<LocalOperator>& ops,
                                             const AlgebraOptions& opts = {});

/// Smallest *-closed unital algebra on `support` containing the generators.
OperatorAlgebra generate_algebra(const std::vector<LocalOperator>& generators, SiteList support,
                                 std::vector<long> dims, const AlgebraOptions& opts = {});

/// Interaction algebra on `region` of the algebra generated by `generators`:
/// the algebra generated by all tr_complement(O Q) with O in the generated
/// algebra and Q on the complement. Realized through operator Schmidt factors
/// of each generator across (region | rest), which span exactly the same set.
OperatorAlgebra interaction_algebra(const std::vector<LocalOperator>& generators,
                                    const SiteList& region, const std::vector<long>& region_dims,
                                    const AlgebraOptions& opts = {});

OperatorAlgebra interaction_algebra(const OperatorAlgebra& alg, const SiteList& region,
                                    const std::vector<long>& region_dims,
                                    const AlgebraOptions& opts = {});

/// Center of a closed algebra: null space of the stacked commutator map
/// against the generators (or the basis when no generators are recorded),
/// restricted to the algebra's span.
OperatorAlgebra center(const OperatorAlgebra& alg, const AlgebraOptions& opts = {});

/// Minimal projectors generating the center of the algebra.
struct CentralDecomposition {
    std::vector<LocalOperator> projectors;
    std::vector<long> block_dims;  // rank of each projector
    std::vector<int> labels;
    std::uint64_t seed = 0;  // seed of the random central element used

    std::size_t size() const { return projectors.size(); }
};

/// Spectral projectors of a seeded random Hermitian central element, with
/// eigenvalue clusters separated by gap_tol. Ambiguous clusterings retry with
/// a fresh seed, up to 8 times.
CentralDecomposition minimal_central_projectors(const OperatorAlgebra& alg,
                                                std::uint64_t seed = 12345,
                                                const AlgebraOptions& opts = {},
                                                double gap_tol = 1e-6);

/// Exhibits range(block) as H_L (x) H_R with `left` acting as M (x) I and
/// `right` as I (x) M. `left` restricted to the block must be simple.
struct BlockFactorization {
    int block = 0;
    Mat iso;          // maps range(block) basis to C^{dl} (x) C^{dr}
    Mat subspace;     // dim x rank isometry onto range(block)
    long dl = 0, dr = 0;
    double left_residual = 0.0;   // worst off-factor residual of left elements
    double right_residual = 0.0;  // same for right elements
};

struct FactorizationError : std::runtime_error {
    explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

BlockFactorization block_factorize(const OperatorAlgebra& left, const OperatorAlgebra& right,
                                   const LocalOperator& block, std::uint64_t seed = 977,
                                   const AlgebraOptions& opts = {});

/// Convenience: is the algebra simple (trivial center)?
bool is_simple(const OperatorAlgebra& alg, const AlgebraOptions& opts = {});

}  // namespace plq
