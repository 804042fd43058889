#pragma once

#include "plq/algebra.hpp"
#include "plq/pauli.hpp"

namespace plq {

/// The linear span of a multiplicative group of Pauli monomials, tracked
/// symplectically (signs are absorbed into coefficients, so only the GF(2)
/// vectors matter). Dimension is 2^rank.
struct PauliAlgebra {
    std::vector<PauliString> group_basis;  // GF(2)-independent monomials
    std::uint64_t slot_mask = 0;           // slots the algebra may act on

    int rank() const { return static_cast<int>(group_basis.size()); }
    double log2_dim() const { return rank(); }
};

/// Algebra generated by the given monomials (group closure over GF(2)).
PauliAlgebra pauli_algebra_from(const std::vector<PauliString>& gens);

/// Interaction-algebra generators on a slot set: each input monomial
/// restricted to the slots (the operator Schmidt factors of a product of
/// commuting (1+g)/2 factors are exactly these restrictions).
std::vector<PauliString> restrict_to_slots(const std::vector<PauliString>& gens,
                                           std::uint64_t slot_mask);

/// Basis of the subgroup of central monomials (commuting with the whole
/// group). Center dimension is 2^size.
std::vector<PauliString> pauli_center_basis(const PauliAlgebra& alg);

inline bool pauli_is_simple(const PauliAlgebra& alg) {
    return pauli_center_basis(alg).empty();
}

/// Hermitian representative of a monomial: phase fixed so W = W^dagger and
/// W^2 = I (Y on slots where both x and z bits are set).
PauliString hermitian_monomial(PauliString p);

/// Tensor factorization H = H_L (x) H_R for a simple monomial algebra acting
/// as the full matrix algebra on H_L: a symplectic basis of the group is
/// mapped to virtual X/Z pairs and the joint eigenbasis provides the
/// isometry. `ctx`/`support` give the dense realization (2 dims per slot).
BlockFactorization pauli_block_factorize(const PauliAlgebra& alg, const PauliContext& ctx,
                                         const SiteList& support);

/// Dense OperatorAlgebra spanned by the monomial group (cap-guarded).
OperatorAlgebra pauli_to_dense_algebra(const PauliAlgebra& alg, const PauliContext& ctx,
                                       const SiteList& support, std::size_t max_dim = 4096);

}  // namespace plq
