#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "plq/local_operator.hpp"
#include "plq/sites.hpp"

namespace plq {

/// A signed Pauli string on up to 64 qubit slots, stored symplectically.
/// phase counts powers of i mod 4; a Hermitian string has phase 0 or 2
/// (sign +1 / -1). Slot assignment is external (see PauliContext).
struct PauliString {
    std::uint64_t x = 0;  // bit q set: sigma^x factor on slot q
    std::uint64_t z = 0;  // bit q set: sigma^z factor on slot q
    int phase = 0;        // power of i, mod 4

    bool commutes_with(const PauliString& o) const {
        return (__builtin_popcountll((x & o.z) ^ 0ull) + __builtin_popcountll(z & o.x)) % 2 == 0;
    }
    bool anticommutes_with(const PauliString& o) const { return !commutes_with(o); }

    PauliString operator*(const PauliString& o) const;

    bool is_identity_up_to_phase() const { return x == 0 && z == 0; }
    double sign() const;  // +1/-1; throws if phase is imaginary
};

/// Maps lattice sites (optionally with several qubit slots per site) to
/// symplectic bit positions.
class PauliContext {
  public:
    PauliContext() = default;
    PauliContext(SiteList sites, int qubits_per_site);

    int slot(Site s, int copy = 0) const;
    int num_qubits() const { return static_cast<int>(sites_.size()) * per_site_; }
    int qubits_per_site() const { return per_site_; }
    const SiteList& sites() const { return sites_; }

    PauliString make(const std::vector<std::pair<int, char>>& factors, double sign = 1.0) const;

    /// Dense matrix of the string restricted to the given support sites
    /// (string must act trivially elsewhere).
    LocalOperator to_dense(const PauliString& p, const SiteList& support) const;

    /// Sites on which the string acts nontrivially.
    SiteList support_of(const PauliString& p) const;

  private:
    SiteList sites_;
    int per_site_ = 1;
};

/// Number of joint +1 eigenstates of the commuting signed Pauli projectors
/// prod_k (1 + g_k)/2 on n qubits, i.e. tr prod (1+g_k)/2. Exact integer.
/// Requires all generators Hermitian (real sign) and pairwise commuting.
long stabilizer_zero_count(const std::vector<PauliString>& gens, int n_qubits);

/// GF(2) rank of the generator set (ignoring signs).
int symplectic_rank(const std::vector<PauliString>& gens);

}  // namespace plq
