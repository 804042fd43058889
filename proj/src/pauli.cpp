#include "plq/pauli.hpp"

#include <stdexcept>

namespace plq {

PauliString PauliString::operator*(const PauliString& o) const {
    // (i^p X^a Z^b)(i^q X^c Z^d) = i^(p+q) X^a Z^b X^c Z^d
    // Z^b X^c = (-1)^{|b&c|} X^c Z^b, and we fold X^xZ^z per-slot ordering
    // consistently, so only the crossing sign appears.
    PauliString r;
    r.x = x ^ o.x;
    r.z = z ^ o.z;
    int p = phase + o.phase;
    p += 2 * __builtin_popcountll(z & o.x);
    r.phase = ((p % 4) + 4) % 4;
    return r;
}

double PauliString::sign() const {
    if (phase == 0) return 1.0;
    if (phase == 2) return -1.0;
    throw std::domain_error("PauliString::sign: non-Hermitian phase");
}

PauliContext::PauliContext(SiteList sites, int qubits_per_site)
    : sites_(sorted_sites(std::move(sites))), per_site_(qubits_per_site) {
    if (num_qubits() > 64) throw ResourceError("PauliContext: more than 64 qubit slots");
}

int PauliContext::slot(Site s, int copy) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
    if (it == sites_.end() || *it != s) throw std::domain_error("PauliContext: unknown site");
    return static_cast<int>(it - sites_.begin()) * per_site_ + copy;
}

PauliString PauliContext::make(const std::vector<std::pair<int, char>>& factors,
                               double sign) const {
    PauliString p;
    for (auto [q, c] : factors) {
        std::uint64_t bit = 1ull << q;
        switch (c) {
            case 'x': case 'X': p.x |= bit; break;
            case 'z': case 'Z': p.z |= bit; break;
            case 'y': case 'Y':
                p.x |= bit;
                p.z |= bit;
                p.phase = (p.phase + 1) % 4;  // Y = i X Z
                break;
            default: throw std::domain_error("PauliContext::make: bad Pauli letter");
        }
    }
    if (sign == -1.0)
        p.phase = (p.phase + 2) % 4;
    else if (sign != 1.0)
        throw std::domain_error("PauliContext::make: sign must be +-1");
    return p;
}

SiteList PauliContext::support_of(const PauliString& p) const {
    SiteList out;
    std::uint64_t active = p.x | p.z;
    for (std::size_t k = 0; k < sites_.size(); ++k) {
        for (int c = 0; c < per_site_; ++c)
            if (active & (1ull << (k * per_site_ + c))) {
                out.push_back(sites_[k]);
                break;
            }
    }
    return out;
}

LocalOperator PauliContext::to_dense(const PauliString& p, const SiteList& support) const {
    SiteList sup = sorted_sites(support);
    std::uint64_t covered = 0;
    for (const Site& s : sup)
        for (int c = 0; c < per_site_; ++c) covered |= 1ull << slot(s, c);
    if ((p.x | p.z) & ~covered)
        throw std::domain_error("PauliContext::to_dense: string acts outside support");

    cplx ph;
    switch (p.phase) {
        case 0: ph = 1.0; break;
        case 1: ph = cplx(0, 1); break;
        case 2: ph = -1.0; break;
        default: ph = cplx(0, -1); break;
    }
    Mat m = Mat::Identity(1, 1) * ph;
    std::vector<long> dims;
    for (const Site& s : sup) {
        for (int c = 0; c < per_site_; ++c) {
            std::uint64_t bit = 1ull << slot(s, c);
            bool hx = p.x & bit, hz = p.z & bit;
            Mat f;
            if (hx && hz)
                f = pauli_x() * pauli_z();  // phase counted in p.phase convention
            else if (hx)
                f = pauli_x();
            else if (hz)
                f = pauli_z();
            else
                f = Mat::Identity(2, 2);
            m = kron(m, f);
        }
        dims.push_back(1l << per_site_);
    }
    return LocalOperator(sup, dims, std::move(m));
}

int symplectic_rank(const std::vector<PauliString>& gens) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;
    for (const auto& g : gens) rows.push_back({g.x, g.z});
    int rank = 0;
    for (int bit = 0; bit < 128; ++bit) {
        bool first_half = bit < 64;
        std::uint64_t mask = 1ull << (bit % 64);
        int pivot = -1;
        for (std::size_t r = rank; r < rows.size(); ++r) {
            std::uint64_t v = first_half ? rows[r].first : rows[r].second;
            if (v & mask) {
                pivot = static_cast<int>(r);
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(r) == rank) continue;
            std::uint64_t v = first_half ? rows[r].first : rows[r].second;
            if (v & mask) {
                rows[r].first ^= rows[rank].first;
                rows[r].second ^= rows[rank].second;
            }
        }
        ++rank;
        if (rank == static_cast<int>(rows.size())) break;
    }
    return rank;
}

long stabilizer_zero_count(const std::vector<PauliString>& gens, int n_qubits) {
    for (std::size_t a = 0; a < gens.size(); ++a) {
        if (gens[a].phase % 2 != 0)
            throw std::domain_error("stabilizer_zero_count: non-Hermitian generator");
        for (std::size_t b = a + 1; b < gens.size(); ++b)
            if (!gens[a].commutes_with(gens[b]))
                throw std::domain_error("stabilizer_zero_count: generators do not commute");
    }

    // Gaussian elimination over GF(2) on the 128-bit (x|z) vectors. Each
    // echelon row keeps the accumulated Pauli product of the generators it
    // came from, so kernel elements arrive with their sign: a kernel product
    // equal to -I forces the trace (and the count) to zero.
    auto leading_bit = [](const PauliString& p) -> int {
        if (p.x) return 64 + 63 - __builtin_clzll(p.x);
        if (p.z) return 63 - __builtin_clzll(p.z);
        return -1;
    };
    std::vector<PauliString> pivot_row(128);
    std::vector<bool> has_pivot(128, false);
    int rank = 0;
    bool sign_obstruction = false;

    for (const PauliString& g : gens) {
        PauliString v = g;
        for (int bit = 127; bit >= 0; --bit) {
            std::uint64_t mask = 1ull << (bit % 64);
            bool set = bit >= 64 ? (v.x & mask) : (v.z & mask);
            if (set && has_pivot[bit]) v = v * pivot_row[bit];
        }
        if (v.is_identity_up_to_phase()) {
            if (v.phase == 2) sign_obstruction = true;
            if (v.phase % 2 != 0)
                throw std::logic_error("stabilizer_zero_count: imaginary kernel phase");
        } else {
            int lead = leading_bit(v);
            pivot_row[lead] = v;
            has_pivot[lead] = true;
            ++rank;
        }
    }
    if (sign_obstruction) return 0;
    if (n_qubits - rank >= 63) throw ResourceError("stabilizer_zero_count: count overflows");
    return 1l << (n_qubits - rank);
}

}  // namespace plq
