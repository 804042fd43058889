#include "plq/pauli_algebra.hpp"

namespace plq {

namespace {

int leading_bit(const PauliString& p) {
    if (p.x) return 64 + 63 - __builtin_clzll(p.x);
    if (p.z) return 63 - __builtin_clzll(p.z);
    return -1;
}

// Reduce v against echelon rows; returns the reduced vector.
PauliString reduce(PauliString v, const std::vector<PauliString>& rows,
                   const std::vector<int>& leads) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        int bit = leads[r];
        std::uint64_t mask = 1ull << (bit % 64);
        bool set = bit >= 64 ? (v.x & mask) : (v.z & mask);
        if (set) v = v * rows[r];
    }
    return v;
}

}  // namespace

PauliAlgebra pauli_algebra_from(const std::vector<PauliString>& gens) {
    PauliAlgebra alg;
    std::vector<int> leads;
    for (const PauliString& g : gens) {
        alg.slot_mask |= g.x | g.z;
        PauliString v = reduce(g, alg.group_basis, leads);
        if (!v.is_identity_up_to_phase()) {
            // keep echelon order: insert and re-sort by leading bit descending
            alg.group_basis.push_back(v);
            leads.push_back(leading_bit(v));
            for (std::size_t i = alg.group_basis.size() - 1; i > 0; --i) {
                if (leads[i] > leads[i - 1]) {
                    std::swap(leads[i], leads[i - 1]);
                    std::swap(alg.group_basis[i], alg.group_basis[i - 1]);
                } else {
                    break;
                }
            }
        }
    }
    return alg;
}

std::vector<PauliString> restrict_to_slots(const std::vector<PauliString>& gens,
                                           std::uint64_t slot_mask) {
    std::vector<PauliString> out;
    for (const PauliString& g : gens) {
        PauliString r;
        r.x = g.x & slot_mask;
        r.z = g.z & slot_mask;
        if (r.x || r.z) out.push_back(r);
    }
    return out;
}

std::vector<PauliString> pauli_center_basis(const PauliAlgebra& alg) {
    // Solve omega(u, b_j) = 0 within the group: coordinates of u over the
    // group basis; the constraint matrix is the symplectic Gram matrix.
    const int r = alg.rank();
    std::vector<std::uint64_t> gram(r, 0);  // row i: bits j with omega(b_i, b_j) = 1
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (!alg.group_basis[i].commutes_with(alg.group_basis[j]))
                gram[i] |= 1ull << j;

    // Null space of gram over GF(2): u coords c with sum_j gram[i][j] c_j = 0.
    // Gaussian elimination on columns.
    std::vector<std::uint64_t> rows = gram;
    std::vector<int> pivot_col;
    std::vector<std::uint64_t> reduced;
    for (std::uint64_t row : rows) {
        for (std::size_t k = 0; k < reduced.size(); ++k) {
            int pc = pivot_col[k];
            if (row & (1ull << pc)) row ^= reduced[k];
        }
        if (row) {
            int pc = 63 - __builtin_clzll(row);
            // back-substitute into existing rows
            for (std::size_t k = 0; k < reduced.size(); ++k)
                if (reduced[k] & (1ull << pc)) reduced[k] ^= row;
            reduced.push_back(row);
            pivot_col.push_back(pc);
        }
    }
    std::vector<bool> is_pivot(r, false);
    for (int pc : pivot_col) is_pivot[pc] = true;

    std::vector<PauliString> out;
    for (int free = 0; free < r; ++free) {
        if (is_pivot[free]) continue;
        // solution with c_free = 1
        std::uint64_t coords = 1ull << free;
        for (std::size_t k = 0; k < reduced.size(); ++k)
            if (reduced[k] & (1ull << free)) coords |= 1ull << pivot_col[k];
        PauliString u;
        for (int j = 0; j < r; ++j)
            if (coords & (1ull << j)) u = u * alg.group_basis[j];
        out.push_back(u);
    }
    return out;
}

PauliString hermitian_monomial(PauliString p) {
    p.phase = __builtin_popcountll(p.x & p.z) % 4;
    return p;
}

namespace {

// Symplectic Gram-Schmidt: hyperbolic pairs (x_i, z_i) spanning the group.
std::vector<std::pair<PauliString, PauliString>> symplectic_pairs(
    std::vector<PauliString> vecs) {
    std::vector<std::pair<PauliString, PauliString>> pairs;
    while (!vecs.empty()) {
        PauliString a = vecs.front();
        vecs.erase(vecs.begin());
        if (a.is_identity_up_to_phase()) continue;
        int partner = -1;
        for (std::size_t k = 0; k < vecs.size(); ++k)
            if (vecs[k].anticommutes_with(a)) {
                partner = static_cast<int>(k);
                break;
            }
        if (partner < 0)
            throw FactorizationError("pauli_block_factorize: algebra is not simple");
        PauliString b = vecs[partner];
        vecs.erase(vecs.begin() + partner);
        for (PauliString& v : vecs) {
            if (v.anticommutes_with(b)) v = v * a;
            if (v.anticommutes_with(a)) v = v * b;
        }
        pairs.push_back({a, b});
    }
    return pairs;
}

}  // namespace

BlockFactorization pauli_block_factorize(const PauliAlgebra& alg, const PauliContext& ctx,
                                         const SiteList& support) {
    auto pairs = symplectic_pairs(alg.group_basis);
    const int k = static_cast<int>(pairs.size());

    SiteList sup = sorted_sites(support);
    std::vector<long> dims;
    for (std::size_t i = 0; i < sup.size(); ++i)
        dims.push_back(1l << ctx.qubits_per_site());
    long d = 1;
    for (long dd : dims) d *= dd;
    if (d > dense_cap()) throw ResourceError("pauli_block_factorize: exceeds dense cap");
    const long dl = 1l << k;
    const long dr = d / dl;

    // Joint +1 eigenspace of the virtual Z operators.
    Mat e = Mat::Identity(d, d);
    std::vector<Mat> xs;
    for (auto& [xv, zv] : pairs) {
        Mat zd = ctx.to_dense(hermitian_monomial(zv), sup).matrix();
        xs.push_back(ctx.to_dense(hermitian_monomial(xv), sup).matrix());
        e = e * (Mat::Identity(d, d) + zd) / 2.0;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(e);
    Mat base(d, dr);
    long col = 0;
    for (long i = 0; i < d; ++i)
        if (es.eigenvalues()(i) > 0.5) {
            if (col >= dr) throw FactorizationError("pauli_block_factorize: sector rank mismatch");
            base.col(col++) = es.eigenvectors().col(i);
        }
    if (col != dr) throw FactorizationError("pauli_block_factorize: sector rank mismatch");

    // |s; j> = prod_i X_i^{s_i} |0...0; j>
    Mat iso(d, d);  // rows <s,j|
    for (long s = 0; s < dl; ++s) {
        Mat v = base;
        for (int i = 0; i < k; ++i)
            if (s & (1l << (k - 1 - i))) v = xs[i] * v;
        for (long j = 0; j < dr; ++j) iso.row(s * dr + j) = v.col(j).adjoint();
    }

    BlockFactorization out;
    out.block = 0;
    out.iso = iso;
    out.subspace = Mat::Identity(d, d);
    out.dl = dl;
    out.dr = dr;

    // Residuals: group basis elements must become M (x) I.
    for (const PauliString& g : alg.group_basis) {
        Mat gd = ctx.to_dense(hermitian_monomial(g), sup).matrix();
        Mat t = iso * gd * iso.adjoint();
        Mat m = Mat::Zero(dl, dl);
        for (long i = 0; i < dl; ++i)
            for (long j = 0; j < dl; ++j) {
                cplx sum = 0;
                for (long r = 0; r < dr; ++r) sum += t(i * dr + r, j * dr + r);
                m(i, j) = sum / static_cast<double>(dr);
            }
        out.left_residual = std::max(out.left_residual,
                                     (t - kron(m, Mat::Identity(dr, dr))).norm());
    }
    return out;
}

OperatorAlgebra pauli_to_dense_algebra(const PauliAlgebra& alg, const PauliContext& ctx,
                                       const SiteList& support, std::size_t max_dim) {
    if (alg.rank() > 20 || (1ull << alg.rank()) > max_dim)
        throw ResourceError("pauli_to_dense_algebra: algebra too large for dense basis");
    SiteList sup = sorted_sites(support);
    std::vector<LocalOperator> basis;
    const int r = alg.rank();
    for (long mask = 0; mask < (1l << r); ++mask) {
        PauliString p;
        for (int j = 0; j < r; ++j)
            if (mask & (1l << j)) p = p * alg.group_basis[j];
        basis.push_back(ctx.to_dense(hermitian_monomial(p), sup));
    }
    OperatorAlgebra out;
    out.support = sup;
    for (const Site& s : sup) {
        (void)s;
        out.dims.push_back(1l << ctx.qubits_per_site());
    }
    double norm = std::sqrt(static_cast<double>(basis.front().dim()));
    for (LocalOperator& b : basis) {
        b.matrix() /= norm;  // monomials are HS-orthogonal with norm sqrt(d)
        out.basis.push_back(std::move(b));
    }
    out.generators = out.basis;
    out.closed_flag = true;
    return out;
}

}  // namespace plq
