#include "plq/algebra.hpp"

#include <map>

namespace plq {

namespace {

Vec vectorize(const LocalOperator& op) {
    return Eigen::Map<const Vec>(op.matrix().data(), op.matrix().size());
}

}  // namespace

double OperatorAlgebra::membership_residual(const LocalOperator& op) const {
    LocalOperator emb = op.support() == support ? op : op.embedded(support, dims);
    Vec v = vectorize(emb);
    Vec r = v;
    for (const LocalOperator& b : basis) {
        Vec bv = vectorize(b);
        r -= bv * bv.dot(r);
    }
    return r.norm();
}

double OperatorAlgebra::orthonormality_residual() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            cplx g = hs_inner(basis[i], basis[j]);
            double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(g - target));
        }
    return worst;
}

double OperatorAlgebra::closure_residual() const {
    double worst = 0.0;
    for (const LocalOperator& a : basis) {
        worst = std::max(worst, membership_residual(a.adjoint()));
        for (const LocalOperator& b : basis)
            worst = std::max(worst, membership_residual(op_multiply(a, b)));
    }
    return worst;
}

std::vector<LocalOperator> hs_orthonormalize(const std::vector<LocalOperator>& ops,
                                             const AlgebraOptions& opts) {
    std::vector<LocalOperator> out;
    std::vector<Vec> vecs;
    for (const LocalOperator& op : ops) {
        Vec v = vectorize(op);
        double n0 = v.norm();
        if (n0 > 0) v /= n0;
        // two rounds of modified Gram-Schmidt for stability
        for (int round = 0; round < 2; ++round)
            for (const Vec& b : vecs) v -= b * b.dot(v);
        double n = v.norm();
        if (n <= opts.drop_tol) continue;
        v /= n;
        vecs.push_back(v);
        Mat m = Eigen::Map<const Mat>(v.data(), op.matrix().rows(), op.matrix().cols());
        out.emplace_back(op.support(), op.site_dims(), std::move(m));
    }
    return out;
}

namespace {

// Adds `candidates` to the orthonormal set (basis, vecs); returns number added.
std::size_t absorb(std::vector<LocalOperator>& basis, std::vector<Vec>& vecs,
                   const std::vector<LocalOperator>& candidates, const AlgebraOptions& opts) {
    std::size_t added = 0;
    for (const LocalOperator& op : candidates) {
        Vec v = vectorize(op);
        double n0 = v.norm();
        if (n0 == 0) continue;
        v /= n0;
        for (int round = 0; round < 2; ++round)
            for (const Vec& b : vecs) v -= b * b.dot(v);
        double n = v.norm();
        if (n <= opts.drop_tol) continue;
        if (basis.size() + 1 > opts.max_basis)
            throw ResourceError("generate_algebra: basis cap exceeded");
        v /= n;
        vecs.push_back(v);
        Mat m = Eigen::Map<const Mat>(v.data(), op.matrix().rows(), op.matrix().cols());
        basis.emplace_back(op.support(), op.site_dims(), std::move(m));
        ++added;
    }
    return added;
}

}  // namespace

OperatorAlgebra generate_algebra(const std::vector<LocalOperator>& generators, SiteList support,
                                 std::vector<long> dims, const AlgebraOptions& opts) {
    support = sorted_sites(support);
    OperatorAlgebra alg;
    alg.support = support;
    alg.dims = dims;

    std::vector<LocalOperator> gens;
    gens.push_back(LocalOperator::identity(support, dims));
    for (const LocalOperator& g : generators) {
        LocalOperator e = g.support() == support ? g : g.embedded(support, dims);
        gens.push_back(e);
        gens.push_back(e.adjoint());
    }
    alg.generators = gens;

    std::vector<Vec> vecs;
    absorb(alg.basis, vecs, gens, opts);

    // Iterate products until the dimension stabilizes. Only frontier x all
    // products are needed each round.
    std::size_t frontier_begin = 0;
    while (true) {
        std::size_t frontier_end = alg.basis.size();
        std::vector<LocalOperator> products;
        for (std::size_t i = 0; i < frontier_end; ++i) {
            std::size_t j0 = (i >= frontier_begin) ? 0 : frontier_begin;
            for (std::size_t j = j0; j < frontier_end; ++j)
                products.push_back(op_multiply(alg.basis[i], alg.basis[j]));
        }
        std::size_t added = absorb(alg.basis, vecs, products, opts);
        frontier_begin = frontier_end;
        if (added == 0) break;
    }
    alg.closed_flag = true;
    return alg;
}

OperatorAlgebra interaction_algebra(const std::vector<LocalOperator>& generators,
                                    const SiteList& region, const std::vector<long>& region_dims,
                                    const AlgebraOptions& opts) {
    SiteList reg = sorted_sites(region);
    std::vector<LocalOperator> slice_gens;
    bool any_overlap = false;
    for (const LocalOperator& g : generators) {
        SiteList on_region = site_intersection(g.support(), reg);
        if (on_region.empty()) continue;  // contributes only scalars
        any_overlap = true;
        if (on_region.size() == g.support().size()) {
            slice_gens.push_back(g);
            continue;
        }
        for (const SchmidtTerm& t : operator_schmidt(g, on_region))
            slice_gens.push_back(t.left);
    }
    OperatorAlgebra alg = generate_algebra(slice_gens, reg, region_dims, opts);
    alg.region_was_disjoint = !any_overlap;
    return alg;
}

OperatorAlgebra interaction_algebra(const OperatorAlgebra& alg, const SiteList& region,
                                    const std::vector<long>& region_dims,
                                    const AlgebraOptions& opts) {
    const std::vector<LocalOperator>& gens = alg.generators.empty() ? alg.basis : alg.generators;
    return interaction_algebra(gens, region, region_dims, opts);
}

OperatorAlgebra center(const OperatorAlgebra& alg, const AlgebraOptions& opts) {
    OperatorAlgebra z;
    z.support = alg.support;
    z.dims = alg.dims;
    z.closed_flag = true;
    const std::size_t m = alg.basis.size();
    if (m == 0) return z;

    const std::vector<LocalOperator>& against =
        alg.generators.empty() ? alg.basis : alg.generators;

    // G_{kl} = sum_j <[b_k, g_j], [b_l, g_j]>; the center is the null space.
    std::vector<std::vector<Vec>> comms(m);
    for (std::size_t k = 0; k < m; ++k)
        for (const LocalOperator& g : against)
            comms[k].push_back(vectorize(op_commutator(alg.basis[k], g)));

    Mat gram = Mat::Zero(m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < comms[k].size(); ++j) s += comms[k][j].dot(comms[l][j]);
            gram(k, l) = s;
        }

    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    double tol2 = opts.zero_tol * opts.zero_tol * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (long k = 0; k < es.eigenvalues().size(); ++k) {
        if (es.eigenvalues()(k) > tol2) continue;
        Mat acc = Mat::Zero(alg.basis.front().dim(), alg.basis.front().dim());
        for (std::size_t l = 0; l < m; ++l) acc += es.eigenvectors()(l, k) * alg.basis[l].matrix();
        z.basis.emplace_back(alg.support, alg.dims, std::move(acc));
    }
    z.basis = hs_orthonormalize(z.basis, opts);
    z.generators = z.basis;
    return z;
}

bool is_simple(const OperatorAlgebra& alg, const AlgebraOptions& opts) {
    return center(alg, opts).dimension() <= 1;
}

CentralDecomposition minimal_central_projectors(const OperatorAlgebra& alg, std::uint64_t seed,
                                                const AlgebraOptions& opts, double gap_tol) {
    OperatorAlgebra z = center(alg, opts);
    if (z.dimension() == 0)
        throw std::domain_error("minimal_central_projectors: empty algebra");
    const long dim = z.basis.front().dim();

    // Hermitian basis of the center.
    std::vector<LocalOperator> herm;
    for (const LocalOperator& b : z.basis) {
        herm.push_back(op_add(b, b.adjoint()));
        LocalOperator k = op_add(b, b.adjoint(), -1.0);
        k.matrix() *= cplx(0, 1);
        herm.push_back(k);
    }
    herm = hs_orthonormalize(herm, opts);

    for (int attempt = 0; attempt < 8; ++attempt) {
        std::uint64_t attempt_seed = seed + attempt;
        Rng rng(attempt_seed);
        Mat r = Mat::Zero(dim, dim);
        for (const LocalOperator& h : herm) r += rng.gauss() * h.matrix();

        Eigen::SelfAdjointEigenSolver<Mat> es(r);
        const auto& ev = es.eigenvalues();

        // Cluster eigenvalues by gaps larger than gap_tol; retry if some gap
        // lands within a factor 10 of the threshold (ambiguous clustering).
        bool ambiguous = false;
        std::vector<long> cluster_start = {0};
        for (long k = 1; k < dim; ++k) {
            double gap = ev(k) - ev(k - 1);
            if (gap > gap_tol) cluster_start.push_back(k);
            if (gap > gap_tol / 10 && gap < gap_tol * 10) ambiguous = true;
        }
        if (ambiguous && attempt < 7) continue;
        if (ambiguous)
            throw std::runtime_error("minimal_central_projectors: degenerate clustering after retries");

        CentralDecomposition out;
        out.seed = attempt_seed;
        cluster_start.push_back(dim);
        for (std::size_t c = 0; c + 1 < cluster_start.size(); ++c) {
            long lo = cluster_start[c], hi = cluster_start[c + 1];
            Mat p = Mat::Zero(dim, dim);
            for (long k = lo; k < hi; ++k)
                p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
            out.projectors.emplace_back(alg.support, alg.dims, std::move(p));
            out.block_dims.push_back(hi - lo);
            out.labels.push_back(static_cast<int>(c));
        }
        // Deterministic labeling: order blocks by trace of P^a on the first
        // basis state, falling back to eigenvalue order (already fixed).
        return out;
    }
    throw std::logic_error("minimal_central_projectors: unreachable");
}

BlockFactorization block_factorize(const OperatorAlgebra& left, const OperatorAlgebra& right,
                                   const LocalOperator& block, std::uint64_t seed,
                                   const AlgebraOptions& opts) {
    if (left.support != right.support)
        throw std::domain_error("block_factorize: left/right must share support");
    const long dim = block.dim();

    // Pairwise commutation of left and right.
    for (const LocalOperator& a : left.basis)
        for (const LocalOperator& b : right.basis)
            if (commutator_norm(a, b) > 1e-8 * std::max(1.0, a.hs_norm() * b.hs_norm()))
                throw std::domain_error("block_factorize: left and right do not commute");

    // Isometry onto range(block).
    Eigen::SelfAdjointEigenSolver<Mat> pes(block.matrix());
    std::vector<long> keep;
    for (long k = 0; k < dim; ++k) {
        double ev = pes.eigenvalues()(k);
        if (ev > 0.5) keep.push_back(k);
        else if (ev > 1e-6 && ev < 1 - 1e-6)
            throw std::domain_error("block_factorize: block is not a projector");
    }
    if (keep.empty()) throw std::domain_error("block_factorize: zero block");
    Mat v(dim, keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) v.col(k) = pes.eigenvectors().col(keep[k]);
    const long n = static_cast<long>(keep.size());

    // Restrict the left algebra to the block and close it there.
    std::vector<LocalOperator> lrest;
    SiteList virtual_site = {left.support.front()};
    for (const LocalOperator& a : left.basis) {
        Mat m = v.adjoint() * a.matrix() * v;
        lrest.emplace_back(virtual_site, std::vector<long>{n}, std::move(m));
    }
    OperatorAlgebra lalg = generate_algebra(lrest, virtual_site, {n}, opts);
    OperatorAlgebra lcen = center(lalg, opts);
    if (lcen.dimension() > 1)
        throw FactorizationError("block_factorize: left algebra restricted to block is not simple");

    // Generic Hermitian element of the restricted left algebra; its spectral
    // projectors are the diagonal matrix units e_ii (x) I_m.
    Rng rng(seed);
    Mat r = Mat::Zero(n, n);
    for (const LocalOperator& b : lalg.basis) {
        Mat h = (b.matrix() + b.matrix().adjoint()) / 2;
        Mat k = cplx(0, 1) * (b.matrix() - b.matrix().adjoint()) / 2;
        r += rng.gauss() * h + rng.gauss() * k;
    }
    Eigen::SelfAdjointEigenSolver<Mat> res(r);
    std::vector<std::pair<long, long>> clusters;  // [lo, hi)
    long lo = 0;
    for (long k = 1; k <= n; ++k) {
        if (k == n || res.eigenvalues()(k) - res.eigenvalues()(k - 1) > 1e-7) {
            clusters.push_back({lo, k});
            lo = k;
        }
    }
    const long dl = static_cast<long>(clusters.size());
    if (n % dl != 0)
        throw FactorizationError("block_factorize: eigenvalue clusters do not tile the block");
    const long dr = n / dl;
    for (auto [a, b] : clusters)
        if (b - a != dr) throw FactorizationError("block_factorize: unequal cluster sizes");

    std::vector<Mat> eig_proj(dl);
    for (long c = 0; c < dl; ++c) {
        Mat p = Mat::Zero(n, n);
        for (long k = clusters[c].first; k < clusters[c].second; ++k)
            p += res.eigenvectors().col(k) * res.eigenvectors().col(k).adjoint();
        eig_proj[c] = p;
    }

    // Partial isometries U_c = E_c X E_0 / sqrt(c) mapping copy 0 to copy c.
    Mat x = Mat::Zero(n, n);
    for (const LocalOperator& b : lalg.basis) {
        Mat h = (b.matrix() + b.matrix().adjoint()) / 2;
        Mat k = cplx(0, 1) * (b.matrix() - b.matrix().adjoint()) / 2;
        x += rng.gauss() * h + rng.gauss() * k;
    }
    // Basis |c, k> = U_c |0, k> with |0, k> an ONB of range(E_0) and U_c the
    // polar part of E_c X E_0 (an exact intertwiner up to numerical error;
    // the residual checks below certify it).
    Eigen::SelfAdjointEigenSolver<Mat> e0(eig_proj[0]);
    Mat base(n, dr);
    long col = 0;
    for (long k = 0; k < n; ++k)
        if (e0.eigenvalues()(k) > 0.5) base.col(col++) = e0.eigenvectors().col(k);
    if (col != dr) throw FactorizationError("block_factorize: rank mismatch in copy projector");

    Mat iso(dl * dr, n);  // row (c*dr + k) = <c,k|
    for (long c = 0; c < dl; ++c) {
        Mat cols;
        if (c == 0) {
            cols = base;
        } else {
            Mat w = eig_proj[c] * x * base;  // n x dr
            Eigen::JacobiSVD<Mat> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
            if (svd.singularValues()(dr - 1) < 1e-10)
                throw FactorizationError("block_factorize: degenerate intertwiner; reseed");
            cols = svd.matrixU() * svd.matrixV().adjoint();
        }
        for (long k = 0; k < dr; ++k) iso.row(c * dr + k) = cols.col(k).adjoint();
    }

    BlockFactorization out;
    out.iso = iso;
    out.subspace = v;
    out.dl = dl;
    out.dr = dr;

    // Residual checks: left elements must become M (x) I, right elements I (x) M.
    auto off_factor_residual = [&](const Mat& a, bool left_side) {
        Mat t = iso * (v.adjoint() * a * v) * iso.adjoint();
        // Partial traces over the other factor give the best M; residual is
        // the distance to the product form.
        if (left_side) {
            Mat m = Mat::Zero(dl, dl);
            for (long i = 0; i < dl; ++i)
                for (long j = 0; j < dl; ++j) {
                    cplx s = 0;
                    for (long k = 0; k < dr; ++k) s += t(i * dr + k, j * dr + k);
                    m(i, j) = s / static_cast<double>(dr);
                }
            Mat model = kron(m, Mat::Identity(dr, dr));
            return (t - model).norm();
        }
        Mat m = Mat::Zero(dr, dr);
        for (long i = 0; i < dr; ++i)
            for (long j = 0; j < dr; ++j) {
                cplx s = 0;
                for (long k = 0; k < dl; ++k) s += t(k * dr + i, k * dr + j);
                m(i, j) = s / static_cast<double>(dl);
            }
        Mat model = kron(Mat::Identity(dl, dl), m);
        return (t - model).norm();
    };
    for (const LocalOperator& a : left.basis)
        out.left_residual = std::max(out.left_residual, off_factor_residual(a.matrix(), true));
    for (const LocalOperator& b : right.basis)
        out.right_residual = std::max(out.right_residual, off_factor_residual(b.matrix(), false));
    return out;
}

}  // namespace plq
