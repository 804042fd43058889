#include "plq/four_site.hpp"

#include "plq/pauli_algebra.hpp"

namespace plq {

double FourSiteProblem::min_eigenvalue(const LocalOperator& q) const {
    Eigen::SelfAdjointEigenSolver<Mat> es(q.matrix());
    return es.eigenvalues()(0);
}

namespace {

// Dense matrix of sum_k w_k Q_k over the given real-site groups, with the
// tensor factor order (group_0, group_1, ...); each group's internal order is
// canonical.
Mat grouped_sum(const LatticeModel& model, const std::vector<SiteList>& groups,
                const std::vector<const ModelTerm*>& terms, const std::vector<double>& weights) {
    SiteList order;
    for (const SiteList& g : groups)
        for (const Site& s : g) order.push_back(s);
    SiteList sorted = sorted_sites(order);
    std::vector<long> sdims = model.dims_of(sorted);
    long total = 1;
    for (long d : sdims) total *= d;
    if (total > dense_cap()) throw ResourceError("four_site: grouped dimension exceeds cap");

    Mat acc = Mat::Zero(total, total);
    for (std::size_t k = 0; k < terms.size(); ++k) {
        LocalOperator q = terms[k]->projector.embedded(sorted, sdims);
        Mat qm = Mat::Identity(total, total) - q.matrix();  // Q_Z = 1 - P_Z
        LocalOperator qop(sorted, sdims, std::move(qm));
        acc += weights[k] * matrix_in_site_order(qop, order);
    }
    return acc;
}

long group_dim(const LatticeModel& model, const SiteList& g) {
    long d = 1;
    for (const Site& s : g) d *= model.dim_of(s);
    return d;
}

}  // namespace

FourSiteProblem four_site_from_column(const LatticeModel& model, int c, int i,
                                      Grouping grouping, std::uint64_t seed) {
    if (i < 1 || i > model.ly() - 2)
        throw std::domain_error("four_site_from_column: center out of range");
    if (c < 1 || (grouping == Grouping::BothNeighbors && c > model.lx() - 2))
        throw std::domain_error("four_site_from_column: column out of range for the grouping");

    SiteList g1, g2{{c, i}}, g3, gx;
    for (int y = 0; y < i; ++y) g1.push_back({c, y});
    for (int y = i + 1; y < model.ly(); ++y) g3.push_back({c, y});
    for (int y = 0; y < model.ly(); ++y) gx.push_back({c - 1, y});
    if (grouping == Grouping::BothNeighbors)
        for (int y = 0; y < model.ly(); ++y) gx.push_back({c + 1, y});
    gx = sorted_sites(gx);

    int lo = c - 1, hi = grouping == Grouping::BothNeighbors ? c + 1 : c;
    std::vector<const ModelTerm*> lower, upper;
    for (const ModelTerm* t : model.terms_in_columns(lo, hi)) {
        int v = t->plaquette[0].y + 1;  // vertical coordinate of the plaquette top row
        if (v <= i)
            lower.push_back(t);
        else
            upper.push_back(t);
    }

    FourSiteProblem p;
    p.seed = seed;
    p.column = c;
    p.center = i;
    p.grouping = grouping == Grouping::BothNeighbors ? "both_neighbors" : "left_only";
    p.dims = {group_dim(model, g1), group_dim(model, g2), group_dim(model, gx),
              group_dim(model, g3)};

    Rng rng(seed);
    std::vector<double> w_lower(lower.size(), 1.0);
    std::vector<double> w_upper;
    for (std::size_t k = 0; k < upper.size(); ++k) w_upper.push_back(rng.uniform(1.0, 2.0));
    p.weights = w_upper;

    Mat m12x = grouped_sum(model, {g1, g2, gx}, lower, w_lower);
    Mat m2x3 = grouped_sum(model, {g2, gx, g3}, upper, w_upper);
    p.q12x = LocalOperator({FourSiteProblem::v1(), FourSiteProblem::v2(), FourSiteProblem::vx()},
                           {p.dims[0], p.dims[1], p.dims[2]}, std::move(m12x));
    p.q2x3 = LocalOperator({FourSiteProblem::v2(), FourSiteProblem::vx(), FourSiteProblem::v3()},
                           {p.dims[1], p.dims[2], p.dims[3]}, std::move(m2x3));
    return p;
}

FourSiteProblem four_site_from_pair(const RandomFourSite& rfs, std::uint64_t seed) {
    FourSiteProblem p;
    p.seed = seed;
    p.dims = rfs.dims;
    p.grouping = "random_pair";
    p.q12x = LocalOperator({FourSiteProblem::v1(), FourSiteProblem::v2(), FourSiteProblem::vx()},
                           {rfs.dims[0], rfs.dims[1], rfs.dims[2]}, rfs.q12x);
    p.q2x3 = LocalOperator({FourSiteProblem::v2(), FourSiteProblem::vx(), FourSiteProblem::v3()},
                           {rfs.dims[1], rfs.dims[2], rfs.dims[3]}, rfs.q2x3);
    return p;
}

BoundaryAlgebraResult boundary_algebra(const FourSiteProblem& p, const AlgebraOptions& opts) {
    BoundaryAlgebraResult out;
    const long d2 = p.dims[1], d3 = p.dims[3];
    SiteList s23{FourSiteProblem::v2(), FourSiteProblem::v3()};
    std::vector<long> d23{d2, d3};

    OperatorAlgebra ia3 = interaction_algebra({p.q2x3}, {FourSiteProblem::v3()}, {d3}, opts);
    OperatorAlgebra ia23 = interaction_algebra({p.q2x3}, s23, d23, opts);

    // G = (full algebra on 2) (x) ia3.
    std::vector<LocalOperator> g_basis;
    for (long a = 0; a < d2; ++a)
        for (long b = 0; b < d2; ++b) {
            Mat e = Mat::Zero(d2, d2);
            e(a, b) = 1.0;
            LocalOperator e2({FourSiteProblem::v2()}, {d2}, std::move(e));
            for (const LocalOperator& bk : ia3.basis) g_basis.push_back(op_multiply(e2, bk));
        }

    // Commutant of ia23 within G: null space of the commutator Gram matrix.
    const std::size_t m = g_basis.size();
    std::vector<std::vector<Vec>> comms(m);
    for (std::size_t k = 0; k < m; ++k)
        for (const LocalOperator& cj : ia23.basis) {
            LocalOperator c = op_commutator(g_basis[k], cj);
            comms[k].push_back(Eigen::Map<const Vec>(c.matrix().data(), c.matrix().size()));
        }
    Mat gram = Mat::Zero(m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < comms[k].size(); ++j) s += comms[k][j].dot(comms[l][j]);
            gram(k, l) = s;
        }
    Eigen::SelfAdjointEigenSolver<Mat> ges(gram);
    double tol2 =
        opts.zero_tol * opts.zero_tol * std::max(1.0, ges.eigenvalues().cwiseAbs().maxCoeff());
    OperatorAlgebra ball;
    ball.support = s23;
    ball.dims = d23;
    ball.closed_flag = true;
    for (long k = 0; k < ges.eigenvalues().size(); ++k) {
        if (ges.eigenvalues()(k) > tol2) continue;
        Mat acc = Mat::Zero(d2 * d3, d2 * d3);
        for (std::size_t l = 0; l < m; ++l) acc += ges.eigenvectors()(l, k) * g_basis[l].matrix();
        ball.basis.emplace_back(s23, d23, std::move(acc));
    }
    ball.basis = hs_orthonormalize(ball.basis, opts);
    ball.generators = ball.basis;

    // Ground space of Q2X3 on (2, X, 3).
    Eigen::SelfAdjointEigenSolver<Mat> qes(p.q2x3.matrix());
    double scale = std::max(1.0, std::abs(qes.eigenvalues()(qes.eigenvalues().size() - 1)));
    std::vector<long> zero_idx;
    for (long k = 0; k < qes.eigenvalues().size(); ++k)
        if (std::abs(qes.eigenvalues()(k)) <= 1e-9 * scale) zero_idx.push_back(k);
    if (zero_idx.empty()) {
        out.empty_ground = true;
        out.unit = LocalOperator::zero(s23, d23);
        return out;
    }
    out.ground_basis = Mat(p.q2x3.dim(), zero_idx.size());
    for (std::size_t k = 0; k < zero_idx.size(); ++k)
        out.ground_basis.col(k) = qes.eigenvectors().col(zero_idx[k]);
    Mat gp = out.ground_basis * out.ground_basis.adjoint();
    out.ground_projector = LocalOperator(p.q2x3.support(), p.q2x3.site_dims(), std::move(gp));

    // Blocks and their action on the ground basis.
    CentralDecomposition cd = minimal_central_projectors(ball, 1729, opts);
    SiteList s2x3 = p.q2x3.support();
    std::vector<long> d2x3 = p.q2x3.site_dims();
    Mat unit = Mat::Zero(d2 * d3, d2 * d3);
    for (std::size_t a = 0; a < cd.size(); ++a) {
        BoundaryBlock blk;
        blk.projector = cd.projectors[a];
        std::vector<LocalOperator> pbp;
        for (const LocalOperator& b : ball.basis)
            pbp.push_back(op_multiply(op_multiply(blk.projector, b), blk.projector));
        blk.algebra.support = s23;
        blk.algebra.dims = d23;
        blk.algebra.basis = hs_orthonormalize(pbp, opts);
        blk.algebra.generators = blk.algebra.basis;
        blk.algebra.closed_flag = true;

        LocalOperator pemb = blk.projector.embedded(s2x3, d2x3);
        double pnorm = (pemb.matrix() * out.ground_basis).norm();
        blk.annihilates_ground = pnorm <= 1e-8 * out.ground_basis.norm();

        for (const LocalOperator& b : blk.algebra.basis) {
            LocalOperator bemb = b.embedded(s2x3, d2x3);
            Mat applied = bemb.matrix() * out.ground_basis;
            Mat x = out.ground_basis.adjoint() * applied;
            blk.invariance_residual =
                std::max(blk.invariance_residual, (applied - out.ground_basis * x).norm());
            blk.x_matrices.push_back(std::move(x));
        }
        if (!blk.annihilates_ground) {
            out.d_ba += static_cast<long>(blk.algebra.basis.size());
            unit += blk.projector.matrix();
        }
        out.blocks.push_back(std::move(blk));
    }
    out.unit = LocalOperator(s23, d23, std::move(unit));
    return out;
}

IsoCheckReport effective_iso_check(const BoundaryAlgebraResult& r) {
    IsoCheckReport rep;
    for (const BoundaryBlock& blk : r.blocks) {
        if (blk.annihilates_ground) {
            ++rep.blocks_annihilating;
            continue;
        }
        ++rep.blocks_checked;
        rep.max_invariance_residual =
            std::max(rep.max_invariance_residual, blk.invariance_residual);
        const std::size_t m = blk.x_matrices.size();
        if (m == 0) continue;
        Mat stacked(blk.x_matrices[0].size(), m);
        for (std::size_t k = 0; k < m; ++k)
            stacked.col(k) =
                Eigen::Map<const Vec>(blk.x_matrices[k].data(), blk.x_matrices[k].size());
        Eigen::JacobiSVD<Mat> svd(stacked);
        long rank = 0;
        for (long k = 0; k < svd.singularValues().size(); ++k)
            if (svd.singularValues()(k) > 1e-9 * svd.singularValues()(0)) ++rank;
        if (rank != static_cast<long>(m)) rep.dimensions_preserved = false;
        SiteList s2x3 = r.ground_projector.support();
        std::vector<long> d2x3 = r.ground_projector.site_dims();
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) {
                LocalOperator prod = op_multiply(blk.algebra.basis[a], blk.algebra.basis[b]);
                Mat xprod = r.ground_basis.adjoint() *
                            (prod.embedded(s2x3, d2x3).matrix() * r.ground_basis);
                rep.max_multiplicativity_residual =
                    std::max(rep.max_multiplicativity_residual,
                             (xprod - blk.x_matrices[a] * blk.x_matrices[b]).norm());
            }
    }
    return rep;
}

namespace {

// Minimal projectors of a (simple) block algebra via the eigenprojector
// clusters of a generic Hermitian element.
std::vector<LocalOperator> block_minimal_projectors(const OperatorAlgebra& blk,
                                                    std::uint64_t seed) {
    if (blk.basis.empty()) return {};
    Rng rng(seed);
    long d = blk.basis.front().dim();
    Mat r = Mat::Zero(d, d);
    for (const LocalOperator& b : blk.basis) {
        Mat h = (b.matrix() + b.matrix().adjoint()) / 2;
        Mat k = cplx(0, 1) * (b.matrix() - b.matrix().adjoint()) / 2;
        r += rng.gauss() * h + rng.gauss() * k;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(r);
    std::vector<LocalOperator> out;
    long lo = 0;
    for (long k = 1; k <= d; ++k) {
        if (k == d || es.eigenvalues()(k) - es.eigenvalues()(k - 1) > 1e-7) {
            bool inside = false;
            for (long j = lo; j < k; ++j)
                if (std::abs(es.eigenvalues()(j)) > 1e-7) inside = true;
            if (inside) {
                Mat p = Mat::Zero(d, d);
                for (long j = lo; j < k; ++j)
                    p += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
                out.emplace_back(blk.basis.front().support(), blk.basis.front().site_dims(),
                                 std::move(p));
            }
            lo = k;
        }
    }
    return out;
}

Mat rho3_of(const FourSiteProblem& p, const BoundaryAlgebraResult& ba,
            const LocalOperator& proj) {
    SiteList s2x3 = p.q2x3.support();
    std::vector<long> d2x3 = p.q2x3.site_dims();
    LocalOperator prod = op_multiply(ba.ground_projector, proj.embedded(s2x3, d2x3));
    LocalOperator r3 = partial_trace(prod, {FourSiteProblem::v3()});
    return r3.matrix();
}

long matrix_rank(const Mat& m, double rel_tol = 1e-9) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    if (svd.singularValues().size() == 0) return 0;
    double smax = svd.singularValues()(0);
    if (smax == 0) return 0;
    long r = 0;
    for (long k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) > rel_tol * smax) ++r;
    return r;
}

struct SpecCore {
    bool ok = false;
    std::string note;
    long k_rank = 0;
};

// Core hypotheses of the spectral bound on a (possibly reduced) problem.
SpecCore spec_hypotheses(const FourSiteProblem& p, bool require_unique_h_ground,
                         const AlgebraOptions& opts) {
    SpecCore out;
    const long d3 = p.dims[3];
    SiteList s2x{FourSiteProblem::v2(), FourSiteProblem::vx()};
    std::vector<long> d2x{p.dims[1], p.dims[2]};

    if (require_unique_h_ground) {
        SiteList all{FourSiteProblem::v1(), FourSiteProblem::v2(), FourSiteProblem::vx(),
                     FourSiteProblem::v3()};
        std::vector<long> alld = {p.dims[0], p.dims[1], p.dims[2], p.dims[3]};
        long total = p.dims[0] * p.dims[1] * p.dims[2] * p.dims[3];
        if (total > eigen_cap()) {
            out.note = "H too large for the uniqueness check";
            return out;
        }
        Mat h = p.q12x.embedded(all, alld).matrix() + p.q2x3.embedded(all, alld).matrix();
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        double scale = std::max(1.0, std::abs(es.eigenvalues()(total - 1)));
        int zeros = 0;
        for (long k = 0; k < total; ++k)
            if (std::abs(es.eigenvalues()(k)) <= 1e-9 * scale) ++zeros;
        if (zeros != 1) {
            out.note = "H does not have a unique zero state (count " + std::to_string(zeros) + ")";
            return out;
        }
    }

    OperatorAlgebra ia_left = interaction_algebra({p.q12x}, s2x, d2x, opts);
    OperatorAlgebra ia_right = interaction_algebra({p.q2x3}, s2x, d2x, opts);
    std::vector<LocalOperator> joint_gens = ia_left.basis;
    for (const LocalOperator& b : ia_right.basis) joint_gens.push_back(b);
    OperatorAlgebra joint = generate_algebra(joint_gens, s2x, d2x, opts);
    CentralDecomposition cd = minimal_central_projectors(joint, 3141, opts);

    Eigen::SelfAdjointEigenSolver<Mat> qes(p.q2x3.matrix());
    double qscale = std::max(1.0, std::abs(qes.eigenvalues()(p.q2x3.dim() - 1)));
    std::vector<long> zid;
    for (long k = 0; k < p.q2x3.dim(); ++k)
        if (std::abs(qes.eigenvalues()(k)) <= 1e-9 * qscale) zid.push_back(k);
    if (zid.empty()) {
        out.note = "Q2X3 has no zero state";
        return out;
    }
    Mat psi(p.q2x3.dim(), zid.size());
    for (std::size_t k = 0; k < zid.size(); ++k) psi.col(k) = qes.eigenvectors().col(zid[k]);

    SiteList s2x3 = p.q2x3.support();
    std::vector<long> d2x3 = p.q2x3.site_dims();
    int alpha0 = -1;
    for (std::size_t a = 0; a < cd.size(); ++a) {
        Mat pe = cd.projectors[a].embedded(s2x3, d2x3).matrix();
        if ((pe * psi - psi).norm() <= 1e-7 * std::max(1.0, psi.norm())) {
            alpha0 = static_cast<int>(a);
            break;
        }
    }
    if (alpha0 < 0) {
        out.note = "no central block of the (2,X) algebra fixes the Q2X3 zero states";
        return out;
    }

    BlockFactorization f;
    try {
        f = block_factorize(ia_right, ia_left, cd.projectors[alpha0], 2718, opts);
    } catch (const FactorizationError& e) {
        out.note = std::string("factorization failed: ") + e.what();
        return out;
    }
    if (f.left_residual > 1e-7 || f.right_residual > 1e-7) {
        out.note = "factorization residuals too large";
        return out;
    }

    Mat vblock = kron(f.subspace, Mat::Identity(d3, d3));
    Mat qblk = vblock.adjoint() * p.q2x3.matrix() * vblock;
    Mat rot = kron(f.iso, Mat::Identity(d3, d3));
    Mat qrot = rot * qblk * rot.adjoint();  // on H_L (x) H_R (x) H_3
    const long dl = f.dl, dr = f.dr;
    Mat qtilde = Mat::Zero(dl * d3, dl * d3);
    for (long l = 0; l < dl; ++l)
        for (long t = 0; t < d3; ++t)
            for (long lp = 0; lp < dl; ++lp)
                for (long tp = 0; tp < d3; ++tp)
                    qtilde(l * d3 + t, lp * d3 + tp) =
                        qrot((l * dr + 0) * d3 + t, (lp * dr + 0) * d3 + tp);
    double res = 0.0;
    for (long l = 0; l < dl; ++l)
        for (long r = 0; r < dr; ++r)
            for (long t = 0; t < d3; ++t)
                for (long lp = 0; lp < dl; ++lp)
                    for (long rp = 0; rp < dr; ++rp)
                        for (long tp = 0; tp < d3; ++tp) {
                            cplx expect =
                                (r == rp) ? qtilde(l * d3 + t, lp * d3 + tp) : cplx(0.0);
                            res = std::max(res, std::abs(qrot((l * dr + r) * d3 + t,
                                                              (lp * dr + rp) * d3 + tp) -
                                                         expect));
                        }
    if (res > 1e-7) {
        out.note = "Q2X3 does not act as identity on the complementary factor";
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Mat> tes(qtilde);
    double tscale = std::max(1.0, std::abs(tes.eigenvalues()(dl * d3 - 1)));
    std::vector<long> tz;
    for (long k = 0; k < dl * d3; ++k)
        if (std::abs(tes.eigenvalues()(k)) <= 1e-9 * tscale) tz.push_back(k);
    if (tz.size() != 1) {
        out.note = "Q2X3 zero state on the factored space is not unique (count " +
                   std::to_string(tz.size()) + ")";
        return out;
    }
    Vec phi = tes.eigenvectors().col(tz[0]);
    Mat rho3 = Mat::Zero(d3, d3);
    for (long t = 0; t < d3; ++t)
        for (long tp = 0; tp < d3; ++tp) {
            cplx s = 0.0;
            for (long l = 0; l < dl; ++l) s += phi(l * d3 + t) * std::conj(phi(l * d3 + tp));
            rho3(t, tp) = s;
        }
    out.k_rank = matrix_rank(rho3);
    out.ok = true;
    return out;
}

struct ReducedProblem {
    bool ok = false;
    std::string note;
    FourSiteProblem p;
    long d31 = 0;
};

// Factor H_3 = H_{3^1} (x) H_{3^2} with the interaction algebra of Q2X3 on 3
// acting on the first factor only.
ReducedProblem reduce_site3(const FourSiteProblem& p, const AlgebraOptions& opts) {
    ReducedProblem out;
    const long d3 = p.dims[3];
    OperatorAlgebra a3 = interaction_algebra({p.q2x3}, {FourSiteProblem::v3()}, {d3}, opts);
    OperatorAlgebra z3 = center(a3, opts);
    if (z3.dimension() > 1) {
        out.note = "interaction algebra on 3 is not simple";
        return out;
    }
    OperatorAlgebra trivial;
    trivial.support = {FourSiteProblem::v3()};
    trivial.dims = {d3};
    trivial.basis = {LocalOperator::identity({FourSiteProblem::v3()}, {d3})};
    trivial.basis.front().matrix() /= std::sqrt(static_cast<double>(d3));
    trivial.generators = trivial.basis;
    trivial.closed_flag = true;
    BlockFactorization f;
    try {
        f = block_factorize(a3, trivial, LocalOperator::identity({FourSiteProblem::v3()}, {d3}),
                            1618, opts);
    } catch (const FactorizationError& e) {
        out.note = std::string("site-3 factorization failed: ") + e.what();
        return out;
    }
    out.d31 = f.dl;
    const long d2x = p.dims[1] * p.dims[2];
    Mat rot = kron(Mat::Identity(d2x, d2x), f.iso * f.subspace.adjoint());
    Mat qrot = rot * p.q2x3.matrix() * rot.adjoint();
    const long dl = f.dl, dr = f.dr;
    Mat qred = Mat::Zero(d2x * dl, d2x * dl);
    for (long a = 0; a < d2x; ++a)
        for (long l = 0; l < dl; ++l)
            for (long ap = 0; ap < d2x; ++ap)
                for (long lp = 0; lp < dl; ++lp)
                    qred(a * dl + l, ap * dl + lp) =
                        qrot((a * dl + l) * dr + 0, (ap * dl + lp) * dr + 0);
    double res = 0.0;
    for (long a = 0; a < d2x; ++a)
        for (long l = 0; l < dl; ++l)
            for (long r = 0; r < dr; ++r)
                for (long ap = 0; ap < d2x; ++ap)
                    for (long lp = 0; lp < dl; ++lp)
                        for (long rp = 0; rp < dr; ++rp) {
                            cplx expect = (r == rp) ? qred(a * dl + l, ap * dl + lp) : cplx(0.0);
                            res = std::max(res, std::abs(qrot((a * dl + l) * dr + r,
                                                              (ap * dl + lp) * dr + rp) -
                                                         expect));
                        }
    if (res > 1e-7) {
        out.note = "Q2X3 does not factor through the reduced site 3";
        return out;
    }
    out.p = p;
    out.p.dims[3] = dl;
    out.p.q2x3 = LocalOperator(p.q2x3.support(), {p.dims[1], p.dims[2], dl}, std::move(qred));
    out.ok = true;
    return out;
}

}  // namespace

BoundCheckReport bound_check(const FourSiteProblem& p, BoundVariant variant,
                             const AlgebraOptions& opts) {
    BoundCheckReport rep;
    rep.variant = variant;
    const long d2 = p.dims[1], d3 = p.dims[3];

    BoundaryAlgebraResult ba = boundary_algebra(p, opts);
    if (ba.empty_ground) {
        rep.hypothesis_notes.push_back("Q2X3 has an empty ground space");
        return rep;
    }
    rep.d_ba = ba.d_ba;

    switch (variant) {
        case BoundVariant::Spec: {
            SpecCore core = spec_hypotheses(p, /*require_unique_h_ground=*/true, opts);
            if (!core.ok) {
                rep.hypothesis_notes.push_back(core.note);
                return rep;
            }
            rep.k_rank = core.k_rank;
            rep.hypotheses_hold = true;
            rep.bound_value = static_cast<double>(d2) * d2 * d3 / core.k_rank;
            rep.satisfied = rep.d_ba * core.k_rank <= d2 * d2 * d3;
            return rep;
        }
        case BoundVariant::Proj: {
            std::uint64_t seed = 5051;
            bool all_full = true;
            for (const BoundaryBlock& blk : ba.blocks) {
                std::vector<LocalOperator> tests = block_minimal_projectors(blk.algebra, seed++);
                tests.push_back(blk.projector);
                for (const LocalOperator& proj : tests) {
                    Mat r3 = rho3_of(p, ba, proj);
                    if (r3.norm() < 1e-12) continue;
                    if (matrix_rank(r3) != d3) {
                        all_full = false;
                        rep.hypothesis_notes.push_back(
                            "a boundary projector has deficient rank on 3");
                    }
                }
            }
            if (!all_full) return rep;
            rep.hypotheses_hold = true;
            rep.bound_value = static_cast<double>(d2) * d2 * d2 * d2;
            rep.satisfied = rep.d_ba <= d2 * d2 * d2 * d2;
            return rep;
        }
        case BoundVariant::Coro: {
            ReducedProblem red = reduce_site3(p, opts);
            if (!red.ok) {
                rep.hypothesis_notes.push_back(red.note);
                return rep;
            }
            rep.d31 = red.d31;
            SpecCore core = spec_hypotheses(red.p, /*require_unique_h_ground=*/true, opts);
            if (!core.ok) {
                rep.hypothesis_notes.push_back(core.note);
                return rep;
            }
            rep.k_rank = core.k_rank;
            rep.hypotheses_hold = true;
            rep.bound_value = static_cast<double>(d2) * d2 * red.d31 / core.k_rank;
            rep.satisfied = rep.d_ba * core.k_rank <= d2 * d2 * red.d31;
            return rep;
        }
        case BoundVariant::Coro2: {
            OperatorAlgebra a3 =
                interaction_algebra({p.q2x3}, {FourSiteProblem::v3()}, {d3}, opts);
            CentralDecomposition cd3 = minimal_central_projectors(a3, 2222, opts);
            Mat rho3_ground =
                rho3_of(p, ba,
                        LocalOperator::identity({FourSiteProblem::v2(), FourSiteProblem::v3()},
                                                {d2, d3}));
            Mat p3 = Mat::Zero(d3, d3);
            for (std::size_t b = 0; b < cd3.size(); ++b) {
                const Mat& zb = cd3.projectors[b].matrix();
                if ((zb * rho3_ground * zb).norm() > 1e-9) p3 += zb;
            }
            rep.d31 = std::lround(p3.trace().real());
            double spill = ((Mat::Identity(d3, d3) - p3) * rho3_ground).norm();
            if (spill > 1e-8) {
                rep.hypothesis_notes.push_back("ground states leak outside the chosen P_3");
                return rep;
            }
            rep.k_rank = matrix_rank(rho3_ground);
            std::uint64_t seed = 6061;
            bool all_full = true;
            for (const BoundaryBlock& blk : ba.blocks) {
                std::vector<LocalOperator> tests = block_minimal_projectors(blk.algebra, seed++);
                tests.push_back(blk.projector);
                for (const LocalOperator& proj : tests) {
                    Mat r3 = rho3_of(p, ba, proj);
                    if (r3.norm() < 1e-12) continue;
                    if (((Mat::Identity(d3, d3) - p3) * r3).norm() > 1e-8 ||
                        matrix_rank(r3) != rep.d31) {
                        all_full = false;
                        rep.hypothesis_notes.push_back(
                            "a boundary projector is rank-deficient on range(P_3)");
                    }
                }
            }
            if (!all_full) return rep;
            rep.hypotheses_hold = true;
            rep.bound_value = static_cast<double>(d2) * d2 * rep.d31 / rep.k_rank;
            rep.satisfied = rep.d_ba * rep.k_rank <= d2 * d2 * rep.d31;
            return rep;
        }
    }
    return rep;
}

MpsPerpResult mps_perp_decompose(const LatticeModel& model, int c, const MPO& o_c,
                                 Grouping grouping, std::uint64_t seed,
                                 const AlgebraOptions& opts) {
    MpsPerpResult out;
    const int ly = model.ly();
    Rng rng(seed);

    double input_proj_residual =
        mpo_norm(mpo_add(mpo_compress(mpo_multiply(o_c, o_c)), o_c, -1.0));
    bool input_is_projector = input_proj_residual <= 1e-8 * std::max(1.0, mpo_norm(o_c));

    std::vector<std::uint64_t> center_seeds;
    for (int i = 1; i <= ly - 2; ++i) center_seeds.push_back(rng.child_seed());

    long d2max = 1;
    double ratio_max = 0.0;
    bool certified = ly >= 3;
    for (int i = 1; i <= ly - 2; ++i) {
        FourSiteProblem p = four_site_from_column(model, c, i, grouping, center_seeds[i - 1]);
        d2max = std::max(d2max, p.dims[1]);
        BoundCheckReport rep = bound_check(
            p, grouping == Grouping::LeftOnly ? BoundVariant::Coro : BoundVariant::Spec, opts);
        if (!rep.hypotheses_hold) {
            certified = false;
            continue;
        }
        double ratio = grouping == Grouping::LeftOnly
                           ? static_cast<double>(rep.d31) / rep.k_rank
                           : static_cast<double>(p.dims[3]) / rep.k_rank;
        ratio_max = std::max(ratio_max, ratio);
    }
    out.bond_cap = certified ? std::lround(d2max * d2max * ratio_max) : 0;

    MPO cur = o_c;
    for (int j = 2; j <= ly - 2; ++j) {
        FourSiteProblem p = four_site_from_column(model, c, j, grouping, center_seeds[j - 1]);
        BoundaryAlgebraResult ba = boundary_algebra(p, opts);
        if (ba.empty_ground)
            throw std::domain_error("mps_perp_decompose: Q2X3 has no zero state at center " +
                                    std::to_string(j));
        SiteList tail;
        for (int y = j; y < ly; ++y) tail.push_back({c, y});
        std::vector<long> tail_dims = model.dims_of(tail);
        MPO u_tail = mpo_from_dense(ba.unit.matrix(), tail_dims);
        std::vector<MpoTensor> cores;
        for (int y = 0; y < j; ++y) {
            long d = model.dim_of({c, y});
            MpoTensor id(1, 1, d, d);
            for (long k = 0; k < d; ++k) id.at(0, 0, k, k) = 1.0;
            cores.push_back(std::move(id));
        }
        for (long k = 0; k < u_tail.length(); ++k) cores.push_back(u_tail.tensor(k));
        MPO u = MPO(std::move(cores));
        cur = mpo_compress(mpo_multiply(mpo_multiply(u, cur), u));
        out.sweep_bond_dims.push_back(cur.max_bond());
        if (out.bond_cap > 0 && cur.max_bond() > out.bond_cap)
            throw std::runtime_error(
                "mps_perp_decompose: bond dimension exceeded the certified bound");
    }
    out.o_mps = cur;
    out.o_perp = mpo_compress(mpo_add(o_c, cur, -1.0));
    out.sum_residual = mpo_norm(mpo_add(mpo_add(out.o_mps, out.o_perp), o_c, -1.0));

    if (grouping == Grouping::LeftOnly) {
        ColumnWindowOperator w = adjacent_window(model, c - 1);
        MPO pemb = embed_in_window(w, out.o_perp, /*left_side=*/false);
        out.perp_window_product_norm = std::max(mpo_norm(mpo_multiply(pemb, w.mpo)),
                                                mpo_norm(mpo_multiply(w.mpo, pemb)));
    } else {
        std::vector<const ModelTerm*> terms = model.terms_in_columns(c - 1, c + 1);
        ColumnWindowOperator w = build_window(model, {c - 1, c}, {c + 1, c + 1}, terms);
        MPO in_block = embed_in_block(model, {c - 1, c}, c, out.o_perp);
        MPO pemb = embed_in_window(w, in_block, /*left_side=*/true);
        out.perp_window_product_norm = std::max(mpo_norm(mpo_multiply(pemb, w.mpo)),
                                                mpo_norm(mpo_multiply(w.mpo, pemb)));
    }
    if (input_is_projector) {
        double r1 =
            mpo_norm(mpo_add(mpo_compress(mpo_multiply(out.o_mps, out.o_mps)), out.o_mps, -1.0));
        double r2 = mpo_norm(
            mpo_add(mpo_compress(mpo_multiply(out.o_perp, out.o_perp)), out.o_perp, -1.0));
        out.mps_projector_residual = std::max(r1, r2);
    }
    return out;
}

std::vector<PauliString> recognize_pauli_projector(const LocalOperator& p,
                                                   const PauliContext& ctx) {
    const SiteList& sup = p.support();
    int n = static_cast<int>(sup.size()) * ctx.qubits_per_site();
    if (n > 12) return {};
    std::vector<int> slots;
    for (const Site& s : sup)
        for (int q = 0; q < ctx.qubits_per_site(); ++q) slots.push_back(ctx.slot(s, q));
    const long d = p.dim();

    std::vector<std::pair<PauliString, double>> nonzero;
    for (long mask = 0; mask < (1l << (2 * n)); ++mask) {
        PauliString g;
        for (int k = 0; k < n; ++k) {
            if (mask & (1l << k)) g.x |= 1ull << slots[k];
            if (mask & (1l << (n + k))) g.z |= 1ull << slots[k];
        }
        g = hermitian_monomial(g);
        Mat gd = ctx.to_dense(g, sup).matrix();
        cplx lam = (gd.adjoint() * p.matrix()).trace() / static_cast<double>(d);
        if (std::abs(lam) > 1e-8) {
            if (std::abs(lam.imag()) > 1e-8) return {};
            nonzero.push_back({g, lam.real()});
        }
    }
    if (nonzero.empty()) return {};
    std::vector<PauliString> gens;
    double lam_id = 0.0;
    std::vector<PauliString> echelon;
    std::vector<int> leads;
    auto leading_bit = [](const PauliString& q) {
        if (q.x) return 64 + 63 - __builtin_clzll(q.x);
        if (q.z) return 63 - __builtin_clzll(q.z);
        return -1;
    };
    for (auto& [g, lam] : nonzero) {
        if (g.is_identity_up_to_phase()) {
            lam_id = lam;
            continue;
        }
        PauliString v = g;
        for (std::size_t r = 0; r < echelon.size(); ++r) {
            int bit = leads[r];
            std::uint64_t mask2 = 1ull << (bit % 64);
            bool set = bit >= 64 ? (v.x & mask2) : (v.z & mask2);
            if (set) v = v * echelon[r];
        }
        if (!v.is_identity_up_to_phase()) {
            echelon.push_back(v);
            leads.push_back(leading_bit(v));
            PauliString signed_g = g;
            if (lam_id != 0.0 && lam / lam_id < 0) signed_g.phase = (signed_g.phase + 2) % 4;
            gens.push_back(signed_g);
        }
    }
    if (lam_id <= 0) return {};
    Mat recon = Mat::Identity(d, d);
    for (const PauliString& g : gens) {
        Mat gd = ctx.to_dense(g, sup).matrix();
        recon = recon * (Mat::Identity(d, d) + gd) / 2.0;
    }
    if ((recon - p.matrix()).norm() > 1e-9 * std::max(1.0, p.matrix().norm())) return {};
    return gens;
}

Theorem3Result theorem3_witness(const LatticeModel& model, std::uint64_t seed,
                                const AlgebraOptions& opts) {
    Theorem3Result out;
    ZeroCount zc = brute_force_zero_count(model);
    out.zero_count = zc.count;
    if (zc.count < 1) {
        out.reason = "model has no zero-energy state";
        return out;
    }

    const int lx = model.lx();
    std::vector<CentralDecomposition> cands;
    for (int c = 0; c < lx; ++c) {
        int lo = c == 0 ? 0 : c - 1;
        int hi = c == 0 ? 1 : c;
        OperatorAlgebra alg = column_interaction_algebra(model, lo, hi, c, opts);
        cands.push_back(minimal_central_projectors(alg, seed + c, opts));
    }

    bool pauli_ok = model.all_terms_pauli();
    std::vector<std::vector<std::vector<PauliString>>> recognized(lx);
    if (pauli_ok) {
        for (int c = 0; c < lx && pauli_ok; ++c) {
            for (const LocalOperator& proj : cands[c].projectors) {
                bool is_id =
                    (proj.matrix() - Mat::Identity(proj.dim(), proj.dim())).norm() < 1e-9;
                std::vector<PauliString> gens =
                    is_id ? std::vector<PauliString>{}
                          : recognize_pauli_projector(proj, *model.pauli_context());
                if (!is_id && gens.empty()) {
                    pauli_ok = false;
                    break;
                }
                recognized[c].push_back(std::move(gens));
            }
        }
    }

    std::vector<int> tuple(lx, 0);
    bool found = false;
    while (true) {
        double trace = -1.0;
        if (pauli_ok) {
            std::vector<PauliString> gens;
            for (const ModelTerm& t : model.terms())
                for (const PauliString& g : t.stabilizer_gens) gens.push_back(g);
            std::vector<PauliString> wit_gens;
            for (int c = 0; c < lx; ++c)
                for (const PauliString& g : recognized[c][tuple[c]]) wit_gens.push_back(g);
            bool gen_commute = true;
            for (const PauliString& w : wit_gens) {
                for (const PauliString& g : gens)
                    if (!w.commutes_with(g)) gen_commute = false;
                for (const PauliString& g : wit_gens)
                    if (!w.commutes_with(g)) gen_commute = false;
            }
            if (gen_commute) {
                for (const PauliString& w : wit_gens) gens.push_back(w);
                int n = 0;
                for (long d : model.site_dims()) {
                    long v = d;
                    while (v > 1) {
                        v /= 2;
                        ++n;
                    }
                }
                trace = static_cast<double>(stabilizer_zero_count(gens, n));
            }
        }
        if (trace < 0) {
            std::vector<LocalOperator> extra;
            for (int c = 0; c < lx; ++c) extra.push_back(cands[c].projectors[tuple[c]]);
            trace = restricted_zero_trace(model, extra);
        }
        if (trace > 1e-9) {
            found = true;
            break;
        }
        int c = 0;
        while (c < lx) {
            if (++tuple[c] < static_cast<int>(cands[c].size())) break;
            tuple[c] = 0;
            ++c;
        }
        if (c == lx) break;
    }
    if (!found)
        throw std::logic_error(
            "theorem3_witness: no consistent central sequence despite a nonzero count");

    out.chosen_tuple = tuple;
    Rng rng(seed);
    for (int c = 0; c < lx; ++c) {
        const LocalOperator& proj = cands[c].projectors[tuple[c]];
        MPO mpo = mpo_from_dense(proj);
        if (c >= 1) {
            MpsPerpResult mp =
                mps_perp_decompose(model, c, mpo, Grouping::LeftOnly, rng.child_seed(), opts);
            mpo = mp.o_mps;
        }
        out.witness_bond_dims.push_back(mpo.max_bond());
        out.witness.entries.push_back({c, std::move(mpo)});
    }
    out.found = true;
    return out;
}

}  // namespace plq
