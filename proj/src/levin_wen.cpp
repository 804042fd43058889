#include "plq/levin_wen.hpp"

#include "plq/random.hpp"

namespace plq {

FSymbolTable::FSymbolTable(int n_labels, std::vector<char> fusion, std::vector<cplx> f,
                           std::vector<double> qdims)
    : n_(n_labels), fusion_(std::move(fusion)), f_(std::move(f)), qdims_(std::move(qdims)) {
    if (fusion_.size() != static_cast<std::size_t>(n_ * n_ * n_))
        throw std::domain_error("FSymbolTable: fusion table size mismatch");
    if (f_.size() != static_cast<std::size_t>(n_) * n_ * n_ * n_ * n_ * n_)
        throw std::domain_error("FSymbolTable: F table size mismatch");
}

namespace {

bool tuple_admissible(const FSymbolTable& t, int i, int j, int m, int k, int l, int n) {
    return t.admissible(i, j, m) && t.admissible(k, l, m) && t.admissible(j, k, n) &&
           t.admissible(i, n, l);
}

}  // namespace

FSymbolTable z2_table() {
    const int n = 2;
    std::vector<char> fusion(n * n * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) fusion[(a * n + b) * n + c] = ((a + b + c) % 2 == 0);
    std::vector<cplx> f(static_cast<std::size_t>(n) * n * n * n * n * n, 0.0);
    FSymbolTable probe(n, fusion, f, {1.0, 1.0});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int m = 0; m < n; ++m)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        for (int nn = 0; nn < n; ++nn)
                            if (tuple_admissible(probe, i, j, m, k, l, nn))
                                f[((((i * n + j) * n + m) * n + k) * n + l) * n + nn] = 1.0;
    return FSymbolTable(n, std::move(fusion), std::move(f), {1.0, 1.0});
}

PentagonReport pentagon_check(const FSymbolTable& t) {
    // sum_n F^{mlq}_{kpn} F^{jip}_{mns} F^{jsn}_{lkr} = F^{jip}_{qkr} F^{riq}_{mls}
    PentagonReport rep;
    const int n = t.n_labels();
    for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l)
            for (int q = 0; q < n; ++q)
                for (int k = 0; k < n; ++k)
                    for (int p = 0; p < n; ++p)
                        for (int j = 0; j < n; ++j)
                            for (int i = 0; i < n; ++i)
                                for (int s = 0; s < n; ++s)
                                    for (int r = 0; r < n; ++r) {
                                        cplx lhs = 0.0;
                                        for (int nn = 0; nn < n; ++nn)
                                            lhs += t.f(m, l, q, k, p, nn) *
                                                   t.f(j, i, p, m, nn, s) *
                                                   t.f(j, s, nn, l, k, r);
                                        cplx rhs =
                                            t.f(j, i, p, q, k, r) * t.f(r, i, q, m, l, s);
                                        rep.max_residual =
                                            std::max(rep.max_residual, std::abs(lhs - rhs));
                                        ++rep.equations_checked;
                                    }
    return rep;
}

FSymbolTable solve_fibonacci_table(std::uint64_t seed) {
    const int n = 2;
    std::vector<char> fusion(n * n * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) fusion[(a * n + b) * n + c] = (a + b + c != 1);

    // Unknowns: real values on the admissible 6-tuples.
    std::vector<std::array<int, 6>> slots;
    {
        std::vector<cplx> zero(static_cast<std::size_t>(n) * n * n * n * n * n, 0.0);
        FSymbolTable probe(n, fusion, zero);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int m = 0; m < n; ++m)
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l)
                            for (int nn = 0; nn < n; ++nn)
                                if (tuple_admissible(probe, i, j, m, k, l, nn))
                                    slots.push_back({i, j, m, k, l, nn});
    }
    const std::size_t nv = slots.size();

    auto table_of = [&](const Eigen::VectorXd& v) {
        std::vector<cplx> f(static_cast<std::size_t>(n) * n * n * n * n * n, 0.0);
        for (std::size_t k = 0; k < nv; ++k) {
            const auto& s = slots[k];
            f[((((s[0] * n + s[1]) * n + s[2]) * n + s[3]) * n + s[4]) * n + s[5]] = v(k);
        }
        return FSymbolTable(n, fusion, std::move(f));
    };

    // Residuals: pentagon over all tuples + orthogonality of each F-matrix
    // (fixed i,j,k,l; indices m,n) restricted to admissible slots + the sign
    // gauge F^{tau tau 0}_{tau tau tau} > 0 handled by the seeding below.
    auto residuals = [&](const Eigen::VectorXd& v) {
        FSymbolTable t = table_of(v);
        std::vector<double> out;
        for (int m = 0; m < n; ++m)
            for (int l = 0; l < n; ++l)
                for (int q = 0; q < n; ++q)
                    for (int k = 0; k < n; ++k)
                        for (int p = 0; p < n; ++p)
                            for (int j = 0; j < n; ++j)
                                for (int i = 0; i < n; ++i)
                                    for (int s = 0; s < n; ++s)
                                        for (int r = 0; r < n; ++r) {
                                            cplx lhs = 0.0;
                                            for (int nn = 0; nn < n; ++nn)
                                                lhs += t.f(m, l, q, k, p, nn) *
                                                       t.f(j, i, p, m, nn, s) *
                                                       t.f(j, s, nn, l, k, r);
                                            cplx rhs = t.f(j, i, p, q, k, r) *
                                                       t.f(r, i, q, m, l, s);
                                            out.push_back((lhs - rhs).real());
                                        }
        // row-orthonormality of each recoupling matrix on admissible slots
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        for (int m = 0; m < n; ++m)
                            for (int mp = 0; mp < n; ++mp) {
                                bool row_ok = t.admissible(i, j, m) && t.admissible(k, l, m);
                                bool row2_ok = t.admissible(i, j, mp) && t.admissible(k, l, mp);
                                if (!row_ok || !row2_ok) continue;
                                cplx dot = 0.0;
                                for (int nn = 0; nn < n; ++nn)
                                    dot += t.f(i, j, m, k, l, nn) *
                                           std::conj(t.f(i, j, mp, k, l, nn));
                                out.push_back(std::abs(dot - (m == mp ? 1.0 : 0.0)));
                            }
                    }
        return out;
    };

    Rng rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Eigen::VectorXd v(nv);
        for (std::size_t k = 0; k < nv; ++k) v(k) = 0.5 + 0.5 * std::abs(rng.gauss());
        // Gauss-Newton with numeric Jacobian.
        for (int iter = 0; iter < 400; ++iter) {
            std::vector<double> r0 = residuals(v);
            double norm = 0.0;
            for (double x : r0) norm += x * x;
            if (std::sqrt(norm) < 1e-14) break;
            const double h = 1e-7;
            Eigen::MatrixXd jac(r0.size(), nv);
            for (std::size_t c = 0; c < nv; ++c) {
                Eigen::VectorXd vp = v;
                vp(c) += h;
                std::vector<double> rp = residuals(vp);
                for (std::size_t rr = 0; rr < r0.size(); ++rr)
                    jac(rr, c) = (rp[rr] - r0[rr]) / h;
            }
            Eigen::VectorXd rhs(r0.size());
            for (std::size_t rr = 0; rr < r0.size(); ++rr) rhs(rr) = r0[rr];
            Eigen::MatrixXd jtj =
                jac.transpose() * jac + 1e-10 * Eigen::MatrixXd::Identity(nv, nv);
            Eigen::VectorXd step = jtj.ldlt().solve(jac.transpose() * rhs);
            v -= step;
        }
        std::vector<double> rf = residuals(v);
        double norm = 0.0;
        for (double x : rf) norm = std::max(norm, std::abs(x));
        if (norm > 1e-13) continue;

        // Canonical gauge: the mixing entries F^{tau tau 0}_{tau tau tau} and
        // F^{tau tau tau}_{tau tau 0} positive, diagonal F^{tau tau 0}_{tau tau 0} positive.
        FSymbolTable t = table_of(v);
        double f00 = t.f(1, 1, 0, 1, 1, 0).real();
        double f01 = t.f(1, 1, 0, 1, 1, 1).real();
        if (f00 <= 0 || f01 <= 0) continue;
        // quantum dimension of tau from the solved table: d_tau = 1/F^{tt0}_{tt0}
        double dtau = 1.0 / f00;
        return FSymbolTable(n, fusion, t.f_raw(), {1.0, dtau});
    }
    throw std::runtime_error("solve_fibonacci_table: pentagon solve failed to converge");
}

Mat b_loop_dense(const FSymbolTable& t, int s, const LoopSpec& loop) {
    const int n = t.n_labels();
    const int nl = loop.n;
    if (nl < 3) throw std::domain_error("b_loop_dense: need at least 3 loop bonds");
    double entries = std::pow(static_cast<double>(n), 4.0 * nl);
    if (entries > static_cast<double>(1l << 24))
        throw ResourceError("b_loop_dense: too many matrix entries");
    if (s < 0 || s >= n || !t.admissible(s, s, 0))
        throw std::domain_error("b_loop_dense: inadmissible particle type");

    const long site_dim = static_cast<long>(n) * n;  // (e, a)
    long dim = 1;
    for (int a = 0; a < nl; ++a) dim *= site_dim;
    Mat out = Mat::Zero(dim, dim);

    // iterate over e-chain, a-chain, a'-chain
    std::vector<int> e(nl), av(nl), ap(nl);
    long n_e = 1;
    for (int a = 0; a < nl; ++a) n_e *= n;
    long n_a = n_e;
    for (long ei = 0; ei < n_e; ++ei) {
        long tmp = ei;
        for (int k = nl - 1; k >= 0; --k) {
            e[k] = tmp % n;
            tmp /= n;
        }
        for (long ai = 0; ai < n_a; ++ai) {
            tmp = ai;
            for (int k = nl - 1; k >= 0; --k) {
                av[k] = tmp % n;
                tmp /= n;
            }
            for (long api = 0; api < n_a; ++api) {
                tmp = api;
                for (int k = nl - 1; k >= 0; --k) {
                    ap[k] = tmp % n;
                    tmp /= n;
                }
                cplx val = 1.0;
                for (int a = 0; a < nl && val != 0.0; ++a) {
                    int prev = (a + nl - 1) % nl;
                    val *= t.f(e[a], av[prev], av[a], s, ap[a], ap[prev]);
                }
                if (val == 0.0) continue;
                long row = 0, col = 0;
                for (int a = 0; a < nl; ++a) {
                    row = row * site_dim + (e[a] * n + ap[a]);
                    col = col * site_dim + (e[a] * n + av[a]);
                }
                out(row, col) = val;
            }
        }
    }
    return out;
}

LoopMpo b_loop_mpo(const FSymbolTable& t, int s, const LoopSpec& loop) {
    const int n = t.n_labels();
    const long bond = static_cast<long>(n) * n;  // (beta, beta')
    const long site_dim = static_cast<long>(n) * n;
    LoopMpo out;
    out.bond = bond;
    for (int a = 0; a < loop.n; ++a) {
        MpoTensor core(bond, bond, site_dim, site_dim);
        for (int beta_prev = 0; beta_prev < n; ++beta_prev)
            for (int betap_prev = 0; betap_prev < n; ++betap_prev)
                for (int e = 0; e < n; ++e)
                    for (int aa = 0; aa < n; ++aa)
                        for (int aap = 0; aap < n; ++aap) {
                            cplx val = t.f(e, beta_prev, aa, s, aap, betap_prev);
                            if (val == 0.0) continue;
                            // right bond carries (beta_a, beta'_a) = (a, a')
                            core.at(beta_prev * n + betap_prev, aa * n + aap, e * n + aap,
                                    e * n + aa) = val;
                        }
        out.tensors.push_back(std::move(core));
    }
    return out;
}

namespace {

// Row of the periodic MPO for a fixed output configuration (row index).
void loop_row(const LoopMpo& mpo, long row, Vec& out) {
    const long nl = mpo.length();
    const long site_dim = mpo.tensors[0].p;
    std::vector<long> rp(nl);
    long tmp = row;
    for (long k = nl - 1; k >= 0; --k) {
        rp[k] = tmp % site_dim;
        tmp /= site_dim;
    }
    // acc[(alpha0, alpha_k); col-so-far] as a dense block per bond pair
    const long b = mpo.bond;
    long cols = 1;
    Mat acc(b * b, 1);
    for (long a0 = 0; a0 < b; ++a0)
        for (long ak = 0; ak < b; ++ak) acc(a0 * b + ak, 0) = (a0 == ak) ? 1.0 : 0.0;
    for (long k = 0; k < nl; ++k) {
        const MpoTensor& t = mpo.tensors[k];
        Mat next = Mat::Zero(b * b, cols * site_dim);
        for (long a0 = 0; a0 < b; ++a0)
            for (long ak = 0; ak < b; ++ak)
                for (long c = 0; c < cols; ++c) {
                    cplx v = acc(a0 * b + ak, c);
                    if (v == 0.0) continue;
                    for (long an = 0; an < b; ++an)
                        for (long q = 0; q < site_dim; ++q) {
                            cplx w = t.at(ak, an, rp[k], q);
                            if (w == 0.0) continue;
                            next(a0 * b + an, c * site_dim + q) += v * w;
                        }
                }
        acc = std::move(next);
        cols *= site_dim;
    }
    out.resize(cols);
    for (long c = 0; c < cols; ++c) {
        cplx sum = 0.0;
        for (long a0 = 0; a0 < b; ++a0) sum += acc(a0 * b + a0, c);
        out(c) = sum;
    }
}

}  // namespace

Mat loop_to_dense(const LoopMpo& mpo) {
    const long site_dim = mpo.tensors[0].p;
    long dim = 1;
    for (long k = 0; k < mpo.length(); ++k) dim *= site_dim;
    if (dim > 2048) throw ResourceError("loop_to_dense: dimension too large");
    Mat out(dim, dim);
    Vec row;
    for (long r = 0; r < dim; ++r) {
        loop_row(mpo, r, row);
        out.row(r) = row.transpose();
    }
    return out;
}

double loop_mpo_dense_diff(const LoopMpo& mpo, const Mat& dense) {
    const long dim = dense.rows();
    double acc = 0.0;
    Vec row;
    for (long r = 0; r < dim; ++r) {
        loop_row(mpo, r, row);
        acc += (row.transpose() - dense.row(r)).squaredNorm();
    }
    return std::sqrt(acc);
}

std::vector<long> loop_compressed_bond_dims(const LoopMpo& mpo, double threshold) {
    Mat dense = loop_to_dense(mpo);
    std::vector<long> dims(mpo.length(), mpo.tensors[0].p);
    MPO open = mpo_from_dense(dense, dims, threshold);
    return open.bond_dims();
}

StringNetPatch string_net_patch(const FSymbolTable& t, const LoopSpec& loop) {
    StringNetPatch out;
    const int n = t.n_labels();
    const long site_dim = static_cast<long>(n) * n;
    for (int k = 0; k < loop.n; ++k) {
        out.sites.push_back({k, 0});
        out.dims.push_back(site_dim);
    }
    long dim = 1;
    for (int k = 0; k < loop.n; ++k) dim *= site_dim;
    if (dim > dense_cap()) throw ResourceError("string_net_patch: dimension too large");

    // Flux projector: sum_s d_s B^s / D, projectorized at eigenvalue 1.
    std::vector<double> d = t.quantum_dims();
    if (d.empty()) d.assign(n, 1.0);
    double total = 0.0;
    for (double x : d) total += x * x;
    Mat bp = Mat::Zero(dim, dim);
    for (int s = 0; s < n; ++s) bp += (d[s] / total) * b_loop_dense(t, s, loop);
    LocalOperator bph(out.sites, out.dims, std::move(bp));

    // Vertex projectors: diagonal admissibility of (a-1, a, e_a).
    SiteIndexer idx(out.dims);
    for (int a = 0; a < loop.n; ++a) {
        int prev = (a + loop.n - 1) % loop.n;
        Mat v = Mat::Zero(dim, dim);
        std::vector<long> digits;
        for (long z = 0; z < dim; ++z) {
            idx.decode(z, digits);
            int e_a = static_cast<int>(digits[a] / n);
            int lab_a = static_cast<int>(digits[a] % n);
            int lab_prev = static_cast<int>(digits[prev] % n);
            if (t.admissible(lab_prev, lab_a, e_a)) v(z, z) = 1.0;
        }
        out.vertex_projectors.emplace_back(out.sites, out.dims, std::move(v));
    }

    // The flux average is a projector on the admissible subspace; clip it to
    // an exact projector via its spectrum.
    Eigen::SelfAdjointEigenSolver<Mat> es(bph.matrix());
    Mat proj = Mat::Zero(dim, dim);
    for (long k = 0; k < dim; ++k)
        if (es.eigenvalues()(k) > 1.0 - 1e-8)
            proj += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    out.flux_projector = LocalOperator(out.sites, out.dims, std::move(proj));
    return out;
}

CentralityReport verify_central(const LocalOperator& b, const std::vector<LocalOperator>& terms,
                                const SiteList& loop_sites, const std::vector<long>& loop_dims,
                                const AlgebraOptions& opts) {
    CentralityReport rep;
    for (const LocalOperator& t : terms)
        rep.max_commutator = std::max(rep.max_commutator, commutator_norm(b, t));
    OperatorAlgebra ia = interaction_algebra(terms, loop_sites, loop_dims, opts);
    OperatorAlgebra z = center(ia, opts);
    rep.center_membership_residual = z.membership_residual(b);
    return rep;
}

}  // namespace plq
