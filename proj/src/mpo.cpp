#include "plq/mpo.hpp"

namespace plq {

MPO::MPO(std::vector<MpoTensor> tensors) : tensors_(std::move(tensors)) {
    if (tensors_.empty()) throw std::domain_error("MPO: empty chain");
    if (tensors_.front().l != 1 || tensors_.back().r != 1)
        throw std::domain_error("MPO: boundary bonds must have dimension 1");
    for (std::size_t i = 0; i + 1 < tensors_.size(); ++i)
        if (tensors_[i].r != tensors_[i + 1].l)
            throw std::domain_error("MPO: bond dimension mismatch");
}

std::vector<long> MPO::bond_dims() const {
    std::vector<long> out;
    for (std::size_t i = 0; i + 1 < tensors_.size(); ++i) out.push_back(tensors_[i].r);
    return out;
}

long MPO::max_bond() const {
    long m = 1;
    for (long b : bond_dims()) m = std::max(m, b);
    return m;
}

std::vector<long> MPO::phys_dims() const {
    std::vector<long> out;
    for (const MpoTensor& t : tensors_) out.push_back(t.p);
    return out;
}

long MPO::total_phys_dim() const {
    long t = 1;
    for (long p : phys_dims()) {
        if (t > (1l << 62) / p) throw ResourceError("MPO: physical dimension overflow");
        t *= p;
    }
    return t;
}

MPO MPO::identity(const std::vector<long>& phys_dims) {
    std::vector<MpoTensor> ts;
    for (long d : phys_dims) {
        MpoTensor t(1, 1, d, d);
        for (long k = 0; k < d; ++k) t.at(0, 0, k, k) = 1.0;
        ts.push_back(std::move(t));
    }
    return MPO(std::move(ts));
}

MPO MPO::product_operator(const std::vector<Mat>& factors) {
    std::vector<MpoTensor> ts;
    for (const Mat& f : factors) {
        MpoTensor t(1, 1, f.rows(), f.cols());
        for (long i = 0; i < f.rows(); ++i)
            for (long j = 0; j < f.cols(); ++j) t.at(0, 0, i, j) = f(i, j);
        ts.push_back(std::move(t));
    }
    return MPO(std::move(ts));
}

MPO MPO::scaled(cplx factor) const {
    MPO out = *this;
    for (cplx& v : out.tensors_.front().data) v *= factor;
    return out;
}

MPO MPO::adjoint_mpo() const {
    MPO out = *this;
    for (MpoTensor& t : out.tensors_) {
        MpoTensor n(t.l, t.r, t.q, t.p);
        for (long il = 0; il < t.l; ++il)
            for (long ir = 0; ir < t.r; ++ir)
                for (long ip = 0; ip < t.p; ++ip)
                    for (long iq = 0; iq < t.q; ++iq)
                        n.at(il, ir, iq, ip) = std::conj(t.at(il, ir, ip, iq));
        t = std::move(n);
    }
    return out;
}

namespace {

// Fused physical index f = r_phys * q_dim + c_phys per site.
long fused_stride(const std::vector<long>& phys, std::size_t from) {
    long s = 1;
    for (std::size_t k = from; k < phys.size(); ++k) s *= phys[k] * phys[k];
    return s;
}

}  // namespace

MPO mpo_from_dense(const Mat& op, const std::vector<long>& phys_dims, double threshold) {
    const std::size_t n = phys_dims.size();
    if (n == 0) throw std::domain_error("mpo_from_dense: empty chain");
    long total = 1;
    for (long d : phys_dims) total *= d;
    if (op.rows() != total || op.cols() != total)
        throw std::domain_error("mpo_from_dense: matrix does not match phys dims");
    if (total > dense_cap()) throw ResourceError("mpo_from_dense: exceeds dense cap");

    // V[f_1, ..., f_n] with f_i = (r_i, c_i)
    SiteIndexer ridx(phys_dims);
    Vec v(fused_stride(phys_dims, 0));
    std::vector<long> rd, cd;
    for (long r = 0; r < total; ++r) {
        ridx.decode(r, rd);
        for (long c = 0; c < total; ++c) {
            ridx.decode(c, cd);
            long f = 0;
            for (std::size_t k = 0; k < n; ++k)
                f = f * (phys_dims[k] * phys_dims[k]) + (rd[k] * phys_dims[k] + cd[k]);
            v(f) = op(r, c);
        }
    }

    std::vector<MpoTensor> cores;
    long left_bond = 1;
    Mat rest = Eigen::Map<Mat>(v.data(), 1, v.size());  // 1 x total_fused
    for (std::size_t k = 0; k < n; ++k) {
        long f = phys_dims[k] * phys_dims[k];
        long cols_rest = rest.cols() / f;
        // reshape to (left_bond * f) x cols_rest
        Mat m(left_bond * f, cols_rest);
        for (long a = 0; a < left_bond; ++a)
            for (long b = 0; b < f; ++b)
                for (long c = 0; c < cols_rest; ++c) m(a * f + b, c) = rest(a, b * cols_rest + c);
        long rank;
        Mat u, carry;
        if (k + 1 == n) {
            rank = 1;
            u = m;
            carry = Mat::Ones(1, 1);
        } else {
            Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto& s = svd.singularValues();
            double smax = s.size() ? s(0) : 0.0;
            rank = 0;
            for (long i = 0; i < s.size(); ++i)
                if (s(i) > threshold * smax && s(i) > 0) ++rank;
            rank = std::max(rank, 1l);
            u = svd.matrixU().leftCols(rank);
            carry = s.head(rank).asDiagonal() * svd.matrixV().leftCols(rank).adjoint();
        }
        MpoTensor core(left_bond, rank, phys_dims[k], phys_dims[k]);
        for (long a = 0; a < left_bond; ++a)
            for (long rp = 0; rp < phys_dims[k]; ++rp)
                for (long cp = 0; cp < phys_dims[k]; ++cp)
                    for (long b = 0; b < rank; ++b)
                        core.at(a, b, rp, cp) = u(a * f + rp * phys_dims[k] + cp, b);
        cores.push_back(std::move(core));
        rest = carry;
        left_bond = rank;
    }
    return MPO(std::move(cores));
}

MPO mpo_from_dense(const LocalOperator& op, double threshold) {
    return mpo_from_dense(op.matrix(), op.site_dims(), threshold);
}

Mat mpo_to_dense(const MPO& mpo) {
    long total = mpo.total_phys_dim();
    if (total > dense_cap()) throw ResourceError("mpo_to_dense: exceeds dense cap");
    // acc[b][(R, C)] over processed sites
    long rows = 1;
    Mat acc = Mat::Ones(1, 1);  // (R*C) x bond
    for (long i = 0; i < mpo.length(); ++i) {
        const MpoTensor& t = mpo.tensor(i);
        Mat next = Mat::Zero(rows * t.p * rows * t.q, t.r);
        // next[((R, p), (C, q)), b'] = sum_b acc[(R, C), b] * t[b, b', p, q]
        for (long R = 0; R < rows; ++R)
            for (long C = 0; C < rows; ++C)
                for (long b = 0; b < t.l; ++b) {
                    cplx a = acc(R * rows + C, b);
                    if (a == 0.0) continue;
                    for (long bp = 0; bp < t.r; ++bp)
                        for (long p = 0; p < t.p; ++p)
                            for (long q = 0; q < t.q; ++q)
                                next((R * t.p + p) * (rows * t.q) + (C * t.q + q), bp) +=
                                    a * t.at(b, bp, p, q);
                }
        rows *= t.p;
        acc = std::move(next);
    }
    Mat out(rows, rows);
    for (long R = 0; R < rows; ++R)
        for (long C = 0; C < rows; ++C) out(R, C) = acc(R * rows + C, 0);
    return out;
}

MPO mpo_multiply(const MPO& a, const MPO& b) {
    if (a.length() != b.length()) throw std::domain_error("mpo_multiply: length mismatch");
    std::vector<MpoTensor> out;
    for (long i = 0; i < a.length(); ++i) {
        const MpoTensor& ta = a.tensor(i);
        const MpoTensor& tb = b.tensor(i);
        if (ta.q != tb.p) throw std::domain_error("mpo_multiply: physical dimension mismatch");
        MpoTensor t(ta.l * tb.l, ta.r * tb.r, ta.p, tb.q);
        for (long la = 0; la < ta.l; ++la)
            for (long lb = 0; lb < tb.l; ++lb)
                for (long ra = 0; ra < ta.r; ++ra)
                    for (long rb = 0; rb < tb.r; ++rb)
                        for (long p = 0; p < ta.p; ++p)
                            for (long q = 0; q < tb.q; ++q) {
                                cplx s = 0.0;
                                for (long m = 0; m < ta.q; ++m)
                                    s += ta.at(la, ra, p, m) * tb.at(lb, rb, m, q);
                                t.at(la * tb.l + lb, ra * tb.r + rb, p, q) = s;
                            }
        out.push_back(std::move(t));
    }
    return MPO(std::move(out));
}

MPO mpo_add(const MPO& a, const MPO& b, cplx coeff) {
    if (a.length() != b.length()) throw std::domain_error("mpo_add: length mismatch");
    const long n = a.length();
    std::vector<MpoTensor> out;
    for (long i = 0; i < n; ++i) {
        const MpoTensor& ta = a.tensor(i);
        const MpoTensor& tb = b.tensor(i);
        if (ta.p != tb.p || ta.q != tb.q)
            throw std::domain_error("mpo_add: physical dimension mismatch");
        long l = (i == 0) ? 1 : ta.l + tb.l;
        long r = (i == n - 1) ? 1 : ta.r + tb.r;
        MpoTensor t(l, r, ta.p, ta.q);
        for (long p = 0; p < ta.p; ++p)
            for (long q = 0; q < ta.q; ++q) {
                for (long il = 0; il < ta.l; ++il)
                    for (long ir = 0; ir < ta.r; ++ir) {
                        long I = (i == 0) ? 0 : il;
                        long J = (i == n - 1) ? 0 : ir;
                        t.at(I, J, p, q) += ta.at(il, ir, p, q);
                    }
                for (long il = 0; il < tb.l; ++il)
                    for (long ir = 0; ir < tb.r; ++ir) {
                        long I = (i == 0) ? 0 : ta.l + il;
                        long J = (i == n - 1) ? 0 : ta.r + ir;
                        cplx c = (i == 0) ? coeff : 1.0;
                        t.at(I, J, p, q) += c * tb.at(il, ir, p, q);
                    }
            }
        out.push_back(std::move(t));
    }
    return MPO(std::move(out));
}

namespace {

Mat core_as_left_matrix(const MpoTensor& t) {  // (l p q) x r
    Mat m(t.l * t.p * t.q, t.r);
    for (long il = 0; il < t.l; ++il)
        for (long p = 0; p < t.p; ++p)
            for (long q = 0; q < t.q; ++q)
                for (long ir = 0; ir < t.r; ++ir)
                    m((il * t.p + p) * t.q + q, ir) = t.at(il, ir, p, q);
    return m;
}

MpoTensor left_matrix_as_core(const Mat& m, long l, long p, long q) {
    long r = m.cols();
    MpoTensor t(l, r, p, q);
    for (long il = 0; il < l; ++il)
        for (long ip = 0; ip < p; ++ip)
            for (long iq = 0; iq < q; ++iq)
                for (long ir = 0; ir < r; ++ir)
                    t.at(il, ir, ip, iq) = m((il * p + ip) * q + iq, ir);
    return t;
}

Mat core_as_right_matrix(const MpoTensor& t) {  // l x (r p q)
    Mat m(t.l, t.r * t.p * t.q);
    for (long il = 0; il < t.l; ++il)
        for (long ir = 0; ir < t.r; ++ir)
            for (long p = 0; p < t.p; ++p)
                for (long q = 0; q < t.q; ++q)
                    m(il, (ir * t.p + p) * t.q + q) = t.at(il, ir, p, q);
    return m;
}

MpoTensor right_matrix_as_core(const Mat& m, long r, long p, long q) {
    long l = m.rows();
    MpoTensor t(l, r, p, q);
    for (long il = 0; il < l; ++il)
        for (long ir = 0; ir < r; ++ir)
            for (long ip = 0; ip < p; ++ip)
                for (long iq = 0; iq < q; ++iq)
                    t.at(il, ir, ip, iq) = m(il, (ir * p + ip) * q + iq);
    return t;
}

// Absorb matrix M into the left bond of core: T'[a, r, p, q] = sum_b M(a,b) T[b, r, p, q].
MpoTensor absorb_left(const Mat& m, const MpoTensor& t) {
    MpoTensor out(m.rows(), t.r, t.p, t.q);
    for (long a = 0; a < m.rows(); ++a)
        for (long b = 0; b < t.l; ++b) {
            cplx c = m(a, b);
            if (c == 0.0) continue;
            for (long ir = 0; ir < t.r; ++ir)
                for (long p = 0; p < t.p; ++p)
                    for (long q = 0; q < t.q; ++q) out.at(a, ir, p, q) += c * t.at(b, ir, p, q);
        }
    return out;
}

// Absorb matrix M into the right bond of core: T'[l, a, p, q] = sum_b T[l, b, p, q] M(b, a).
MpoTensor absorb_right(const MpoTensor& t, const Mat& m) {
    MpoTensor out(t.l, m.cols(), t.p, t.q);
    for (long b = 0; b < t.l; ++b)
        for (long ir = 0; ir < t.r; ++ir)
            for (long a = 0; a < m.cols(); ++a) {
                cplx c = m(ir, a);
                if (c == 0.0) continue;
                for (long p = 0; p < t.p; ++p)
                    for (long q = 0; q < t.q; ++q) out.at(b, a, p, q) += t.at(b, ir, p, q) * c;
            }
    return out;
}

// L->R QR sweep; leaves all cores but the last left-orthogonal. No truncation.
void left_canonicalize(std::vector<MpoTensor>& cores) {
    for (std::size_t i = 0; i + 1 < cores.size(); ++i) {
        Mat m = core_as_left_matrix(cores[i]);
        Eigen::HouseholderQR<Mat> qr(m);
        long rank = std::min(m.rows(), m.cols());
        Mat qthin = qr.householderQ() * Mat::Identity(m.rows(), rank);
        Mat rmat = qthin.adjoint() * m;
        cores[i] = left_matrix_as_core(qthin, cores[i].l, cores[i].p, cores[i].q);
        cores[i + 1] = absorb_left(rmat, cores[i + 1]);
    }
}

}  // namespace

MPO mpo_compress(const MPO& mpo, double threshold) {
    std::vector<MpoTensor> cores;
    for (long i = 0; i < mpo.length(); ++i) cores.push_back(mpo.tensor(i));
    if (cores.size() == 1) return MPO(std::move(cores));

    // Pass 1: L->R QR (left-canonicalize).
    left_canonicalize(cores);

    // Pass 2: R->L SVD with truncation; leaves right-canonical cores.
    for (std::size_t i = cores.size() - 1; i > 0; --i) {
        Mat m = core_as_right_matrix(cores[i]);
        Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        double smax = s.size() ? s(0) : 0.0;
        long rank = 0;
        for (long k = 0; k < s.size(); ++k)
            if (s(k) > threshold * smax && s(k) > 0) ++rank;
        rank = std::max(rank, 1l);
        Mat vt = svd.matrixV().leftCols(rank).adjoint();
        Mat us = svd.matrixU().leftCols(rank) * s.head(rank).asDiagonal();
        cores[i] = right_matrix_as_core(vt, cores[i].r, cores[i].p, cores[i].q);
        cores[i - 1] = absorb_right(cores[i - 1], us);
    }

    // Pass 3: L->R QR so the result is left-canonical.
    left_canonicalize(cores);
    return MPO(std::move(cores));
}

cplx mpo_trace(const MPO& mpo) {
    Mat acc = Mat::Ones(1, 1);
    for (long i = 0; i < mpo.length(); ++i) {
        const MpoTensor& t = mpo.tensor(i);
        if (t.p != t.q) throw std::domain_error("mpo_trace: non-square physical index");
        Mat step = Mat::Zero(t.l, t.r);
        for (long il = 0; il < t.l; ++il)
            for (long ir = 0; ir < t.r; ++ir) {
                cplx s = 0.0;
                for (long p = 0; p < t.p; ++p) s += t.at(il, ir, p, p);
                step(il, ir) = s;
            }
        acc = acc * step;
    }
    return acc(0, 0);
}

cplx mpo_trace_product(const MPO& a, const MPO& b) {
    if (a.length() != b.length()) throw std::domain_error("mpo_trace_product: length mismatch");
    Mat acc = Mat::Ones(1, 1);  // (la*lb) row vector
    for (long i = 0; i < a.length(); ++i) {
        const MpoTensor& ta = a.tensor(i);
        const MpoTensor& tb = b.tensor(i);
        if (ta.q != tb.p || ta.p != tb.q)
            throw std::domain_error("mpo_trace_product: physical dimension mismatch");
        Mat step = Mat::Zero(ta.l * tb.l, ta.r * tb.r);
        for (long la = 0; la < ta.l; ++la)
            for (long lb = 0; lb < tb.l; ++lb)
                for (long ra = 0; ra < ta.r; ++ra)
                    for (long rb = 0; rb < tb.r; ++rb) {
                        cplx s = 0.0;
                        for (long p = 0; p < ta.p; ++p)
                            for (long q = 0; q < ta.q; ++q)
                                s += ta.at(la, ra, p, q) * tb.at(lb, rb, q, p);
                        step(la * tb.l + lb, ra * tb.r + rb) = s;
                    }
        acc = acc * step;
    }
    return acc(0, 0);
}

cplx mpo_hs_inner(const MPO& a, const MPO& b) {
    if (a.length() != b.length()) throw std::domain_error("mpo_hs_inner: length mismatch");
    Mat acc = Mat::Ones(1, 1);
    for (long i = 0; i < a.length(); ++i) {
        const MpoTensor& ta = a.tensor(i);
        const MpoTensor& tb = b.tensor(i);
        if (ta.p != tb.p || ta.q != tb.q)
            throw std::domain_error("mpo_hs_inner: physical dimension mismatch");
        Mat step = Mat::Zero(ta.l * tb.l, ta.r * tb.r);
        for (long la = 0; la < ta.l; ++la)
            for (long lb = 0; lb < tb.l; ++lb)
                for (long ra = 0; ra < ta.r; ++ra)
                    for (long rb = 0; rb < tb.r; ++rb) {
                        cplx s = 0.0;
                        for (long p = 0; p < ta.p; ++p)
                            for (long q = 0; q < ta.q; ++q)
                                s += std::conj(ta.at(la, ra, p, q)) * tb.at(lb, rb, p, q);
                        step(la * tb.l + lb, ra * tb.r + rb) = s;
                    }
        acc = acc * step;
    }
    return acc(0, 0);
}

double mpo_norm(const MPO& mpo) {
    std::vector<MpoTensor> cores;
    for (long i = 0; i < mpo.length(); ++i) cores.push_back(mpo.tensor(i));
    left_canonicalize(cores);
    const MpoTensor& last = cores.back();
    double s = 0.0;
    for (const cplx& v : last.data) s += std::norm(v);
    return std::sqrt(s);
}

Proportionality mpo_proportionality(const MPO& a, const MPO& b, double rel_tol) {
    Proportionality out;
    double na = mpo_norm(a), nb = mpo_norm(b);
    if (na == 0.0 && nb == 0.0) {
        out.is_proportional = true;
        out.degenerate = true;
        return out;
    }
    if (nb == 0.0) {
        out.residual = na;
        out.is_proportional = false;
        return out;
    }
    cplx g = mpo_hs_inner(b, a);
    out.x = g / (nb * nb);
    MPO diff = mpo_add(a, b, -out.x);
    out.residual = mpo_norm(diff);
    out.is_proportional = out.residual <= rel_tol * std::max(na, nb);
    return out;
}

MPO mpo_tensor_identity(const MPO& mpo, const std::vector<long>& extra_dims, bool op_first) {
    if (static_cast<long>(extra_dims.size()) != mpo.length())
        throw std::domain_error("mpo_tensor_identity: dims length mismatch");
    std::vector<MpoTensor> out;
    for (long i = 0; i < mpo.length(); ++i) {
        const MpoTensor& t = mpo.tensor(i);
        long e = extra_dims[i];
        MpoTensor n(t.l, t.r, t.p * e, t.q * e);
        for (long il = 0; il < t.l; ++il)
            for (long ir = 0; ir < t.r; ++ir)
                for (long p = 0; p < t.p; ++p)
                    for (long q = 0; q < t.q; ++q) {
                        cplx v = t.at(il, ir, p, q);
                        if (v == 0.0) continue;
                        for (long k = 0; k < e; ++k) {
                            long np = op_first ? p * e + k : k * t.p + p;
                            long nq = op_first ? q * e + k : k * t.q + q;
                            n.at(il, ir, np, nq) = v;
                        }
                    }
        out.push_back(std::move(n));
    }
    return MPO(std::move(out));
}

}  // namespace plq
