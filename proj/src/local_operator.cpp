#include "plq/local_operator.hpp"

#include <cstdlib>
#include <numeric>

namespace plq {

long dense_cap() {
    static long cap = [] {
        if (const char* env = std::getenv("CENTRAL_MPO_CAP")) {
            long v = std::atol(env);
            if (v > 0) return v;
        }
        return 16384l;
    }();
    return cap;
}

long eigen_cap() { return std::min(dense_cap(), 4096l); }

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Mat pauli_y() {
    Mat m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

namespace {

// Permutation matrixless reindexing: out(sigma(r), sigma(c)) = in(r, c) where
// sigma maps digits of `from` order into `to` order.
Mat permute_sites(const Mat& in, const std::vector<long>& from_dims,
                  const std::vector<std::size_t>& to_pos_of_from) {
    SiteIndexer from(from_dims);
    std::vector<long> to_dims(from_dims.size());
    for (std::size_t k = 0; k < from_dims.size(); ++k) to_dims[to_pos_of_from[k]] = from_dims[k];
    SiteIndexer to(to_dims);
    std::vector<long> row_map(from.total());
    std::vector<long> digits;
    for (long r = 0; r < from.total(); ++r) {
        from.decode(r, digits);
        long t = 0;
        for (std::size_t k = 0; k < digits.size(); ++k)
            t += digits[k] * to.stride(to_pos_of_from[k]);
        row_map[r] = t;
    }
    Mat out(in.rows(), in.cols());
    for (long c = 0; c < in.cols(); ++c)
        for (long r = 0; r < in.rows(); ++r) out(row_map[r], row_map[c]) = in(r, c);
    return out;
}

}  // namespace

LocalOperator::LocalOperator(SiteList support, std::vector<long> dims, Mat matrix) {
    if (support.size() != dims.size())
        throw std::domain_error("LocalOperator: support/dims size mismatch");
    long total = 1;
    for (long d : dims) total *= d;
    if (matrix.rows() != total || matrix.cols() != total)
        throw std::domain_error("LocalOperator: matrix dimension does not match site dims");

    // Sort support into canonical order, permuting tensor factors along.
    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    for (std::size_t k = 0; k + 1 < order.size(); ++k)
        if (!(support[order[k]] < support[order[k + 1]]))
            throw std::domain_error("LocalOperator: duplicate site in support");

    bool already = std::is_sorted(order.begin(), order.end());
    support_.resize(support.size());
    dims_.resize(dims.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        support_[k] = support[order[k]];
        dims_[k] = dims[order[k]];
    }
    if (already) {
        mat_ = std::move(matrix);
    } else {
        std::vector<std::size_t> to_pos(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) to_pos[order[k]] = k;
        mat_ = permute_sites(matrix, dims, to_pos);
    }
    idx_ = SiteIndexer(dims_);
}

LocalOperator LocalOperator::adjoint() const {
    LocalOperator out = *this;
    out.mat_ = mat_.adjoint();
    return out;
}

LocalOperator LocalOperator::identity(SiteList support, std::vector<long> dims) {
    long total = 1;
    for (long d : dims) total *= d;
    return LocalOperator(std::move(support), std::move(dims), Mat::Identity(total, total));
}

LocalOperator LocalOperator::zero(SiteList support, std::vector<long> dims) {
    long total = 1;
    for (long d : dims) total *= d;
    return LocalOperator(std::move(support), std::move(dims), Mat::Zero(total, total));
}

LocalOperator LocalOperator::embedded(const SiteList& target_support,
                                      const std::vector<long>& target_dims) const {
    if (target_support == support_) return *this;
    SiteIndexer tgt(target_dims);
    if (tgt.total() > dense_cap())
        throw ResourceError("embedded: target dimension exceeds dense cap");

    // Positions of our sites inside the target, and the leftover (identity) sites.
    std::vector<std::size_t> pos;
    std::vector<std::size_t> id_pos;
    for (std::size_t k = 0, j = 0; k < target_support.size(); ++k) {
        if (j < support_.size() && target_support[k] == support_[j]) {
            if (target_dims[k] != dims_[j])
                throw std::domain_error("embedded: dimension mismatch on shared site");
            pos.push_back(k);
            ++j;
        } else {
            id_pos.push_back(k);
        }
    }
    if (pos.size() != support_.size())
        throw std::domain_error("embedded: support is not contained in target");

    long id_total = 1;
    for (std::size_t k : id_pos) id_total *= target_dims[k];

    Mat out = Mat::Zero(tgt.total(), tgt.total());
    // Row/col of target = op digits placed at pos + identity digits at id_pos.
    std::vector<long> op_digits_r, op_digits_c, e_digits;
    SiteIndexer idop(dims_);
    std::vector<long> id_dims;
    for (std::size_t k : id_pos) id_dims.push_back(target_dims[k]);
    SiteIndexer ide(id_dims.empty() ? std::vector<long>{1} : id_dims);

    for (long r = 0; r < idop.total(); ++r) {
        idop.decode(r, op_digits_r);
        for (long c = 0; c < idop.total(); ++c) {
            cplx v = mat_(r, c);
            if (v == 0.0) continue;
            idop.decode(c, op_digits_c);
            for (long e = 0; e < id_total; ++e) {
                long R = 0, C = 0;
                for (std::size_t k = 0; k < pos.size(); ++k) {
                    R += op_digits_r[k] * tgt.stride(pos[k]);
                    C += op_digits_c[k] * tgt.stride(pos[k]);
                }
                if (!id_pos.empty()) {
                    ide.decode(e, e_digits);
                    for (std::size_t k = 0; k < id_pos.size(); ++k) {
                        R += e_digits[k] * tgt.stride(id_pos[k]);
                        C += e_digits[k] * tgt.stride(id_pos[k]);
                    }
                }
                out(R, C) = v;
            }
        }
    }
    return LocalOperator(target_support, target_dims, std::move(out));
}

Mat matrix_in_site_order(const LocalOperator& op, const SiteList& order) {
    if (order.size() != op.support().size())
        throw std::domain_error("matrix_in_site_order: order size mismatch");
    std::vector<std::size_t> to_pos(order.size());
    for (std::size_t k = 0; k < op.support().size(); ++k) {
        auto it = std::find(order.begin(), order.end(), op.support()[k]);
        if (it == order.end())
            throw std::domain_error("matrix_in_site_order: order misses a support site");
        to_pos[k] = static_cast<std::size_t>(it - order.begin());
    }
    return permute_sites(op.matrix(), op.site_dims(), to_pos);
}

cplx hs_inner(const LocalOperator& a, const LocalOperator& b) {
    if (a.support() != b.support())
        throw std::domain_error("hs_inner: mismatched supports");
    return (a.matrix().adjoint() * b.matrix()).trace();
}

namespace {

void union_embed(const LocalOperator& a, const LocalOperator& b, LocalOperator& ea,
                 LocalOperator& eb) {
    if (a.support() == b.support()) {
        ea = a;
        eb = b;
        return;
    }
    SiteList u = site_union(a.support(), b.support());
    std::vector<long> udims(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        bool found = false;
        for (std::size_t j = 0; j < a.support().size(); ++j)
            if (a.support()[j] == u[k]) {
                udims[k] = a.site_dims()[j];
                found = true;
            }
        for (std::size_t j = 0; j < b.support().size(); ++j)
            if (b.support()[j] == u[k]) {
                if (found && udims[k] != b.site_dims()[j])
                    throw std::domain_error("union_embed: dimension mismatch");
                udims[k] = b.site_dims()[j];
                found = true;
            }
    }
    ea = a.embedded(u, udims);
    eb = b.embedded(u, udims);
}

}  // namespace

LocalOperator op_multiply(const LocalOperator& a, const LocalOperator& b) {
    LocalOperator ea, eb;
    union_embed(a, b, ea, eb);
    return LocalOperator(ea.support(), ea.site_dims(), ea.matrix() * eb.matrix());
}

LocalOperator op_add(const LocalOperator& a, const LocalOperator& b, cplx coeff) {
    LocalOperator ea, eb;
    union_embed(a, b, ea, eb);
    return LocalOperator(ea.support(), ea.site_dims(), ea.matrix() + coeff * eb.matrix());
}

LocalOperator op_commutator(const LocalOperator& a, const LocalOperator& b) {
    LocalOperator ea, eb;
    union_embed(a, b, ea, eb);
    return LocalOperator(ea.support(), ea.site_dims(),
                         ea.matrix() * eb.matrix() - eb.matrix() * ea.matrix());
}

double commutator_norm(const LocalOperator& a, const LocalOperator& b) {
    if (sites_disjoint(a.support(), b.support())) return 0.0;
    return op_commutator(a, b).hs_norm();
}

LocalOperator partial_trace(const LocalOperator& op, const SiteList& keep) {
    if (!is_subset(keep, op.support()))
        throw std::domain_error("partial_trace: keep contains a site outside the support");
    SiteList keep_sorted = sorted_sites(keep);

    std::vector<std::size_t> keep_pos, tr_pos;
    std::vector<long> keep_dims, tr_dims;
    for (std::size_t k = 0; k < op.support().size(); ++k) {
        if (contains_site(keep_sorted, op.support()[k])) {
            keep_pos.push_back(k);
            keep_dims.push_back(op.site_dims()[k]);
        } else {
            tr_pos.push_back(k);
            tr_dims.push_back(op.site_dims()[k]);
        }
    }
    SiteIndexer ik(keep_dims.empty() ? std::vector<long>{1} : keep_dims);
    SiteIndexer it(tr_dims.empty() ? std::vector<long>{1} : tr_dims);
    const SiteIndexer& full = op.indexer();

    long kt = keep_dims.empty() ? 1 : ik.total();
    Mat out = Mat::Zero(kt, kt);
    std::vector<long> kr, kc, td;
    long tt = tr_dims.empty() ? 1 : it.total();
    for (long r = 0; r < kt; ++r) {
        ik.decode(r, kr);
        for (long c = 0; c < kt; ++c) {
            ik.decode(c, kc);
            cplx sum = 0.0;
            for (long e = 0; e < tt; ++e) {
                long R = 0, C = 0;
                for (std::size_t k = 0; k < keep_pos.size(); ++k) {
                    R += kr[k] * full.stride(keep_pos[k]);
                    C += kc[k] * full.stride(keep_pos[k]);
                }
                if (!tr_pos.empty()) {
                    it.decode(e, td);
                    for (std::size_t k = 0; k < tr_pos.size(); ++k) {
                        long o = td[k] * full.stride(tr_pos[k]);
                        R += o;
                        C += o;
                    }
                }
                sum += op.matrix()(R, C);
            }
            out(r, c) = sum;
        }
    }
    if (keep_dims.empty()) keep_dims = {1};
    if (keep_sorted.empty())
        throw std::domain_error("partial_trace: keep must be nonempty");
    return LocalOperator(keep_sorted, keep_dims, std::move(out));
}

std::vector<SchmidtTerm> operator_schmidt(const LocalOperator& op, const SiteList& left_sites,
                                          double rel_tol) {
    SiteList left = sorted_sites(site_intersection(left_sites, op.support()));
    SiteList right = site_difference(op.support(), left);
    if (left.empty() || right.empty())
        throw std::domain_error("operator_schmidt: both sides of the split must be nonempty");

    std::vector<std::size_t> lpos, rpos;
    std::vector<long> ldims, rdims;
    for (std::size_t k = 0; k < op.support().size(); ++k) {
        if (contains_site(left, op.support()[k])) {
            lpos.push_back(k);
            ldims.push_back(op.site_dims()[k]);
        } else {
            rpos.push_back(k);
            rdims.push_back(op.site_dims()[k]);
        }
    }
    SiteIndexer il(ldims), ir(rdims);
    const SiteIndexer& full = op.indexer();
    long dl = il.total(), dr = ir.total();

    // M[(rl, cl), (rr, cr)] = op[(rl, rr), (cl, cr)]
    Mat m(dl * dl, dr * dr);
    std::vector<long> a, b, u, v;
    for (long rl = 0; rl < dl; ++rl) {
        il.decode(rl, a);
        for (long cl = 0; cl < dl; ++cl) {
            il.decode(cl, b);
            long lbaseR = 0, lbaseC = 0;
            for (std::size_t k = 0; k < lpos.size(); ++k) {
                lbaseR += a[k] * full.stride(lpos[k]);
                lbaseC += b[k] * full.stride(lpos[k]);
            }
            for (long rr = 0; rr < dr; ++rr) {
                ir.decode(rr, u);
                for (long cr = 0; cr < dr; ++cr) {
                    ir.decode(cr, v);
                    long R = lbaseR, C = lbaseC;
                    for (std::size_t k = 0; k < rpos.size(); ++k) {
                        R += u[k] * full.stride(rpos[k]);
                        C += v[k] * full.stride(rpos[k]);
                    }
                    m(rl * dl + cl, rr * dr + cr) = op.matrix()(R, C);
                }
            }
        }
    }

    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    std::vector<SchmidtTerm> terms;
    for (long k = 0; k < s.size(); ++k) {
        if (s(k) <= rel_tol * smax || s(k) == 0.0) break;
        Mat L(dl, dl), R(dr, dr);
        for (long rl = 0; rl < dl; ++rl)
            for (long cl = 0; cl < dl; ++cl) L(rl, cl) = svd.matrixU()(rl * dl + cl, k);
        for (long rr = 0; rr < dr; ++rr)
            for (long cr = 0; cr < dr; ++cr)
                R(rr, cr) = std::conj(svd.matrixV()(rr * dr + cr, k));
        // Phase gauge: largest-magnitude entry of the left factor real positive.
        long mi = 0, mj = 0;
        double best = -1.0;
        for (long i = 0; i < dl; ++i)
            for (long j = 0; j < dl; ++j)
                if (std::abs(L(i, j)) > best) {
                    best = std::abs(L(i, j));
                    mi = i;
                    mj = j;
                }
        cplx ph = L(mi, mj) / std::abs(L(mi, mj));
        L *= s(k) / ph;
        R *= ph;
        terms.push_back({LocalOperator(left, ldims, std::move(L)),
                         LocalOperator(right, rdims, std::move(R)), s(k)});
    }
    return terms;
}

}  // namespace plq
