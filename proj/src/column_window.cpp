#include "plq/column_window.hpp"

namespace plq {

std::vector<long> block_rung_dims(const LatticeModel& model, const ColumnBlock& block) {
    std::vector<long> out;
    for (int y = 0; y < model.ly(); ++y) {
        long d = 1;
        for (int x = block.lo; x <= block.hi; ++x) d *= model.dim_of({x, y});
        out.push_back(d);
    }
    return out;
}

namespace {

// Permutes a canonical (x-major) operator matrix into rung-major order:
// [(y=0: all columns asc), (y=1: ...), ...].
Mat to_rung_major(const LocalOperator& op, int c_lo, int c_hi, int ly) {
    // canonical order of op.support: x major. target: y major.
    const SiteList& sup = op.support();
    std::vector<Site> target;
    for (int y = 0; y < ly; ++y)
        for (int x = c_lo; x <= c_hi; ++x) {
            Site s{x, y};
            if (contains_site(sup, s)) target.push_back(s);
        }
    if (target.size() != sup.size())
        throw std::domain_error("to_rung_major: support outside the column range");
    // to_pos_of_from[k] = index of sup[k] in target
    SiteIndexer from(op.site_dims());
    std::vector<long> to_dims(sup.size());
    std::vector<std::size_t> to_pos(sup.size());
    for (std::size_t k = 0; k < sup.size(); ++k) {
        auto it = std::find(target.begin(), target.end(), sup[k]);
        to_pos[k] = static_cast<std::size_t>(it - target.begin());
        to_dims[to_pos[k]] = op.site_dims()[k];
    }
    SiteIndexer to(to_dims);
    std::vector<long> row_map(from.total());
    std::vector<long> digits;
    for (long r = 0; r < from.total(); ++r) {
        from.decode(r, digits);
        long t = 0;
        for (std::size_t k = 0; k < digits.size(); ++k) t += digits[k] * to.stride(to_pos[k]);
        row_map[r] = t;
    }
    Mat out = Mat::Zero(from.total(), from.total());
    for (long c = 0; c < from.total(); ++c)
        for (long r = 0; r < from.total(); ++r)
            out(row_map[r], row_map[c]) = op.matrix()(r, c);
    return out;
}

// Expands each core's physical index p to (pre, p, post) with identity action
// on pre/post factors.
MPO expand_physical(const MPO& mpo, const std::vector<long>& pre, const std::vector<long>& post) {
    std::vector<MpoTensor> out;
    for (long i = 0; i < mpo.length(); ++i) {
        const MpoTensor& t = mpo.tensor(i);
        long a = pre[i], b = post[i];
        MpoTensor n(t.l, t.r, a * t.p * b, a * t.q * b);
        for (long il = 0; il < t.l; ++il)
            for (long ir = 0; ir < t.r; ++ir)
                for (long p = 0; p < t.p; ++p)
                    for (long q = 0; q < t.q; ++q) {
                        cplx v = t.at(il, ir, p, q);
                        if (v == 0.0) continue;
                        for (long ia = 0; ia < a; ++ia)
                            for (long ib = 0; ib < b; ++ib)
                                n.at(il, ir, (ia * t.p + p) * b + ib, (ia * t.q + q) * b + ib) = v;
                    }
        out.push_back(std::move(n));
    }
    return MPO(std::move(out));
}

}  // namespace

ColumnWindowOperator build_window(const LatticeModel& model, const ColumnBlock& left,
                                  const ColumnBlock& right,
                                  const std::vector<const ModelTerm*>& terms, double threshold) {
    if (left.hi + 1 != right.lo)
        throw std::domain_error("build_window: blocks must be adjacent");
    ColumnWindowOperator w;
    w.left = left;
    w.right = right;
    w.left_dims = block_rung_dims(model, left);
    w.right_dims = block_rung_dims(model, right);

    std::vector<long> fused(model.ly());
    for (int y = 0; y < model.ly(); ++y) fused[y] = w.left_dims[y] * w.right_dims[y];
    w.mpo = MPO::identity(fused);

    // vertical order, then横 position for determinism
    std::vector<const ModelTerm*> sorted_terms = terms;
    std::sort(sorted_terms.begin(), sorted_terms.end(),
              [](const ModelTerm* a, const ModelTerm* b) {
                  return std::make_pair(a->plaquette[0].y, a->plaquette[0].x) <
                         std::make_pair(b->plaquette[0].y, b->plaquette[0].x);
              });

    for (const ModelTerm* t : sorted_terms) {
        int cx = t->plaquette[0].x, cy = t->plaquette[0].y;
        if (cx < left.lo || cx + 1 > right.hi)
            throw std::domain_error("build_window: term outside the window columns");
        // plaquette as a 2-site mini MPO over rungs (cy, cy+1)
        Mat m = to_rung_major(t->projector, cx, cx + 1, model.ly());
        std::vector<long> mini_dims = {model.dim_of({cx, cy}) * model.dim_of({cx + 1, cy}),
                                       model.dim_of({cx, cy + 1}) * model.dim_of({cx + 1, cy + 1})};
        MPO mini = mpo_from_dense(m, mini_dims, threshold);

        // expand to the full rungs at heights cy, cy+1
        auto span_dims = [&](int y, int a_lo, int a_hi) {
            long d = 1;
            for (int x = a_lo; x <= a_hi; ++x) d *= model.dim_of({x, y});
            return d;
        };
        std::vector<long> pre(2), post(2);
        for (int k = 0; k < 2; ++k) {
            int y = cy + k;
            pre[k] = span_dims(y, left.lo, cx - 1);
            post[k] = span_dims(y, cx + 2, right.hi);
        }
        MPO expanded = expand_physical(mini, pre, post);

        // pad with identity cores at the other heights
        std::vector<MpoTensor> cores;
        for (int y = 0; y < model.ly(); ++y) {
            if (y == cy) {
                cores.push_back(expanded.tensor(0));
            } else if (y == cy + 1) {
                cores.push_back(expanded.tensor(1));
            } else {
                MpoTensor id(1, 1, fused[y], fused[y]);
                for (long k = 0; k < fused[y]; ++k) id.at(0, 0, k, k) = 1.0;
                cores.push_back(std::move(id));
            }
        }
        w.mpo = mpo_compress(mpo_multiply(w.mpo, MPO(std::move(cores))), threshold);
    }
    return w;
}

ColumnWindowOperator adjacent_window(const LatticeModel& model, int c, double threshold) {
    return build_window(model, {c, c}, {c + 1, c + 1}, model.terms_in_columns(c, c + 1),
                        threshold);
}

Mat window_to_dense(const ColumnWindowOperator& w) { return mpo_to_dense(w.mpo); }

MPO propagate(const MPO& rho, const ColumnWindowOperator& window, double threshold) {
    if (rho.length() != window.mpo.length())
        throw std::domain_error("propagate: chain length mismatch");
    std::vector<MpoTensor> cores;
    for (long y = 0; y < rho.length(); ++y) {
        const MpoTensor& tr_ = rho.tensor(y);
        const MpoTensor& tw = window.mpo.tensor(y);
        long dl = window.left_dims[y], dr = window.right_dims[y];
        if (tr_.p != dl || tr_.q != dl || tw.p != dl * dr)
            throw std::domain_error("propagate: physical dimension mismatch");
        // out[(lr lw), (rr rw), p', q'] = sum_{a,s} rho[lr, rr, a, s] W[lw, rw, (s,p'), (a,q')]
        MpoTensor out(tr_.l * tw.l, tr_.r * tw.r, dr, dr);
        for (long lr = 0; lr < tr_.l; ++lr)
            for (long lw = 0; lw < tw.l; ++lw)
                for (long rr = 0; rr < tr_.r; ++rr)
                    for (long rw = 0; rw < tw.r; ++rw)
                        for (long pp = 0; pp < dr; ++pp)
                            for (long qq = 0; qq < dr; ++qq) {
                                cplx s = 0.0;
                                for (long a = 0; a < dl; ++a)
                                    for (long m = 0; m < dl; ++m)
                                        s += tr_.at(lr, rr, a, m) *
                                             tw.at(lw, rw, m * dr + pp, a * dr + qq);
                                out.at(lr * tw.l + lw, rr * tw.r + rw, pp, qq) = s;
                            }
        cores.push_back(std::move(out));
    }
    return mpo_compress(MPO(std::move(cores)), threshold);
}

MPO embed_in_block(const LatticeModel& model, const ColumnBlock& block, int column,
                   const MPO& op) {
    if (column < block.lo || column > block.hi)
        throw std::domain_error("embed_in_block: column outside block");
    std::vector<long> pre(model.ly()), post(model.ly());
    for (int y = 0; y < model.ly(); ++y) {
        long a = 1, b = 1;
        for (int x = block.lo; x < column; ++x) a *= model.dim_of({x, y});
        for (int x = column + 1; x <= block.hi; ++x) b *= model.dim_of({x, y});
        pre[y] = a;
        post[y] = b;
    }
    return expand_physical(op, pre, post);
}

MPO embed_in_window(const ColumnWindowOperator& w, const MPO& block_op, bool left_side) {
    return mpo_tensor_identity(block_op, left_side ? w.right_dims : w.left_dims, left_side);
}

LocalOperator window_dense_canonical(const LatticeModel& model, int c_lo, int c_hi) {
    SiteList sites;
    for (int x = c_lo; x <= c_hi; ++x)
        for (int y = 0; y < model.ly(); ++y) sites.push_back({x, y});
    sites = sorted_sites(sites);
    std::vector<long> dims = model.dims_of(sites);
    long total = 1;
    for (long d : dims) total *= d;
    if (total > dense_cap()) throw ResourceError("window_dense_canonical: exceeds dense cap");
    LocalOperator out = LocalOperator::identity(sites, dims);
    for (const ModelTerm* t : model.terms_in_columns(c_lo, c_hi))
        out = op_multiply(out, t->projector.embedded(sites, dims));
    return out;
}

Mat rung_major_matrix(const LatticeModel& model, const LocalOperator& op, int c_lo, int c_hi) {
    return to_rung_major(op, c_lo, c_hi, model.ly());
}

}  // namespace plq
