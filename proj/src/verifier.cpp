#include "plq/verifier.hpp"

#include <thread>

namespace plq {

namespace {

struct GroupLayout {
    std::vector<ColumnBlock> groups;
    std::vector<int> witness_pos;  // index into witness.entries per group, -1 = identity
};

GroupLayout layout_groups(const LatticeModel& model, const Witness& witness) {
    GroupLayout out;
    int prev = -1;
    for (std::size_t k = 0; k < witness.entries.size(); ++k) {
        int c = witness.entries[k].column;
        if (c <= prev) throw std::domain_error("verify_witness: witness columns must increase");
        out.groups.push_back({prev + 1, c});
        out.witness_pos.push_back(static_cast<int>(k));
        prev = c;
    }
    if (prev + 1 <= model.lx() - 1) {
        out.groups.push_back({prev + 1, model.lx() - 1});
        out.witness_pos.push_back(-1);
    }
    if (out.groups.size() < 2)
        throw std::domain_error("verify_witness: need at least two column groups");
    return out;
}

}  // namespace

VerificationReport verify_witness(const LatticeModel& model, const Witness& witness,
                                  const VerifierOptions& opts) {
    VerificationReport rep;
    try {
        GroupLayout layout = layout_groups(model, witness);
        const std::size_t m = layout.groups.size();

        auto track_bond = [&](const MPO& mpo) {
            rep.max_bond_seen = std::max(rep.max_bond_seen, mpo.max_bond());
            if (rep.max_bond_seen > opts.bond_cap)
                throw ResourceError("verify_witness: bond cap exceeded");
        };

        // Witness entries as group-chain MPOs; projector check on each.
        std::vector<MPO> group_ops;
        for (std::size_t g = 0; g < m; ++g) {
            const ColumnBlock& blk = layout.groups[g];
            int wp = layout.witness_pos[g];
            if (wp < 0) {
                group_ops.push_back(MPO::identity(block_rung_dims(model, blk)));
                rep.projector_residuals.push_back(0.0);
                continue;
            }
            const MPO& raw = witness.entries[wp].op;
            track_bond(raw);
            MPO psq = mpo_compress(mpo_multiply(raw, raw), opts.mpo_threshold);
            double pres = mpo_norm(mpo_add(psq, raw, -1.0));
            rep.projector_residuals.push_back(pres);
            if (pres > opts.projector_tol * std::max(1.0, mpo_norm(raw))) {
                rep.verdict = Verdict::Reject;
                rep.reason = "witness entry is not a projector";
                return rep;
            }
            group_ops.push_back(embed_in_block(model, blk, witness.entries[wp].column, raw));
        }

        // Window assignment: each term goes to the window left of the group
        // holding its rightmost column (window 0 for terms in group 0).
        auto group_of_column = [&](int c) {
            for (std::size_t g = 0; g < m; ++g)
                if (c >= layout.groups[g].lo && c <= layout.groups[g].hi)
                    return static_cast<int>(g);
            throw std::logic_error("verify_witness: column outside all groups");
        };
        std::vector<std::vector<const ModelTerm*>> window_terms(m - 1);
        for (const ModelTerm& t : model.terms()) {
            int rightmost = t.plaquette.back().x;
            int g = group_of_column(rightmost);
            int w = std::max(g - 1, 0);
            window_terms[w].push_back(&t);
        }

        std::vector<ColumnWindowOperator> windows;
        for (std::size_t w = 0; w + 1 < m; ++w) {
            windows.push_back(build_window(model, layout.groups[w], layout.groups[w + 1],
                                           window_terms[w], opts.mpo_threshold));
            track_bond(windows.back().mpo);
        }

        // Commutation checks [P_g, W_{g-1,g}] = 0 for g >= 1.
        for (std::size_t g = 1; g < m; ++g) {
            const ColumnWindowOperator& w = windows[g - 1];
            MPO pemb = embed_in_window(w, group_ops[g], /*left_side=*/false);
            MPO ab = mpo_multiply(pemb, w.mpo);
            MPO ba = mpo_multiply(w.mpo, pemb);
            double res = mpo_norm(mpo_add(ab, ba, -1.0));
            double scale = std::max(1.0, mpo_norm(pemb) * mpo_norm(w.mpo));
            rep.commutation_residuals.push_back(res / scale);
            if (res / scale > opts.commutation_tol) {
                rep.verdict = Verdict::Reject;
                rep.reason = "witness does not commute with the window operator";
                return rep;
            }
        }

        // Propagation chain with proportionality constants.
        MPO rho = propagate(group_ops[0], windows[0], opts.mpo_threshold);
        track_bond(rho);
        for (std::size_t g = 1; g + 1 < m; ++g) {
            MPO dressed = mpo_compress(mpo_multiply(rho, group_ops[g]), opts.mpo_threshold);
            track_bond(dressed);
            MPO cur = propagate(dressed, windows[g], opts.mpo_threshold);
            track_bond(cur);
            MPO ref = propagate(group_ops[g], windows[g], opts.mpo_threshold);
            track_bond(ref);
            Proportionality prop = mpo_proportionality(cur, ref, opts.proportionality_tol);
            rep.proportionality_residuals.push_back(prop.residual);
            if (!prop.is_proportional) {
                rep.verdict = Verdict::Reject;
                rep.reason = "propagation is not proportional to the reference (not a mask here)";
                return rep;
            }
            rep.constants.push_back(prop.x);
            if (!(prop.x.real() > opts.positivity_tol) ||
                std::abs(prop.x.imag()) > opts.positivity_tol) {
                rep.verdict = Verdict::Reject;
                rep.reason = "nonpositive constant";
                return rep;
            }
            rho = ref;
        }

        cplx last = mpo_trace_product(rho, group_ops[m - 1]);
        rep.final_trace = last.real();
        double total = rep.final_trace;
        for (const cplx& c : rep.constants) total *= c.real();
        rep.total_trace = total;
        if (rep.final_trace > opts.positivity_tol && std::abs(last.imag()) < 1e-8) {
            rep.verdict = Verdict::Accept;
            rep.reason = "all constants and the final trace are positive";
        } else {
            rep.verdict = Verdict::Reject;
            rep.reason = "zero trace";
        }
        return rep;
    } catch (const ResourceError& e) {
        rep.verdict = Verdict::Unable;
        rep.reason = e.what();
        return rep;
    }
}

namespace {

struct LocalApplier {
    std::vector<long> offsets;  // flat offsets of support digit combinations
    Mat op;                     // d_sup x d_sup
    std::vector<long> env_bases;

    void apply(Vec& state, Vec& scratch) const {
        const long ds = op.rows();
        for (long base : env_bases) {
            for (long k = 0; k < ds; ++k) scratch(k) = state(base + offsets[k]);
            for (long k = 0; k < ds; ++k) {
                cplx s = 0.0;
                for (long j = 0; j < ds; ++j) s += op(k, j) * scratch(j);
                state(base + offsets[k]) = s;
            }
        }
    }
};

std::vector<LocalApplier> build_appliers(const LatticeModel& model,
                                         const std::vector<LocalOperator>& ops) {
    SiteList sites = model.all_sites();
    std::vector<long> dims = model.dims_of(sites);
    SiteIndexer full(dims);
    std::vector<LocalApplier> out;
    for (const LocalOperator& op : ops) {
        LocalApplier a;
        a.op = op.matrix();
        std::vector<std::size_t> pos;
        for (const Site& s : op.support()) {
            auto it = std::lower_bound(sites.begin(), sites.end(), s);
            pos.push_back(static_cast<std::size_t>(it - sites.begin()));
        }
        SiteIndexer sup(op.site_dims());
        a.offsets.resize(sup.total());
        std::vector<long> digits;
        for (long k = 0; k < sup.total(); ++k) {
            sup.decode(k, digits);
            long off = 0;
            for (std::size_t j = 0; j < pos.size(); ++j) off += digits[j] * full.stride(pos[j]);
            a.offsets[k] = off;
        }
        // env bases: indices whose support digits are all zero
        std::vector<long> env_dims;
        std::vector<std::size_t> env_pos;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (std::find(pos.begin(), pos.end(), k) == pos.end()) {
                env_dims.push_back(dims[k]);
                env_pos.push_back(k);
            }
        }
        SiteIndexer env(env_dims.empty() ? std::vector<long>{1} : env_dims);
        a.env_bases.resize(env.total());
        for (long e = 0; e < env.total(); ++e) {
            env.decode(e, digits);
            long base = 0;
            for (std::size_t j = 0; j < env_pos.size(); ++j)
                base += digits[j] * full.stride(env_pos[j]);
            a.env_bases[e] = base;
        }
        out.push_back(std::move(a));
    }
    return out;
}

double projector_product_trace(const LatticeModel& model,
                               const std::vector<LocalOperator>& factors) {
    long total = model.total_dim();
    if (total > dense_cap())
        throw ResourceError("projector product trace: dimension exceeds dense cap");
    std::vector<LocalOperator> ops;
    for (const ModelTerm& t : model.terms()) ops.push_back(t.projector);
    for (const LocalOperator& f : factors) ops.push_back(f);
    std::vector<LocalApplier> appliers = build_appliers(model, ops);

    unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<unsigned>(nthreads, 8);
    std::vector<double> partial(nthreads, 0.0);
    auto work = [&](unsigned tid) {
        Vec state(total), scratch;
        long max_sup = 1;
        for (const LocalApplier& a : appliers) max_sup = std::max<long>(max_sup, a.op.rows());
        scratch.resize(max_sup);
        double acc = 0.0;
        for (long i = tid; i < total; i += nthreads) {
            state.setZero();
            state(i) = 1.0;
            for (const LocalApplier& a : appliers) a.apply(state, scratch);
            acc += state(i).real();
        }
        partial[tid] = acc;
    };
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < nthreads; ++t) threads.emplace_back(work, t);
    for (auto& t : threads) t.join();
    double trace = 0.0;
    for (double p : partial) trace += p;
    return trace;
}

}  // namespace

ZeroCount brute_force_zero_count(const LatticeModel& model) {
    ZeroCount out;
    if (model.all_terms_pauli()) {
        std::vector<PauliString> gens;
        for (const ModelTerm& t : model.terms())
            for (const PauliString& g : t.stabilizer_gens) gens.push_back(g);
        int n = 0;
        for (long d : model.site_dims()) {
            long v = d;
            while (v > 1) {
                v /= 2;
                ++n;
            }
        }
        out.count = stabilizer_zero_count(gens, n);
        out.raw_trace = static_cast<double>(out.count);
        out.used_stabilizer_path = true;
        return out;
    }
    out.raw_trace = projector_product_trace(model, {});
    out.count = std::lround(out.raw_trace);
    if (std::abs(out.raw_trace - static_cast<double>(out.count)) > 1e-6)
        throw std::runtime_error(
            "brute_force_zero_count: non-integer trace; model terms likely do not commute");
    return out;
}

double restricted_zero_trace(const LatticeModel& model,
                             const std::vector<LocalOperator>& extra) {
    return projector_product_trace(model, extra);
}

MPO phi_reduce(const MPO& rho, const CentralDecomposition& decomp, double threshold) {
    if (decomp.size() == 0) throw std::domain_error("phi_reduce: empty decomposition");
    MPO out = MPO::identity(rho.phys_dims()).scaled(0.0);
    for (std::size_t a = 0; a < decomp.size(); ++a) {
        MPO p = mpo_from_dense(decomp.projectors[a], threshold);
        cplx overlap = mpo_trace_product(p, rho);
        cplx weight = mpo_trace(p);
        if (std::abs(weight) < 1e-12)
            throw std::logic_error("phi_reduce: zero-trace minimal projector");
        out = mpo_add(out, p, overlap / weight);
    }
    return mpo_compress(out, threshold);
}

MaskReport is_mask(const LocalOperator& o_c, const LatticeModel& model, int column, int samples,
                   std::uint64_t seed, bool exhaustive, double tol) {
    MaskReport rep;
    rep.seed = seed;
    rep.samples = samples;
    rep.exhaustive = exhaustive;
    if (column < 1 || column > model.lx() - 2)
        throw std::domain_error("is_mask: column must have neighbors on both sides");

    SiteList left_sites = model.column_sites(column - 1);
    std::vector<long> left_dims = model.dims_of(left_sites);
    long dl = 1;
    for (long d : left_dims) dl *= d;

    LocalOperator w_left = window_dense_canonical(model, column - 1, column);
    LocalOperator w_right = window_dense_canonical(model, column, column + 1);

    SiteList keep_rhs = model.column_sites(column + 1);
    LocalOperator rhs = partial_trace(op_multiply(o_c, w_right), keep_rhs);
    double rhs_norm = rhs.hs_norm();

    auto deviation_for = [&](const LocalOperator& o_left) {
        LocalOperator chain = op_multiply(op_multiply(o_left, w_left), op_multiply(o_c, w_right));
        SiteList keep = keep_rhs;
        LocalOperator lhs = keep == chain.support() ? chain : partial_trace(chain, keep);
        LocalOperator lhs_e = lhs.support() == rhs.support()
                                  ? lhs
                                  : lhs.embedded(rhs.support(), rhs.site_dims());
        cplx x = rhs_norm > 0 ? hs_inner(rhs, lhs_e) / (rhs_norm * rhs_norm) : 0.0;
        double dev = op_add(lhs_e, rhs, -x).hs_norm();
        rep.x_values.push_back(x);
        rep.max_deviation = std::max(rep.max_deviation, dev);
    };

    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        Mat g = rng.ginibre(dl, dl);
        deviation_for(LocalOperator(left_sites, left_dims, std::move(g)));
    }
    if (exhaustive) {
        for (long i = 0; i < dl; ++i)
            for (long j = 0; j < dl; ++j) {
                Mat e = Mat::Zero(dl, dl);
                e(i, j) = 1.0;
                deviation_for(LocalOperator(left_sites, left_dims, std::move(e)));
            }
    }
    rep.is_mask = rep.max_deviation <= tol;
    return rep;
}

OperatorAlgebra column_interaction_algebra(const LatticeModel& model, int c_lo, int c_hi,
                                           int region_col, const AlgebraOptions& opts) {
    std::vector<LocalOperator> gens;
    for (const ModelTerm* t : model.terms_in_columns(c_lo, c_hi)) gens.push_back(t->projector);
    SiteList region = model.column_sites(region_col);
    return interaction_algebra(gens, region, model.dims_of(region), opts);
}

}  // namespace plq
