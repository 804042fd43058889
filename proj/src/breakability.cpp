#include "plq/breakability.hpp"

namespace plq {

namespace {

std::vector<SiteList> geometric_plaquettes(const LatticeModel& model) {
    std::vector<SiteList> out;
    for (int x = 0; x + 1 < model.lx(); ++x)
        for (int y = 0; y + 1 < model.ly(); ++y) out.push_back(sorted_sites(plaquette_sites(x, y)));
    return out;
}

}  // namespace

RegionSpec boundary_of(const LatticeModel& model, const SiteList& s) {
    RegionSpec out;
    out.S = sorted_sites(s);
    if (out.S.empty()) throw std::domain_error("boundary_of: empty region");
    for (const SiteList& z : geometric_plaquettes(model)) {
        if (is_subset(z, out.S)) continue;
        for (const Site& i : z)
            if (contains_site(out.S, i)) out.B.push_back(i);
    }
    out.B = sorted_sites(out.B);
    out.I = site_difference(out.S, out.B);
    out.E = site_difference(model.all_sites(), out.S);
    return out;
}

namespace {

std::uint64_t slots_mask(const PauliContext& ctx, const SiteList& sites) {
    std::uint64_t m = 0;
    for (const Site& s : sites)
        for (int q = 0; q < ctx.qubits_per_site(); ++q) m |= 1ull << ctx.slot(s, q);
    return m;
}

void collect_split_terms(const LatticeModel& model, const RegionSpec& region,
                         std::vector<const ModelTerm*>& interior,
                         std::vector<const ModelTerm*>& crossing) {
    for (const ModelTerm& t : model.terms()) {
        if (is_subset(t.plaquette, region.S))
            interior.push_back(&t);
        else if (!sites_disjoint(t.plaquette, region.B))
            crossing.push_back(&t);
    }
}

}  // namespace

ExtIntResult ext_int_factorization(const LatticeModel& model, const RegionSpec& region,
                                   const AlgebraOptions& opts) {
    ExtIntResult out;
    out.boundary = region.B;
    out.boundary_dims = model.dims_of(region.B);

    std::vector<const ModelTerm*> interior, crossing;
    collect_split_terms(model, region, interior, crossing);

    if (model.all_terms_pauli()) {
        const PauliContext& ctx = *model.pauli_context();
        std::uint64_t bmask = slots_mask(ctx, region.B);
        std::vector<PauliString> int_gens, ext_gens;
        for (const ModelTerm* t : interior)
            for (const PauliString& g :
                 restrict_to_slots(t->stabilizer_gens, bmask))
                int_gens.push_back(g);
        for (const ModelTerm* t : crossing)
            for (const PauliString& g :
                 restrict_to_slots(t->stabilizer_gens, bmask))
                ext_gens.push_back(g);
        PauliAlgebra a_int = pauli_algebra_from(int_gens);
        PauliAlgebra a_ext = pauli_algebra_from(ext_gens);
        std::vector<PauliString> z_int = pauli_center_basis(a_int);
        std::vector<PauliString> z_ext = pauli_center_basis(a_ext);
        out.interior_center_log2 = static_cast<int>(z_int.size());
        out.exterior_center_log2 = static_cast<int>(z_ext.size());

        if (z_ext.empty() || z_int.empty()) {
            const PauliAlgebra& simple = z_ext.empty() ? a_ext : a_int;
            out.factorization = pauli_block_factorize(simple, ctx, region.B);
            out.ext_is_left = z_ext.empty();
            out.factorized = true;
            return out;
        }
        // Obstruction: emit the central monomials densely (small supports).
        for (const PauliString& z : z_int)
            out.obstructing_central.push_back(
                ctx.to_dense(hermitian_monomial(z), region.B));
        for (const PauliString& z : z_ext)
            out.obstructing_central.push_back(
                ctx.to_dense(hermitian_monomial(z), region.B));
        if (a_int.rank() <= 12) {
            OperatorAlgebra dense_int = pauli_to_dense_algebra(a_int, ctx, region.B);
            out.obstructing_decomposition = minimal_central_projectors(dense_int, 4242, opts);
        }
        return out;
    }

    // Dense route.
    std::vector<LocalOperator> int_ops, ext_ops;
    for (const ModelTerm* t : interior) int_ops.push_back(t->projector);
    for (const ModelTerm* t : crossing) ext_ops.push_back(t->projector);
    std::vector<long> bdims = model.dims_of(region.B);
    OperatorAlgebra a_int = interaction_algebra(int_ops, region.B, bdims, opts);
    OperatorAlgebra a_ext = interaction_algebra(ext_ops, region.B, bdims, opts);
    OperatorAlgebra z_int = center(a_int, opts);
    OperatorAlgebra z_ext = center(a_ext, opts);
    out.interior_center_log2 = static_cast<int>(z_int.dimension()) > 1 ? 1 : 0;
    out.exterior_center_log2 = static_cast<int>(z_ext.dimension()) > 1 ? 1 : 0;

    if (z_ext.dimension() <= 1 || z_int.dimension() <= 1) {
        bool ext_simple = z_ext.dimension() <= 1;
        const OperatorAlgebra& left = ext_simple ? a_ext : a_int;
        const OperatorAlgebra& right = ext_simple ? a_int : a_ext;
        LocalOperator unit = LocalOperator::identity(region.B, bdims);
        out.factorization = block_factorize(left, right, unit, 977, opts);
        out.ext_is_left = ext_simple;
        out.factorized = true;
        return out;
    }
    for (const LocalOperator& z : z_int.basis) out.obstructing_central.push_back(z);
    for (const LocalOperator& z : z_ext.basis) out.obstructing_central.push_back(z);
    out.obstructing_decomposition = minimal_central_projectors(a_int, 4242, opts);
    return out;
}

namespace {

// Matrix-level operator Schmidt decomposition across a fixed left/right
// dimension split (left factor most significant).
struct MatSchmidtTerm {
    Mat left, right;
    double weight;
};

std::vector<MatSchmidtTerm> matrix_schmidt(const Mat& m, long dl, long dr,
                                           double rel_tol = 1e-12) {
    Mat r(dl * dl, dr * dr);
    for (long a = 0; a < dl; ++a)
        for (long b = 0; b < dl; ++b)
            for (long c = 0; c < dr; ++c)
                for (long d = 0; d < dr; ++d)
                    r(a * dl + b, c * dr + d) = m(a * dr + c, b * dr + d);
    Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    std::vector<MatSchmidtTerm> out;
    for (long k = 0; k < s.size(); ++k) {
        if (s(k) <= rel_tol * smax || s(k) == 0.0) break;
        Mat L(dl, dl), R(dr, dr);
        for (long a = 0; a < dl; ++a)
            for (long b = 0; b < dl; ++b) L(a, b) = svd.matrixU()(a * dl + b, k);
        for (long c = 0; c < dr; ++c)
            for (long d = 0; d < dr; ++d) R(c, d) = std::conj(svd.matrixV()(c * dr + d, k));
        long mi = 0, mj = 0;
        double best = -1;
        for (long a = 0; a < dl; ++a)
            for (long b = 0; b < dl; ++b)
                if (std::abs(L(a, b)) > best) {
                    best = std::abs(L(a, b));
                    mi = a;
                    mj = b;
                }
        cplx ph = L(mi, mj) / std::abs(L(mi, mj));
        L *= s(k) / ph;
        R *= ph;
        out.push_back({std::move(L), std::move(R), s(k)});
    }
    return out;
}

// Permutes a canonical-order operator matrix to the order given by `order`
// (a permutation of the support).
Mat matrix_in_order(const LocalOperator& op, const SiteList& order) {
    SiteIndexer from(op.site_dims());
    std::vector<std::size_t> to_pos(order.size());
    std::vector<long> to_dims(order.size());
    for (std::size_t k = 0; k < op.support().size(); ++k) {
        auto it = std::find(order.begin(), order.end(), op.support()[k]);
        if (it == order.end()) throw std::domain_error("matrix_in_order: order misses a site");
        to_pos[k] = static_cast<std::size_t>(it - order.begin());
        to_dims[to_pos[k]] = op.site_dims()[k];
    }
    SiteIndexer to(to_dims);
    std::vector<long> map(from.total());
    std::vector<long> digits;
    for (long r = 0; r < from.total(); ++r) {
        from.decode(r, digits);
        long t = 0;
        for (std::size_t k = 0; k < digits.size(); ++k) t += digits[k] * to.stride(to_pos[k]);
        map[r] = t;
    }
    Mat out = Mat::Zero(from.total(), from.total());
    for (long c = 0; c < from.total(); ++c)
        for (long r = 0; r < from.total(); ++r) out(map[r], map[c]) = op.matrix()(r, c);
    return out;
}

// Inverse of matrix_in_order: takes a matrix in `order` and produces the
// canonical-order LocalOperator.
LocalOperator operator_from_ordered(const Mat& m, const SiteList& order,
                                    const std::vector<long>& order_dims) {
    // LocalOperator's constructor sorts and permutes for us.
    return LocalOperator(order, order_dims, m);
}

struct RotatedSplit {
    // order: (X\B) | B | (A n I); the B factor rotated by iso_ei.
    SiteList xb_sites, b_sites, ai_sites;
    std::vector<long> xb_dims, b_dims, ai_dims;
    long d_xb = 1, d_b = 1, d_ai = 1, d_e = 1, d_i = 1;
    Mat rot;  // full rotation on the ordered space: (I (x) iso_ei (x) I) P
    SiteList order;
    std::vector<long> order_dims;
};

RotatedSplit make_rotated_split(const LatticeModel& model, const RegionSpec& region,
                                const ExtIntResult& split, const SiteList& a_support,
                                const SiteList& x_set) {
    RotatedSplit rs;
    SiteList x = sorted_sites(x_set);
    rs.xb_sites = site_difference(x, region.B);
    rs.b_sites = region.B;
    rs.ai_sites = site_intersection(a_support, region.I);
    rs.xb_dims = model.dims_of(rs.xb_sites);
    rs.b_dims = model.dims_of(rs.b_sites);
    rs.ai_dims = model.dims_of(rs.ai_sites);
    for (long d : rs.xb_dims) rs.d_xb *= d;
    for (long d : rs.b_dims) rs.d_b *= d;
    for (long d : rs.ai_dims) rs.d_ai *= d;

    const BlockFactorization& f = split.factorization;
    rs.d_e = split.ext_is_left ? f.dl : f.dr;
    rs.d_i = split.ext_is_left ? f.dr : f.dl;

    Mat iso_ei;
    if (split.ext_is_left) {
        iso_ei = f.iso;
    } else {
        // swap the two factors so the E part comes first
        Mat swap = Mat::Zero(f.dl * f.dr, f.dl * f.dr);
        for (long i = 0; i < f.dl; ++i)
            for (long e = 0; e < f.dr; ++e) swap(e * f.dl + i, i * f.dr + e) = 1.0;
        iso_ei = swap * f.iso;
    }
    // iso maps range(subspace) -> C^{dl dr}; block is the identity here, so
    // subspace is the full space and iso is square.
    Mat full_iso = iso_ei * f.subspace.adjoint();

    rs.order = rs.xb_sites;
    for (const Site& s : rs.b_sites) rs.order.push_back(s);
    for (const Site& s : rs.ai_sites) rs.order.push_back(s);
    rs.order_dims = rs.xb_dims;
    for (long d : rs.b_dims) rs.order_dims.push_back(d);
    for (long d : rs.ai_dims) rs.order_dims.push_back(d);

    rs.rot = Mat::Zero(rs.d_xb * rs.d_b * rs.d_ai, rs.d_xb * rs.d_b * rs.d_ai);
    // rot = I_xb (x) full_iso (x) I_ai
    for (long a = 0; a < rs.d_xb; ++a)
        for (long r = 0; r < rs.d_b; ++r)
            for (long c = 0; c < rs.d_b; ++c) {
                cplx v = full_iso(r, c);
                if (v == 0.0) continue;
                for (long e = 0; e < rs.d_ai; ++e)
                    rs.rot((a * rs.d_b + r) * rs.d_ai + e, (a * rs.d_b + c) * rs.d_ai + e) = v;
            }
    return rs;
}

double max_term_commutator(const LatticeModel& model, const LocalOperator& op) {
    double worst = 0.0;
    for (const ModelTerm& t : model.terms()) {
        if (sites_disjoint(t.plaquette, op.support())) continue;
        worst = std::max(worst, commutator_norm(op, t.projector));
    }
    return worst;
}

}  // namespace

BreakDecomposition break_two(const LocalOperator& o, const RegionSpec& region,
                             const LatticeModel& model, const ExtIntResult& split) {
    if (!split.factorized)
        throw std::domain_error("break_two: no exterior/interior factorization available");
    SiteList a = o.support();
    // Precondition: O commutes with every Q_Z meeting E.
    for (const ModelTerm& t : model.terms()) {
        if (sites_disjoint(t.plaquette, region.E)) continue;
        if (sites_disjoint(t.plaquette, a)) continue;
        double cn = commutator_norm(o, t.projector);
        if (cn > 1e-8)
            throw std::domain_error("break_two: O does not commute with an exterior term at (" +
                                    std::to_string(t.plaquette[0].x) + "," +
                                    std::to_string(t.plaquette[0].y) + ")");
    }

    SiteList x = site_difference(a, region.I);  // X = A \ I
    RotatedSplit rs = make_rotated_split(model, region, split, a, x);

    LocalOperator o_emb = o.embedded(
        sorted_sites(rs.order),
        model.dims_of(sorted_sites(rs.order)));
    Mat m = matrix_in_order(o_emb, rs.order);
    Mat rot = rs.rot * m * rs.rot.adjoint();

    long d_ext = rs.d_xb * rs.d_e;
    long d_int = rs.d_i * rs.d_ai;
    std::vector<MatSchmidtTerm> schmidt = matrix_schmidt(rot, d_ext, d_int);

    // Map factors back to site operators on X u B and B u (A n I).
    SiteList xb_support = site_union(x, region.B);
    SiteList int_support = site_union(region.B, rs.ai_sites);
    BreakDecomposition out;
    Mat recon = Mat::Zero(rot.rows(), rot.cols());
    for (const MatSchmidtTerm& t : schmidt) {
        Mat ext_full = Mat::Zero(rot.rows(), rot.cols());
        Mat int_full = Mat::Zero(rot.rows(), rot.cols());
        // ext factor acts on (xb, e); identity on (i, ai)
        for (long a1 = 0; a1 < d_ext; ++a1)
            for (long a2 = 0; a2 < d_ext; ++a2) {
                cplx v = t.left(a1, a2);
                if (v == 0.0) continue;
                for (long b = 0; b < d_int; ++b)
                    ext_full(a1 * d_int + b, a2 * d_int + b) = v;
            }
        for (long b1 = 0; b1 < d_int; ++b1)
            for (long b2 = 0; b2 < d_int; ++b2) {
                cplx v = t.right(b1, b2);
                if (v == 0.0) continue;
                for (long a1 = 0; a1 < d_ext; ++a1)
                    int_full(a1 * d_int + b1, a1 * d_int + b2) = v;
            }
        recon += ext_full * int_full;

        Mat ext_site = rs.rot.adjoint() * ext_full * rs.rot;
        Mat int_site = rs.rot.adjoint() * int_full * rs.rot;
        LocalOperator ext_op = operator_from_ordered(ext_site, rs.order, rs.order_dims);
        LocalOperator int_op = operator_from_ordered(int_site, rs.order, rs.order_dims);
        // restrict to actual supports (they act as identity elsewhere)
        LocalOperator ext_res = partial_trace(ext_op, xb_support);
        ext_res.matrix() *= static_cast<double>(ext_res.dim()) / ext_op.dim();
        LocalOperator int_res = partial_trace(int_op, int_support);
        int_res.matrix() *= static_cast<double>(int_res.dim()) / int_op.dim();

        BreakFactor fe{ext_res, false, max_term_commutator(model, ext_res)};
        fe.commutes_with_terms = fe.max_term_commutator <= 1e-8 * std::max(1.0, ext_res.hs_norm());
        BreakFactor fi{int_res, false, max_term_commutator(model, int_res)};
        fi.commutes_with_terms = fi.max_term_commutator <= 1e-8 * std::max(1.0, int_res.hs_norm());
        out.terms.push_back({{fe, fi}});
    }
    out.reconstruction_residual = (recon - rot).norm();
    return out;
}

BreakDecomposition break_three(const LocalOperator& o, const RegionSpec& region,
                               const LatticeModel& model, const ExtIntResult& split) {
    if (!split.factorized)
        throw std::domain_error("break_three: no exterior/interior factorization available");
    SiteList a = o.support();
    SiteList x = sorted_sites(region.X);
    SiteList y = sorted_sites(region.Y);
    if (x.empty() || y.empty()) throw std::domain_error("break_three: X and Y must be set");
    if (!sites_disjoint(x, y)) throw std::domain_error("break_three: X and Y overlap");
    {
        SiteList a_minus_i = site_difference(a, region.I);
        if (site_union(x, y) != a_minus_i)
            throw std::domain_error("break_three: X u Y must equal A \\ I");
    }
    for (const SiteList& z : geometric_plaquettes(model))
        if (!sites_disjoint(z, x) && !sites_disjoint(z, y))
            throw std::domain_error("break_three: a plaquette meets both X and Y");
    double oc = max_term_commutator(model, o);
    if (oc > 1e-8)
        throw std::domain_error("break_three: O does not commute with the term algebra");

    // Step 1: split across A_1 = X u I_1 | A_2 = Y u I_2 with I_1 = (A n I) \ Y.
    SiteList ai = site_intersection(a, region.I);
    SiteList i1 = site_difference(ai, y);
    SiteList i2 = site_difference(ai, i1);
    SiteList a1 = site_union(x, i1);
    SiteList a2 = site_union(y, i2);
    std::vector<SchmidtTerm> top = operator_schmidt(o, site_intersection(a1, a));

    // Step 2: lemma split of each factor.
    struct Chunk {
        LocalOperator ext;  // on X u B or Y u B
        LocalOperator mid;  // on B u (A_k n I)
    };
    std::vector<std::vector<Chunk>> left_chunks, right_chunks;
    RegionSpec r1 = region;
    r1.A = a1;
    RegionSpec r2 = region;
    r2.A = a2;
    for (const SchmidtTerm& t : top) {
        BreakDecomposition d1 = break_two(t.left, r1, model, split);
        BreakDecomposition d2 = break_two(t.right, r2, model, split);
        std::vector<Chunk> c1, c2;
        for (const BreakTerm& bt : d1.terms) c1.push_back({bt.factors[0].op, bt.factors[1].op});
        for (const BreakTerm& bt : d2.terms) c2.push_back({bt.factors[0].op, bt.factors[1].op});
        left_chunks.push_back(std::move(c1));
        right_chunks.push_back(std::move(c2));
    }

    // Collect kappa = (alpha, beta, gamma) triples: ext pair and middle product.
    SiteList xyb = site_union(site_union(x, y), region.B);
    SiteList mid_support = site_union(region.B, ai);
    struct Kappa {
        LocalOperator ext_x, ext_y, mid;
    };
    std::vector<Kappa> kappas;
    for (std::size_t al = 0; al < top.size(); ++al)
        for (const Chunk& cl : left_chunks[al])
            for (const Chunk& cr : right_chunks[al]) {
                LocalOperator mid = op_multiply(cl.mid, cr.mid);
                kappas.push_back({cl.ext, cr.ext, mid});
            }

    // Orthonormalize the middle family; re-expand O over the new basis.
    std::vector<LocalOperator> mids;
    for (const Kappa& k : kappas) mids.push_back(k.mid.embedded(mid_support, model.dims_of(mid_support)));
    std::vector<LocalOperator> mid_basis = hs_orthonormalize(mids);
    Mat w(mid_basis.size(), kappas.size());
    for (std::size_t j = 0; j < mid_basis.size(); ++j)
        for (std::size_t k = 0; k < kappas.size(); ++k) w(j, k) = hs_inner(mid_basis[j], mids[k]);

    BreakDecomposition out;
    SiteList full_support = site_union(xyb, ai);
    std::vector<long> full_dims = model.dims_of(full_support);
    Mat recon;
    bool first = true;
    for (std::size_t j = 0; j < mid_basis.size(); ++j) {
        BreakFactor fm{mid_basis[j], false, max_term_commutator(model, mid_basis[j])};
        fm.commutes_with_terms =
            fm.max_term_commutator <= 1e-8 * std::max(1.0, mid_basis[j].hs_norm());
        for (std::size_t k = 0; k < kappas.size(); ++k) {
            cplx coeff = w(j, k);
            if (std::abs(coeff) < 1e-12) continue;
            LocalOperator ex = kappas[k].ext_x;
            ex.matrix() *= coeff;
            BreakFactor fx{ex, false, max_term_commutator(model, ex)};
            fx.commutes_with_terms = fx.max_term_commutator <= 1e-8 * std::max(1.0, ex.hs_norm());
            BreakFactor fy{kappas[k].ext_y, false, max_term_commutator(model, kappas[k].ext_y)};
            fy.commutes_with_terms =
                fy.max_term_commutator <= 1e-8 * std::max(1.0, kappas[k].ext_y.hs_norm());
            out.terms.push_back({{fx, fm, fy}});

            LocalOperator prod = op_multiply(op_multiply(ex, mid_basis[j]), kappas[k].ext_y)
                                     .embedded(full_support, full_dims);
            if (first) {
                recon = prod.matrix();
                first = false;
            } else {
                recon += prod.matrix();
            }
        }
    }
    LocalOperator o_full = o.embedded(full_support, full_dims);
    out.reconstruction_residual = first ? o_full.hs_norm() : (recon - o_full.matrix()).norm();
    return out;
}

ToricObstructionReport obstruction_witness_toric(const LatticeModel& model,
                                                 const PauliString& o) {
    ToricObstructionReport rep;
    if (!model.pauli_context())
        throw std::domain_error("obstruction_witness_toric: not a Pauli model");
    const PauliContext& ctx = *model.pauli_context();

    // T = product of the z-type principal generators of the light plaquettes.
    PauliString t_prod;
    for (const ModelTerm& t : model.terms()) {
        int px = t.plaquette[0].x, py = t.plaquette[0].y;
        if ((px + py) % 2 != 0) continue;  // dark
        for (const PauliString& g : t.stabilizer_gens) {
            if (g.x == 0 && __builtin_popcountll(g.z) == 4) {
                t_prod = t_prod * g;
                break;
            }
        }
    }
    // Ring string: sigma^z on every boundary site.
    PauliString ring;
    for (int xx = 0; xx < model.lx(); ++xx)
        for (int yy = 0; yy < model.ly(); ++yy) {
            if (xx != 0 && xx != model.lx() - 1 && yy != 0 && yy != model.ly() - 1) continue;
            for (int q = 0; q < ctx.qubits_per_site(); ++q) ring.z |= 1ull << ctx.slot({xx, yy}, q);
        }
    rep.t_matches_ring = (t_prod.x == ring.x) && (t_prod.z == ring.z) && (t_prod.phase % 4 == 0);

    // Halves split at vertical coordinate ly/2 (top half: y <= ly/2).
    PauliString t_top, t_bot;
    for (int xx = 0; xx < model.lx(); ++xx)
        for (int yy = 0; yy < model.ly(); ++yy) {
            if (xx != 0 && xx != model.lx() - 1 && yy != 0 && yy != model.ly() - 1) continue;
            for (int q = 0; q < ctx.qubits_per_site(); ++q) {
                std::uint64_t bit = 1ull << ctx.slot({xx, yy}, q);
                if (yy <= model.ly() / 2) t_top.z |= bit;
                else t_bot.z |= bit;
            }
        }

    rep.comm_with_T = o.commutes_with(t_prod) ? 0.0 : 2.0;
    rep.anti_with_Tt = o.anticommutes_with(t_top) ? 0.0 : 2.0;
    rep.anti_with_Tb = o.anticommutes_with(t_bot) ? 0.0 : 2.0;
    rep.obstruction_confirmed =
        rep.comm_with_T == 0.0 && rep.anti_with_Tt == 0.0 && rep.anti_with_Tb == 0.0;
    return rep;
}

namespace {

// Zero-energy count of the sub-Hamiltonian given by `term_indices`, counted
// on the given support (which must contain every selected term).
long count_zero_states_on(const LatticeModel& model, const std::vector<int>& term_indices,
                          const SiteList& support) {
    SiteList sup = sorted_sites(support);
    if (model.all_terms_pauli()) {
        std::vector<PauliString> gens;
        for (int k : term_indices)
            for (const PauliString& g : model.terms()[k].stabilizer_gens) gens.push_back(g);
        int n = 0;
        for (const Site& s : sup) {
            long v = model.dim_of(s);
            while (v > 1) {
                v /= 2;
                ++n;
            }
        }
        return stabilizer_zero_count(gens, n);
    }
    std::vector<long> dims = model.dims_of(sup);
    long total = 1;
    for (long d : dims) total *= d;
    if (total > dense_cap()) throw ResourceError("count_zero_states_on: exceeds dense cap");
    LocalOperator prod = LocalOperator::identity(sup, dims);
    for (int k : term_indices)
        prod = op_multiply(prod, model.terms()[k].projector.embedded(sup, dims));
    double trace = prod.trace().real();
    long count = std::lround(trace);
    if (std::abs(trace - count) > 1e-6)
        throw std::runtime_error("count_zero_states_on: non-integer trace");
    return count;
}

}  // namespace

HolesSplitResult holes_split(const LatticeModel& model, const std::vector<SiteList>& holes,
                             const AlgebraOptions& opts) {
    HolesSplitResult out;
    // disjointness and plaquette-containment checks
    for (std::size_t i = 0; i < holes.size(); ++i) {
        for (std::size_t j = i + 1; j < holes.size(); ++j)
            if (!sites_disjoint(holes[i], holes[j]))
                throw std::domain_error("holes_split: holes overlap");
        bool has_plaquette = false;
        for (int x = 0; x + 1 < model.lx() && !has_plaquette; ++x)
            for (int y = 0; y + 1 < model.ly() && !has_plaquette; ++y)
                if (is_subset(plaquette_sites(x, y), sorted_sites(holes[i]))) has_plaquette = true;
        if (!has_plaquette)
            throw std::domain_error("holes_split: every hole must contain a plaquette");
    }

    out.all_factorized = true;
    for (const SiteList& s : holes) {
        HoleReport h;
        h.region = boundary_of(model, s);
        h.split = ext_int_factorization(model, h.region, opts);
        if (!h.split.factorized) out.all_factorized = false;
        out.holes.push_back(std::move(h));
    }

    // H = H_E + H_I split
    for (std::size_t k = 0; k < model.terms().size(); ++k) {
        bool interior = false;
        for (const SiteList& s : holes)
            if (is_subset(model.terms()[k].plaquette, sorted_sites(s))) interior = true;
        if (interior)
            out.interior_term_indices.push_back(static_cast<int>(k));
        else
            out.exterior_term_indices.push_back(static_cast<int>(k));
    }

    if (!out.all_factorized) return out;

    out.interior_has_zero = true;
    for (std::size_t i = 0; i < holes.size(); ++i) {
        std::vector<int> hole_terms;
        for (int k : out.interior_term_indices)
            if (is_subset(model.terms()[k].plaquette, sorted_sites(holes[i])))
                hole_terms.push_back(k);
        out.holes[i].zero_count = count_zero_states_on(model, hole_terms, holes[i]);
        if (out.holes[i].zero_count == 0) out.interior_has_zero = false;
    }
    try {
        out.exterior_zero_count =
            count_zero_states_on(model, out.exterior_term_indices, model.all_sites());
    } catch (const ResourceError&) {
        out.exterior_zero_count = -1;
    }

    // Coarse graining: Voronoi groups around hole centers.
    std::vector<std::pair<double, double>> centers;
    for (const SiteList& s : holes) {
        double cx = 0, cy = 0;
        for (const Site& p : s) {
            cx += p.x;
            cy += p.y;
        }
        centers.push_back({cx / s.size(), cy / s.size()});
    }
    out.coarse_supersites.assign(centers.size(), {});
    for (const Site& s : model.all_sites()) {
        std::size_t best = 0;
        double bd = 1e300;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            double dx = s.x - centers[c].first, dy = s.y - centers[c].second;
            double d2 = dx * dx + dy * dy;
            if (d2 < bd - 1e-9) {
                bd = d2;
                best = c;
            }
        }
        out.coarse_supersites[best].push_back(s);
    }
    for (int k : out.exterior_term_indices) {
        std::set<int> touched;
        for (const Site& s : model.terms()[k].plaquette)
            for (std::size_t c = 0; c < out.coarse_supersites.size(); ++c)
                if (contains_site(out.coarse_supersites[c], s)) touched.insert(static_cast<int>(c));
        if (touched.size() > 2)
            throw std::logic_error("holes_split: coarse graining is not two-body");
        int a = touched.empty() ? 0 : *touched.begin();
        int b = touched.empty() ? 0 : *touched.rbegin();
        out.coarse_term_pairs.push_back({a, b});
    }
    return out;
}

IntervalWitnessResult column_interval_witness(const LatticeModel& model,
                                              const HolesSplitResult& holes,
                                              const std::vector<int>& columns,
                                              const AlgebraOptions& opts) {
    if (!holes.all_factorized)
        throw std::domain_error("column_interval_witness: holes did not factorize");
    IntervalWitnessResult out;

    // Exterior-only model copy.
    LatticeModel he(model.lx(), model.ly(), model.site_dims());
    if (model.pauli_context()) he.set_pauli_context(*model.pauli_context());
    for (int k : holes.exterior_term_indices) he.add_term(model.terms()[k]);
    out.exterior_zero_count = brute_force_zero_count(he).count;

    // Interior site set (union over holes).
    SiteList interiors;
    for (const HoleReport& h : holes.holes) interiors = site_union(interiors, h.region.I);

    // Per chosen column: intervals and their central decompositions.
    struct ColumnData {
        int column;
        std::vector<SiteList> intervals;
        std::vector<CentralDecomposition> decomps;
    };
    std::vector<ColumnData> cols;
    std::vector<LocalOperator> he_projectors;
    for (int k : holes.exterior_term_indices) he_projectors.push_back(model.terms()[k].projector);
    for (int c : columns) {
        ColumnData cd;
        cd.column = c;
        SiteList run;
        for (int y = 0; y <= model.ly(); ++y) {
            Site s{c, y};
            bool in_run = y < model.ly() && !contains_site(interiors, s);
            if (in_run) {
                run.push_back(s);
            } else if (!run.empty()) {
                cd.intervals.push_back(run);
                run.clear();
            }
        }
        for (const SiteList& iv : cd.intervals) {
            OperatorAlgebra alg = interaction_algebra(he_projectors, iv, model.dims_of(iv), opts);
            cd.decomps.push_back(minimal_central_projectors(alg, 8888, opts));
        }
        cols.push_back(std::move(cd));
    }

    // Search over block tuples (lexicographic), testing the restricted count.
    std::vector<std::size_t> sizes;
    for (const ColumnData& cd : cols)
        for (const CentralDecomposition& d : cd.decomps) sizes.push_back(d.size());
    std::vector<int> tuple(sizes.size(), 0);
    while (true) {
        out.tried_tuples.push_back(std::vector<int>(tuple.begin(), tuple.end()));
        std::vector<LocalOperator> factors;
        std::size_t idx = 0;
        for (const ColumnData& cd : cols) {
            SiteList colsites = model.column_sites(cd.column);
            LocalOperator p = LocalOperator::identity(colsites, model.dims_of(colsites));
            for (std::size_t a = 0; a < cd.decomps.size(); ++a)
                p = op_multiply(
                    p, cd.decomps[a].projectors[tuple[idx + a]].embedded(colsites,
                                                                         model.dims_of(colsites)));
            idx += cd.decomps.size();
            factors.push_back(p);
        }
        double trace = restricted_zero_trace(he, factors);
        if (trace > 1e-9) {
            Witness w;
            for (std::size_t k = 0; k < cols.size(); ++k)
                w.entries.push_back({cols[k].column, mpo_from_dense(factors[k])});
            out.witness = std::move(w);
            out.found = true;
            return out;
        }
        std::size_t c = 0;
        while (c < tuple.size()) {
            if (++tuple[c] < static_cast<int>(sizes[c])) break;
            tuple[c] = 0;
            ++c;
        }
        if (c == tuple.size()) break;
    }
    out.found = false;
    return out;
}

}  // namespace plq
