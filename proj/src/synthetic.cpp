#include "plq/synthetic.hpp"

#include "plq/pauli_algebra.hpp"

namespace plq {

namespace {

void add_pauli_term(LatticeModel& model, Site host, const std::vector<PauliString>& gens) {
    const PauliContext& ctx = *model.pauli_context();
    SiteList p = sorted_sites(plaquette_sites(host.x, host.y));
    std::vector<long> pdims = model.dims_of(p);
    LocalOperator proj = LocalOperator::identity(p, pdims);
    for (const PauliString& g : gens) {
        LocalOperator gd = ctx.to_dense(g, p);
        LocalOperator half = op_add(LocalOperator::identity(p, pdims), gd);
        half.matrix() *= 0.5;
        proj = op_multiply(proj, half);
    }
    ModelTerm t;
    t.plaquette = p;
    t.projector = proj;
    t.stabilizer_gens = gens;
    model.add_term(std::move(t));
}

}  // namespace

SiteList pair_hole_sites(const PairHoleSpec& h) {
    return sorted_sites(plaquette_sites(h.x0, h.y0));
}

LatticeModel synth_pair_model(int lx, int ly, const std::vector<PairHoleSpec>& holes,
                              std::uint64_t seed) {
    std::vector<long> dims(static_cast<std::size_t>(lx) * ly, 4);
    LatticeModel model(lx, ly, dims);
    model.name = "synth_pair";
    model.seed = seed;
    PauliContext ctx(model.all_sites(), 2);
    model.set_pauli_context(ctx);

    std::map<std::pair<int, int>, std::vector<PauliString>> by_plaq;
    auto add_gen = [&](Site host, const PauliString& g) {
        by_plaq[{host.x, host.y}].push_back(g);
    };

    for (const PairHoleSpec& h : holes) {
        if (h.x0 < 1 || h.y0 < 1 || h.x0 + 2 > lx - 1 || h.y0 + 2 > ly - 1)
            throw std::domain_error("synth_pair_model: hole too close to the lattice edge");
        SiteList p = pair_hole_sites(h);
        // slot 0 stabilizers on the hole plaquette
        auto uniform = [&](char letter, double sign) {
            std::vector<std::pair<int, char>> f;
            for (const Site& s : p) f.push_back({ctx.slot(s, 0), letter});
            return ctx.make(f, sign);
        };
        add_gen({h.x0, h.y0}, uniform('z', 1.0));
        add_gen({h.x0, h.y0}, uniform('x', 1.0));
        add_gen({h.x0, h.y0}, uniform('y', h.frustrated ? -1.0 : 1.0));

        // slot 1 gadget pairs to diagonal partners
        struct Pair {
            Site s, t, host;
        };
        std::vector<Pair> pairs = {
            {{h.x0, h.y0}, {h.x0 - 1, h.y0 - 1}, {h.x0 - 1, h.y0 - 1}},
            {{h.x0 + 1, h.y0}, {h.x0 + 2, h.y0 - 1}, {h.x0 + 1, h.y0 - 1}},
            {{h.x0, h.y0 + 1}, {h.x0 - 1, h.y0 + 2}, {h.x0 - 1, h.y0 + 1}},
            {{h.x0 + 1, h.y0 + 1}, {h.x0 + 2, h.y0 + 2}, {h.x0 + 1, h.y0 + 1}},
        };
        for (const Pair& pr : pairs) {
            add_gen(pr.host,
                    ctx.make({{ctx.slot(pr.s, 1), 'x'}, {ctx.slot(pr.t, 1), 'x'}}));
            add_gen(pr.host,
                    ctx.make({{ctx.slot(pr.s, 1), 'z'}, {ctx.slot(pr.t, 1), 'z'}}));
        }
    }
    for (const auto& [key, gens] : by_plaq)
        add_pauli_term(model, {key.first, key.second}, gens);
    return model;
}

SiteList cross_hole_sites(const CrossHoleSpec& h) {
    SiteList out;
    for (int x = h.x0; x < h.x0 + 3; ++x)
        for (int y = h.y0; y < h.y0 + 3; ++y) out.push_back({x, y});
    return sorted_sites(out);
}

LatticeModel synth_cross_model(int lx, int ly, const std::vector<CrossHoleSpec>& holes,
                               std::uint64_t seed) {
    std::vector<long> dims(static_cast<std::size_t>(lx) * ly, 2);
    LatticeModel model(lx, ly, dims);
    model.name = "synth_cross";
    model.seed = seed;
    PauliContext ctx(model.all_sites(), 1);
    model.set_pauli_context(ctx);

    std::map<std::pair<int, int>, std::vector<PauliString>> by_plaq;
    auto add_gen = [&](Site host, const PauliString& g) {
        by_plaq[{host.x, host.y}].push_back(g);
    };

    for (const CrossHoleSpec& h : holes) {
        if (h.x0 < 1 || h.y0 < 1 || h.x0 + 4 > lx - 1 || h.y0 + 4 > ly - 1)
            throw std::domain_error("synth_cross_model: hole too close to the lattice edge");
        Site c{h.x0 + 1, h.y0 + 1};
        Site ms{h.x0 + 1, h.y0}, mw{h.x0, h.y0 + 1}, me{h.x0 + 2, h.y0 + 1},
            mn{h.x0 + 1, h.y0 + 2};
        auto triple = [&](char letter, Site a, Site b, Site d) {
            return ctx.make({{ctx.slot(a), letter}, {ctx.slot(b), letter}, {ctx.slot(d), letter}});
        };
        add_gen({h.x0, h.y0}, triple('z', c, ms, mw));
        add_gen({h.x0 + 1, h.y0 + 1}, triple('z', c, me, mn));
        add_gen({h.x0 + 1, h.y0}, triple('x', c, ms, me));
        add_gen({h.x0, h.y0 + 1}, triple('x', c, mw, mn));

        struct Pair {
            Site s, t, host;
        };
        std::vector<Pair> pairs = {
            {{h.x0, h.y0}, {h.x0 - 1, h.y0 - 1}, {h.x0 - 1, h.y0 - 1}},
            {{h.x0 + 2, h.y0}, {h.x0 + 3, h.y0 - 1}, {h.x0 + 2, h.y0 - 1}},
            {{h.x0, h.y0 + 2}, {h.x0 - 1, h.y0 + 3}, {h.x0 - 1, h.y0 + 2}},
            {{h.x0 + 2, h.y0 + 2}, {h.x0 + 3, h.y0 + 3}, {h.x0 + 2, h.y0 + 2}},
        };
        for (const Pair& pr : pairs) {
            add_gen(pr.host, ctx.make({{ctx.slot(pr.s), 'x'}, {ctx.slot(pr.t), 'x'}}));
            add_gen(pr.host, ctx.make({{ctx.slot(pr.s), 'z'}, {ctx.slot(pr.t), 'z'}}));
        }
    }
    for (const auto& [key, gens] : by_plaq)
        add_pauli_term(model, {key.first, key.second}, gens);
    return model;
}

CrossBreakSetup cross_break_setup(const CrossHoleSpec& hole) {
    CrossBreakSetup out;
    out.S = cross_hole_sites(hole);
    int xc = hole.x0 + 1, yc = hole.y0 + 1;
    for (int dy = -2; dy <= 2; ++dy) out.A.push_back({xc, yc + dy});
    out.A = sorted_sites(out.A);
    out.X = {{xc, yc + 1}, {xc, yc + 2}};
    out.Y = {{xc, yc - 2}, {xc, yc - 1}};
    out.X = sorted_sites(out.X);
    out.Y = sorted_sites(out.Y);
    return out;
}

LocalOperator cross_central_operator(const LatticeModel& model, const CrossHoleSpec& hole,
                                     std::uint64_t seed) {
    const PauliContext& ctx = *model.pauli_context();
    CrossBreakSetup setup = cross_break_setup(hole);
    const SiteList& a = setup.A;
    const int n = static_cast<int>(a.size());

    // Constraints: restrictions to A of every stabilizer generator that
    // touches A. Solve for the monomial subgroup commuting with all of them.
    std::uint64_t amask = 0;
    for (const Site& s : a) amask |= 1ull << ctx.slot(s);
    std::vector<PauliString> constraints;
    for (const ModelTerm& t : model.terms())
        for (const PauliString& g : t.stabilizer_gens)
            if ((g.x | g.z) & amask) {
                PauliString r;
                r.x = g.x & amask;
                r.z = g.z & amask;
                constraints.push_back(r);
            }

    // Local index: 2n bits, (x bits | z bits) over the sites of A in order.
    auto local_of = [&](const PauliString& p) {
        std::uint64_t v = 0;
        for (int k = 0; k < n; ++k) {
            std::uint64_t bit = 1ull << ctx.slot(a[k]);
            if (p.x & bit) v |= 1ull << k;
            if (p.z & bit) v |= 1ull << (n + k);
        }
        return v;
    };
    auto global_of = [&](std::uint64_t v) {
        PauliString p;
        for (int k = 0; k < n; ++k) {
            std::uint64_t bit = 1ull << ctx.slot(a[k]);
            if (v & (1ull << k)) p.x |= bit;
            if (v & (1ull << (n + k))) p.z |= bit;
        }
        return p;
    };
    auto omega = [&](std::uint64_t u, std::uint64_t v) {
        std::uint64_t ux = u & ((1ull << n) - 1), uz = u >> n;
        std::uint64_t vx = v & ((1ull << n) - 1), vz = v >> n;
        return (__builtin_popcountll(ux & vz) + __builtin_popcountll(uz & vx)) % 2;
    };

    // Gaussian elimination for the null space of the constraint system.
    std::vector<std::uint64_t> cons;
    for (const PauliString& p : constraints) cons.push_back(local_of(p));
    std::vector<std::uint64_t> basis;
    for (std::uint64_t cand = 0; basis.size() < static_cast<std::size_t>(2 * n); ++cand) {
        if (cand >= (1ull << (2 * n))) break;
        bool ok = true;
        for (std::uint64_t cvec : cons)
            if (omega(cand, cvec)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        // independence against the current basis: rank check by elimination
        std::vector<std::uint64_t> rows = basis;
        rows.push_back(cand);
        int rank = 0;
        std::vector<std::uint64_t> work = rows;
        for (int bit = 2 * n - 1; bit >= 0; --bit) {
            int pivot = -1;
            for (std::size_t r = rank; r < work.size(); ++r)
                if (work[r] & (1ull << bit)) {
                    pivot = static_cast<int>(r);
                    break;
                }
            if (pivot < 0) continue;
            std::swap(work[rank], work[pivot]);
            for (std::size_t r = 0; r < work.size(); ++r)
                if (static_cast<int>(r) != rank && (work[r] & (1ull << bit)))
                    work[r] ^= work[rank];
            ++rank;
        }
        if (rank == static_cast<int>(rows.size()) && cand != 0) basis.push_back(cand);
    }

    // Random complex combination over the subgroup spanned by the basis.
    Rng rng(seed);
    std::vector<long> adims = model.dims_of(a);
    long dim = 1;
    for (long d : adims) dim *= d;
    Mat m = Mat::Zero(dim, dim);
    const std::size_t r = basis.size();
    for (std::uint64_t mask = 0; mask < (1ull << r); ++mask) {
        std::uint64_t v = 0;
        for (std::size_t j = 0; j < r; ++j)
            if (mask & (1ull << j)) v ^= basis[j];
        PauliString p = hermitian_monomial(global_of(v));
        cplx coeff(rng.gauss(), rng.gauss());
        m += coeff * ctx.to_dense(p, a).matrix();
    }
    return LocalOperator(a, adims, std::move(m));
}

LatticeModel random_commuting_strip(const RandomStripOptions& ropts, std::uint64_t seed) {
    if (ropts.ly != 2) throw std::domain_error("random_commuting_strip: ly must be 2");
    const long d = ropts.site_dim;
    const long dc = d * d;  // column dimension
    Rng rng(seed);

    // Per-column block structures: list of (a_k, b_k) with sum a_k b_k = dc.
    struct Block {
        long a, b, offset;
    };
    std::vector<std::vector<Block>> structure;
    std::vector<Mat> v_col;
    for (int x = 0; x < ropts.lx; ++x) {
        std::vector<Block> blocks;
        long rem = dc, off = 0;
        while (rem > 0) {
            long c = rng.uniform_int(1, rem);
            std::vector<long> divs;
            for (long a = 1; a <= c; ++a)
                if (c % a == 0) divs.push_back(a);
            long a = divs[rng.uniform_int(0, static_cast<long>(divs.size()) - 1)];
            blocks.push_back({a, c / a, off});
            off += c;
            rem -= c;
        }
        structure.push_back(blocks);
        v_col.push_back(rng.haar_unitary(dc));
    }

    std::vector<long> dims(static_cast<std::size_t>(ropts.lx) * 2, d);
    LatticeModel model(ropts.lx, 2, dims);
    model.name = "random_strip";
    model.seed = seed;

    for (int x = 0; x + 1 < ropts.lx; ++x) {
        const auto& bl = structure[x];
        const auto& br = structure[x + 1];
        Mat term = Mat::Zero(dc * dc, dc * dc);
        for (const Block& kl : bl)
            for (const Block& kr : br) {
                long hd = kl.b * kr.a;
                long rank = std::max<long>(1, std::lround(hd * (1.0 - ropts.kernel_fraction)));
                rank = std::min(rank, hd);
                Mat u = rng.haar_unitary(hd);
                Mat proj = u.leftCols(rank) * u.leftCols(rank).adjoint();
                // embed: indices (ia, ib) x (ja, jb); delta on ia and jb
                for (long ia = 0; ia < kl.a; ++ia)
                    for (long jb = 0; jb < kr.b; ++jb)
                        for (long ib = 0; ib < kl.b; ++ib)
                            for (long ja = 0; ja < kr.a; ++ja)
                                for (long ib2 = 0; ib2 < kl.b; ++ib2)
                                    for (long ja2 = 0; ja2 < kr.a; ++ja2) {
                                        long row = (kl.offset + ia * kl.b + ib) * dc +
                                                   (kr.offset + ja * kr.b + jb);
                                        long col = (kl.offset + ia * kl.b + ib2) * dc +
                                                   (kr.offset + ja2 * kr.b + jb);
                                        term(row, col) += proj(ib * kr.a + ja, ib2 * kr.a + ja2);
                                    }
            }
        Mat v = kron(v_col[x], v_col[x + 1]);
        Mat p = v * term * v.adjoint();
        SiteList plaq = sorted_sites(plaquette_sites(x, 0));
        ModelTerm t;
        t.plaquette = plaq;
        t.projector = LocalOperator(plaq, model.dims_of(plaq), std::move(p));
        model.add_term(std::move(t));
    }
    return model;
}

RandomFourSite random_commuting_four_site(const std::vector<long>& dims, std::uint64_t seed) {
    if (dims.size() != 4) throw std::domain_error("random_commuting_four_site: need 4 dims");
    const long d1 = dims[0], d2 = dims[1], dx = dims[2], d3 = dims[3];
    const long dm = d2 * dx;
    Rng rng(seed);

    struct Block {
        long a, b, offset;
    };
    std::vector<Block> blocks;
    long rem = dm, off = 0;
    while (rem > 0) {
        long c = rng.uniform_int(1, rem);
        std::vector<long> divs;
        for (long a = 1; a <= c; ++a)
            if (c % a == 0) divs.push_back(a);
        long a = divs[rng.uniform_int(0, static_cast<long>(divs.size()) - 1)];
        blocks.push_back({a, c / a, off});
        off += c;
        rem -= c;
    }
    Mat v = rng.haar_unitary(dm);

    RandomFourSite out;
    out.dims = dims;
    // q12x: blocks act on H_1 (x) A_k; identity on B_k
    Mat q1 = Mat::Zero(d1 * dm, d1 * dm);
    for (const Block& k : blocks) {
        long hd = d1 * k.a;
        long kern = std::max<long>(1, rng.uniform_int(1, std::max<long>(1, hd / 2)));
        Mat h = rng.psd_with_kernel(hd, std::min(kern, hd - 0));
        for (long i1 = 0; i1 < d1; ++i1)
            for (long ia = 0; ia < k.a; ++ia)
                for (long i1p = 0; i1p < d1; ++i1p)
                    for (long iap = 0; iap < k.a; ++iap)
                        for (long ib = 0; ib < k.b; ++ib) {
                            long row = i1 * dm + k.offset + ia * k.b + ib;
                            long col = i1p * dm + k.offset + iap * k.b + ib;
                            q1(row, col) += h(i1 * k.a + ia, i1p * k.a + iap);
                        }
    }
    Mat v1 = kron(Mat::Identity(d1, d1), v);
    out.q12x = v1 * q1 * v1.adjoint();

    // q2x3: blocks act on B_k (x) H_3; identity on A_k
    Mat q2 = Mat::Zero(dm * d3, dm * d3);
    for (const Block& k : blocks) {
        long hd = k.b * d3;
        long kern = std::max<long>(1, rng.uniform_int(1, std::max<long>(1, hd / 2)));
        Mat h = rng.psd_with_kernel(hd, std::min(kern, hd));
        for (long ib = 0; ib < k.b; ++ib)
            for (long i3 = 0; i3 < d3; ++i3)
                for (long ibp = 0; ibp < k.b; ++ibp)
                    for (long i3p = 0; i3p < d3; ++i3p)
                        for (long ia = 0; ia < k.a; ++ia) {
                            long row = (k.offset + ia * k.b + ib) * d3 + i3;
                            long col = (k.offset + ia * k.b + ibp) * d3 + i3p;
                            q2(row, col) += h(ib * d3 + i3, ibp * d3 + i3p);
                        }
    }
    Mat v2 = kron(v, Mat::Identity(d3, d3));
    out.q2x3 = v2 * q2 * v2.adjoint();
    return out;
}

}  // namespace plq
