#include "plq/lattice_model.hpp"

#include <cmath>
#include <limits>

namespace plq {

LatticeModel::LatticeModel(int lx, int ly, std::vector<long> site_dims)
    : lx_(lx), ly_(ly), dims_(std::move(site_dims)) {
    if (static_cast<int>(dims_.size()) != lx * ly)
        throw std::domain_error("LatticeModel: dims size must be lx*ly");
}

std::size_t LatticeModel::site_index(Site s) const {
    if (s.x < 0 || s.x >= lx_ || s.y < 0 || s.y >= ly_)
        throw std::domain_error("LatticeModel: site out of range");
    return static_cast<std::size_t>(s.x) * ly_ + s.y;  // canonical: x major
}

SiteList LatticeModel::all_sites() const {
    SiteList out;
    for (int x = 0; x < lx_; ++x)
        for (int y = 0; y < ly_; ++y) out.push_back({x, y});
    return out;
}

SiteList LatticeModel::column_sites(int c) const {
    SiteList out;
    for (int y = 0; y < ly_; ++y) out.push_back({c, y});
    return out;
}

SiteList LatticeModel::column_range_sites(int c_lo, int c_hi) const {
    SiteList out;
    for (int x = c_lo; x <= c_hi; ++x)
        for (int y = 0; y < ly_; ++y) out.push_back({x, y});
    return out;
}

std::vector<long> LatticeModel::dims_of(const SiteList& sites) const {
    std::vector<long> out;
    out.reserve(sites.size());
    for (const Site& s : sites) out.push_back(dims_[site_index(s)]);
    return out;
}

long LatticeModel::total_dim() const {
    long t = 1;
    for (long d : dims_) {
        if (t > (1l << 62) / d) throw ResourceError("LatticeModel: total dimension overflow");
        t *= d;
    }
    return t;
}

void LatticeModel::add_term(ModelTerm t) {
    if (t.plaquette.size() != 4)
        throw std::domain_error("LatticeModel: term support must be a 4-site plaquette");
    SiteList p = sorted_sites(t.plaquette);
    Site base = p[0];
    SiteList expect = sorted_sites(plaquette_sites(base.x, base.y));
    if (p != expect) throw std::domain_error("LatticeModel: term support is not a unit plaquette");
    t.plaquette = p;
    terms_.push_back(std::move(t));
}

std::vector<const ModelTerm*> LatticeModel::terms_in_columns(int lo, int hi) const {
    std::vector<const ModelTerm*> out;
    for (const ModelTerm& t : terms_) {
        bool ok = true;
        for (const Site& s : t.plaquette) ok = ok && s.x >= lo && s.x <= hi;
        if (ok) out.push_back(&t);
    }
    return out;
}

bool LatticeModel::all_terms_pauli() const {
    if (!pauli_ctx_) return false;
    for (const ModelTerm& t : terms_)
        if (t.stabilizer_gens.empty()) return false;
    return true;
}

ValidationReport validate(const LatticeModel& model, double tol) {
    ValidationReport rep;
    rep.tol = tol;
    for (const ModelTerm& t : model.terms()) {
        const Mat& p = t.projector.matrix();
        rep.max_projector_residual =
            std::max(rep.max_projector_residual, (p * p - p).norm());
        rep.max_projector_residual =
            std::max(rep.max_projector_residual, (p - p.adjoint()).norm());
    }
    for (std::size_t a = 0; a < model.terms().size(); ++a)
        for (std::size_t b = a + 1; b < model.terms().size(); ++b) {
            const ModelTerm& ta = model.terms()[a];
            const ModelTerm& tb = model.terms()[b];
            if (sites_disjoint(ta.plaquette, tb.plaquette)) continue;
            rep.max_commutator_residual = std::max(
                rep.max_commutator_residual, commutator_norm(ta.projector, tb.projector));
        }
    rep.pass = rep.max_projector_residual <= tol && rep.max_commutator_residual <= tol;
    return rep;
}

LocalOperator projector_onto_eigenspace(const LocalOperator& h, double lambda,
                                        double cluster_tol, double match_tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h.matrix());
    const auto& ev = es.eigenvalues();
    long lo = -1, hi = -1;
    for (long k = 0; k < ev.size(); ++k) {
        if (std::abs(ev(k) - lambda) <= match_tol) {
            if (lo < 0) lo = k;
            hi = k;
        }
    }
    if (lo < 0) throw std::domain_error("projectorize: lambda is not an eigenvalue");
    // extend to the full cluster
    while (lo > 0 && ev(lo) - ev(lo - 1) <= cluster_tol) --lo;
    while (hi + 1 < ev.size() && ev(hi + 1) - ev(hi) <= cluster_tol) ++hi;
    Mat p = Mat::Zero(h.dim(), h.dim());
    for (long k = lo; k <= hi; ++k)
        p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    return LocalOperator(h.support(), h.site_dims(), std::move(p));
}

LatticeModel projectorize(int lx, int ly, std::vector<long> site_dims,
                          const std::vector<std::pair<SiteList, std::vector<EigenvaluePick>>>& terms) {
    LatticeModel model(lx, ly, std::move(site_dims));
    for (const auto& [plaq, picks] : terms) {
        SiteList p = sorted_sites(plaq);
        std::vector<long> pdims = model.dims_of(p);
        LocalOperator proj = LocalOperator::identity(p, pdims);
        for (const EigenvaluePick& pick : picks) {
            LocalOperator h = pick.h.support() == p ? pick.h : pick.h.embedded(p, pdims);
            for (const EigenvaluePick& other : picks) {
                if (&other == &pick) continue;
                double cn = commutator_norm(pick.h, other.h);
                if (cn > 1e-8)
                    throw std::domain_error("projectorize: terms on a plaquette do not commute");
            }
            proj = op_multiply(proj, projector_onto_eigenspace(h, pick.lambda));
        }
        ModelTerm t;
        t.plaquette = p;
        t.projector = proj;
        model.add_term(std::move(t));
    }
    return model;
}

namespace {

struct PendingGen {
    Site plaquette;  // lower-left corner of the host plaquette
    PauliString gen;
};

LatticeModel assemble_pauli_model(int lx, int ly, int qubits_per_site,
                                  const std::vector<PendingGen>& gens, const std::string& name) {
    std::vector<long> dims(static_cast<std::size_t>(lx) * ly, 1l << qubits_per_site);
    LatticeModel model(lx, ly, dims);
    model.name = name;
    PauliContext ctx(model.all_sites(), qubits_per_site);
    model.set_pauli_context(ctx);

    std::map<std::pair<int, int>, std::vector<PauliString>> by_plaquette;
    for (const PendingGen& g : gens) by_plaquette[{g.plaquette.x, g.plaquette.y}].push_back(g.gen);

    for (const auto& [key, list] : by_plaquette) {
        SiteList p = sorted_sites(plaquette_sites(key.first, key.second));
        std::vector<long> pdims = model.dims_of(p);
        LocalOperator proj = LocalOperator::identity(p, pdims);
        for (const PauliString& g : list) {
            LocalOperator gd = ctx.to_dense(g, p);
            LocalOperator half = op_add(LocalOperator::identity(p, pdims), gd);
            half.matrix() *= 0.5;
            proj = op_multiply(proj, half);
        }
        ModelTerm t;
        t.plaquette = p;
        t.projector = proj;
        t.stabilizer_gens = list;
        model.add_term(std::move(t));
    }
    return model;
}

bool light_plaquette(int x, int y) { return (x + y) % 2 == 0; }

}  // namespace

LatticeModel build_toric_rect(int lx, int ly, ToricEdges edges,
                              const std::vector<ToricFlip>& flips) {
    // The edge couplings require all four system corners to sit in light
    // plaquettes, hence even side lengths; bare checkerboard fragments have
    // no such constraint.
    if (edges != ToricEdges::None && (lx % 2 != 0 || ly % 2 != 0))
        throw std::domain_error("build_toric_code: side lengths must be even (light corners)");
    if (lx < 2 || ly < 2) throw std::domain_error("build_toric_code: lattice too small");

    std::vector<long> dims(static_cast<std::size_t>(lx) * ly, 2);
    LatticeModel probe(lx, ly, dims);
    PauliContext ctx(probe.all_sites(), 1);

    auto flipped = [&](ToricFlip::Kind kind, int a, int b = 0) {
        for (const ToricFlip& f : flips)
            if (f.kind == kind && f.a == a && (kind != ToricFlip::Plaquette || f.b == b))
                return true;
        return false;
    };

    std::vector<PendingGen> gens;
    for (int x = 0; x + 1 < lx; ++x)
        for (int y = 0; y + 1 < ly; ++y) {
            char letter = light_plaquette(x, y) ? 'z' : 'x';
            std::vector<std::pair<int, char>> factors;
            for (const Site& s : plaquette_sites(x, y)) factors.push_back({ctx.slot(s), letter});
            double sign = flipped(ToricFlip::Plaquette, x, y) ? -1.0 : 1.0;
            gens.push_back({{x, y}, ctx.make(factors, sign)});
        }

    auto add_edge = [&](Site i, Site j, Site host, ToricFlip::Kind kind, int a) {
        double sign = flipped(kind, a) ? -1.0 : 1.0;
        gens.push_back({host, ctx.make({{ctx.slot(i), 'x'}, {ctx.slot(j), 'x'}}, sign)});
    };

    if (edges != ToricEdges::None) {
        for (int x = 0; x + 1 < lx; ++x) {
            if (light_plaquette(x, ly - 2))
                add_edge({x, ly - 1}, {x + 1, ly - 1}, {x, ly - 2}, ToricFlip::EdgeTop, x);
            if (light_plaquette(x, 0))
                add_edge({x, 0}, {x + 1, 0}, {x, 0}, ToricFlip::EdgeBottom, x);
        }
    }
    if (edges == ToricEdges::All) {
        for (int y = 0; y + 1 < ly; ++y) {
            if (light_plaquette(0, y))
                add_edge({0, y}, {0, y + 1}, {0, y}, ToricFlip::EdgeLeft, y);
            if (light_plaquette(lx - 2, y))
                add_edge({lx - 1, y}, {lx - 1, y + 1}, {lx - 2, y}, ToricFlip::EdgeRight, y);
        }
    }

    std::string name = "toric_" + std::to_string(lx) + "x" + std::to_string(ly);
    return assemble_pauli_model(lx, ly, 1, gens, name);
}

LatticeModel build_toric_code(int l, ToricEdges edges, const std::vector<ToricFlip>& flips) {
    return build_toric_rect(l, l, edges, flips);
}

LatticeModel k_copy(const LatticeModel& model, int k) {
    if (k < 1) throw std::domain_error("k_copy: k must be >= 1");
    if (k == 1) return model;
    if (!model.all_terms_pauli()) {
        // dense path: merge embedded copies per plaquette
        std::vector<long> dims;
        for (long d : model.site_dims()) {
            double total = std::pow(static_cast<double>(d), k);
            if (total > static_cast<double>(dense_cap()))
                throw ResourceError("k_copy: per-site dimension exceeds cap");
            dims.push_back(static_cast<long>(total + 0.5));
        }
        LatticeModel out(model.lx(), model.ly(), dims);
        out.name = model.name + "_x" + std::to_string(k);
        std::map<std::pair<int, int>, std::vector<const ModelTerm*>> by_plaq;
        for (const ModelTerm& t : model.terms())
            by_plaq[{t.plaquette[0].x, t.plaquette[0].y}].push_back(&t);
        for (auto& [key, list] : by_plaq) {
            SiteList p = sorted_sites(plaquette_sites(key.first, key.second));
            std::vector<long> pdims = out.dims_of(p);
            long tot = 1;
            for (long d : pdims) tot *= d;
            if (tot > dense_cap()) throw ResourceError("k_copy: plaquette dimension exceeds cap");
            // Copy c of a site is tensor slot c within the site (first copy most
            // significant). Build each copy's projector by index arithmetic.
            Mat proj = Mat::Identity(tot, tot);
            for (const ModelTerm* t : list) {
                const Mat& base = t->projector.matrix();
                long bd = base.rows();
                for (int c = 0; c < k; ++c) {
                    // Within site s (dim d^k, copy 0 most significant) the
                    // copy-c digit has stride d^(k-1-c).
                    std::vector<long> site_d = t->projector.site_dims();
                    SiteIndexer copy_idx(site_d);
                    std::vector<long> strides(site_d.size());
                    long stride = 1;
                    for (int s = static_cast<int>(site_d.size()) - 1; s >= 0; --s) {
                        long copy_stride = 1;
                        for (int cc = k - 1; cc > c; --cc) copy_stride *= site_d[s];
                        strides[s] = stride * copy_stride;
                        stride *= pdims[s];
                    }
                    Mat emb = Mat::Zero(tot, tot);
                    std::vector<long> copy_digit_r(site_d.size()), copy_digit_c(site_d.size());
                    for (long R = 0; R < tot; ++R) {
                        for (std::size_t s = 0; s < site_d.size(); ++s)
                            copy_digit_r[s] = (R / strides[s]) % site_d[s];
                        long br = copy_idx.encode(copy_digit_r);
                        for (long bc = 0; bc < bd; ++bc) {
                            copy_idx.decode(bc, copy_digit_c);
                            cplx val = base(br, bc);
                            if (val == 0.0) continue;
                            long C = R;
                            for (std::size_t s = 0; s < site_d.size(); ++s)
                                C += (copy_digit_c[s] - copy_digit_r[s]) * strides[s];
                            emb(R, C) = val;
                        }
                    }
                    proj = proj * emb;
                }
            }
            ModelTerm t;
            t.plaquette = p;
            t.projector = LocalOperator(p, pdims, std::move(proj));
            out.add_term(std::move(t));
        }
        return out;
    }

    // Pauli path: remap each generator's qubit slots into per-site slot blocks.
    const PauliContext& old_ctx = *model.pauli_context();
    int per = old_ctx.qubits_per_site();
    std::vector<long> dims(model.site_dims().size(), 1l << (per * k));
    LatticeModel out(model.lx(), model.ly(), dims);
    out.name = model.name + "_x" + std::to_string(k);
    PauliContext ctx(out.all_sites(), per * k);
    out.set_pauli_context(ctx);

    std::map<std::pair<int, int>, std::vector<PauliString>> by_plaq;
    std::map<std::pair<int, int>, SiteList> plaq_sites_map;
    for (const ModelTerm& t : model.terms()) {
        auto key = std::make_pair(t.plaquette[0].x, t.plaquette[0].y);
        plaq_sites_map[key] = t.plaquette;
        for (int c = 0; c < k; ++c)
            for (const PauliString& g : t.stabilizer_gens) {
                PauliString remapped;
                remapped.phase = g.phase;
                for (std::size_t si = 0; si < old_ctx.sites().size(); ++si)
                    for (int q = 0; q < per; ++q) {
                        int old_slot = static_cast<int>(si) * per + q;
                        std::uint64_t bit = 1ull << old_slot;
                        int new_slot = ctx.slot(old_ctx.sites()[si], c * per + q);
                        if (g.x & bit) remapped.x |= 1ull << new_slot;
                        if (g.z & bit) remapped.z |= 1ull << new_slot;
                    }
                by_plaq[key].push_back(remapped);
            }
    }
    for (const auto& [key, list] : by_plaq) {
        SiteList p = plaq_sites_map[key];
        std::vector<long> pdims = out.dims_of(p);
        long tot = 1;
        for (long d : pdims) tot *= d;
        if (tot > dense_cap()) throw ResourceError("k_copy: plaquette dimension exceeds cap");
        LocalOperator proj = LocalOperator::identity(p, pdims);
        for (const PauliString& g : list) {
            LocalOperator gd = ctx.to_dense(g, p);
            LocalOperator half = op_add(LocalOperator::identity(p, pdims), gd);
            half.matrix() *= 0.5;
            proj = op_multiply(proj, half);
        }
        ModelTerm t;
        t.plaquette = p;
        t.projector = proj;
        t.stabilizer_gens = list;
        out.add_term(std::move(t));
    }
    return out;
}

std::vector<PauliString> toric_cylinder_generators(const CylinderSpec& spec) {
    const int lx = spec.lx, ly = spec.ly;
    if (ly % 2 != 0) throw std::domain_error("toric cylinder: ly must be even");
    if (lx * ly > 64) throw ResourceError("toric cylinder: too many qubits");
    auto slot = [&](int x, int y) { return x * ly + ((y % ly) + ly) % ly; };

    auto flipped = [&](ToricFlip::Kind kind, int a, int b = 0) {
        for (const ToricFlip& f : spec.flips)
            if (f.kind == kind && f.a == a && (kind != ToricFlip::Plaquette || f.b == b))
                return true;
        return false;
    };

    std::vector<PauliString> gens;
    auto push = [&](const std::vector<std::pair<int, char>>& factors, bool neg) {
        PauliString p;
        for (auto [q, c] : factors) {
            std::uint64_t bit = 1ull << q;
            if (c == 'x') p.x |= bit;
            else p.z |= bit;
        }
        if (neg) p.phase = 2;
        gens.push_back(p);
    };

    for (int x = 0; x + 1 < lx; ++x)
        for (int y = 0; y < ly; ++y) {
            char letter = light_plaquette(x, y) ? 'z' : 'x';
            push({{slot(x, y), letter},
                  {slot(x + 1, y), letter},
                  {slot(x, y + 1), letter},
                  {slot(x + 1, y + 1), letter}},
                 flipped(ToricFlip::Plaquette, x, y));
        }
    if (spec.pinned) {
        for (int y = 0; y < ly; ++y) {
            if (light_plaquette(0, y))
                push({{slot(0, y), 'x'}, {slot(0, y + 1), 'x'}}, false);
            if (light_plaquette(lx - 2, y))
                push({{slot(lx - 1, y), 'x'}, {slot(lx - 1, y + 1), 'x'}}, false);
        }
    }
    if (spec.caps) {
        std::vector<std::pair<int, char>> left, right;
        for (int y = 0; y < ly; ++y) {
            left.push_back({slot(0, y), 'z'});
            right.push_back({slot(lx - 1, y), 'z'});
        }
        push(left, flipped(ToricFlip::EdgeLeft, 0));
        push(right, flipped(ToricFlip::EdgeRight, 0));
    }
    return gens;
}

LatticeModel squash_cylinder(const CylinderSpec& spec) {
    const int lx = spec.lx, ly = spec.ly;
    std::vector<PauliString> cyl = toric_cylinder_generators(spec);
    const int ply = ly / 2;

    // planar site (x, y') slot 0 = cylinder (x, y'); slot 1 = (x, ly-1-y')
    std::vector<long> dims(static_cast<std::size_t>(lx) * ply, 4);
    LatticeModel out(lx, ply, dims);
    out.name = "squashed_cylinder_" + std::to_string(lx) + "x" + std::to_string(ly);
    PauliContext ctx(out.all_sites(), 2);
    out.set_pauli_context(ctx);

    auto planar_of = [&](int q) {
        int x = q / ly, y = q % ly;
        int yp = y < ply ? y : ly - 1 - y;
        int copy = y < ply ? 0 : 1;
        return std::make_pair(Site{x, yp}, copy);
    };

    struct Mapped {
        PauliString gen;
        SiteList support;
    };
    std::vector<Mapped> mapped;
    for (const PauliString& g : cyl) {
        PauliString m;
        m.phase = g.phase;
        SiteList sup;
        for (int q = 0; q < lx * ly; ++q) {
            std::uint64_t bit = 1ull << q;
            if (!((g.x | g.z) & bit)) continue;
            auto [site, copy] = planar_of(q);
            int ns = ctx.slot(site, copy);
            if (g.x & bit) m.x |= 1ull << ns;
            if (g.z & bit) m.z |= 1ull << ns;
            sup.push_back(site);
        }
        mapped.push_back({m, sorted_sites(sup)});
    }

    // Host plaquette per generator: smallest plaquette containing the support.
    std::vector<PendingGen> pending;
    std::map<std::pair<int, int>, std::vector<PauliString>> by_plaq;
    for (const Mapped& m : mapped) {
        int x_lo = lx, x_hi = -1, y_lo = ply, y_hi = -1;
        for (const Site& s : m.support) {
            x_lo = std::min(x_lo, s.x);
            x_hi = std::max(x_hi, s.x);
            y_lo = std::min(y_lo, s.y);
            y_hi = std::max(y_hi, s.y);
        }
        if (x_hi - x_lo > 1 || y_hi - y_lo > 1)
            throw std::logic_error("squash_cylinder: generator does not fit a plaquette");
        int px = std::min(x_lo, lx - 2);
        int py = std::min(y_lo, ply - 2);
        by_plaq[{px, py}].push_back(m.gen);
    }
    for (const auto& [key, list] : by_plaq) {
        SiteList p = sorted_sites(plaquette_sites(key.first, key.second));
        std::vector<long> pdims = out.dims_of(p);
        LocalOperator proj = LocalOperator::identity(p, pdims);
        for (const PauliString& g : list) {
            LocalOperator gd = ctx.to_dense(g, p);
            LocalOperator half = op_add(LocalOperator::identity(p, pdims), gd);
            half.matrix() *= 0.5;
            proj = op_multiply(proj, half);
        }
        ModelTerm t;
        t.plaquette = p;
        t.projector = proj;
        t.stabilizer_gens = list;
        out.add_term(std::move(t));
    }
    return out;
}

LatticeModel squash_sphere(int lx, const std::vector<ToricFlip>& flips) {
    CylinderSpec spec;
    spec.lx = lx;
    spec.ly = 4;  // cap terms must fit in a planar plaquette
    spec.pinned = true;
    spec.caps = true;
    spec.flips = flips;
    LatticeModel out = squash_cylinder(spec);
    out.name = "squashed_sphere_" + std::to_string(lx);
    return out;
}

PauliString column_x_string(const LatticeModel& model, int c) {
    if (!model.pauli_context()) throw std::domain_error("column_x_string: not a qubit model");
    const PauliContext& ctx = *model.pauli_context();
    std::vector<std::pair<int, char>> factors;
    for (int y = 0; y < model.ly(); ++y)
        for (int q = 0; q < ctx.qubits_per_site(); ++q)
            factors.push_back({ctx.slot({c, y}, q), 'x'});
    return ctx.make(factors);
}

Mat dense_hamiltonian(const LatticeModel& model) {
    long total = model.total_dim();
    if (total > eigen_cap()) throw ResourceError("dense_hamiltonian: dimension exceeds cap");
    SiteList sites = model.all_sites();
    std::vector<long> dims = model.dims_of(sites);
    Mat h = Mat::Zero(total, total);
    for (const ModelTerm& t : model.terms()) {
        LocalOperator q = t.projector.embedded(sites, dims);
        h += Mat::Identity(total, total) - q.matrix();
    }
    return h;
}

EffectiveClassical effective_classical_hamiltonian(
    const LatticeModel& model, const std::vector<CentralDecomposition>& column_decomps) {
    long total = model.total_dim();
    if (total > eigen_cap())
        throw ResourceError("effective_classical_hamiltonian: dimension exceeds cap");
    SiteList sites = model.all_sites();
    std::vector<long> dims = model.dims_of(sites);
    Mat h = dense_hamiltonian(model);

    std::vector<Mat> embedded;  // per column, concatenated projector list
    std::vector<int> counts;
    for (std::size_t c = 0; c < column_decomps.size(); ++c) counts.push_back(
        static_cast<int>(column_decomps[c].size()));

    EffectiveClassical out;
    out.ground_energy = std::numeric_limits<double>::infinity();
    std::vector<int> tuple(column_decomps.size(), 0);
    while (true) {
        Mat p = Mat::Identity(total, total);
        for (std::size_t c = 0; c < tuple.size(); ++c) {
            LocalOperator e = column_decomps[c].projectors[tuple[c]].embedded(sites, dims);
            p = p * e.matrix();
        }
        double rank_est = p.trace().real();
        double energy;
        if (rank_est < 0.5) {
            energy = std::numeric_limits<double>::infinity();
        } else {
            Eigen::SelfAdjointEigenSolver<Mat> pes(p);
            long r = 0;
            for (long k = 0; k < total; ++k)
                if (pes.eigenvalues()(k) > 0.5) ++r;
            Mat v(total, r);
            long col = 0;
            for (long k = 0; k < total; ++k)
                if (pes.eigenvalues()(k) > 0.5) v.col(col++) = pes.eigenvectors().col(k);
            Mat hr = v.adjoint() * h * v;
            Eigen::SelfAdjointEigenSolver<Mat> hes(hr);
            energy = hes.eigenvalues()(0);
        }
        out.tuples.push_back(tuple);
        out.energies.push_back(energy);
        out.ground_energy = std::min(out.ground_energy, energy);

        // next tuple
        std::size_t c = 0;
        while (c < tuple.size()) {
            if (++tuple[c] < counts[c]) break;
            tuple[c] = 0;
            ++c;
        }
        if (c == tuple.size()) break;
    }
    return out;
}

}  // namespace plq
