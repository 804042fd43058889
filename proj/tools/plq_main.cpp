// Command-line front end: model building and validation, MPO utilities,
// witness verification, breakability and holes analysis, 4-site bounds,
// string-net loop operators, and randomized property campaigns.
//
// Exit codes: 0 accept/pass, 1 reject/fail, 2 usage or resource error.

#include <CLI11.hpp>
#include <iostream>

#include "plq/json_io.hpp"

namespace {

using namespace plq;

int g_exit = 0;

void emit(const Json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << std::endl;
    else
        write_json_file(out_path, j);
}

ToricEdges parse_edges(const std::string& s) {
    if (s == "none") return ToricEdges::None;
    if (s == "tb") return ToricEdges::TopBottom;
    if (s == "tblr") return ToricEdges::All;
    throw CLI::ValidationError("--edges must be none|tb|tblr");
}

std::vector<ToricFlip> parse_flips(const std::vector<std::string>& specs) {
    std::vector<ToricFlip> out;
    for (const std::string& s : specs) {
        ToricFlip f{};
        if (s.rfind("plaq:", 0) == 0) {
            f.kind = ToricFlip::Plaquette;
            std::size_t comma = s.find(',', 5);
            f.a = std::stoi(s.substr(5, comma - 5));
            f.b = std::stoi(s.substr(comma + 1));
        } else if (s.rfind("edge:", 0) == 0) {
            char side = s[5];
            f.a = std::stoi(s.substr(7));
            switch (side) {
                case 'T': f.kind = ToricFlip::EdgeTop; break;
                case 'B': f.kind = ToricFlip::EdgeBottom; break;
                case 'L': f.kind = ToricFlip::EdgeLeft; break;
                case 'R': f.kind = ToricFlip::EdgeRight; break;
                default: throw CLI::ValidationError("bad edge side in --flip");
            }
        } else {
            throw CLI::ValidationError("--flip expects plaq:x,y or edge:S:k");
        }
        out.push_back(f);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator algebras, matrix product operators, and zero-energy witnesses "
                 "for commuting-projector plaquette models"};
    app.require_subcommand(1);

    std::string out_path;
    std::uint64_t seed = 1;

    // ---- model ----
    auto* model_cmd = app.add_subcommand("model", "build, validate, and inspect lattice models");
    model_cmd->require_subcommand(1);

    auto* mb = model_cmd->add_subcommand("build", "build a model");
    std::string kind = "toric", edges = "tblr";
    int opt_l = 4, opt_lx = 0, opt_ly = 0, opt_k = 1;
    std::vector<std::string> flip_specs;
    mb->add_option("kind", kind, "toric|cylinder|sphere")->required();
    mb->add_option("--L", opt_l, "square side");
    mb->add_option("--Lx", opt_lx, "columns");
    mb->add_option("--Ly", opt_ly, "rows");
    mb->add_option("--edges", edges, "none|tb|tblr");
    mb->add_option("--flip", flip_specs, "sign flips, e.g. plaq:1,2 or edge:L:0");
    mb->add_option("--k", opt_k, "number of copies");
    mb->add_option("-o,--out", out_path, "output file");
    mb->callback([&] {
        int lx = opt_lx > 0 ? opt_lx : opt_l;
        int ly = opt_ly > 0 ? opt_ly : opt_l;
        LatticeModel m;
        if (kind == "toric") {
            m = build_toric_rect(lx, ly, parse_edges(edges), parse_flips(flip_specs));
        } else if (kind == "cylinder") {
            CylinderSpec spec;
            spec.lx = lx;
            spec.ly = ly;
            spec.pinned = edges != "none";
            spec.flips = parse_flips(flip_specs);
            m = squash_cylinder(spec);
        } else if (kind == "sphere") {
            m = squash_sphere(lx, parse_flips(flip_specs));
        } else {
            throw CLI::ValidationError("unknown model kind");
        }
        if (opt_k > 1) m = k_copy(m, opt_k);
        emit(model_to_json(m), out_path);
    });

    auto* mv = model_cmd->add_subcommand("validate", "check projectors and commutators");
    std::string model_path;
    double tol = 1e-9;
    mv->add_option("file", model_path)->required();
    mv->add_option("--tol", tol);
    mv->callback([&] {
        LatticeModel m = model_from_json(read_json_file(model_path));
        ValidationReport rep = validate(m, tol);
        Json j = validation_report_to_json(rep);
        j["seed"] = seed;
        emit(j, out_path);
        if (!rep.pass) g_exit = 1;
    });

    auto* mc = model_cmd->add_subcommand("count", "zero-energy state count");
    mc->add_option("file", model_path)->required();
    mc->callback([&] {
        LatticeModel m = model_from_json(read_json_file(model_path));
        ZeroCount zc = brute_force_zero_count(m);
        emit(Json{{"count", zc.count},
                  {"raw_trace", zc.raw_trace},
                  {"stabilizer_path", zc.used_stabilizer_path},
                  {"seed", seed}},
             out_path);
    });

    // ---- mpo ----
    auto* mpo_cmd = app.add_subcommand("mpo", "MPO utilities");
    mpo_cmd->require_subcommand(1);
    std::string mpo_a, mpo_b;
    double threshold = kMpoDefaultThreshold;

    auto* mi = mpo_cmd->add_subcommand("info", "bond and physical dimensions");
    mi->add_option("file", mpo_a)->required();
    mi->callback([&] {
        MPO m = mpo_from_json(read_json_file(mpo_a));
        emit(Json{{"length", m.length()},
                  {"phys_dims", m.phys_dims()},
                  {"bond_dims", m.bond_dims()},
                  {"norm", mpo_norm(m)},
                  {"seed", seed}},
             out_path);
    });
    auto* md = mpo_cmd->add_subcommand("dense", "densify (cap-guarded)");
    md->add_option("file", mpo_a)->required();
    md->callback([&] {
        MPO m = mpo_from_json(read_json_file(mpo_a));
        Mat d = mpo_to_dense(m);
        Json j;
        j["dim"] = d.rows();
        Json data = Json::array();
        for (long r = 0; r < d.rows(); ++r)
            for (long c = 0; c < d.cols(); ++c)
                data.push_back(Json::array({d(r, c).real(), d(r, c).imag()}));
        j["matrix"] = data;
        emit(j, out_path);
    });
    auto* mm = mpo_cmd->add_subcommand("multiply", "product of two MPOs");
    mm->add_option("a", mpo_a)->required();
    mm->add_option("b", mpo_b)->required();
    mm->add_option("-o,--out", out_path);
    mm->callback([&] {
        MPO a = mpo_from_json(read_json_file(mpo_a));
        MPO b = mpo_from_json(read_json_file(mpo_b));
        emit(mpo_to_json(mpo_multiply(a, b)), out_path);
    });
    auto* mcp = mpo_cmd->add_subcommand("compress", "exact-rank recompression");
    mcp->add_option("file", mpo_a)->required();
    mcp->add_option("--threshold", threshold);
    mcp->add_option("-o,--out", out_path);
    mcp->callback([&] {
        MPO m = mpo_from_json(read_json_file(mpo_a));
        emit(mpo_to_json(mpo_compress(m, threshold)), out_path);
    });

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "verify a zero-energy witness");
    std::string witness_path;
    long cap = 4096;
    verify_cmd->add_option("--model", model_path)->required();
    verify_cmd->add_option("--witness", witness_path)->required();
    verify_cmd->add_option("--cap", cap, "bond dimension cap");
    verify_cmd->add_option("-o,--out", out_path);
    verify_cmd->callback([&] {
        LatticeModel m = model_from_json(read_json_file(model_path));
        Witness w = witness_from_json(read_json_file(witness_path));
        VerifierOptions opts;
        opts.bond_cap = cap;
        VerificationReport rep = verify_witness(m, w, opts);
        Json j = verification_report_to_json(rep);
        j["seed"] = seed;
        emit(j, out_path);
        if (rep.verdict == Verdict::Reject) g_exit = 1;
        if (rep.verdict == Verdict::Unable) g_exit = 2;
    });

    // ---- break ----
    auto* break_cmd = app.add_subcommand("break", "operator splitting across a region");
    std::string op_path, region_path, break_mode = "three";
    break_cmd->add_option("--model", model_path)->required();
    break_cmd->add_option("--op", op_path, "operator JSON (LocalOperator)");
    break_cmd->add_option("--region", region_path)->required();
    break_cmd->add_option("--mode", break_mode, "factorize|two|three");
    break_cmd->add_option("-o,--out", out_path);
    break_cmd->callback([&] {
        LatticeModel m = model_from_json(read_json_file(model_path));
        RegionSpec region = region_from_json(m, read_json_file(region_path));
        ExtIntResult split = ext_int_factorization(m, region);
        Json j;
        j["factorized"] = split.factorized;
        j["seed"] = seed;
        if (!split.factorized) {
            j["obstructing_central_count"] = split.obstructing_central.size();
            j["interior_center_log2"] = split.interior_center_log2;
            j["exterior_center_log2"] = split.exterior_center_log2;
            emit(j, out_path);
            g_exit = 1;
            return;
        }
        j["dims"] = Json::array({split.factorization.dl, split.factorization.dr});
        if (break_mode != "factorize") {
            LocalOperator o = local_operator_from_json(read_json_file(op_path));
            BreakDecomposition d = break_mode == "two" ? break_two(o, region, m, split)
                                                       : break_three(o, region, m, split);
            j["terms"] = d.terms.size();
            j["reconstruction_residual"] = d.reconstruction_residual;
            double worst = 0.0;
            bool all_flagged = true;
            for (const BreakTerm& t : d.terms)
                for (std::size_t k = 0; k < t.factors.size(); ++k) {
                    if (break_mode == "two" && k != 0) continue;  // only ext factors asserted
                    worst = std::max(worst, t.factors[k].max_term_commutator);
                    all_flagged = all_flagged && t.factors[k].commutes_with_terms;
                }
            j["max_term_commutator"] = worst;
            j["factors_commute"] = all_flagged;
            if (d.reconstruction_residual > 1e-8 || !all_flagged) g_exit = 1;
        }
        emit(j, out_path);
    });

    // ---- holes ----
    auto* holes_cmd = app.add_subcommand("holes", "exterior/interior split across holes");
    std::string holes_path;
    holes_cmd->add_option("--model", model_path)->required();
    holes_cmd->add_option("--holes", holes_path)->required();
    holes_cmd->add_option("-o,--out", out_path);
    holes_cmd->callback([&] {
        LatticeModel m = model_from_json(read_json_file(model_path));
        Json hj = read_json_file(holes_path);
        std::vector<SiteList> holes;
        for (const auto& h : hj.at("holes")) {
            SiteList s;
            for (const auto& e : h) s.push_back({e[0].get<int>(), e[1].get<int>()});
            holes.push_back(sorted_sites(s));
        }
        HolesSplitResult res = holes_split(m, holes);
        Json j;
        j["all_factorized"] = res.all_factorized;
        Json per = Json::array();
        for (const HoleReport& h : res.holes)
            per.push_back(Json{{"boundary_size", h.region.B.size()},
                               {"interior_size", h.region.I.size()},
                               {"factorized", h.split.factorized},
                               {"zero_count", h.zero_count}});
        j["holes"] = per;
        j["exterior_zero_count"] = res.exterior_zero_count;
        j["interior_has_zero"] = res.interior_has_zero;
        j["seed"] = seed;
        emit(j, out_path);
        if (!res.all_factorized) g_exit = 1;
    });

    // ---- foursite ----
    auto* fs_cmd = app.add_subcommand("foursite", "grouped 4-site analysis");
    fs_cmd->require_subcommand(1);
    int fs_column = 1, fs_center = 1;
    std::string fs_grouping = "left_only", fs_variant = "coro";

    auto* fsa = fs_cmd->add_subcommand("analyze", "boundary algebra of a column grouping");
    fsa->add_option("--model", model_path)->required();
    fsa->add_option("--column", fs_column);
    fsa->add_option("--center", fs_center);
    fsa->add_option("--grouping", fs_grouping, "left_only|both_neighbors");
    fsa->add_option("--seed", seed);
    fsa->add_option("-o,--out", out_path);
    fsa->callback([&] {
        LatticeModel m = model_from_json(read_json_file(model_path));
        Grouping g = fs_grouping == "left_only" ? Grouping::LeftOnly : Grouping::BothNeighbors;
        FourSiteProblem p = four_site_from_column(m, fs_column, fs_center, g, seed);
        BoundaryAlgebraResult ba = boundary_algebra(p);
        IsoCheckReport iso = effective_iso_check(ba);
        Json j;
        j["dims"] = p.dims;
        j["commutator_residual"] = p.commutator_residual();
        j["d_ba"] = ba.d_ba;
        j["blocks"] = ba.blocks.size();
        j["iso_multiplicativity_residual"] = iso.max_multiplicativity_residual;
        j["seed"] = seed;
        emit(j, out_path);
    });

    auto* fsb = fs_cmd->add_subcommand("bounds", "dimension bound check");
    fsb->add_option("--model", model_path);
    fsb->add_option("--column", fs_column);
    fsb->add_option("--center", fs_center);
    fsb->add_option("--grouping", fs_grouping);
    fsb->add_option("--variant", fs_variant, "spec|proj|coro|coro2");
    fsb->add_option("--seed", seed);
    fsb->add_option("-o,--out", out_path);
    fsb->callback([&] {
        BoundVariant v = fs_variant == "spec"   ? BoundVariant::Spec
                         : fs_variant == "proj" ? BoundVariant::Proj
                         : fs_variant == "coro" ? BoundVariant::Coro
                                                : BoundVariant::Coro2;
        FourSiteProblem p;
        if (!model_path.empty()) {
            LatticeModel m = model_from_json(read_json_file(model_path));
            Grouping g = fs_grouping == "left_only" ? Grouping::LeftOnly : Grouping::BothNeighbors;
            p = four_site_from_column(m, fs_column, fs_center, g, seed);
        } else {
            p = four_site_from_pair(random_commuting_four_site({2, 2, 2, 2}, seed), seed);
        }
        BoundCheckReport rep = bound_check(p, v);
        Json j;
        j["hypotheses_hold"] = rep.hypotheses_hold;
        j["notes"] = rep.hypothesis_notes;
        j["d_ba"] = rep.d_ba;
        j["bound"] = rep.bound_value;
        j["satisfied"] = rep.satisfied;
        j["K"] = rep.k_rank;
        j["seed"] = seed;
        emit(j, out_path);
        if (rep.hypotheses_hold && !rep.satisfied) g_exit = 1;
    });

    auto* fsw = fs_cmd->add_subcommand("witness", "construct a witness end to end");
    fsw->add_option("--model", model_path)->required();
    fsw->add_option("--seed", seed);
    fsw->add_option("-o,--out", out_path);
    fsw->callback([&] {
        LatticeModel m = model_from_json(read_json_file(model_path));
        Theorem3Result res = theorem3_witness(m, seed);
        if (!res.found) {
            emit(Json{{"found", false}, {"reason", res.reason}, {"count", res.zero_count},
                      {"seed", seed}},
                 out_path);
            g_exit = 1;
            return;
        }
        Json j = witness_to_json(res.witness);
        j["found"] = true;
        j["count"] = res.zero_count;
        j["bond_dims"] = res.witness_bond_dims;
        j["seed"] = seed;
        emit(j, out_path);
    });

    // ---- lw ----
    auto* lw_cmd = app.add_subcommand("lw", "string-net loop operators");
    lw_cmd->require_subcommand(1);
    std::string ftable_spec = "z2";
    int lw_s = 1, lw_n = 4;

    auto table_of = [&](const std::string& spec) {
        if (spec == "z2") return z2_table();
        if (spec == "fib") return solve_fibonacci_table();
        return ftable_from_json(read_json_file(spec));
    };

    auto* lwp = lw_cmd->add_subcommand("pentagon", "pentagon residual of an F table");
    lwp->add_option("--ftable", ftable_spec, "z2|fib|path.json")->required();
    lwp->add_option("-o,--out", out_path);
    lwp->callback([&] {
        FSymbolTable t = table_of(ftable_spec);
        PentagonReport rep = pentagon_check(t);
        emit(Json{{"max_residual", rep.max_residual},
                  {"equations", rep.equations_checked},
                  {"seed", seed}},
             out_path);
        if (rep.max_residual > 1e-8) g_exit = 1;
    });

    auto* lwt = lw_cmd->add_subcommand("table", "emit an F table");
    lwt->add_option("--ftable", ftable_spec)->required();
    lwt->add_option("-o,--out", out_path);
    lwt->callback([&] { emit(ftable_to_json(table_of(ftable_spec)), out_path); });

    auto* lwm = lw_cmd->add_subcommand("mpo", "loop operator bond structure");
    lwm->add_option("--ftable", ftable_spec)->required();
    lwm->add_option("--s", lw_s, "particle type label");
    lwm->add_option("--n", lw_n, "loop length");
    lwm->add_option("-o,--out", out_path);
    lwm->callback([&] {
        FSymbolTable t = table_of(ftable_spec);
        LoopMpo mpo = b_loop_mpo(t, lw_s, LoopSpec{lw_n});
        Json j;
        j["n"] = lw_n;
        j["s"] = lw_s;
        j["bond"] = mpo.bond;
        if (std::pow(static_cast<double>(t.n_labels()), 2.0 * lw_n) <= 2048) {
            Mat dense = b_loop_dense(t, lw_s, LoopSpec{lw_n});
            j["dense_diff"] = loop_mpo_dense_diff(mpo, dense);
            j["compressed_bond_dims"] = loop_compressed_bond_dims(mpo);
        }
        j["seed"] = seed;
        emit(j, out_path);
    });

    // ---- campaign ----
    auto* camp_cmd = app.add_subcommand("campaign", "randomized property campaigns");
    std::string camp_path;
    camp_cmd->add_option("spec", camp_path, "campaign spec JSON")->required();
    camp_cmd->add_option("-o,--out", out_path);
    camp_cmd->callback([&] {
        Json spec = read_json_file(camp_path);
        Json results = Json::array();
        bool all_pass = true;
        for (const auto& item : spec.at("cases")) {
            std::string kind_name = item.at("kind").get<std::string>();
            std::uint64_t s0 = item.value("seed", 1);
            int count = item.value("count", 10);
            int pass = 0, skip = 0;
            Json failures = Json::array();
            for (int k = 0; k < count; ++k) {
                std::uint64_t sk = s0 + k;
                try {
                    if (kind_name == "bounds") {
                        std::string variant = item.value("variant", "proj");
                        BoundVariant v = variant == "spec"   ? BoundVariant::Spec
                                         : variant == "proj" ? BoundVariant::Proj
                                         : variant == "coro" ? BoundVariant::Coro
                                                             : BoundVariant::Coro2;
                        std::vector<long> dims =
                            item.value("dims", std::vector<long>{2, 2, 2, 2});
                        FourSiteProblem p =
                            four_site_from_pair(random_commuting_four_site(dims, sk), sk);
                        BoundCheckReport rep = bound_check(p, v);
                        if (!rep.hypotheses_hold)
                            ++skip;
                        else if (rep.satisfied)
                            ++pass;
                        else
                            failures.push_back(Json{{"seed", sk}});
                    } else if (kind_name == "propagation") {
                        RandomStripOptions ro;
                        ro.lx = item.value("lx", 4);
                        LatticeModel m = random_commuting_strip(ro, sk);
                        double worst = 0.0;
                        MPO rho = MPO::identity({2, 2});
                        for (int c = 0; c + 1 < m.lx(); ++c) {
                            ColumnWindowOperator w = adjacent_window(m, c);
                            MPO direct = propagate(rho, w);
                            OperatorAlgebra alg = column_interaction_algebra(
                                m, std::max(0, c - 1), c, c);
                            CentralDecomposition cd = minimal_central_projectors(alg, sk);
                            MPO phi = phi_reduce(rho, cd);
                            MPO via_phi = propagate(phi, w);
                            worst = std::max(worst,
                                             mpo_norm(mpo_add(direct, via_phi, -1.0)));
                            rho = direct;
                        }
                        if (worst <= 1e-9)
                            ++pass;
                        else
                            failures.push_back(Json{{"seed", sk}, {"deviation", worst}});
                    } else if (kind_name == "mask") {
                        RandomStripOptions ro;
                        ro.lx = item.value("lx", 3);
                        LatticeModel m = random_commuting_strip(ro, sk);
                        OperatorAlgebra alg = column_interaction_algebra(m, 0, 1, 1);
                        CentralDecomposition cd = minimal_central_projectors(alg, sk);
                        double worst = 0.0;
                        for (const LocalOperator& p : cd.projectors) {
                            MaskReport rep = is_mask(p, m, 1, 4, sk);
                            worst = std::max(worst, rep.max_deviation);
                        }
                        if (worst <= 1e-9)
                            ++pass;
                        else
                            failures.push_back(Json{{"seed", sk}, {"deviation", worst}});
                    } else {
                        throw std::runtime_error("unknown campaign kind: " + kind_name);
                    }
                } catch (const ResourceError& e) {
                    ++skip;
                }
            }
            bool ok = failures.empty();
            all_pass = all_pass && ok;
            results.push_back(Json{{"kind", kind_name},
                                   {"count", count},
                                   {"pass", pass},
                                   {"hypothesis_skipped", skip},
                                   {"failures", failures}});
        }
        emit(Json{{"cases", results}, {"all_pass", all_pass}}, out_path);
        if (!all_pass) g_exit = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return g_exit;
}
