#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plq/four_site.hpp"
#include "plq/synthetic.hpp"

using namespace plq;

namespace {

Witness toric_string_witness(const LatticeModel& m, const std::vector<int>& columns,
                             int sign = +1) {
    Witness w;
    for (int c : columns) {
        LocalOperator ox =
            m.pauli_context()->to_dense(column_x_string(m, c), m.column_sites(c));
        Mat p = (Mat::Identity(ox.dim(), ox.dim()) + static_cast<double>(sign) * ox.matrix()) / 2;
        w.entries.push_back(
            {c, mpo_from_dense(LocalOperator(m.column_sites(c), ox.site_dims(), p))});
    }
    return w;
}

}  // namespace

TEST_CASE("brute force: free qubits and the eigen-solver oracle") {
    LatticeModel empty(2, 2, {2, 2, 2, 2});
    CHECK(brute_force_zero_count(empty).count == 16);

    LatticeModel frag = build_toric_rect(3, 2, ToricEdges::None);
    ZeroCount zc = brute_force_zero_count(frag);
    // eigen-solver oracle: dimension of the zero eigenspace of H
    Mat h = dense_hamiltonian(frag);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    long zero_dim = 0;
    for (long k = 0; k < h.rows(); ++k)
        if (std::abs(es.eigenvalues()(k)) < 1e-9) ++zero_dim;
    CHECK(zc.count == zero_dim);

    // the dense trace path agrees with the stabilizer path
    LatticeModel frag_dense = frag;
    for (ModelTerm& t : frag_dense.terms()) t.stabilizer_gens.clear();
    CHECK(brute_force_zero_count(frag_dense).count == zc.count);
}

TEST_CASE("phi_reduce: single-block decomposition gives the normalized trace") {
    Rng rng(31);
    Mat o = rng.ginibre(4, 4);
    MPO rho = mpo_from_dense(o, {2, 2});
    CentralDecomposition cd;
    cd.projectors.push_back(LocalOperator::identity({{0, 0}, {0, 1}}, {2, 2}));
    cd.block_dims.push_back(4);
    cd.labels.push_back(0);
    MPO phi = phi_reduce(rho, cd);
    Mat expect = Mat::Identity(4, 4) * (o.trace() / 4.0);
    CHECK((mpo_to_dense(phi) - expect).norm() < 1e-10);
}

TEST_CASE("propagation equivalence: phi_C carries the same propagation as rho_C") {
    // toric strip and random commuting strips, every column, dense oracle
    std::vector<LatticeModel> models;
    models.push_back(build_toric_rect(4, 2, ToricEdges::All));
    for (std::uint64_t seed : {101ull, 202ull}) {
        RandomStripOptions opts;
        opts.lx = 4;
        models.push_back(random_commuting_strip(opts, seed));
    }
    for (const LatticeModel& m : models) {
        MPO rho = MPO::identity(block_rung_dims(m, {0, 0}));
        for (int c = 0; c + 1 < m.lx(); ++c) {
            ColumnWindowOperator w = adjacent_window(m, c);
            MPO direct = propagate(rho, w);
            OperatorAlgebra alg = column_interaction_algebra(m, std::max(0, c - 1), c, c);
            CentralDecomposition cd = minimal_central_projectors(alg);
            MPO phi = phi_reduce(rho, cd);
            MPO via_phi = propagate(phi, w);
            CHECK(mpo_norm(mpo_add(direct, via_phi, -1.0)) < 1e-9);
            // dense cross-check of the direct propagation
            Mat rho_d = mpo_to_dense(rho);
            Mat w_d = window_to_dense(w);
            long dl = 1, dr = 1;
            for (long d : w.left_dims) dl *= d;
            for (long d : w.right_dims) dr *= d;
            Mat prod = Mat::Zero(dl * dr, dl * dr);
            {
                Mat rho_full = Mat::Zero(dl * dr, dl * dr);
                for (long a = 0; a < dl; ++a)
                    for (long b = 0; b < dl; ++b)
                        for (long e = 0; e < dr; ++e)
                            rho_full(a * dr + e, b * dr + e) = rho_d(a, b);
                prod = rho_full * w_d;
            }
            Mat traced = Mat::Zero(dr, dr);
            for (long e = 0; e < dr; ++e)
                for (long f = 0; f < dr; ++f)
                    for (long a = 0; a < dl; ++a) traced(e, f) += prod(a * dr + e, a * dr + f);
            CHECK((mpo_to_dense(direct) - traced).norm() < 1e-9);
            rho = direct;
        }
    }
}

TEST_CASE("is_mask: central projectors are masks, generic operators are not") {
    LatticeModel m = build_toric_rect(4, 2, ToricEdges::All);
    OperatorAlgebra alg = column_interaction_algebra(m, 0, 1, 1);
    CentralDecomposition cd = minimal_central_projectors(alg);
    for (const LocalOperator& p : cd.projectors) {
        MaskReport rep = is_mask(p, m, 1, 4, 99);
        CHECK(rep.exhaustive);
        CHECK(rep.is_mask);
        CHECK(rep.max_deviation <= 1e-9);
    }

    // a generic non-central operator fails on some input
    Rng rng(77);
    LocalOperator bad(m.column_sites(1), m.dims_of(m.column_sites(1)), rng.ginibre(4, 4));
    MaskReport rep = is_mask(bad, m, 1, 4, 99);
    CHECK(!rep.is_mask);
    CHECK(rep.max_deviation > 1e-4);
}

TEST_CASE("is_mask on a fully decoupled model: every operator masks") {
    LatticeModel empty(4, 2, std::vector<long>(8, 2));
    Rng rng(88);
    LocalOperator any(empty.column_sites(1), {2, 2}, rng.ginibre(4, 4));
    MaskReport rep = is_mask(any, empty, 1, 6, 7);
    CHECK(rep.is_mask);
    CHECK(rep.max_deviation < 1e-10);
    // the first sampled x equals tr(O_left) computed from the dense formula
    Rng rng2(7);
    Mat o_left = rng2.ginibre(4, 4);
    CHECK(std::abs(rep.x_values[0] - o_left.trace()) < 1e-9);
}

TEST_CASE("verify_witness accepts the pinned toric code and rejects the flip") {
    LatticeModel m = build_toric_code(4, ToricEdges::All);
    Witness w = toric_string_witness(m, {0, 1, 2, 3});
    VerificationReport rep = verify_witness(m, w);
    CHECK(rep.verdict == Verdict::Accept);
    CHECK(rep.final_trace > 1e-10);
    for (const cplx& c : rep.constants) CHECK(c.real() > 1e-10);

    LatticeModel flipped = build_toric_code(4, ToricEdges::All, {{ToricFlip::EdgeLeft, 0, 0}});
    VerificationReport rep2 = verify_witness(flipped, w);
    CHECK(rep2.verdict == Verdict::Reject);

    // constants multiply: the chain value matches the dense evaluation
    // tr(P_0 W_01 P_1 W_12 P_2 W_23 P_3) computed by the stabilizer count
    // (witness projectors are (1+Ox)/2 and all generators commute)
    std::vector<PauliString> gens;
    for (const ModelTerm& t : m.terms())
        for (const PauliString& g : t.stabilizer_gens) gens.push_back(g);
    for (int c = 0; c < 4; ++c) gens.push_back(column_x_string(m, c));
    double expect = static_cast<double>(stabilizer_zero_count(gens, 16));
    CHECK(std::abs(rep.total_trace - expect) / expect < 1e-8);
}

TEST_CASE("verify_witness on the trivial model accepts identity witnesses") {
    LatticeModel empty(4, 2, std::vector<long>(8, 2));
    Witness w;
    for (int c = 0; c < 4; ++c) w.entries.push_back({c, MPO::identity({2, 2})});
    VerificationReport rep = verify_witness(empty, w);
    CHECK(rep.verdict == Verdict::Accept);
    for (const cplx& c : rep.constants) CHECK(c.real() > 1.0);
}

TEST_CASE("verify_witness with sparse coverage regroups the gap columns") {
    LatticeModel m = build_toric_code(4, ToricEdges::All);
    Witness w = toric_string_witness(m, {1, 3});
    VerificationReport rep = verify_witness(m, w);
    CHECK(rep.verdict == Verdict::Accept);

    LatticeModel flipped = build_toric_code(4, ToricEdges::All, {{ToricFlip::EdgeLeft, 0, 0}});
    VerificationReport rep2 = verify_witness(flipped, w);
    CHECK(rep2.verdict == Verdict::Reject);
}

TEST_CASE("verify_witness rejects non-projector and non-commuting witnesses") {
    LatticeModel m = build_toric_code(4, ToricEdges::All);
    Witness bad;
    for (int c = 0; c < 4; ++c) {
        std::vector<Mat> xs(4, pauli_x());
        bad.entries.push_back({c, MPO::product_operator(xs)});  // Ox is not a projector
    }
    VerificationReport rep = verify_witness(m, bad);
    CHECK(rep.verdict == Verdict::Reject);
    CHECK(rep.reason == "witness entry is not a projector");

    // a projector that does not commute with the window
    Witness nc = toric_string_witness(m, {0, 1, 2, 3});
    Mat pz = (Mat::Identity(2, 2) + pauli_z()) / 2;
    std::vector<Mat> factors = {pz, Mat::Identity(2, 2), Mat::Identity(2, 2),
                                Mat::Identity(2, 2)};
    nc.entries[2].op = MPO::product_operator(factors);
    VerificationReport rep2 = verify_witness(m, nc);
    CHECK(rep2.verdict == Verdict::Reject);
}

TEST_CASE("soundness: accepted witnesses imply a nonzero count across the corpus") {
    struct Case {
        LatticeModel model;
        Witness witness;
    };
    std::vector<Case> corpus;
    {
        LatticeModel m = build_toric_code(4, ToricEdges::All);
        corpus.push_back({m, toric_string_witness(m, {0, 1, 2, 3})});
        corpus.push_back({m, toric_string_witness(m, {0, 1, 2, 3}, -1)});
        LatticeModel f = build_toric_code(4, ToricEdges::All, {{ToricFlip::EdgeLeft, 0, 0}});
        corpus.push_back({f, toric_string_witness(f, {0, 1, 2, 3})});
        corpus.push_back({f, toric_string_witness(f, {1, 3})});
        LatticeModel strip = build_toric_rect(4, 2, ToricEdges::All);
        corpus.push_back({strip, toric_string_witness(strip, {0, 1, 2, 3})});
        LatticeModel empty(3, 2, std::vector<long>(6, 2));
        Witness w;
        for (int c = 0; c < 3; ++c) w.entries.push_back({c, MPO::identity({2, 2})});
        corpus.push_back({empty, w});
    }
    for (std::uint64_t seed : {11ull, 22ull, 33ull}) {
        RandomStripOptions opts;
        opts.lx = 3;
        LatticeModel m = random_commuting_strip(opts, seed);
        Witness w;
        for (int c = 0; c < 3; ++c) {
            OperatorAlgebra alg =
                column_interaction_algebra(m, std::max(0, c - 1), std::max(1, c), c);
            CentralDecomposition cd = minimal_central_projectors(alg, seed);
            w.entries.push_back({c, mpo_from_dense(cd.projectors[0])});
        }
        corpus.push_back({m, w});
    }
    for (const Case& cs : corpus) {
        VerificationReport rep = verify_witness(cs.model, cs.witness);
        if (rep.verdict == Verdict::Accept)
            CHECK(brute_force_zero_count(cs.model).count >= 1);
    }
}
