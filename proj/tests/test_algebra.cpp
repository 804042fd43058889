#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plq/algebra.hpp"
#include "plq/lattice_model.hpp"
#include "plq/verifier.hpp"

using namespace plq;

namespace {

LocalOperator one_qubit(Site s, const Mat& m) { return LocalOperator({s}, {2}, m); }

// Independent closure-dimension oracle: iterate pairwise products and track
// the rank of the vectorized span by SVD until it stabilizes.
long closure_rank_oracle(std::vector<Mat> gens, long dim) {
    gens.push_back(Mat::Identity(dim, dim));
    std::vector<Mat> all = gens;
    long rank = 0;
    while (true) {
        Mat stacked(dim * dim, all.size());
        for (std::size_t k = 0; k < all.size(); ++k)
            stacked.col(k) = Eigen::Map<const Vec>(all[k].data(), dim * dim);
        Eigen::JacobiSVD<Mat> svd(stacked);
        long r = 0;
        for (long k = 0; k < svd.singularValues().size(); ++k)
            if (svd.singularValues()(k) > 1e-9 * svd.singularValues()(0)) ++r;
        if (r == rank) return rank;
        rank = r;
        std::vector<Mat> next = all;
        for (const Mat& a : all)
            for (const Mat& g : gens) next.push_back(a * g);
        all = std::move(next);
        if (all.size() > 4096) throw std::runtime_error("oracle blowup");
    }
}

}  // namespace

TEST_CASE("hs_orthonormalize collapses duplicates and keeps orthogonal pairs") {
    LocalOperator i1 = one_qubit({0, 0}, Mat::Identity(2, 2));
    auto basis = hs_orthonormalize({i1, i1});
    REQUIRE(basis.size() == 1);
    CHECK(std::abs(hs_inner(basis[0], basis[0]) - 1.0) < 1e-12);
    CHECK((basis[0].matrix() - Mat::Identity(2, 2) / std::sqrt(2.0)).norm() < 1e-12);

    auto two = hs_orthonormalize({one_qubit({0, 0}, pauli_x()), one_qubit({0, 0}, pauli_z())});
    REQUIRE(two.size() == 2);
    CHECK(std::abs(hs_inner(two[0], two[1])) < 1e-12);
}

TEST_CASE("hs_orthonormalize spans its input: reconstruction of 16 random ops") {
    Rng rng(5);
    std::vector<LocalOperator> ops;
    for (int k = 0; k < 16; ++k)
        ops.emplace_back(SiteList{{0, 0}, {0, 1}}, std::vector<long>{2, 2}, rng.ginibre(4, 4));
    auto basis = hs_orthonormalize(ops);
    CHECK(basis.size() == 16);
    for (const LocalOperator& op : ops) {
        Mat recon = Mat::Zero(4, 4);
        for (const LocalOperator& b : basis) recon += hs_inner(b, op) * b.matrix();
        CHECK((recon - op.matrix()).norm() < 1e-9);
    }
}

TEST_CASE("generate_algebra on single-qubit generators") {
    OperatorAlgebra dz = generate_algebra({one_qubit({0, 0}, pauli_z())}, {{0, 0}}, {2});
    CHECK(dz.dimension() == 2);
    CHECK(dz.closure_residual() < 1e-9);
    CHECK(dz.orthonormality_residual() < 1e-9);

    OperatorAlgebra full =
        generate_algebra({one_qubit({0, 0}, pauli_x()), one_qubit({0, 0}, pauli_z())}, {{0, 0}},
                         {2});
    CHECK(full.dimension() == 4);
    CHECK(full.closure_residual() < 1e-9);
}

TEST_CASE("generate_algebra matches the rank-based closure oracle on toric plaquettes") {
    // two toric plaquette projectors sharing a pair of qubits on a 3x2 fragment
    LatticeModel m = build_toric_rect(3, 2, ToricEdges::None);
    REQUIRE(m.terms().size() == 2);
    SiteList sup = m.all_sites();
    std::vector<long> dims = m.dims_of(sup);
    std::vector<LocalOperator> gens;
    std::vector<Mat> gen_mats;
    for (const ModelTerm& t : m.terms()) {
        gens.push_back(t.projector);
        gen_mats.push_back(t.projector.embedded(sup, dims).matrix());
    }
    OperatorAlgebra alg = generate_algebra(gens, sup, dims);
    long oracle = closure_rank_oracle(gen_mats, 64);
    CHECK(static_cast<long>(alg.dimension()) == oracle);
}

TEST_CASE("interaction algebra of simple couplings") {
    // sigma^z x sigma^z coupling: diagonal algebra on site 1
    LocalOperator zz({{0, 0}, {1, 0}}, {2, 2}, kron(pauli_z(), pauli_z()));
    OperatorAlgebra a = interaction_algebra({zz}, {{0, 0}}, {2});
    CHECK(a.dimension() == 2);

    // a full 2-qubit operator basis: no constraint
    Rng rng(7);
    std::vector<LocalOperator> basis;
    for (int k = 0; k < 16; ++k)
        basis.emplace_back(SiteList{{0, 0}, {1, 0}}, std::vector<long>{2, 2}, rng.ginibre(4, 4));
    OperatorAlgebra b = interaction_algebra(basis, {{0, 0}}, {2});
    CHECK(b.dimension() == 4);

    // disjoint region: trivial algebra, flagged
    OperatorAlgebra c = interaction_algebra({zz}, {{5, 5}}, {2});
    CHECK(c.dimension() == 1);
    CHECK(c.region_was_disjoint);
}

TEST_CASE("interaction algebra agrees with the exhaustive complement sweep") {
    // toric window P_{C,C+1} on a 4x2 strip, interaction algebra on column 1
    LatticeModel m = build_toric_rect(4, 2, ToricEdges::None);
    LocalOperator window = window_dense_canonical(m, 1, 2);
    SiteList region = m.column_sites(1);
    OperatorAlgebra mine = interaction_algebra({window}, region, m.dims_of(region));

    // oracle: sweep a complete operator basis of the complement (column 2)
    SiteList comp = m.column_sites(2);
    std::vector<LocalOperator> swept;
    for (long i = 0; i < 16; ++i) {
        Mat e = Mat::Zero(4, 4);
        e(i / 4, i % 4) = 1.0;
        LocalOperator q(comp, {2, 2}, kron(Mat::Identity(2, 2), Mat::Identity(2, 2)));
        q = LocalOperator(comp, {2, 2}, e);
        swept.push_back(partial_trace(op_multiply(window, q), region));
    }
    OperatorAlgebra oracle = generate_algebra(swept, region, m.dims_of(region));
    CHECK(mine.dimension() == oracle.dimension());
    for (const LocalOperator& b : oracle.basis) CHECK(mine.membership_residual(b) < 1e-8);
}

TEST_CASE("interaction algebra is monotone under enlarging the generating set") {
    Rng rng(17);
    for (int trial = 0; trial < 4; ++trial) {
        SiteList sup = {{0, 0}, {1, 0}};
        std::vector<long> dims = {2, 2};
        LocalOperator g1(sup, dims, rng.ginibre(4, 4));
        LocalOperator g2(sup, dims, rng.ginibre(4, 4));
        OperatorAlgebra small = interaction_algebra({g1}, {{0, 0}}, {2});
        OperatorAlgebra big = interaction_algebra({g1, g2}, {{0, 0}}, {2});
        CHECK(big.dimension() >= small.dimension());
    }
}

TEST_CASE("center of full and commutative algebras") {
    Rng rng(9);
    OperatorAlgebra full = generate_algebra(
        {one_qubit({0, 0}, pauli_x()), one_qubit({0, 0}, pauli_z())}, {{0, 0}}, {2});
    OperatorAlgebra zf = center(full);
    CHECK(zf.dimension() == 1);

    OperatorAlgebra diag = generate_algebra({one_qubit({0, 0}, pauli_z())}, {{0, 0}}, {2});
    OperatorAlgebra zd = center(diag);
    CHECK(zd.dimension() == 2);
}

TEST_CASE("toric strip: column interaction algebra center contains the x-string") {
    LatticeModel m = build_toric_rect(2, 4, ToricEdges::All);
    OperatorAlgebra alg = column_interaction_algebra(m, 0, 1, 1);
    OperatorAlgebra z = center(alg);
    PauliString ox = column_x_string(m, 1);
    LocalOperator ox_dense = m.pauli_context()->to_dense(ox, m.column_sites(1));
    CHECK(z.membership_residual(ox_dense) < 1e-9);
}

TEST_CASE("minimal central projectors: full, diagonal, toric strip") {
    OperatorAlgebra full = generate_algebra(
        {one_qubit({0, 0}, pauli_x()), one_qubit({0, 0}, pauli_z())}, {{0, 0}}, {2});
    CentralDecomposition cf = minimal_central_projectors(full);
    REQUIRE(cf.size() == 1);
    CHECK((cf.projectors[0].matrix() - Mat::Identity(2, 2)).norm() < 1e-9);
    CHECK(cf.block_dims[0] == 2);

    OperatorAlgebra diag = generate_algebra({one_qubit({0, 0}, pauli_z())}, {{0, 0}}, {2});
    CentralDecomposition cd = minimal_central_projectors(diag);
    REQUIRE(cd.size() == 2);
    for (const LocalOperator& p : cd.projectors) {
        CHECK((p.matrix() * p.matrix() - p.matrix()).norm() < 1e-8);
        CHECK(std::lround(p.matrix().trace().real()) == 1);
    }

    LatticeModel m = build_toric_rect(2, 4, ToricEdges::All);
    OperatorAlgebra alg = column_interaction_algebra(m, 0, 1, 1);
    CentralDecomposition ct = minimal_central_projectors(alg);
    REQUIRE(ct.size() == 2);
    LocalOperator ox = m.pauli_context()->to_dense(column_x_string(m, 1), m.column_sites(1));
    bool plus_seen = false, minus_seen = false;
    for (const LocalOperator& p : ct.projectors) {
        Mat plus = (Mat::Identity(16, 16) + ox.matrix()) / 2;
        Mat minus = (Mat::Identity(16, 16) - ox.matrix()) / 2;
        if ((p.matrix() - plus).norm() < 1e-8) plus_seen = true;
        if ((p.matrix() - minus).norm() < 1e-8) minus_seen = true;
    }
    CHECK(plus_seen);
    CHECK(minus_seen);
}

TEST_CASE("central decomposition invariants") {
    LatticeModel m = build_toric_rect(2, 4, ToricEdges::All);
    OperatorAlgebra alg = column_interaction_algebra(m, 0, 1, 1);
    CentralDecomposition cd = minimal_central_projectors(alg);
    Mat sum = Mat::Zero(16, 16);
    for (std::size_t a = 0; a < cd.size(); ++a) {
        const Mat& p = cd.projectors[a].matrix();
        CHECK((p * p - p).norm() < 1e-8);
        CHECK((p - p.adjoint()).norm() < 1e-9);
        sum += p;
        for (std::size_t b = a + 1; b < cd.size(); ++b)
            CHECK((p * cd.projectors[b].matrix()).norm() < 1e-8);
        for (const LocalOperator& bas : alg.basis)
            CHECK(commutator_norm(cd.projectors[a], bas) < 1e-8);
    }
    CHECK((sum - Mat::Identity(16, 16)).norm() < 1e-8);
}

TEST_CASE("block_factorize on a manifest tensor product") {
    SiteList sup = {{0, 0}, {0, 1}};
    std::vector<long> dims = {2, 2};
    std::vector<LocalOperator> lgen, rgen;
    lgen.emplace_back(sup, dims, kron(pauli_x(), Mat::Identity(2, 2)));
    lgen.emplace_back(sup, dims, kron(pauli_z(), Mat::Identity(2, 2)));
    rgen.emplace_back(sup, dims, kron(Mat::Identity(2, 2), pauli_x()));
    rgen.emplace_back(sup, dims, kron(Mat::Identity(2, 2), pauli_z()));
    OperatorAlgebra left = generate_algebra(lgen, sup, dims);
    OperatorAlgebra right = generate_algebra(rgen, sup, dims);
    BlockFactorization f =
        block_factorize(left, right, LocalOperator::identity(sup, dims));
    CHECK(f.dl == 2);
    CHECK(f.dr == 2);
    CHECK(f.left_residual < 1e-8);
    CHECK(f.right_residual < 1e-8);
    CHECK((f.iso.adjoint() * f.iso - Mat::Identity(4, 4)).norm() < 1e-8);
}

TEST_CASE("block_factorize rejects non-simple left algebras") {
    SiteList sup = {{0, 0}, {0, 1}};
    std::vector<long> dims = {2, 2};
    std::vector<LocalOperator> lgen;
    lgen.emplace_back(sup, dims, kron(pauli_z(), Mat::Identity(2, 2)));
    OperatorAlgebra left = generate_algebra(lgen, sup, dims);  // commutative
    OperatorAlgebra right;
    right.support = sup;
    right.dims = dims;
    right.basis = {LocalOperator::identity(sup, dims)};
    right.basis[0].matrix() /= 2.0;
    right.generators = right.basis;
    right.closed_flag = true;
    CHECK_THROWS_AS(
        block_factorize(left, right, LocalOperator::identity(sup, dims)),
        FactorizationError);
}

TEST_CASE("block_factorize of the toric column block (1 + Ox)/2") {
    // 4x4 pinned toric code, column 1; left and right window interaction
    // algebras on the column, block (1 + Ox)/2 of their joint algebra.
    LatticeModel m = build_toric_code(4, ToricEdges::All);
    OperatorAlgebra left = column_interaction_algebra(m, 0, 1, 1);
    OperatorAlgebra right = column_interaction_algebra(m, 1, 2, 1);
    LocalOperator ox = m.pauli_context()->to_dense(column_x_string(m, 1), m.column_sites(1));
    Mat block = (Mat::Identity(16, 16) + ox.matrix()) / 2;
    LocalOperator blk(m.column_sites(1), m.dims_of(m.column_sites(1)), block);
    BlockFactorization f = block_factorize(left, right, blk);
    CHECK(f.dl * f.dr == 8);  // 2^{L-1}
    CHECK(f.left_residual < 1e-7);
    CHECK(f.right_residual < 1e-7);
    // round trip: iso (M (x) I) iso^dag reproduces left elements on the block
    for (const LocalOperator& a : left.basis) {
        Mat restricted = f.subspace.adjoint() * a.matrix() * f.subspace;
        Mat rot = f.iso * restricted * f.iso.adjoint();
        Mat mpart = Mat::Zero(f.dl, f.dl);
        for (long i = 0; i < f.dl; ++i)
            for (long j = 0; j < f.dl; ++j) {
                cplx s = 0;
                for (long r = 0; r < f.dr; ++r) s += rot(i * f.dr + r, j * f.dr + r);
                mpart(i, j) = s / static_cast<double>(f.dr);
            }
        Mat model = f.iso.adjoint() * kron(mpart, Mat::Identity(f.dr, f.dr)) * f.iso;
        CHECK((model - restricted).norm() < 1e-7);
    }
}
