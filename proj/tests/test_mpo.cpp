#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plq/column_window.hpp"
#include "plq/verifier.hpp"

using namespace plq;

namespace {

MPO x_string(int n) {
    std::vector<Mat> f(n, pauli_x());
    return MPO::product_operator(f);
}

MPO half_one_plus_x_string(int n) {
    MPO ox = x_string(n);
    return mpo_compress(mpo_add(MPO::identity(std::vector<long>(n, 2)), ox).scaled(0.5));
}

}  // namespace

TEST_CASE("from_dense bond dimensions: identity, product string, projector") {
    MPO id = mpo_from_dense(Mat::Identity(16, 16), {2, 2, 2, 2});
    CHECK(id.bond_dims() == std::vector<long>{1, 1, 1});

    Mat ox = kron(kron(pauli_x(), pauli_x()), kron(pauli_x(), pauli_x()));
    MPO oxm = mpo_from_dense(ox, {2, 2, 2, 2});
    CHECK(oxm.bond_dims() == std::vector<long>{1, 1, 1});

    Mat proj = (Mat::Identity(16, 16) + ox) / 2;
    MPO pm = mpo_from_dense(proj, {2, 2, 2, 2});
    CHECK(pm.bond_dims() == std::vector<long>{2, 2, 2});
}

TEST_CASE("from_dense / to_dense round trip") {
    Rng rng(12);
    Mat o = rng.ginibre(16, 16);
    MPO m = mpo_from_dense(o, {2, 4, 2});
    CHECK((mpo_to_dense(m) - o).norm() < 1e-10);
}

TEST_CASE("multiply against identity and the dense oracle") {
    Rng rng(13);
    Mat a = rng.ginibre(16, 16), b = rng.ginibre(16, 16);
    MPO ma = mpo_from_dense(a, {2, 2, 2, 2});
    MPO mb = mpo_from_dense(b, {2, 2, 2, 2});
    MPO mab = mpo_multiply(ma, mb);
    CHECK((mpo_to_dense(mab) - a * b).norm() < 1e-10);

    MPO id = MPO::identity({2, 2, 2, 2});
    CHECK((mpo_to_dense(mpo_multiply(ma, id)) - a).norm() < 1e-10);

    // projector idempotence returns to bond 2 after compression
    MPO p = half_one_plus_x_string(4);
    MPO p2 = mpo_compress(mpo_multiply(p, p));
    CHECK(p2.bond_dims() == std::vector<long>{2, 2, 2});
    CHECK(mpo_norm(mpo_add(p2, p, -1.0)) < 1e-10);
}

TEST_CASE("compress removes zero padding exactly") {
    Rng rng(14);
    Mat o = rng.ginibre(8, 8);
    MPO m = mpo_from_dense(o, {2, 2, 2});
    // pad bond 0 with two zero rows/cols
    std::vector<MpoTensor> padded;
    for (long i = 0; i < m.length(); ++i) {
        const MpoTensor& t = m.tensor(i);
        long l = i == 0 ? 1 : t.l + 2;
        long r = i == m.length() - 1 ? 1 : t.r + 2;
        MpoTensor n(l, r, t.p, t.q);
        for (long il = 0; il < t.l; ++il)
            for (long ir = 0; ir < t.r; ++ir)
                for (long p = 0; p < t.p; ++p)
                    for (long q = 0; q < t.q; ++q)
                        n.at(i == 0 ? 0 : il, i == m.length() - 1 ? 0 : ir, p, q) =
                            t.at(il, ir, p, q);
        padded.push_back(std::move(n));
    }
    MPO pm(std::move(padded));
    MPO c = mpo_compress(pm);
    CHECK(c.bond_dims() == m.bond_dims());
    CHECK((mpo_to_dense(c) - o).norm() < 1e-12);
}

TEST_CASE("k-copy central element has bond dimension 2^k") {
    // phi = prod_a (1 + Ox(a))/2 on 3 sites of dimension 4 (two copies)
    const int n = 3, k = 2;
    std::vector<long> dims(n, 4);
    MPO phi = MPO::identity(dims);
    for (int copy = 0; copy < k; ++copy) {
        std::vector<Mat> factors;
        for (int s = 0; s < n; ++s) {
            Mat x1 = copy == 0 ? kron(pauli_x(), Mat::Identity(2, 2))
                               : kron(Mat::Identity(2, 2), pauli_x());
            factors.push_back(x1);
        }
        MPO ox = MPO::product_operator(factors);
        MPO half = mpo_add(MPO::identity(dims), ox).scaled(0.5);
        phi = mpo_compress(mpo_multiply(phi, half));
    }
    for (long b : phi.bond_dims()) CHECK(b == 4);  // 2^k
}

TEST_CASE("norms and traces match dense values") {
    Rng rng(15);
    Mat o = rng.ginibre(16, 16);
    MPO m = mpo_from_dense(o, {2, 2, 2, 2});
    CHECK(std::abs(mpo_trace(m) - o.trace()) < 1e-10);
    CHECK(std::abs(mpo_norm(m) - o.norm()) < 1e-10);
    Mat b = rng.ginibre(16, 16);
    MPO mb = mpo_from_dense(b, {2, 2, 2, 2});
    CHECK(std::abs(mpo_trace_product(m, mb) - (o * b).trace()) < 1e-10);
    CHECK(std::abs(mpo_hs_inner(m, mb) - (o.adjoint() * b).trace()) < 1e-10);
}

TEST_CASE("proportionality: scalar multiples, orthogonal strings, degenerate") {
    MPO b = half_one_plus_x_string(3);
    MPO a = b.scaled(cplx(2, 2));
    Proportionality p = mpo_proportionality(a, b);
    CHECK(p.is_proportional);
    CHECK(std::abs(p.x - cplx(2, 2)) < 1e-10);

    std::vector<Mat> xs(3, pauli_x()), zs(3, pauli_z());
    Proportionality q =
        mpo_proportionality(MPO::product_operator(xs), MPO::product_operator(zs));
    CHECK(!q.is_proportional);
    CHECK(std::abs(q.x) < 1e-12);

    MPO zero = MPO::identity({2, 2}).scaled(0.0);
    Proportionality r = mpo_proportionality(zero, zero);
    CHECK(r.is_proportional);
    CHECK(r.degenerate);
}

TEST_CASE("window operators are projectors and match the dense product") {
    LatticeModel m = build_toric_rect(2, 3, ToricEdges::None);
    ColumnWindowOperator w = adjacent_window(m, 0);
    Mat dense = window_to_dense(w);
    CHECK((dense * dense - dense).norm() < 1e-8);

    LocalOperator oracle = window_dense_canonical(m, 0, 1);
    Mat oracle_rm = rung_major_matrix(m, oracle, 0, 1);
    CHECK((dense - oracle_rm).norm() < 1e-9);
}

TEST_CASE("propagation from the identity matches the dense contraction oracle") {
    LatticeModel m = build_toric_rect(2, 3, ToricEdges::None);
    ColumnWindowOperator w = adjacent_window(m, 0);
    MPO rho0 = MPO::identity(block_rung_dims(m, {0, 0}));
    MPO rho1 = propagate(rho0, w);

    LocalOperator window = window_dense_canonical(m, 0, 1);
    LocalOperator traced = partial_trace(window, m.column_sites(1));
    CHECK((mpo_to_dense(rho1) - traced.matrix()).norm() < 1e-10);
}

TEST_CASE("propagation through an empty window is a scaled identity") {
    LatticeModel empty(2, 2, {2, 2, 2, 2});
    ColumnWindowOperator w = adjacent_window(empty, 0);
    MPO rho0 = MPO::identity(block_rung_dims(empty, {0, 0}));
    MPO rho1 = propagate(rho0, w);
    Mat d = mpo_to_dense(rho1);
    CHECK((d - 4.0 * Mat::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("two single-column propagations equal one two-column window step") {
    LatticeModel m = build_toric_rect(3, 2, ToricEdges::None);
    // two steps: 0 -> 1 -> 2
    MPO rho0 = MPO::identity(block_rung_dims(m, {0, 0}));
    MPO rho1 = propagate(rho0, adjacent_window(m, 0));
    MPO rho2 = propagate(rho1, adjacent_window(m, 1));

    // one step: block {0,1} -> {2} with every term in columns 0..2
    std::vector<const ModelTerm*> terms = m.terms_in_columns(0, 2);
    ColumnWindowOperator big = build_window(m, {0, 1}, {2, 2}, terms);
    MPO rho0big = embed_in_block(m, {0, 1}, 0, rho0);
    MPO direct = propagate(rho0big, big);
    CHECK(mpo_norm(mpo_add(direct, rho2, -1.0)) < 1e-9);
}

TEST_CASE("mpo_tensor_identity embeds on either factor") {
    Rng rng(21);
    Mat o = rng.ginibre(4, 4);
    MPO m = mpo_from_dense(o, {2, 2});
    MPO left = mpo_tensor_identity(m, {2, 2}, true);
    MPO right = mpo_tensor_identity(m, {2, 2}, false);
    // dense comparison on the fused chain (2*2 per site)
    Mat dl = mpo_to_dense(left);
    Mat dr = mpo_to_dense(right);
    // site operators o = o1 (x) o2 in MPO cores cannot be compared directly;
    // instead check traces and norms against kron structure
    CHECK(std::abs(dl.trace() - o.trace() * 4.0) < 1e-10);
    CHECK(std::abs(dr.trace() - o.trace() * 4.0) < 1e-10);
    CHECK(std::abs(dl.norm() - o.norm() * 2.0) < 1e-10);
    CHECK(std::abs(dr.norm() - o.norm() * 2.0) < 1e-10);
}
