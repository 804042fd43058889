#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plq/local_operator.hpp"
#include "plq/pauli.hpp"
#include "plq/random.hpp"

using namespace plq;

namespace {

LocalOperator two_qubit(const Mat& m) {
    return LocalOperator({{0, 0}, {0, 1}}, {2, 2}, m);
}

// Independent index-loop partial trace: sum_k <i k| O | j k>.
Mat trace_second_oracle(const Mat& o) {
    Mat r = Mat::Zero(2, 2);
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 2; ++j)
            for (long k = 0; k < 2; ++k) r(i, j) += o(i * 2 + k, j * 2 + k);
    return r;
}

}  // namespace

TEST_CASE("partial trace of identity and traceless factors") {
    LocalOperator ii = two_qubit(Mat::Identity(4, 4));
    LocalOperator t1 = partial_trace(ii, {{0, 0}});
    CHECK((t1.matrix() - 2.0 * Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));

    LocalOperator zz = two_qubit(kron(pauli_z(), pauli_z()));
    LocalOperator t2 = partial_trace(zz, {{0, 0}});
    CHECK(t2.matrix().norm() == doctest::Approx(0.0));
}

TEST_CASE("partial trace matches the index-loop oracle on random operators") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        Mat o = rng.ginibre(4, 4);
        LocalOperator op = two_qubit(o);
        LocalOperator t = partial_trace(op, {{0, 0}});
        CHECK((t.matrix() - trace_second_oracle(o)).norm() < 1e-12);
    }
}

TEST_CASE("partial trace rejects sites outside the support") {
    LocalOperator ii = two_qubit(Mat::Identity(4, 4));
    CHECK_THROWS_AS(partial_trace(ii, {{5, 5}}), std::domain_error);
}

TEST_CASE("embedding tensors identities and respects canonical order") {
    // sigma^z on site (1,0) embedded into {(0,0),(1,0)}
    LocalOperator z({{1, 0}}, {2}, pauli_z());
    LocalOperator e = z.embedded({{0, 0}, {1, 0}}, {2, 2});
    CHECK((e.matrix() - kron(Mat::Identity(2, 2), pauli_z())).norm() < 1e-14);

    // constructing with unsorted support permutes the matrix
    Mat zx = kron(pauli_z(), pauli_x());
    LocalOperator a({{0, 1}, {0, 0}}, {2, 2}, zx);  // z on (0,1), x on (0,0)
    Mat expect = kron(pauli_x(), pauli_z());
    CHECK((a.matrix() - expect).norm() < 1e-14);
}

TEST_CASE("operator product on union supports") {
    LocalOperator z({{0, 0}}, {2}, pauli_z());
    LocalOperator x({{0, 1}}, {2}, pauli_x());
    LocalOperator p = op_multiply(z, x);
    CHECK(p.support().size() == 2);
    CHECK((p.matrix() - kron(pauli_z(), pauli_x())).norm() < 1e-14);
    CHECK(commutator_norm(z, x) == doctest::Approx(0.0));
}

TEST_CASE("operator Schmidt reconstructs the input") {
    Rng rng(22);
    Mat o = rng.ginibre(8, 8);
    LocalOperator op({{0, 0}, {0, 1}, {1, 0}}, {2, 2, 2}, o);
    auto terms = operator_schmidt(op, {{0, 0}});
    Mat recon = Mat::Zero(8, 8);
    for (const auto& t : terms)
        recon += op_multiply(t.left, t.right).matrix();
    CHECK((recon - op.matrix()).norm() < 1e-10);
    // orthogonality of the families
    for (std::size_t a = 0; a < terms.size(); ++a)
        for (std::size_t b = a + 1; b < terms.size(); ++b) {
            CHECK(std::abs(hs_inner(terms[a].left, terms[b].left)) < 1e-10);
            CHECK(std::abs(hs_inner(terms[a].right, terms[b].right)) < 1e-10);
        }
}

TEST_CASE("matrix_in_site_order permutes factors") {
    Mat zx = kron(pauli_z(), pauli_x());
    LocalOperator op({{0, 0}, {0, 1}}, {2, 2}, zx);
    Mat swapped = matrix_in_site_order(op, {{0, 1}, {0, 0}});
    CHECK((swapped - kron(pauli_x(), pauli_z())).norm() < 1e-14);
}

TEST_CASE("Pauli string algebra matches dense matrices") {
    SiteList sites = {{0, 0}, {0, 1}, {1, 0}};
    PauliContext ctx(sites, 1);
    Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        PauliString a, b;
        for (int q = 0; q < 3; ++q) {
            int ca = rng.uniform_int(0, 3), cb = rng.uniform_int(0, 3);
            const char letters[] = {'i', 'x', 'y', 'z'};
            if (letters[ca] != 'i') a = a * ctx.make({{q, letters[ca]}});
            if (letters[cb] != 'i') b = b * ctx.make({{q, letters[cb]}});
        }
        Mat da = ctx.to_dense(a, sites).matrix();
        Mat db = ctx.to_dense(b, sites).matrix();
        Mat dprod = ctx.to_dense(a * b, sites).matrix();
        CHECK((da * db - dprod).norm() < 1e-12);
        bool dense_commute = (da * db - db * da).norm() < 1e-12;
        CHECK(dense_commute == a.commutes_with(b));
    }
}

TEST_CASE("hermitian monomials square to identity") {
    SiteList sites = {{0, 0}, {0, 1}};
    PauliContext ctx(sites, 1);
    PauliString y2 = ctx.make({{0, 'y'}, {1, 'y'}});
    Mat d = ctx.to_dense(y2, sites).matrix();
    CHECK((d - d.adjoint()).norm() < 1e-14);
    CHECK((d * d - Mat::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("stabilizer count: free qubits, constraints, and frustration") {
    PauliContext ctx(SiteList{{0, 0}, {0, 1}, {1, 0}, {1, 1}}, 1);
    CHECK(stabilizer_zero_count({}, 4) == 16);

    PauliString zz = ctx.make({{0, 'z'}, {1, 'z'}});
    PauliString xx = ctx.make({{0, 'x'}, {1, 'x'}});
    CHECK(stabilizer_zero_count({zz, xx}, 4) == 4);

    // zzzz * xxxx * yyyy = +1, so flipping the sign of yyyy frustrates
    PauliString z4 = ctx.make({{0, 'z'}, {1, 'z'}, {2, 'z'}, {3, 'z'}});
    PauliString x4 = ctx.make({{0, 'x'}, {1, 'x'}, {2, 'x'}, {3, 'x'}});
    PauliString y4 = ctx.make({{0, 'y'}, {1, 'y'}, {2, 'y'}, {3, 'y'}});
    CHECK(stabilizer_zero_count({z4, x4, y4}, 4) == 4);
    PauliString y4m = y4;
    y4m.phase = (y4m.phase + 2) % 4;
    CHECK(stabilizer_zero_count({z4, x4, y4m}, 4) == 0);

    // dense cross-check of the constrained count
    Mat p = Mat::Identity(16, 16);
    SiteList sites4 = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (const PauliString& g : {z4, x4, y4}) {
        Mat gd = ctx.to_dense(g, sites4).matrix();
        p = p * (Mat::Identity(16, 16) + gd) / 2.0;
    }
    CHECK(std::lround(p.trace().real()) == 4);
}
