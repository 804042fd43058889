#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plq/lattice_model.hpp"
#include "plq/synthetic.hpp"
#include "plq/verifier.hpp"

using namespace plq;

TEST_CASE("toric models validate exactly") {
    for (auto edges : {ToricEdges::None, ToricEdges::TopBottom, ToricEdges::All}) {
        LatticeModel m = build_toric_rect(4, 4, edges);
        ValidationReport rep = validate(m, 1e-12);
        CHECK(rep.pass);
        CHECK(rep.max_projector_residual <= 1e-12);
        CHECK(rep.max_commutator_residual <= 1e-12);
    }
    CHECK_THROWS_AS(build_toric_code(5, ToricEdges::All), std::domain_error);
}

TEST_CASE("validation reports an injected perturbation of known size") {
    LatticeModel m = build_toric_rect(4, 2, ToricEdges::TopBottom);
    Rng rng(3);
    Mat h = rng.hermitian(16);
    h *= 1e-3 / h.norm();
    m.terms()[0].projector.matrix() += h;
    m.terms()[0].stabilizer_gens.clear();
    ValidationReport rep = validate(m, 1e-9);
    CHECK(!rep.pass);
    CHECK(rep.max_projector_residual > 3e-4);
    CHECK(rep.max_projector_residual < 3e-3);

    LatticeModel empty(4, 4, std::vector<long>(16, 2));
    CHECK(validate(empty, 1e-12).pass);
}

TEST_CASE("projectorize picks eigenspaces and merges plaquette terms") {
    SiteList plaq = sorted_sites(plaquette_sites(0, 0));
    std::vector<long> dims = {2, 2, 2, 2};

    // h = -z z I I at lambda = -1: rank 8 projector
    Mat h = -kron(kron(pauli_z(), pauli_z()), Mat::Identity(4, 4));
    LocalOperator hop(plaq, dims, h);
    LocalOperator p = projector_onto_eigenspace(hop, -1.0);
    CHECK(std::lround(p.matrix().trace().real()) == 8);
    CHECK((p.matrix() * p.matrix() - p.matrix()).norm() < 1e-12);

    // toric plaquette: h = -zzzz at lambda = -1 gives (1 + zzzz)/2
    Mat z4 = kron(kron(pauli_z(), pauli_z()), kron(pauli_z(), pauli_z()));
    LocalOperator hz(plaq, dims, -z4);
    LocalOperator pz = projector_onto_eigenspace(hz, -1.0);
    CHECK((pz.matrix() - (Mat::Identity(16, 16) + z4) / 2).norm() < 1e-12);

    // random commuting diagonal term, lambda = min eigenvalue: diagonal scan oracle
    Rng rng(5);
    Eigen::VectorXd diag(16);
    for (int k = 0; k < 16; ++k) diag(k) = std::round(rng.uniform(0, 3));
    Mat hd = diag.cast<cplx>().asDiagonal();
    double lam = diag.minCoeff();
    LocalOperator hdo(plaq, dims, hd);
    LocalOperator pd = projector_onto_eigenspace(hdo, lam);
    Mat oracle = Mat::Zero(16, 16);
    for (int k = 0; k < 16; ++k)
        if (std::abs(diag(k) - lam) < 1e-9) oracle(k, k) = 1.0;
    CHECK((pd.matrix() - oracle).norm() < 1e-10);

    // projectorize builds a valid model merging terms per plaquette
    LatticeModel pm = projectorize(2, 2, {2, 2, 2, 2},
                                   {{plaq, {{hz, -1.0}, {hdo, lam}}}});
    CHECK(validate(pm, 1e-9).pass);
    CHECK(pm.terms().size() == 1);
}

TEST_CASE("pinned L=4 toric code has a unique zero state; a flip removes it") {
    LatticeModel m = build_toric_code(4, ToricEdges::All);
    ZeroCount zc = brute_force_zero_count(m);
    CHECK(zc.used_stabilizer_path);
    CHECK(zc.count == 1);

    LatticeModel flipped =
        build_toric_code(4, ToricEdges::All, {{ToricFlip::EdgeLeft, 0, 0}});
    CHECK(validate(flipped, 1e-12).pass);
    CHECK(brute_force_zero_count(flipped).count == 0);
}

TEST_CASE("unpinned toric code keeps the two-fold column degeneracy") {
    LatticeModel m = build_toric_code(4, ToricEdges::TopBottom);
    CHECK(brute_force_zero_count(m).count == 2);
}

TEST_CASE("k_copy multiplies counts and preserves validity") {
    LatticeModel strip = build_toric_rect(4, 2, ToricEdges::All);
    long base = brute_force_zero_count(strip).count;
    LatticeModel doubled = k_copy(strip, 2);
    CHECK(validate(doubled, 1e-9).pass);
    CHECK(brute_force_zero_count(doubled).count == base * base);
    CHECK(doubled.dim_of({0, 0}) == 4);

    LatticeModel same = k_copy(strip, 1);
    CHECK(same.terms().size() == strip.terms().size());
}

TEST_CASE("squashed cylinder: count 2, equal to the direct cylinder oracle") {
    CylinderSpec spec;
    spec.lx = 4;
    spec.ly = 4;
    spec.pinned = true;
    LatticeModel m = squash_cylinder(spec);
    CHECK(validate(m, 1e-12).pass);
    ZeroCount zc = brute_force_zero_count(m);
    CHECK(zc.count == 2);

    // direct (unsquashed) stabilizer-rank oracle
    std::vector<PauliString> gens = toric_cylinder_generators(spec);
    CHECK(stabilizer_zero_count(gens, 16) == 2);
}

TEST_CASE("squashed sphere: unique state; light flips toggle it in pairs") {
    LatticeModel sphere = squash_sphere(4);
    CHECK(validate(sphere, 1e-12).pass);
    CHECK(brute_force_zero_count(sphere).count == 1);

    LatticeModel one_flip = squash_sphere(4, {{ToricFlip::Plaquette, 1, 1, }});
    CHECK(brute_force_zero_count(one_flip).count == 0);

    // two flipped light faces far apart restore the count
    LatticeModel two_flips =
        squash_sphere(4, {{ToricFlip::Plaquette, 0, 0}, {ToricFlip::Plaquette, 2, 2}});
    CHECK(brute_force_zero_count(two_flips).count == 1);
}

TEST_CASE("effective classical Hamiltonian: diagonal model reproduced exactly") {
    // a 2x2 model with one diagonal plaquette term
    SiteList plaq = sorted_sites(plaquette_sites(0, 0));
    std::vector<long> dims = {2, 2, 2, 2};
    Mat z1 = kron(pauli_z(), Mat::Identity(8, 8));
    LocalOperator h(plaq, dims, -z1);
    LatticeModel m = projectorize(2, 2, dims, {{plaq, {{h, -1.0}}}});

    // per-column central decompositions from the column interaction algebras
    std::vector<CentralDecomposition> decomps;
    for (int c = 0; c < 2; ++c)
        decomps.push_back(
            minimal_central_projectors(column_interaction_algebra(m, 0, 1, c)));
    EffectiveClassical eff = effective_classical_hamiltonian(m, decomps);
    CHECK(eff.ground_energy == doctest::Approx(0.0).epsilon(1e-9));
    // every entry is 0 or 1 (one projector term)
    for (double e : eff.energies) {
        if (std::isinf(e)) continue;
        CHECK((std::abs(e) < 1e-9 || std::abs(e - 1.0) < 1e-9));
    }
}

TEST_CASE("effective classical Hamiltonian of the pinned toric strip is the Ising table") {
    LatticeModel m = build_toric_rect(4, 2, ToricEdges::All);
    std::vector<CentralDecomposition> decomps;
    std::vector<LocalOperator> ox;
    for (int c = 0; c < 4; ++c) {
        int lo = c == 0 ? 0 : c - 1;
        int hi = c == 0 ? 1 : c;
        decomps.push_back(
            minimal_central_projectors(column_interaction_algebra(m, lo, hi, c)));
        ox.push_back(m.pauli_context()->to_dense(column_x_string(m, c), m.column_sites(c)));
    }
    EffectiveClassical eff = effective_classical_hamiltonian(m, decomps);
    CHECK(eff.ground_energy == doctest::Approx(0.0).epsilon(1e-9));

    // derive the sign s_C of each block from tr(P Ox)
    auto sign_of = [&](int c, int a) {
        cplx t = (decomps[c].projectors[a].matrix() * ox[c].matrix()).trace();
        return t.real() > 0 ? 1.0 : -1.0;
    };
    // independent oracle for the minimum: exact diagonalization ground energy
    Mat hdense = dense_hamiltonian(m);
    Eigen::SelfAdjointEigenSolver<Mat> es(hdense);
    CHECK(std::abs(eff.ground_energy - es.eigenvalues()(0)) < 1e-9);

    // The table must be an Ising chain in the signs: pinned couplings on the
    // two boundary columns plus nearest-neighbor bonds, all with positive
    // weights. Fit the five weights by least squares and demand an exact fit.
    const std::size_t rows = eff.tuples.size();
    Eigen::MatrixXd a(rows, 5);
    Eigen::VectorXd rhs(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        std::vector<double> s;
        for (int c = 0; c < 4; ++c) s.push_back(sign_of(c, eff.tuples[k][c]));
        for (int c = 0; c < 3; ++c) a(k, c) = (1 - s[c] * s[c + 1]) / 2;
        a(k, 3) = (1 - s[0]) / 2;
        a(k, 4) = (1 - s[3]) / 2;
        rhs(k) = eff.energies[k];
    }
    Eigen::VectorXd w = a.colPivHouseholderQr().solve(rhs);
    CHECK((a * w - rhs).norm() < 1e-8);
    for (int c = 0; c < 5; ++c) CHECK(w(c) > 0.5);
}

TEST_CASE("random commuting strips validate and have commuting projector terms") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        RandomStripOptions opts;
        opts.lx = 4;
        LatticeModel m = random_commuting_strip(opts, seed);
        ValidationReport rep = validate(m, 1e-8);
        CHECK(rep.pass);
    }
}

TEST_CASE("random 2x3 strip: effective classical minimum equals brute ground energy") {
    RandomStripOptions opts;
    opts.lx = 3;
    LatticeModel m = random_commuting_strip(opts, 42);
    std::vector<CentralDecomposition> decomps;
    for (int c = 0; c < 3; ++c) {
        int lo = std::max(0, c - 1);
        decomps.push_back(
            minimal_central_projectors(column_interaction_algebra(m, lo, std::min(2, c + 1), c)));
    }
    EffectiveClassical eff = effective_classical_hamiltonian(m, decomps);
    Mat h = dense_hamiltonian(m);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    CHECK(std::abs(eff.ground_energy - es.eigenvalues()(0)) < 1e-8);
}
