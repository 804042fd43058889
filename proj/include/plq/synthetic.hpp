#pragma once

#include "plq/lattice_model.hpp"
#include "plq/random.hpp"

namespace plq {

/// Synthetic commuting models with a designed exterior/interior split, used
/// by the breakability and holes property campaigns.

/// "Pair" hole: a single plaquette whose sites carry two qubit slots each.
/// Slot 0 holds the hole's own stabilizers (zzzz, xxxx and optionally a
/// +-yyyy whose sign controls frustration); slot 1 is reached by exterior
/// two-site gadget pairs sigma^x sigma^x / sigma^z sigma^z to partner sites,
/// making the exterior interaction algebra on the boundary a full matrix
/// algebra (so the boundary Hilbert space factorizes).
struct PairHoleSpec {
    int x0 = 0, y0 = 0;      // lower-left corner of the hole plaquette
    bool frustrated = false; // flips the sign of the yyyy stabilizer
};
LatticeModel synth_pair_model(int lx, int ly, const std::vector<PairHoleSpec>& holes,
                              std::uint64_t seed);

/// "Cross" hole: a 3x3 block on plain qubits. Interior terms are z/x triples
/// on the center and edge midpoints (corners untouched); exterior gadget
/// pairs attach to the corners only, so the exterior algebra is full on the
/// corners and the boundary factorizes with a genuine interior site left over.
struct CrossHoleSpec {
    int x0 = 0, y0 = 0;  // lower-left corner of the 3x3 block
};
LatticeModel synth_cross_model(int lx, int ly, const std::vector<CrossHoleSpec>& holes,
                               std::uint64_t seed);

/// Site set of a hole for the holes machinery.
SiteList pair_hole_sites(const PairHoleSpec& h);
SiteList cross_hole_sites(const CrossHoleSpec& h);

/// Random operator supported on the vertical strip through a cross hole's
/// center that commutes with the whole term algebra: a seeded complex
/// combination of the commuting Pauli monomials on the strip.
/// Strip = {(xc, yc-2) .. (xc, yc+2)} for hole center (xc, yc).
LocalOperator cross_central_operator(const LatticeModel& model, const CrossHoleSpec& hole,
                                     std::uint64_t seed);

/// The region (S, B, I, A, X, Y) for break_three on a cross hole: A is the
/// 5-site strip, X its top two sites, Y its bottom two.
struct CrossBreakSetup {
    SiteList S, A, X, Y;
};
CrossBreakSetup cross_break_setup(const CrossHoleSpec& hole);

/// Random commuting plaquette models on a strip (ly = 2) built from random
/// per-column direct-sum block structures, so adjacent plaquette terms
/// commute by construction. Used for propagation/mask campaigns.
struct RandomStripOptions {
    int lx = 4;
    int ly = 2;              // fixed at 2
    long site_dim = 2;       // per site
    double kernel_fraction = 0.4;  // fraction of zero eigenvalues per term
};
LatticeModel random_commuting_strip(const RandomStripOptions& opts, std::uint64_t seed);

/// Random commuting PSD 4-site pair (Q12X, Q2X3) with the structural
/// decomposition of the two-body commuting theory: a random block structure
/// on the shared factor H_{2X}. Dimensions are (d1, d2, dX, d3).
struct RandomFourSite {
    Mat q12x;  // on H_1 (x) H_2 (x) H_X
    Mat q2x3;  // on H_2 (x) H_X (x) H_3
    std::vector<long> dims;  // d1, d2, dX, d3
};
RandomFourSite random_commuting_four_site(const std::vector<long>& dims, std::uint64_t seed);

}  // namespace plq
