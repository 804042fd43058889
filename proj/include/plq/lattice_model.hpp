#pragma once

#include <map>
#include <optional>
#include <string>

#include "plq/algebra.hpp"
#include "plq/local_operator.hpp"
#include "plq/pauli.hpp"

namespace plq {

/// One Hamiltonian term: a projector P_Z on the four sites of a unit
/// plaquette. Models whose projectors are products prod_k (1 + s_k g_k)/2 of
/// commuting signed Pauli strings also record those generators, enabling the
/// exact stabilizer counting path.
struct ModelTerm {
    SiteList plaquette;  // canonical order, 4 sites
    LocalOperator projector;
    std::vector<PauliString> stabilizer_gens;  // empty when not a Pauli term
};

/// An Lx-by-Ly grid of sites carrying commuting plaquette projectors.
class LatticeModel {
  public:
    LatticeModel() = default;
    LatticeModel(int lx, int ly, std::vector<long> site_dims);

    int lx() const { return lx_; }
    int ly() const { return ly_; }
    const std::vector<long>& site_dims() const { return dims_; }
    long dim_of(Site s) const { return dims_[site_index(s)]; }
    std::size_t site_index(Site s) const;
    SiteList all_sites() const;
    SiteList column_sites(int c) const;
    SiteList column_range_sites(int c_lo, int c_hi) const;
    std::vector<long> dims_of(const SiteList& sites) const;
    long total_dim() const;

    std::vector<ModelTerm>& terms() { return terms_; }
    const std::vector<ModelTerm>& terms() const { return terms_; }
    void add_term(ModelTerm t);

    /// Terms whose plaquette lies inside the given column range [lo, hi].
    std::vector<const ModelTerm*> terms_in_columns(int lo, int hi) const;

    bool all_terms_pauli() const;
    const std::optional<PauliContext>& pauli_context() const { return pauli_ctx_; }
    void set_pauli_context(PauliContext ctx) { pauli_ctx_ = std::move(ctx); }

    std::string name;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> meta;

  private:
    int lx_ = 0, ly_ = 0;
    std::vector<long> dims_;  // canonical site order
    std::vector<ModelTerm> terms_;
    std::optional<PauliContext> pauli_ctx_;
};

struct ValidationReport {
    double max_projector_residual = 0.0;
    double max_commutator_residual = 0.0;
    bool plaquette_shape_ok = true;
    bool pass = false;
    double tol = 0.0;
};

/// Checks P^2 = P per term and [Q_Y, Q_Z] = 0 for overlapping pairs.
ValidationReport validate(const LatticeModel& model, double tol = 1e-9);

/// One input to projectorize: a Hermitian term and the eigenvalue to keep.
struct EigenvaluePick {
    LocalOperator h;
    double lambda;
};

/// Replaces commuting Hermitian terms by projectors onto the chosen
/// eigenspaces, merging all terms assigned to the same plaquette into a single
/// joint projector. Eigenvalues are clustered at 1e-8; lambda must land within
/// 1e-6 of a cluster.
LocalOperator projector_onto_eigenspace(const LocalOperator& h, double lambda,
                                        double cluster_tol = 1e-8, double match_tol = 1e-6);
LatticeModel projectorize(int lx, int ly, std::vector<long> site_dims,
                          const std::vector<std::pair<SiteList, std::vector<EigenvaluePick>>>& terms);

/// Toric-code family builders. Sites carry qubits; plaquettes are colored
/// light/dark checkerboard with light corners (requires even side lengths).
/// Edge couplings -sigma^x sigma^x are added on boundary pairs lying in light
/// plaquettes, controlled by `edges`.
enum class ToricEdges { None, TopBottom, All };

struct ToricFlip {
    enum Kind { Plaquette, EdgeTop, EdgeBottom, EdgeLeft, EdgeRight } kind;
    int a = 0;  // x for plaquette/top/bottom edge; y for left/right edge
    int b = 0;  // y for plaquette
};

LatticeModel build_toric_code(int l, ToricEdges edges, const std::vector<ToricFlip>& flips = {});
/// Rectangular variant; Ly = 2 gives the strip used throughout the tests.
LatticeModel build_toric_rect(int lx, int ly, ToricEdges edges,
                              const std::vector<ToricFlip>& flips = {});

/// k independent copies per site; projectors of copies sharing a plaquette
/// are merged into one.
LatticeModel k_copy(const LatticeModel& model, int k);

/// Abstract toric code on a cylinder (y periodic), as signed Pauli
/// generators grouped by face, for the squash builders and oracles.
struct CylinderSpec {
    int lx = 0, ly = 0;       // ly even, y periodic
    bool pinned = false;      // sigma^x sigma^x pairs on left/right columns (light faces)
    bool caps = false;        // full-column sigma^z cap terms on both open ends
    std::vector<ToricFlip> flips;  // Plaquette kind = face (x, y); EdgeLeft/Right = cap flips (a ignored)
};

/// Generators of the cylinder model in a flat qubit numbering q = x*ly + y.
std::vector<PauliString> toric_cylinder_generators(const CylinderSpec& spec);

/// Squashes the cylinder toric code flat: planar site (x, y') carries cylinder
/// sites (x, y') and (x, ly-1-y'); D per planar site is 4.
LatticeModel squash_cylinder(const CylinderSpec& spec);
/// Sphere realized as the capped pinned cylinder (ly = 4 only, so the cap
/// terms fit inside planar plaquettes).
LatticeModel squash_sphere(int lx, const std::vector<ToricFlip>& flips = {});

/// Product of sigma^x over a column of a qubit model.
PauliString column_x_string(const LatticeModel& model, int c);

/// Effective classical Hamiltonian over per-column central block choices:
/// for each joint index tuple, the minimum of <psi|H|psi> over the joint
/// range (exact diagonalization at desk scale). Empty joint ranges are +inf.
struct EffectiveClassical {
    std::vector<std::vector<int>> tuples;
    std::vector<double> energies;  // aligned with tuples; +inf for empty ranges
    double ground_energy = 0.0;
};
EffectiveClassical effective_classical_hamiltonian(const LatticeModel& model,
                                                   const std::vector<CentralDecomposition>& column_decomps);

/// Dense Hamiltonian sum_Z (1 - P_Z); guarded by eigen_cap().
Mat dense_hamiltonian(const LatticeModel& model);

}  // namespace plq
