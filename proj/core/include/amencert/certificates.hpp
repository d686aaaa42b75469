#pragma once

#include <optional>

#include "amencert/chain.hpp"
#include "amencert/lp.hpp"

namespace amencert {

using RChain = Chain<Rational>;
using RFunctional = DualFunctional<Rational>;

enum class PrimalVariant { Positive, SignFree };

inline const char* variant_name(PrimalVariant v) {
    return v == PrimalVariant::Positive ? "positive" : "signfree";
}

struct SolverMeta {
    NumericMode mode = NumericMode::Exact;
    PivotRule pivot_rule = PivotRule::DantzigBland;
    long iterations = 0;
    bool exact_certified = false;
    bool construction = false;  // built by explicit construction, no LP ran
};

// ---------------------------------------------------------------------------
// LP models

/// The Folner LP at truncation radius n: variables xi_{g,x} (g in B_n) and
/// majorants u_{s,h,x} (h in B_{n+1}); sigma(xi) = 1 per cell, u >= |xi - s.xi|
/// componentwise, column sums of u bounded by t; minimize t. For OnePoint
/// spaces the constraint cells refine the tail per generator where the action
/// crosses the truncation boundary. u pairs whose defining difference is
/// identically zero are omitted (value-preserving presolve).
struct FolnerModel {
    LpModel lp;
    Group group;
    CompactSpace space;
    int radius;
    PrimalVariant variant;
    std::vector<Cell> cells;  // variable cells, canonical order
    int t_var = -1;
    std::vector<std::vector<int>> xi_var;  // [ball index][cell index] -> var

    // dual-extraction bookkeeping
    std::vector<int> c1_row;  // per cell
    struct UTriple {
        std::size_t s, h;  // generator index, B_{n+1} index
        Cell rcell;        // refined constraint cell
        std::size_t vc;    // variable-cell index the refined cell reads from
        int u_var;
        int row_minus;  // u - d >= 0
        int row_plus;   // u + d >= 0
    };
    std::vector<UTriple> u_triples;
    struct C3Row {
        std::size_t s;
        std::size_t rc_index;  // position in refined cell list of s
        Cell rcell;
        int row = -1;
    };
    std::vector<C3Row> c3_rows;

    FolnerModel(Group g, CompactSpace sp) : group(std::move(g)), space(std::move(sp)), radius(0),
                                            variant(PrimalVariant::Positive) {}
};

FolnerModel build_folner_model(const Group& group, const CompactSpace& space, int n,
                               PrimalVariant variant = PrimalVariant::Positive);

/// Variable cells of the radius-n truncation (Point: one cell; Finite: the
/// points; OnePoint: the points of B_{n+1} plus the collapsed tail).
std::vector<Cell> lp_variable_cells(const Group& group, const CompactSpace& space, int n);

/// Constraint cells for generator s, refined so both x and s^{-1}x read a
/// well-defined variable cell; vc indices address lp_variable_cells.
struct LpRefinedCell {
    Cell rcell;
    std::size_t vc_direct;
    std::size_t vc_shifted;
};
std::vector<LpRefinedCell> lp_refined_cells(const Group& group, const CompactSpace& space, int n,
                                            const std::vector<Cell>& cells, const GroupElement& s);

/// The Ponzi LP at radius n (Point/Finite spaces): variables psi_s(h,x) free
/// (h in B_{n+1}) and v_{s,x} >= |psi_s(.,x)|; constraints D(g,x) = D(e,x) for
/// g in B_n and sum_x D(e,x) = 1 with D = delta* psi; minimize M = sum v.
struct PonziModel {
    LpModel lp;
    Group group;
    CompactSpace space;
    int radius;
    std::vector<Cell> cells;
    std::vector<std::vector<std::vector<int>>> psi_var;  // [s][h in B_{n+1}][cell]
    std::vector<std::vector<int>> v_var;                 // [s][cell]

    PonziModel(Group g, CompactSpace sp) : group(std::move(g)), space(std::move(sp)), radius(0) {}
};

PonziModel build_ponzi_model(const Group& group, const CompactSpace& space, int n);

// ---------------------------------------------------------------------------
// Certificates

struct FolnerCertificate {
    Group group;
    CompactSpace space;
    int radius = 0;
    PrimalVariant variant = PrimalVariant::Positive;
    RChain chain;
    Rational defect;  // the LP optimum t_n*
    SolverMeta solver;

    FolnerCertificate(const Group& g, const CompactSpace& sp)
        : group(g), space(sp), chain(g, sp) {}
};

struct PonziCertificate {
    Group group;
    CompactSpace space;
    int radius = 0;
    std::vector<RFunctional> psi;  // one per generator, S order
    Rational norm_bound;           // M = sum_s sum_x max_h |psi_s(h,x)|
    Rational lower_bound;          // D = 1/M, valid for all radii <= radius
    SolverMeta solver;

    PonziCertificate(Group g, CompactSpace sp) : group(std::move(g)), space(std::move(sp)) {}
};

struct CertOptions {
    NumericMode mode = NumericMode::Exact;
    PivotRule rule = PivotRule::DantzigBland;
    PrimalVariant variant = PrimalVariant::Positive;
};

FolnerCertificate folner_optimize(const Group& group, const CompactSpace& space, int n,
                                  const CertOptions& opts = {});

struct PonziResult {
    bool feasible = false;
    std::optional<PonziCertificate> cert;
};

/// Solves the Ponzi LP directly. Infeasibility is a result, not an error: it
/// certifies that the truncated sign-free Folner optimum is exactly zero.
PonziResult ponzi_optimize(const Group& group, const CompactSpace& space, int n,
                           const CertOptions& opts = {});

/// Builds the optimal Ponzi certificate from the dual values of the sign-free
/// Folner LP (its exact LP dual). Returns infeasible iff t^{signfree} = 0.
PonziResult ponzi_from_primal_dual(const Group& group, const CompactSpace& space, int n,
                                   const CertOptions& opts = {});

// ---------------------------------------------------------------------------
// Verification

struct FolnerVerifyReport {
    Rational worst_negativity;  // max(0, -min entry); only binding for Positive
    Rational sigma_deviation;   // max over cells |sigma - 1| (spread + offset)
    Rational defect_recomputed;
    Rational defect_stored;
    bool nonneg_checked = true;

    Rational max_violation() const {
        Rational m = nonneg_checked ? worst_negativity : Rational(0);
        if (sigma_deviation > m) m = sigma_deviation;
        Rational d = rat_abs(defect_recomputed - defect_stored);
        if (d > m) m = d;
        return m;
    }
    bool pass(const Rational& tol) const { return max_violation() <= tol; }
};

FolnerVerifyReport verify_folner(const FolnerCertificate& cert);

struct PonziVerifyReport {
    Rational constancy_violation;    // max_{g,x} |D(g,x) - D(e,x)|
    Rational normalization_delta;    // |sum_x D(e,x) - 1|
    Rational norm_recomputed;        // M from the stored psi
    Rational norm_stored;
    std::vector<std::pair<int, bool>> weak_duality;  // (radius, defect >= 1/M - tol)

    Rational max_violation() const {
        Rational m = constancy_violation;
        if (normalization_delta > m) m = normalization_delta;
        Rational d = rat_abs(norm_recomputed - norm_stored);
        if (d > m) m = d;
        return m;
    }
    bool pass(const Rational& tol) const {
        if (max_violation() > tol) return false;
        for (const auto& [r, ok] : weak_duality)
            if (!ok) return false;
        return true;
    }
};

PonziVerifyReport verify_ponzi(const PonziCertificate& cert, const Rational& tol = Rational(0),
                               const std::vector<const FolnerCertificate*>& primals = {});

// ---------------------------------------------------------------------------
// Explicit sequences

/// The tent-function chain over OnePoint(G): xi^n = sum_k phi_n(k) k.xi with
/// xi = {e -> 1_{x0}, g1 -> -1_{x0}}, x0 = e, phi_n(k) = max((n-d(e,k))/n, 0).
/// Closed-form evaluators stay exact for n far beyond what an explicit chain
/// could hold.
class TentSequence {
public:
    TentSequence(const Group& group, const GroupElement& g1);

    const Group& group() const { return group_; }
    const CompactSpace& space() const { return space_; }
    const GroupElement& g1() const { return g1_; }

    Rational norm(int n) const;          // 2 for every n >= 1
    Rational defect(int n) const;        // max_s ||xi^n - s.xi^n|| = 2/n
    Rational pair_ev(int n) const;       // ev_{e,x0}(xi^n) = 1
    RChain materialize(int n) const;     // explicit chain; ball guard applies

private:
    Group group_;
    CompactSpace space_;
    GroupElement g1_;
};

/// The prefix-averaging boundary Folner chain on the boundary of F_k:
/// xi^n_g = (1/n) 1_{Cyl(g)} for 1 <= |g| <= n.
class BoundaryFolner {
public:
    BoundaryFolner(int rank, int n);

    int rank() const { return rank_; }
    int n() const { return n_; }
    const Group& group() const { return group_; }
    const CompactSpace& space() const { return space_; }

    /// Exact values computed by prefix walks over the 2k first-letter classes
    /// (the sums are constant on each class).
    Rational sigma_value() const;  // 1
    Rational norm() const;         // 1
    Rational defect() const;       // 2/n for rank 2 (computed, not assumed)

    RChain materialize() const;  // explicit chain; size guard applies

    /// Certificate wrapper (construction + exact verification, no LP).
    static FolnerCertificate certificate(int rank, int n, bool materialize_chain);

private:
    int rank_;
    int n_;
    Group group_;
    CompactSpace space_;
};

/// Re-verification entry point for boundary certificates whose chain is
/// structural (rank/n) rather than explicit.
FolnerVerifyReport verify_boundary_folner(int rank, int n, const Rational& stored_defect);

// ---------------------------------------------------------------------------
// Functoriality

/// f^* eta = eta o f, entrywise.
RChain pullback_chain(const EquivariantMap& f, const RChain& eta);

/// Uniform fiber averaging mu: C(X) -> C(Y) for a surjective equivariant map.
struct TransferMap {
    EquivariantMap f;
    explicit TransferMap(EquivariantMap map);
};

RChain transfer_chain(const TransferMap& mu, const RChain& xi);

/// pair(phi, cert.chain); the approximate-invariance contract
/// |pair(s.phi, xi) - pair(phi, xi)| <= ||phi|| * defect is a theorem about
/// the output, checked in the test suite.
Rational approximate_mean(const FolnerCertificate& cert, const RFunctional& phi);

}  // namespace amencert
