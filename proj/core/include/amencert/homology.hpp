#pragma once

#include "amencert/certificates.hpp"

namespace amencert {

// Finite-scale interrogation of the degree-zero class structure: per-radius
// Folner/Ponzi optima, trend verdicts, class residuals and class pairings.
// Verdicts are evidence at the computed scales, never proofs.

struct StatusThresholds {
    Rational eps_vanish = frac(1, 1000);
    int flat_window = 3;
    Rational flat_ratio = frac(1, 100);
};

enum class Verdict { EvidenceAmenable, EvidenceNonamenable, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::EvidenceAmenable: return "evidence-amenable";
        case Verdict::EvidenceNonamenable: return "evidence-nonamenable";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct RadiusRecord {
    int radius = 0;
    Rational t_star;
    std::optional<Rational> m_star;       // set when the Ponzi LP is feasible
    std::optional<Rational> duality_gap;  // |t* M* - 1| when m_star is set
    double seconds = 0;                   // wall clock, reporting only
};

struct ClassStatusReport {
    Group group;
    CompactSpace space;
    std::vector<RadiusRecord> records;  // radius order
    StatusThresholds thresholds;
    Verdict verdict = Verdict::Inconclusive;
    // reports are finite-scale evidence, never proofs
    static constexpr const char* kCaveat =
        "verdicts are finite-scale evidence at the computed radii, not proofs";

    ClassStatusReport(Group g, CompactSpace sp) : group(std::move(g)), space(std::move(sp)) {}
};

/// Pure verdict function of the per-radius data: evidence-amenable when the
/// last t is below eps_vanish; evidence-nonamenable when the last flat_window
/// relative decrements all fall below flat_ratio while t stays above
/// eps_vanish; inconclusive otherwise.
Verdict decide_verdict(const std::vector<RadiusRecord>& records, const StatusThresholds& th);

struct StatusOptions {
    CertOptions cert;
    StatusThresholds thresholds;
    bool with_ponzi = true;  // Point/Finite spaces only
    int jobs = 1;
};

ClassStatusReport fundamental_class_status(const Group& group, const CompactSpace& space,
                                           const std::vector<int>& radii,
                                           const StatusOptions& opts = {});

/// Finite-scale residual of the class of phi:
///   max { |pair(phi, xi)| : xi in W0, supp xi in B_n, ||xi|| <= 1,
///         ||delta xi|| <= 1/R }.
/// Non-decreasing in n, non-increasing in R; a positive value that stabilizes
/// as both grow is evidence that the class of phi is nonzero. For phi in the
/// image of delta* the value is bounded by ||psi|| / R (adjointness), so it
/// decays to zero.
Rational functional_class_residual(const RFunctional& phi, const Group& group,
                                   const CompactSpace& space, int n, int R,
                                   const CertOptions& opts = {});

struct PairingRow {
    int n = 0;
    Rational value;       // pair(phi, xi^n)
    Rational delta_norm;  // ||delta xi^n|| = max_s ||xi^n - s.xi^n||
};

/// Pairs phi against a family of chains, reporting the coboundary norms so
/// callers can confirm almost-cocycle-versus-cycle stability.
std::vector<PairingRow> class_pairing(const RFunctional& phi, const std::vector<RChain>& family);

}  // namespace amencert
