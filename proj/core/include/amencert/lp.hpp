#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amencert/rational.hpp"
#include "amencert/simplex.hpp"

namespace amencert {

enum class Rel { Le, Eq, Ge };

inline const char* rel_name(Rel r) { return r == Rel::Le ? "<=" : r == Rel::Eq ? "=" : ">="; }

/// Minimization model with rational data. Bounds: nullopt = unbounded on that
/// side. The float path converts on entry; the model itself stays exact.
struct LpModel {
    struct Var {
        std::string name;
        std::optional<Rational> lb;  // usually 0
        std::optional<Rational> ub;  // usually none
    };
    struct Row {
        std::vector<std::pair<int, Rational>> coeffs;
        Rel rel = Rel::Eq;
        Rational rhs;
    };

    std::vector<Var> vars;
    std::vector<Row> rows;
    std::vector<std::pair<int, Rational>> objective;  // minimize

    int add_var(std::string name, std::optional<Rational> lb = Rational(0),
                std::optional<Rational> ub = std::nullopt) {
        vars.push_back({std::move(name), std::move(lb), std::move(ub)});
        return static_cast<int>(vars.size()) - 1;
    }
    void add_row(std::vector<std::pair<int, Rational>> coeffs, Rel rel, Rational rhs) {
        rows.push_back({std::move(coeffs), rel, std::move(rhs)});
    }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& r : rows) n += r.coeffs.size();
        return n;
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* lp_status_name(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

struct ResidualReport {
    Rational primal_infeasibility;  // worst row/bound violation
    Rational dual_infeasibility;    // worst dual sign / reduced-cost violation
    Rational complementary_slackness;
    Rational duality_gap;  // |primal obj - dual obj|

    Rational max_residual() const {
        Rational m = primal_infeasibility;
        if (dual_infeasibility > m) m = dual_infeasibility;
        if (complementary_slackness > m) m = complementary_slackness;
        if (duality_gap > m) m = duality_gap;
        return m;
    }
};

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    NumericMode mode = NumericMode::Exact;
    std::vector<Rational> primal;  // per model variable
    std::vector<Rational> dual;    // per model row (>=: y >= 0, <=: y <= 0, =: free)
    Rational objective;
    ResidualReport residuals;
    PivotRule pivot_rule = PivotRule::Bland;
    long iterations = 0;
    bool exact_certified = false;
};

struct SolveOptions {
    NumericMode mode = NumericMode::Exact;
    PivotRule rule = PivotRule::DantzigBland;
    /// Models with at most this many rows run pure rational pivoting from
    /// scratch in exact mode; larger ones take the float-guided path.
    int exact_direct_rows = 600;
};

/// Deterministic solve. Exact mode returns a rational optimum whose
/// optimality has been certified in exact arithmetic; float mode guarantees
/// residuals <= 1e-9 or throws SolverError advising exact mode.
LpSolution solve_lp(const LpModel& model, const SolveOptions& opts = {});

/// Recomputes every residual of a (possibly deserialized) solution in exact
/// arithmetic against the exact model data. Never throws on violations; the
/// report carries them.
ResidualReport verify_solution(const LpModel& model, const LpSolution& sol);

/// Plain-text sparse dump (one row per line) for cross-checking externally.
std::string dump_model(const LpModel& model);

}  // namespace amencert
