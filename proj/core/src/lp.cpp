#include "amencert/lp.hpp"

#include <sstream>

namespace amencert {

namespace {

/// Replaces finite upper bounds by explicit rows so downstream code only sees
/// lower-bounded or free variables. Appended rows follow the original ones.
LpModel augmented(const LpModel& model) {
    LpModel out = model;
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
        if (model.vars[j].ub) {
            out.add_row({{static_cast<int>(j), Rational(1)}}, Rel::Le, *model.vars[j].ub);
            out.vars[j].ub = std::nullopt;
        }
    }
    return out;
}

template <typename T>
struct Standardized {
    StandardForm<T> sf;
    struct VarMap {
        int pos = -1;    // column of the nonnegative part
        int neg = -1;    // column of the negative part (free variables)
        Rational shift;  // finite lower bound
    };
    std::vector<VarMap> vmap;
    std::vector<int> row_sign;  // +-1 applied to make rhs >= 0
    Rational obj_shift;
};

template <typename T>
Standardized<T> standardize(const LpModel& model) {
    Standardized<T> st;
    const int R = static_cast<int>(model.rows.size());
    st.sf.m = R;
    st.row_sign.assign(R, 1);
    st.vmap.resize(model.vars.size());

    int ncols = 0;
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
        if (model.vars[j].ub)
            throw SpecError("standardize expects ub-free model (augment first)");
        if (model.vars[j].lb) {
            st.vmap[j].pos = ncols++;
            st.vmap[j].shift = *model.vars[j].lb;
        } else {
            st.vmap[j].pos = ncols++;
            st.vmap[j].neg = ncols++;
        }
    }

    std::vector<Rational> cost(ncols, Rational(0));
    for (const auto& [j, cj] : model.objective) {
        cost[st.vmap[j].pos] += cj;
        if (st.vmap[j].neg >= 0) cost[st.vmap[j].neg] -= cj;
        st.obj_shift += cj * st.vmap[j].shift;
    }

    std::vector<Rational> rhs(R);
    std::vector<Rel> rel(R);
    for (int i = 0; i < R; ++i) {
        Rational b = model.rows[i].rhs;
        for (const auto& [j, a] : model.rows[i].coeffs) b -= a * st.vmap[j].shift;
        rel[i] = model.rows[i].rel;
        if (b < 0) {
            st.row_sign[i] = -1;
            b = -b;
            rel[i] = rel[i] == Rel::Le ? Rel::Ge : rel[i] == Rel::Ge ? Rel::Le : Rel::Eq;
        }
        rhs[i] = b;
    }

    int nslack = 0;
    std::vector<int> slack_col(R, -1);
    for (int i = 0; i < R; ++i)
        if (rel[i] != Rel::Eq) slack_col[i] = ncols + nslack++;

    st.sf.n = ncols + nslack;
    st.sf.cols.assign(st.sf.n, {});
    st.sf.c.assign(st.sf.n, T{});
    st.sf.b.assign(R, T{});
    st.sf.slack_dir.assign(R, 0);
    for (int i = 0; i < R; ++i)
        if (rel[i] != Rel::Eq) st.sf.slack_dir[i] = rel[i] == Rel::Le ? 1 : -1;
    for (int j = 0; j < ncols; ++j) st.sf.c[j] = ScalarTraits<T>::from_rational(cost[j]);
    for (int i = 0; i < R; ++i) st.sf.b[i] = ScalarTraits<T>::from_rational(rhs[i]);

    for (int i = 0; i < R; ++i) {
        for (const auto& [j, a] : model.rows[i].coeffs) {
            Rational v = st.row_sign[i] > 0 ? a : Rational(-a);
            if (v == 0) continue;
            T tv = ScalarTraits<T>::from_rational(v);
            st.sf.cols[st.vmap[j].pos].push_back({i, tv});
            if (st.vmap[j].neg >= 0) st.sf.cols[st.vmap[j].neg].push_back({i, T(T{} - tv)});
        }
        if (slack_col[i] >= 0) {
            T one = ScalarTraits<T>::one();
            st.sf.cols[slack_col[i]].push_back({i, rel[i] == Rel::Le ? one : T(T{} - one)});
        }
    }
    return st;
}

template <typename T>
void map_back(const LpModel& model, const Standardized<T>& st, const SimplexResult<T>& sr,
              LpSolution& sol) {
    sol.primal.assign(model.vars.size(), Rational(0));
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
        Rational v = st.vmap[j].shift;
        v += ScalarTraits<T>::to_rational(sr.x[st.vmap[j].pos]);
        if (st.vmap[j].neg >= 0) v -= ScalarTraits<T>::to_rational(sr.x[st.vmap[j].neg]);
        sol.primal[j] = v;
    }
    sol.dual.assign(model.rows.size(), Rational(0));
    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        Rational y = ScalarTraits<T>::to_rational(sr.y[i]);
        sol.dual[i] = st.row_sign[i] > 0 ? y : Rational(-y);
    }
    sol.objective = ScalarTraits<T>::to_rational(sr.objective) + st.obj_shift;
    sol.iterations = sr.iterations;
}

LpStatus map_status(SimplexStatus s) {
    switch (s) {
        case SimplexStatus::Optimal: return LpStatus::Optimal;
        case SimplexStatus::Infeasible: return LpStatus::Infeasible;
        case SimplexStatus::Unbounded: return LpStatus::Unbounded;
    }
    return LpStatus::Optimal;
}

template <typename T>
LpSolution run_simplex(const LpModel& model, const SolveOptions& opts,
                       const std::vector<int>* warm_basis, std::vector<int>* basis_out) {
    auto st = standardize<T>(model);
    RevisedSimplex<T> solver(st.sf, opts.rule);
    SimplexResult<T> sr = warm_basis ? solver.solve_from_basis(*warm_basis) : solver.solve();
    LpSolution sol;
    sol.status = map_status(sr.status);
    sol.mode = ScalarTraits<T>::mode;
    sol.pivot_rule = opts.rule;
    sol.iterations = sr.iterations;
    if (sr.status == SimplexStatus::Optimal) {
        map_back(model, st, sr, sol);
        if (basis_out) *basis_out = sr.basis;
    }
    return sol;
}

}  // namespace

ResidualReport verify_solution(const LpModel& raw, const LpSolution& sol) {
    LpModel model = augmented(raw);
    ResidualReport rep;
    if (sol.status != LpStatus::Optimal) return rep;
    const auto& x = sol.primal;
    const auto& y = sol.dual;

    std::vector<Rational> activity(model.rows.size(), Rational(0));
    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        for (const auto& [j, a] : model.rows[i].coeffs) activity[i] += a * x[j];
        Rational viol(0);
        switch (model.rows[i].rel) {
            case Rel::Le: viol = activity[i] - model.rows[i].rhs; break;
            case Rel::Ge: viol = model.rows[i].rhs - activity[i]; break;
            case Rel::Eq: viol = rat_abs(activity[i] - model.rows[i].rhs); break;
        }
        if (viol > rep.primal_infeasibility) rep.primal_infeasibility = viol;
    }
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
        if (model.vars[j].lb) {
            Rational viol = *model.vars[j].lb - x[j];
            if (viol > rep.primal_infeasibility) rep.primal_infeasibility = viol;
        }
    }

    std::vector<Rational> rc(model.vars.size(), Rational(0));
    for (const auto& [j, cj] : model.objective) rc[j] += cj;
    for (std::size_t i = 0; i < model.rows.size(); ++i)
        for (const auto& [j, a] : model.rows[i].coeffs) rc[j] -= y[i] * a;
    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        Rational viol(0);
        if (model.rows[i].rel == Rel::Ge && y[i] < 0) viol = -y[i];
        if (model.rows[i].rel == Rel::Le && y[i] > 0) viol = y[i];
        if (viol > rep.dual_infeasibility) rep.dual_infeasibility = viol;
    }
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
        Rational viol(0);
        if (model.vars[j].lb) {
            if (rc[j] < 0) viol = -rc[j];
        } else {
            viol = rat_abs(rc[j]);
        }
        if (viol > rep.dual_infeasibility) rep.dual_infeasibility = viol;
    }

    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        if (model.rows[i].rel == Rel::Eq) continue;
        Rational cs = rat_abs(y[i] * (activity[i] - model.rows[i].rhs));
        if (cs > rep.complementary_slackness) rep.complementary_slackness = cs;
    }
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
        if (!model.vars[j].lb) continue;
        Rational cs = rat_abs(rc[j] * (x[j] - *model.vars[j].lb));
        if (cs > rep.complementary_slackness) rep.complementary_slackness = cs;
    }

    Rational primal_obj(0);
    for (const auto& [j, cj] : model.objective) primal_obj += cj * x[j];
    Rational dual_obj(0);
    for (std::size_t i = 0; i < model.rows.size(); ++i) dual_obj += y[i] * model.rows[i].rhs;
    for (std::size_t j = 0; j < model.vars.size(); ++j)
        if (model.vars[j].lb) dual_obj += rc[j] * (*model.vars[j].lb);
    rep.duality_gap = rat_abs(primal_obj - dual_obj);
    return rep;
}

LpSolution solve_lp(const LpModel& raw, const SolveOptions& opts) {
    LpModel model = augmented(raw);
    check_lp_cap(model.rows.size());

    if (opts.mode == NumericMode::Float) {
        LpSolution sol = run_simplex<double>(model, opts, nullptr, nullptr);
        if (sol.status == LpStatus::Optimal) {
            sol.residuals = verify_solution(model, sol);
            if (sol.residuals.max_residual() > frac(1, 1'000'000'000))
                throw SolverError(
                    "float solve exceeded the 1e-9 residual tolerance; use exact mode");
        }
        return sol;
    }

    const int rows = static_cast<int>(model.rows.size());
    LpSolution sol;
    if (rows <= opts.exact_direct_rows) {
        sol = run_simplex<Rational>(model, opts, nullptr, nullptr);
    } else {
        std::vector<int> basis;
        LpSolution probe = run_simplex<double>(model, opts, nullptr, &basis);
        if (probe.status == LpStatus::Optimal) {
            sol = run_simplex<Rational>(model, opts, &basis, nullptr);
        } else {
            sol = run_simplex<Rational>(model, opts, nullptr, nullptr);
        }
    }
    if (sol.status == LpStatus::Optimal) {
        sol.residuals = verify_solution(model, sol);
        if (!(sol.residuals.max_residual() == 0))
            throw SolverError("exact certification failed (internal error)");
        sol.exact_certified = true;
    }
    return sol;
}

std::string dump_model(const LpModel& raw) {
    LpModel model = augmented(raw);
    std::ostringstream os;
    os << "min:";
    for (const auto& [j, c] : model.objective)
        os << " " << to_string(c) << "*" << model.vars[j].name;
    os << "\n";
    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        os << "r" << i << ":";
        for (const auto& [j, a] : model.rows[i].coeffs)
            os << " " << to_string(a) << "*" << model.vars[j].name;
        os << " " << rel_name(model.rows[i].rel) << " " << to_string(model.rows[i].rhs) << "\n";
    }
    os << "bounds:";
    for (const auto& v : model.vars) {
        os << " " << v.name;
        if (v.lb)
            os << ">=" << to_string(*v.lb);
        else
            os << " free";
        os << ";";
    }
    os << "\n";
    return os.str();
}

}  // namespace amencert
