#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "amencert/sparse_lu.hpp"

namespace amencert {

enum class PivotRule { Bland, DantzigBland };

inline const char* pivot_rule_name(PivotRule r) {
    return r == PivotRule::Bland ? "bland" : "dantzig+bland";
}

enum class SimplexStatus { Optimal, Infeasible, Unbounded };

/// Standard-form problem: min c^T x, A x = b, x >= 0, with columns tagged so
/// phase transitions and warm starts know which are artificial.
template <typename T>
struct StandardForm {
    int m = 0;  // rows
    int n = 0;  // columns (structural + slack; artificials appended by solver)
    std::vector<std::vector<typename SparseLU<T>::Triplet>> cols;
    std::vector<T> b;  // >= 0 after row normalization
    std::vector<T> c;
    std::vector<int> slack_dir;  // per row: +1 slack, -1 surplus, 0 equality
};

template <typename T>
struct SimplexResult {
    SimplexStatus status = SimplexStatus::Optimal;
    std::vector<T> x;        // length n (structural+slack), zero-filled
    std::vector<T> y;        // row duals, length m
    T objective{};
    long iterations = 0;
    long degenerate_pivots = 0;
    std::vector<int> basis;  // basic column per row (may include artificials)
};

/// Revised simplex with sparse LU + product-form updates. Bland's rule is the
/// deterministic default; DantzigBland prices by most-negative reduced cost
/// and falls back to Bland permanently after a degenerate stall. Exact when
/// T is Rational (all tolerances zero).
template <typename T>
class RevisedSimplex {
public:
    explicit RevisedSimplex(const StandardForm<T>& sf, PivotRule rule)
        : sf_(sf), rule_(rule) {
        feas_tol_ = ScalarTraits<T>::exact ? T{} : T(1e-9);
        pivot_tol_ = ScalarTraits<T>::exact ? T{} : T(1e-10);
        rc_tol_ = ScalarTraits<T>::exact ? T{} : T(1e-9);
    }

    /// Two-phase solve from scratch. The float path first solves with a
    /// deterministic tiny RHS perturbation (the Folner-style models are
    /// heavily degenerate and stall plain pricing), then restores the true
    /// RHS and cleans up from the perturbed-optimal basis.
    SimplexResult<T> solve() {
        if (!ScalarTraits<T>::exact && sf_.m > 40) {
            perturb_b();
            build_artificial_basis();
            SimplexResult<T> r;
            if (!phase1(r)) {
                restore_b();
                return r;
            }
            costs_.assign(cols_.size(), T{});
            for (int j = 0; j < sf_.n; ++j) costs_[j] = sf_.c[j];
            bland_now_ = rule_ == PivotRule::Bland;
            degenerate_run_ = 0;
            if (!run_iterations(false)) {
                restore_b();
                SimplexResult<T> r2;
                r2.status = SimplexStatus::Unbounded;
                r2.iterations = total_iters_;
                finalize_duals(r2);
                return r2;
            }
            restore_b();
            refactor();
            SimplexResult<T> r3;
            if (dual_cleanup(r3)) {
                phase2(r3);
                return r3;
            }
            // fall through to a plain solve if cleanup failed
            b_override_.reset();
            etas_.clear();
        }
        build_artificial_basis();
        SimplexResult<T> r;
        if (!phase1(r)) return r;
        phase2(r);
        return r;
    }

    /// Warm start from a basis over real (non-artificial) columns. Restores
    /// primal feasibility with dual pivots if needed, then optimizes.
    SimplexResult<T> solve_from_basis(const std::vector<int>& basis) {
        basis_ = basis;
        // keep the artificial column layout of the donor solve: a basis from
        // a model with redundant rows may legitimately contain artificials
        cols_ = sf_.cols;
        nart_ = 0;
        for (int i = 0; i < sf_.m; ++i) {
            cols_.push_back({{i, ScalarTraits<T>::one()}});
            ++nart_;
        }
        costs_ = sf_.c;
        costs_.resize(cols_.size(), T{});
        bool warm_ok = true;
        try {
            refactor();
        } catch (const SolverError&) {
            warm_ok = false;  // basis singular in this arithmetic
        }
        SimplexResult<T> r;
        bool clean = warm_ok && dual_cleanup(r);
        if (clean) {
            // a basic artificial carrying mass would mask a violated row
            for (int i = 0; i < sf_.m; ++i)
                if (basis_[i] >= sf_.n && xb_[i] > feas_tol_) clean = false;
        }
        if (!clean) {
            // warm start unusable; solve from scratch instead
            basis_.clear();
            etas_.clear();
            build_artificial_basis();
            SimplexResult<T> r2;
            if (!phase1(r2)) return r2;
            phase2(r2);
            return r2;
        }
        phase2(r);
        return r;
    }

    long iterations() const { return total_iters_; }

private:
    const StandardForm<T>& sf_;
    PivotRule rule_;
    T feas_tol_, pivot_tol_, rc_tol_;

    std::vector<std::vector<typename SparseLU<T>::Triplet>> cols_;  // incl. artificials
    std::vector<T> costs_;    // current phase costs
    std::vector<int> basis_;  // basic column per row
    std::vector<char> is_basic_;
    std::vector<T> xb_;       // basic values per row
    int nart_ = 0;            // artificial columns appended after sf_.n
    long total_iters_ = 0;
    long degenerate_run_ = 0;
    long degenerate_total_ = 0;
    bool bland_now_ = false;

    struct Eta {
        int r;
        std::vector<typename SparseLU<T>::Triplet> d;  // position-space column
        T dr;
    };
    SparseLU<T> lu_;
    std::vector<Eta> etas_;
    std::optional<std::vector<T>> b_override_;

    const std::vector<T>& rhs() const { return b_override_ ? *b_override_ : sf_.b; }

    // Relaxes each inequality row by a deterministic tiny amount; feasible
    // points stay feasible and (near-)degenerate bases become unique.
    void perturb_b() {
        std::vector<T> b = sf_.b;
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (int i = 0; i < sf_.m; ++i) {
            if (sf_.slack_dir.empty() || sf_.slack_dir[i] == 0) continue;
            h ^= (h << 13), h ^= (h >> 7), h ^= (h << 17);
            h += 0x2545f4914f6cdd1dull + static_cast<std::uint64_t>(i);
            double u = 0.5 + 0.5 * double(h >> 11) / 9007199254740992.0;  // [0.5, 1)
            T delta = T(1e-7 * u);
            b[i] = sf_.slack_dir[i] > 0 ? T(b[i] + delta) : T(b[i] - delta);
        }
        b_override_ = std::move(b);
    }

    void restore_b() { b_override_.reset(); }

    static constexpr int kRefactorEvery = 96;
    static constexpr long kStallLimit = 150;

    void build_artificial_basis() {
        cols_ = sf_.cols;
        basis_.assign(sf_.m, -1);
        nart_ = 0;
        // crash: a slack column whose basic value is feasible serves directly;
        // only the remaining rows get a basic artificial
        std::vector<int> slack_of(sf_.m, -1);
        for (int j = 0; j < sf_.n; ++j) {
            if (sf_.cols[j].size() != 1) continue;
            // a pure +-1 singleton column is this row's slack/surplus
            const auto& t = sf_.cols[j][0];
            bool is_slack = !sf_.slack_dir.empty() && sf_.slack_dir[t.row] != 0 &&
                            (t.val == ScalarTraits<T>::one() ||
                             t.val == T(T{} - ScalarTraits<T>::one()));
            if (is_slack && slack_of[t.row] < 0) slack_of[t.row] = j;
        }
        for (int i = 0; i < sf_.m; ++i) {
            int col = sf_.n + nart_;
            cols_.push_back({{i, ScalarTraits<T>::one()}});  // artificial i
            ++nart_;
            if (slack_of[i] >= 0) {
                const T& coef = sf_.cols[slack_of[i]][0].val;
                // basic value = rhs / coef must be nonnegative
                T val = T(rhs()[i] / coef);
                if (!(val < T{})) {
                    basis_[i] = slack_of[i];
                    continue;
                }
            }
            basis_[i] = col;
        }
        refactor();
    }

    void refactor() {
        std::vector<typename SparseLU<T>::Column> bcols(sf_.m);
        for (int i = 0; i < sf_.m; ++i) bcols[i] = cols_[basis_[i]];
        lu_.factor(bcols);
        etas_.clear();
        xb_ = lu_.solve(rhs());
        is_basic_.assign(cols_.size(), 0);
        for (int i = 0; i < sf_.m; ++i) is_basic_[basis_[i]] = 1;
    }

    std::vector<T> ftran(std::vector<T> v) const {
        auto z = lu_.solve(std::move(v));
        for (const auto& e : etas_) {
            T zr = T(z[e.r] / e.dr);
            z[e.r] = zr;
            if (!(zr == T{}))
                for (const auto& t : e.d)
                    if (t.row != e.r) z[t.row] = z[t.row] - t.val * zr;
        }
        return z;
    }

    std::vector<T> btran(std::vector<T> c) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            T acc = c[it->r];
            for (const auto& t : it->d)
                if (t.row != it->r) acc = acc - t.val * c[t.row];
            c[it->r] = T(acc / it->dr);
        }
        return lu_.solve_transpose(std::move(c));
    }

    std::vector<T> column_dense(int j) const {
        std::vector<T> v(sf_.m, T{});
        for (const auto& t : cols_[j]) v[t.row] = v[t.row] + t.val;
        return v;
    }

    // reduced costs of all nonbasic allowed columns; returns entering column
    int price(const std::vector<T>& y, bool allow_artificial) const {
        int n_all = static_cast<int>(cols_.size());
        int best = -1;
        T best_rc{};
        for (int j = 0; j < n_all; ++j) {
            if (is_basic_[j]) continue;
            if (!allow_artificial && j >= sf_.n) continue;
            T rc = costs_[j];
            for (const auto& t : cols_[j]) rc = rc - y[t.row] * t.val;
            T neg_thresh = T{} - rc_tol_;
            if (rc < neg_thresh) {
                if (bland_now_ || rule_ == PivotRule::Bland) return j;  // lowest index
                if (best < 0 || rc < best_rc) {
                    best = j;
                    best_rc = rc;
                }
            }
        }
        return best;
    }

    // ratio test: returns pivot row, or -1 for unbounded
    int ratio_test(const std::vector<T>& d) const {
        int leave = -1;
        T best_theta{};
        for (int i = 0; i < sf_.m; ++i) {
            if (d[i] > pivot_tol_) {
                T theta = T(xb_[i] / d[i]);
                if (leave < 0 || theta < best_theta ||
                    (theta == best_theta && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_theta = theta;
                }
            }
        }
        return leave;
    }

    void pivot(int enter, int leave, const std::vector<T>& d) {
        T theta = T(xb_[leave] / d[leave]);
        if (theta == T{})
            ++degenerate_run_, ++degenerate_total_;
        else
            degenerate_run_ = 0;
        if (rule_ == PivotRule::DantzigBland && degenerate_run_ >= kStallLimit) bland_now_ = true;
        for (int i = 0; i < sf_.m; ++i) {
            if (i == leave) continue;
            if (!(d[i] == T{})) xb_[i] = xb_[i] - theta * d[i];
        }
        is_basic_[basis_[leave]] = 0;
        is_basic_[enter] = 1;
        basis_[leave] = enter;
        xb_[leave] = theta;

        Eta e;
        e.r = leave;
        e.dr = d[leave];
        for (int i = 0; i < sf_.m; ++i)
            if (!(d[i] == T{})) e.d.push_back({i, d[i]});
        etas_.push_back(std::move(e));
        ++total_iters_;
        if (static_cast<int>(etas_.size()) >= kRefactorEvery) refactor();
    }

    // returns false and fills r on infeasibility
    bool phase1(SimplexResult<T>& r) {
        costs_.assign(cols_.size(), T{});
        for (int j = sf_.n; j < static_cast<int>(cols_.size()); ++j)
            costs_[j] = ScalarTraits<T>::one();
        bland_now_ = rule_ == PivotRule::Bland;
        run_iterations(true);
        T obj{};
        for (int i = 0; i < sf_.m; ++i)
            if (basis_[i] >= sf_.n) obj = obj + xb_[i];
        if (obj > feas_tol_) {
            r.status = SimplexStatus::Infeasible;
            r.iterations = total_iters_;
            r.objective = obj;
            finalize_duals(r);
            return false;
        }
        drive_out_artificials();
        return true;
    }

    void phase2(SimplexResult<T>& r) {
        costs_.assign(cols_.size(), T{});
        for (int j = 0; j < sf_.n; ++j) costs_[j] = sf_.c[j];
        bland_now_ = rule_ == PivotRule::Bland;
        degenerate_run_ = 0;
        bool bounded = run_iterations(false);
        r.status = bounded ? SimplexStatus::Optimal : SimplexStatus::Unbounded;
        r.iterations = total_iters_;
        r.degenerate_pivots = degenerate_total_;
        r.basis = basis_;
        r.x.assign(sf_.n, T{});
        for (int i = 0; i < sf_.m; ++i)
            if (basis_[i] < sf_.n) r.x[basis_[i]] = xb_[i];
        r.objective = T{};
        for (int j = 0; j < sf_.n; ++j)
            if (!(r.x[j] == T{})) r.objective = r.objective + sf_.c[j] * r.x[j];
        finalize_duals(r);
    }

    // returns false if unbounded
    bool run_iterations(bool allow_artificial) {
        const long hard_cap = 2'000'000;
        while (true) {
            if (total_iters_ > hard_cap) throw SolverError("simplex iteration cap exceeded");
            std::vector<T> cb(sf_.m);
            for (int i = 0; i < sf_.m; ++i) cb[i] = costs_[basis_[i]];
            auto y = btran(std::move(cb));
            int enter = price(y, allow_artificial);
            if (enter < 0) return true;  // optimal for this phase
            auto d = ftran(column_dense(enter));
            int leave = ratio_test(d);
            if (leave < 0) return false;  // unbounded
            pivot(enter, leave, d);
        }
    }

    void drive_out_artificials() {
        for (int i = 0; i < sf_.m; ++i) {
            if (basis_[i] < sf_.n) continue;
            // row i has a basic artificial at value 0; try to replace it
            std::vector<T> ei(sf_.m, T{});
            ei[i] = ScalarTraits<T>::one();
            auto rho = btran(std::move(ei));  // row i of B^{-1}
            int found = -1;
            for (int j = 0; j < sf_.n && found < 0; ++j) {
                if (is_basic_[j]) continue;
                T alpha{};
                for (const auto& t : cols_[j]) alpha = alpha + rho[t.row] * t.val;
                T a = ScalarTraits<T>::abs(alpha);
                if (a > pivot_tol_) found = j;
            }
            if (found >= 0) {
                auto d = ftran(column_dense(found));
                pivot(found, i, d);
            }
            // else: redundant row, artificial stays basic at zero
        }
    }

    // Dual simplex until xb >= 0; requires current basis dual-feasible enough.
    // Returns false if it stalls or detects it cannot proceed.
    bool dual_cleanup(SimplexResult<T>& r) {
        (void)r;
        costs_.assign(cols_.size(), T{});
        for (int j = 0; j < sf_.n; ++j) costs_[j] = sf_.c[j];
        const long cap = 100'000;
        long steps = 0;
        while (true) {
            int leave = -1;
            for (int i = 0; i < sf_.m; ++i) {
                T neg = T{} - feas_tol_;
                if (xb_[i] < neg && (leave < 0 || basis_[i] < basis_[leave])) leave = i;
            }
            if (leave < 0) return true;
            if (++steps > cap) return false;
            std::vector<T> cb(sf_.m);
            for (int i = 0; i < sf_.m; ++i) cb[i] = costs_[basis_[i]];
            auto y = btran(std::move(cb));
            std::vector<T> ei(sf_.m, T{});
            ei[leave] = ScalarTraits<T>::one();
            auto rho = btran(std::move(ei));
            int enter = -1;
            T best_ratio{};
            for (int j = 0; j < sf_.n; ++j) {
                if (is_basic_[j]) continue;
                T alpha{};
                for (const auto& t : cols_[j]) alpha = alpha + rho[t.row] * t.val;
                T neg = T{} - pivot_tol_;
                if (alpha < neg) {
                    T rc = costs_[j];
                    for (const auto& t : cols_[j]) rc = rc - y[t.row] * t.val;
                    if (rc < T{}) rc = T{};  // clamp tiny negatives
                    T ratio = T(rc / (T{} - alpha));
                    if (enter < 0 || ratio < best_ratio ||
                        (ratio == best_ratio && j < enter)) {
                        enter = j;
                        best_ratio = ratio;
                    }
                }
            }
            if (enter < 0) return false;  // primal infeasible along this row
            auto d = ftran(column_dense(enter));
            // dual pivot: leave row fixed
            T theta = T(xb_[leave] / d[leave]);
            for (int i = 0; i < sf_.m; ++i) {
                if (i == leave) continue;
                if (!(d[i] == T{})) xb_[i] = xb_[i] - theta * d[i];
            }
            is_basic_[basis_[leave]] = 0;
            is_basic_[enter] = 1;
            basis_[leave] = enter;
            xb_[leave] = theta;
            Eta e;
            e.r = leave;
            e.dr = d[leave];
            for (int i = 0; i < sf_.m; ++i)
                if (!(d[i] == T{})) e.d.push_back({i, d[i]});
            etas_.push_back(std::move(e));
            ++total_iters_;
            if (static_cast<int>(etas_.size()) >= kRefactorEvery) refactor();
        }
    }

    void finalize_duals(SimplexResult<T>& r) {
        std::vector<T> cb(sf_.m);
        for (int i = 0; i < sf_.m; ++i) cb[i] = costs_[basis_[i]];
        r.y = btran(std::move(cb));
    }
};

}  // namespace amencert
