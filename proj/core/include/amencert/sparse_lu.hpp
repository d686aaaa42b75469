#pragma once

#include <cstddef>
#include <vector>

#include "amencert/guards.hpp"
#include "amencert/rational.hpp"

namespace amencert {

/// Sparse LU of a square nonsingular matrix given by columns, with row
/// pivoting. Shared by the float and exact simplex paths; pivots are chosen
/// deterministically (threshold partial pivoting by static row counts for
/// double, pure sparsity order for rationals).
template <typename T>
class SparseLU {
public:
    struct Triplet {
        int row;
        T val;
    };
    using Column = std::vector<Triplet>;

    /// Factors B given as m columns. Throws SolverError if singular
    /// (exactly singular for rationals; pivot below eps for double).
    void factor(const std::vector<Column>& cols) {
        m_ = static_cast<int>(cols.size());
        lcols_.assign(m_, {});
        ucols_.assign(m_, {});
        diag_.assign(m_, T{});
        pivrow_.assign(m_, -1);
        porder_.assign(m_, -1);

        std::vector<int> row_count(m_, 0);
        for (const auto& col : cols)
            for (const auto& t : col) row_count[t.row]++;

        std::vector<T> work(m_, T{});
        std::vector<int> pattern;
        std::vector<char> in_pattern(m_, 0);

        for (int k = 0; k < m_; ++k) {
            // sparse solve: x = L^{-1} B_k over current partial factors
            pattern.clear();
            for (const auto& t : cols[k]) {
                if (!in_pattern[t.row]) {
                    dfs(t.row, pattern, in_pattern);
                }
            }
            for (const auto& t : cols[k]) work[t.row] = work[t.row] + t.val;
            // pattern is in topological order (children first); process reversed
            for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
                int r = *it;
                int kp = porder_[r];
                if (kp < 0) continue;
                T xr = work[r];
                if (!(xr == T{})) {
                    for (const auto& t : lcols_[kp]) work[t.row] = work[t.row] - t.val * xr;
                }
            }
            // pivot choice among unpivoted rows with nonzero value
            int pr = choose_pivot(pattern, work, row_count);
            if (pr < 0) throw SolverError("singular basis in LU factorization");
            T pv = work[pr];
            diag_[k] = pv;
            pivrow_[k] = pr;
            porder_[pr] = k;
            for (int r : pattern) {
                T v = work[r];
                work[r] = T{};
                in_pattern[r] = 0;
                if (v == T{} || r == pr) continue;
                if (porder_[r] >= 0 && porder_[r] < k)
                    ucols_[k].push_back({porder_[r], v});
                else if (porder_[r] < 0)
                    lcols_[k].push_back({r, T(v / pv)});
            }
        }
    }

    int size() const { return m_; }

    /// Solves B z = v. Input indexed by original row; output by column
    /// position (basis slot).
    std::vector<T> solve(std::vector<T> v) const {
        // forward elimination through L (original-row space)
        for (int k = 0; k < m_; ++k) {
            T xr = v[pivrow_[k]];
            if (!(xr == T{})) {
                for (const auto& t : lcols_[k]) v[t.row] = v[t.row] - t.val * xr;
            }
        }
        // back substitution through U (position space)
        std::vector<T> z(m_, T{});
        for (int k = m_ - 1; k >= 0; --k) {
            T acc = v[pivrow_[k]];
            z[k] = T(acc / diag_[k]);
            if (!(z[k] == T{})) {
                for (const auto& t : ucols_[k]) v[pivrow_[t.row]] = v[pivrow_[t.row]] - t.val * z[k];
            }
        }
        return z;
    }

    /// Solves B^T w = c. Input indexed by column position; output by original row.
    std::vector<T> solve_transpose(std::vector<T> c) const {
        // U^T t = c: forward over positions
        std::vector<T> t(m_, T{});
        for (int k = 0; k < m_; ++k) {
            T acc = c[k];
            for (const auto& tr : ucols_[k]) acc = acc - tr.val * t[tr.row];
            t[k] = T(acc / diag_[k]);
        }
        // L^T w = t: backward; w indexed by original row
        std::vector<T> w(m_, T{});
        for (int k = m_ - 1; k >= 0; --k) {
            T acc = t[k];
            for (const auto& tr : lcols_[k]) acc = acc - tr.val * w[tr.row];
            w[pivrow_[k]] = acc;
        }
        return w;
    }

    std::size_t fill() const {
        std::size_t n = m_;
        for (const auto& c : lcols_) n += c.size();
        for (const auto& c : ucols_) n += c.size();
        return n;
    }

private:
    int m_ = 0;
    std::vector<Column> lcols_;  // multipliers by original row, unit diagonal implied
    std::vector<Column> ucols_;  // entries (pivot position, value) above diagonal
    std::vector<T> diag_;
    std::vector<int> pivrow_;  // position -> original row
    std::vector<int> porder_;  // original row -> position (-1 while unpivoted)

    void dfs(int row, std::vector<int>& pattern, std::vector<char>& in_pattern) const {
        // iterative DFS producing topological order (successors appended first)
        struct Frame {
            int row;
            std::size_t next;
        };
        static thread_local std::vector<Frame> stack;
        stack.clear();
        stack.push_back({row, 0});
        in_pattern[row] = 1;
        while (!stack.empty()) {
            Frame& f = stack.back();
            int kp = porder_[f.row];
            const Column* col = kp >= 0 ? &lcols_[kp] : nullptr;
            bool descended = false;
            while (col && f.next < col->size()) {
                int child = (*col)[f.next].row;
                ++f.next;
                if (!in_pattern[child]) {
                    in_pattern[child] = 1;
                    stack.push_back({child, 0});
                    descended = true;
                    break;
                }
            }
            if (!descended && (!col || f.next >= col->size())) {
                pattern.push_back(f.row);
                stack.pop_back();
            }
        }
    }

    int choose_pivot(const std::vector<int>& pattern, const std::vector<T>& work,
                     const std::vector<int>& row_count) const {
        int best = -1;
        if constexpr (ScalarTraits<T>::exact) {
            for (int r : pattern) {
                if (porder_[r] >= 0 || work[r] == T{}) continue;
                if (best < 0 || row_count[r] < row_count[best] ||
                    (row_count[r] == row_count[best] && r < best))
                    best = r;
            }
        } else {
            double max_abs = 0;
            for (int r : pattern) {
                if (porder_[r] >= 0) continue;
                double a = work[r] < 0 ? -double(work[r]) : double(work[r]);
                if (a > max_abs) max_abs = a;
            }
            if (max_abs < 1e-12) return -1;
            for (int r : pattern) {
                if (porder_[r] >= 0) continue;
                double a = work[r] < 0 ? -double(work[r]) : double(work[r]);
                if (a >= 0.01 * max_abs) {
                    if (best < 0 || row_count[r] < row_count[best] ||
                        (row_count[r] == row_count[best] && r < best))
                        best = r;
                }
            }
        }
        return best;
    }
};

}  // namespace amencert
