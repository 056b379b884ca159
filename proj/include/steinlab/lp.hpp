// Copyright 2026 The steinlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "steinlab/error.hpp"

namespace steinlab {

enum class RowSense { LessEqual, Equal, GreaterEqual };

/// minimize c.x subject to rows (sense) rhs, x >= 0.
struct LinearProgram {
    std::vector<double> cost;
    std::vector<std::vector<double>> rows;
    std::vector<RowSense> senses;
    std::vector<double> rhs;

    void add_row(std::vector<double> row, RowSense sense, double b) {
        rows.push_back(std::move(row));
        senses.push_back(sense);
        rhs.push_back(b);
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0;
    std::vector<double> x;
};

namespace detail {

/// Dense tableau; the last column holds the right-hand side, the last row the
/// reduced costs (objective to minimize). The original rows are kept so the
/// tableau can be rebuilt from the current basis, which bounds the drift of
/// long pivot sequences.
class Tableau {
   public:
    Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), t_((m + 1) * (n + 1), 0.0), basis_(m, 0), cost_(n, 0.0) {
    }
    double &at(std::size_t r, std::size_t c) {
        return t_[r * (n_ + 1) + c];
    }
    double &rhs(std::size_t r) {
        return at(r, n_);
    }
    double &cost(std::size_t c) {
        return at(m_, c);
    }
    std::vector<std::size_t> &basis() {
        return basis_;
    }

    /// Snapshot of the constraint rows as currently stored (call once, before
    /// any pivot).
    void freeze_original() {
        a0_.assign(t_.begin(), t_.begin() + static_cast<std::ptrdiff_t>(m_ * (n_ + 1)));
    }

    /// Installs a cost vector and prices it against the current basis.
    void set_cost(std::vector<double> c) {
        cost_ = std::move(c);
        price();
    }

    void pivot(std::size_t r, std::size_t c) {
        const double p = at(r, c);
        for (std::size_t k = 0; k <= n_; k++) {
            at(r, k) /= p;
        }
        for (std::size_t i = 0; i <= m_; i++) {
            if (i == r) {
                continue;
            }
            const double f = at(i, c);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t k = 0; k <= n_; k++) {
                at(i, k) -= f * at(r, k);
            }
            at(i, c) = 0.0;
        }
        basis_[r] = c;
    }

    /// Rebuilds rows from the original data: T = B^{-1} [A | b]. Returns false
    /// (leaving the tableau untouched) if B is numerically singular.
    bool reinvert() {
        const std::size_t w = n_ + 1;
        std::vector<double> lu(m_ * m_);
        for (std::size_t r = 0; r < m_; r++) {
            for (std::size_t k = 0; k < m_; k++) {
                lu[r * m_ + k] = a0_[r * w + basis_[k]];
            }
        }
        std::vector<double> rows = a0_;
        // Gaussian elimination with partial pivoting on [B | A b]
        for (std::size_t k = 0; k < m_; k++) {
            std::size_t piv = k;
            for (std::size_t r = k + 1; r < m_; r++) {
                if (std::abs(lu[r * m_ + k]) > std::abs(lu[piv * m_ + k])) {
                    piv = r;
                }
            }
            if (std::abs(lu[piv * m_ + k]) < 1e-13) {
                return false;
            }
            if (piv != k) {
                for (std::size_t c = 0; c < m_; c++) {
                    std::swap(lu[k * m_ + c], lu[piv * m_ + c]);
                }
                for (std::size_t c = 0; c < w; c++) {
                    std::swap(rows[k * w + c], rows[piv * w + c]);
                }
            }
            const double d = lu[k * m_ + k];
            for (std::size_t r = 0; r < m_; r++) {
                if (r == k) {
                    continue;
                }
                const double f = lu[r * m_ + k] / d;
                if (f == 0.0) {
                    continue;
                }
                for (std::size_t c = k; c < m_; c++) {
                    lu[r * m_ + c] -= f * lu[k * m_ + c];
                }
                for (std::size_t c = 0; c < w; c++) {
                    rows[r * w + c] -= f * rows[k * w + c];
                }
            }
        }
        // B is now diagonal; row k of the result belongs to basis_[k]
        for (std::size_t k = 0; k < m_; k++) {
            const double d = lu[k * m_ + k];
            for (std::size_t c = 0; c < w; c++) {
                at(k, c) = rows[k * w + c] / d;
            }
            for (std::size_t j = 0; j < m_; j++) {
                at(k, basis_[j]) = j == k ? 1.0 : 0.0;
            }
        }
        price();
        return true;
    }

    /// Dantzig pricing over columns [0, active), falling back to Bland's rule
    /// after a run of degenerate pivots so that cycling cannot occur. The ratio
    /// test is Harris' two-pass variant, which prefers large pivots.
    LpStatus run(std::size_t active, double tol, std::size_t max_pivots) {
        constexpr double kPivotTol = 1e-9;
        constexpr double kFeasTol = 1e-9;
        std::size_t stalled = 0;
        for (std::size_t it = 0; it < max_pivots; it++) {
            if (it > 0 && it % 64 == 0) {
                reinvert();
            }
            std::size_t enter = active;
            if (stalled < 50) {
                double most = -tol;
                for (std::size_t c = 0; c < active; c++) {
                    if (cost(c) < most) {
                        most = cost(c);
                        enter = c;
                    }
                }
            } else {
                for (std::size_t c = 0; c < active; c++) {
                    if (cost(c) < -tol) {
                        enter = c;
                        break;
                    }
                }
            }
            if (enter == active) {
                return LpStatus::Optimal;
            }
            std::size_t leave = m_;
            if (stalled < 50) {
                double bound = std::numeric_limits<double>::infinity();
                for (std::size_t r = 0; r < m_; r++) {
                    const double a = at(r, enter);
                    if (a > kPivotTol) {
                        bound = std::min(bound, (std::max(0.0, rhs(r)) + kFeasTol) / a);
                    }
                }
                double biggest = 0;
                for (std::size_t r = 0; r < m_; r++) {
                    const double a = at(r, enter);
                    if (a > kPivotTol && std::max(0.0, rhs(r)) / a <= bound && a > biggest) {
                        biggest = a;
                        leave = r;
                    }
                }
            } else {
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t r = 0; r < m_; r++) {
                    const double a = at(r, enter);
                    if (a > kPivotTol) {
                        const double ratio = std::max(0.0, rhs(r)) / a;
                        if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && leave < m_ &&
                                                     basis_[r] < basis_[leave])) {
                            best = ratio;
                            leave = r;
                        }
                    }
                }
            }
            if (leave == m_) {
                return LpStatus::Unbounded;
            }
            const double step = std::max(0.0, rhs(leave)) / at(leave, enter);
            stalled = step <= 1e-14 ? stalled + 1 : 0;
            pivot(leave, enter);
            for (std::size_t r = 0; r < m_; r++) {
                if (rhs(r) < 0.0 && rhs(r) > -kFeasTol) {
                    rhs(r) = 0.0;
                }
            }
        }
        return LpStatus::IterationLimit;
    }

    std::size_t m() const {
        return m_;
    }

   private:
    /// Reduced costs d_j = c_j - c_B^T T_j and -c_B^T x_B in the corner.
    void price() {
        for (std::size_t c = 0; c <= n_; c++) {
            cost(c) = c < n_ ? cost_[c] : 0.0;
        }
        for (std::size_t r = 0; r < m_; r++) {
            const double cb = cost_[basis_[r]];
            if (cb != 0.0) {
                for (std::size_t c = 0; c <= n_; c++) {
                    cost(c) -= cb * at(r, c);
                }
            }
        }
    }

    std::size_t m_, n_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
    std::vector<double> cost_;
    std::vector<double> a0_;
};

}  // namespace detail

/// Two-phase dense simplex (Dantzig pricing, Bland's rule on stalls). Intended for the
/// small exact LPs of the test oracles and hull membership.
inline LpResult solve_lp(const LinearProgram &lp, double tol = 1e-10, std::size_t max_pivots = 200000) {
    const std::size_t m = lp.rows.size();
    const std::size_t nx = lp.cost.size();
    if (lp.senses.size() != m || lp.rhs.size() != m) {
        throw Error(ErrorCode::InvalidArgument, "malformed linear program");
    }
    for (const auto &row : lp.rows) {
        if (row.size() != nx) {
            throw Error(ErrorCode::DimMismatch, "constraint row length differs from cost length");
        }
    }
    // columns: x | slacks (one per inequality) | artificials (one per row)
    std::size_t n_slack = 0;
    for (auto s : lp.senses) {
        n_slack += s != RowSense::Equal;
    }
    const std::size_t art0 = nx + n_slack;
    const std::size_t ncols = art0 + m;
    detail::Tableau tab(m, ncols);

    std::size_t slack = nx;
    for (std::size_t r = 0; r < m; r++) {
        const double sign = lp.rhs[r] < 0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < nx; c++) {
            tab.at(r, c) = sign * lp.rows[r][c];
        }
        if (lp.senses[r] != RowSense::Equal) {
            tab.at(r, slack++) = sign * (lp.senses[r] == RowSense::LessEqual ? 1.0 : -1.0);
        }
        tab.at(r, art0 + r) = 1.0;
        tab.rhs(r) = sign * lp.rhs[r];
        tab.basis()[r] = art0 + r;
    }
    tab.freeze_original();
    // phase I: minimize the sum of artificials
    {
        std::vector<double> c1(ncols, 0.0);
        for (std::size_t r = 0; r < m; r++) {
            c1[art0 + r] = 1.0;
        }
        tab.set_cost(std::move(c1));
    }
    LpResult out;
    LpStatus st = tab.run(art0, tol, max_pivots);
    if (st == LpStatus::IterationLimit) {
        out.status = st;
        return out;
    }
    tab.reinvert();
    if (-tab.rhs(m) > 1e-8) {
        out.status = LpStatus::Infeasible;
        return out;
    }
    // drive remaining artificials out of the basis
    for (std::size_t r = 0; r < m; r++) {
        if (tab.basis()[r] < art0) {
            continue;
        }
        for (std::size_t c = 0; c < art0; c++) {
            if (std::abs(tab.at(r, c)) > 1e-9) {
                tab.pivot(r, c);
                break;
            }
        }
        if (tab.basis()[r] >= art0) {
            tab.rhs(r) = 0.0;  // redundant row; the artificial stays at zero
        }
    }
    // phase II objective in terms of the current basis
    {
        std::vector<double> c2(ncols, 0.0);
        std::copy(lp.cost.begin(), lp.cost.end(), c2.begin());
        tab.set_cost(std::move(c2));
    }
    tab.reinvert();
    st = tab.run(art0, tol, max_pivots);
    out.status = st;
    if (st != LpStatus::Optimal) {
        return out;
    }
    tab.reinvert();
    out.x.assign(nx, 0.0);
    for (std::size_t r = 0; r < m; r++) {
        if (tab.basis()[r] < nx) {
            out.x[tab.basis()[r]] = std::max(0.0, tab.rhs(r));
        }
    }
    out.value = 0;
    for (std::size_t c = 0; c < nx; c++) {
        out.value += lp.cost[c] * out.x[c];
    }
    return out;
}

}  // namespace steinlab
