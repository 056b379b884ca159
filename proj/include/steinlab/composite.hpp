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

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "steinlab/divergences.hpp"
#include "steinlab/lp.hpp"

namespace steinlab {

struct CompositeOptions {
    /// Newton steps.
    int max_iterations = 400;
    /// Stop once upper - lower <= abs_tol + rel_tol * upper.
    double abs_tol = 1e-10;
    double rel_tol = 1e-7;
};

struct CompositeResult {
    /// Bracket on the optimal worst-case type-II error beta.
    DivergenceBracket beta;
    /// Mixture weights of the best dual certificate.
    std::vector<double> null_weights;
    std::vector<double> alt_weights;
    int iterations = 0;

    /// Bracket on D_H^eps = -log2 beta.
    DivergenceBracket dh() const {
        return neg_log2_bracket(beta);
    }
};

namespace detail {

/// Log-barrier smoothing of the positive part on one eigenvalue:
///   phi(l) = max_{0<e<1} l e + mu log e + mu log(1-e),
/// with maximizer e = phi'(l) and curvature phi''(l), all evaluated without
/// cancellation for |l| >> mu.
struct BarrierScalar {
    double lambda = 0;
    double value = 0;
    double e = 0;
    double curvature = 0;
    // e = 2 mu / den, s = sqrt(lambda^2 + 4 mu^2)
    double s = 0;
    double den = 0;
};

inline BarrierScalar barrier_scalar(double l, double mu) {
    BarrierScalar out;
    out.lambda = l;
    out.s = std::sqrt(l * l + 4.0 * mu * mu);
    const double rest = l >= 0 ? 4.0 * mu * mu / (out.s + l) : out.s - l;
    out.den = 2.0 * mu + rest;
    out.e = 2.0 * mu / out.den;
    const double f = rest / out.den;  // 1 - e
    out.value = l * out.e + mu * std::log(out.e) + mu * std::log(f);
    const double ef = out.e * f;
    out.curvature = mu * ef / (2.0 * mu * mu + l * l * ef);
    return out;
}

/// (e_a - e_b) / (lambda_a - lambda_b), in closed form when both eigenvalues
/// have the same sign so that nothing cancels.
inline double barrier_divided_difference(const BarrierScalar &a, const BarrierScalar &b, double mu) {
    const double dl = a.lambda - b.lambda;
    if (dl == 0.0) {
        return a.curvature;
    }
    double dden;  // (den_a - den_b) / dl
    if (a.lambda >= 0 && b.lambda >= 0) {
        const double pa = a.s + a.lambda, pb = b.s + b.lambda;
        dden = -4.0 * mu * mu * (1.0 + (a.lambda + b.lambda) / (a.s + b.s)) / (pa * pb);
    } else if (a.lambda < 0 && b.lambda < 0) {
        dden = -1.0 + (a.lambda + b.lambda) / (a.s + b.s);
    } else {
        return (a.e - b.e) / dl;
    }
    return -2.0 * mu * dden / (a.den * b.den);
}

/// Dense symmetric solve with partial pivoting; the system is small.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; k++) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; r++) {
            if (std::abs(a[r * n + k]) > std::abs(a[piv * n + k])) {
                piv = r;
            }
        }
        if (a[piv * n + k] == 0.0) {
            throw Error(ErrorCode::EigFailure, "singular Newton system");
        }
        if (piv != k) {
            for (std::size_t c = 0; c < n; c++) {
                std::swap(a[k * n + c], a[piv * n + c]);
            }
            std::swap(b[k], b[piv]);
        }
        for (std::size_t r = k + 1; r < n; r++) {
            const double f = a[r * n + k] / a[k * n + k];
            if (f == 0.0) {
                continue;
            }
            for (std::size_t c = k; c < n; c++) {
                a[r * n + c] -= f * a[k * n + c];
            }
            b[r] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double v = b[k];
        for (std::size_t c = k + 1; c < n; c++) {
            v -= a[k * n + c] * x[c];
        }
        x[k] = v / a[k * n + k];
    }
    return x;
}

/// The composite problem in dual form. Coordinates are x = (u, q) with
/// X(x) = sum_i u_i rho_i - sum_j q_j sigma_j.
class CompositeProblem {
   public:
    CompositeProblem(std::span<const DensityOperator> a, std::span<const DensityOperator> b, double eps)
        : a_(a), b_(b), target_(1.0 - eps) {
    }

    std::size_t na() const {
        return a_.size();
    }
    std::size_t nb() const {
        return b_.size();
    }

    struct Point {
        std::vector<double> u, q;
        std::vector<double> lambda;
        /// Coordinate operators in the eigenbasis of X, rho_i then sigma_j.
        std::vector<CMatrix> rotated;
        /// Exact dual value: certified lower bound on beta.
        double exact = 0;
    };

    Point at(std::vector<double> u, std::vector<double> q) const {
        const std::size_t d = a_.front().dim();
        CMatrix x(d, d);
        double usum = 0;
        for (std::size_t i = 0; i < u.size(); i++) {
            x.add_scaled(a_[i].matrix(), u[i]);
            usum += u[i];
        }
        for (std::size_t j = 0; j < q.size(); j++) {
            x.add_scaled(b_[j].matrix(), -q[j]);
        }
        const EigenSystem es = eig_jacobi(x);
        Point p;
        p.u = std::move(u);
        p.q = std::move(q);
        p.lambda = es.values;
        p.exact = target_ * usum - positive_trace(es.values);
        const CMatrix vh = es.vectors.adjoint();
        for (const auto &r : a_) {
            p.rotated.push_back(vh * r.matrix() * es.vectors);
        }
        for (const auto &s : b_) {
            p.rotated.push_back(vh * s.matrix() * es.vectors);
        }
        return p;
    }

    /// Barrier objective F = -G (to minimize) at barrier weight mu.
    double barrier_value(const Point &p, double mu) const {
        double f = 0;
        for (double l : p.lambda) {
            f += barrier_scalar(l, mu).value;
        }
        for (double v : p.u) {
            f -= target_ * v + mu * std::log(v);
        }
        for (double v : p.q) {
            f -= mu * std::log(v);
        }
        return f;
    }

    /// Gradient and Hessian of F in (u, q).
    void derivatives(const Point &p, double mu, std::vector<double> &grad, std::vector<double> &hess) const {
        const std::size_t m = a_.size() + b_.size();
        const std::size_t d = p.lambda.size();
        std::vector<BarrierScalar> bs(d);
        for (std::size_t k = 0; k < d; k++) {
            bs[k] = barrier_scalar(p.lambda[k], mu);
        }
        // first divided differences of phi' = e
        std::vector<double> gamma(d * d);
        for (std::size_t r = 0; r < d; r++) {
            for (std::size_t c = 0; c <= r; c++) {
                gamma[r * d + c] = gamma[c * d + r] = barrier_divided_difference(bs[r], bs[c], mu);
            }
        }
        grad.assign(m, 0.0);
        hess.assign(m * m, 0.0);
        std::vector<CMatrix> weighted;
        weighted.reserve(m);
        for (std::size_t k = 0; k < m; k++) {
            const double sign = k < a_.size() ? 1.0 : -1.0;
            const CMatrix &ak = p.rotated[k];
            double tr = 0;
            for (std::size_t r = 0; r < d; r++) {
                tr += bs[r].e * ak(r, r).real();
            }
            grad[k] = sign * tr;
            CMatrix w(d, d);
            for (std::size_t r = 0; r < d; r++) {
                for (std::size_t c = 0; c < d; c++) {
                    w(r, c) = ak(r, c) * gamma[r * d + c];
                }
            }
            weighted.push_back(std::move(w));
        }
        for (std::size_t k = 0; k < m; k++) {
            for (std::size_t l = 0; l <= k; l++) {
                const auto wk = weighted[k].data();
                const auto al = p.rotated[l].data();
                double h = 0;
                for (std::size_t t = 0; t < wk.size(); t++) {
                    h += wk[t].real() * al[t].real() + wk[t].imag() * al[t].imag();
                }
                const double sign = (k < a_.size()) == (l < a_.size()) ? 1.0 : -1.0;
                hess[k * m + l] = hess[l * m + k] = sign * h;
            }
        }
        for (std::size_t i = 0; i < a_.size(); i++) {
            grad[i] -= target_ + mu / p.u[i];
            hess[i * m + i] += mu / (p.u[i] * p.u[i]);
        }
        for (std::size_t j = 0; j < b_.size(); j++) {
            const std::size_t k = a_.size() + j;
            grad[k] -= mu / p.q[j];
            hess[k * m + k] += mu / (p.q[j] * p.q[j]);
        }
    }

    /// Worst-case beta of the test diagonal in the eigenbasis of `p` with
    /// entries `e`, after mixing with I until every null member meets the
    /// type-I constraint.
    double repaired_upper(const Point &p, const std::vector<double> &e) const {
        auto expect = [&](std::size_t k) {
            double s = 0;
            for (std::size_t r = 0; r < e.size(); r++) {
                s += e[r] * p.rotated[k](r, r).real();
            }
            return s;
        };
        double theta = 0;
        for (std::size_t i = 0; i < a_.size(); i++) {
            const double s = expect(i);
            if (s < target_) {
                theta = std::max(theta, (target_ - s) / (1.0 - s));
            }
        }
        if (!(theta >= 0.0 && theta <= 1.0)) {
            throw Error(ErrorCode::NoFeasibleTest, "identity test violates the type-I constraint");
        }
        double worst = 0;
        for (std::size_t j = 0; j < b_.size(); j++) {
            worst = std::max(worst, (1.0 - theta) * expect(a_.size() + j) + theta);
        }
        return worst;
    }

    /// Best test diagonal in the eigenbasis of `p` (a small LP); a feasible
    /// test, hence an upper bound.
    double diagonal_lp_upper(const Point &p) const {
        const std::size_t d = p.lambda.size();
        LinearProgram lp;
        lp.cost.assign(d + 1, 0.0);
        lp.cost[d] = 1.0;
        for (std::size_t j = 0; j < b_.size(); j++) {
            std::vector<double> row(d + 1, 0.0);
            for (std::size_t r = 0; r < d; r++) {
                row[r] = -p.rotated[a_.size() + j](r, r).real();
            }
            row[d] = 1.0;
            lp.add_row(std::move(row), RowSense::GreaterEqual, 0.0);
        }
        for (std::size_t i = 0; i < a_.size(); i++) {
            std::vector<double> row(d + 1, 0.0);
            for (std::size_t r = 0; r < d; r++) {
                row[r] = p.rotated[i](r, r).real();
            }
            lp.add_row(std::move(row), RowSense::GreaterEqual, target_);
        }
        for (std::size_t r = 0; r < d; r++) {
            std::vector<double> row(d + 1, 0.0);
            row[r] = 1.0;
            lp.add_row(std::move(row), RowSense::LessEqual, 1.0);
        }
        const LpResult res = solve_lp(lp);
        if (res.status != LpStatus::Optimal) {
            return 1.0;
        }
        std::vector<double> e(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(d));
        for (auto &v : e) {
            v = std::clamp(v, 0.0, 1.0);
        }
        // re-evaluated (and repaired) from the rounded solution
        return repaired_upper(p, e);
    }

    std::vector<double> test_entries(const Point &p, double mu) const {
        std::vector<double> e(p.lambda.size());
        for (std::size_t r = 0; r < e.size(); r++) {
            e[r] = barrier_scalar(p.lambda[r], mu).e;
        }
        return e;
    }

    /// Worst-case beta of an arbitrary test after repair.
    double repaired_upper(const CMatrix &e) const {
        double theta = 0;
        for (const auto &r : a_) {
            const double s = trace_product_real(e, r.matrix());
            if (s < target_) {
                theta = std::max(theta, (target_ - s) / (1.0 - s));
            }
        }
        if (!(theta >= 0.0 && theta <= 1.0)) {
            throw Error(ErrorCode::NoFeasibleTest, "identity test violates the type-I constraint");
        }
        double worst = 0;
        for (const auto &s : b_) {
            worst = std::max(worst, (1.0 - theta) * trace_product_real(e, s.matrix()) + theta);
        }
        return worst;
    }

   private:
    std::span<const DensityOperator> a_, b_;
    double target_;
};

}  // namespace detail

/// Certified bracket on
///   beta = min_{0<=E<=I} max_j Tr[sigma_j E]  s.t.  Tr[rho_i E] >= 1 - eps  for all i.
///
/// Lower bounds come from weak duality: for u >= 0 and a probability vector q,
/// beta >= (1-eps) sum_i u_i - Tr[(sum_i u_i rho_i - sum_j q_j sigma_j)_+].
/// The multipliers follow the central path of a log-barrier version of this
/// dual (damped Newton steps, barrier weight shrinking geometrically). Each
/// centred point also yields a test V diag(e) V^dagger in (0, I), which after
/// repair (mixing with I) and an LP refinement in the same eigenbasis gives
/// the upper bound.
inline CompositeResult dh_eps_composite(std::span<const DensityOperator> a_ext, std::span<const DensityOperator> b_ext,
                                        double eps, CompositeOptions options = {}) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
    }
    if (a_ext.empty() || b_ext.empty()) {
        throw Error(ErrorCode::InvalidArgument, "hypothesis lists must be nonempty");
    }
    if (a_ext.size() > 64 || b_ext.size() > 64) {
        throw Error(ErrorCode::CapExceeded, "hypothesis lists are limited to 64 elements");
    }
    for (const auto &x : a_ext) {
        x.op().check_same_dims(a_ext.front());
    }
    for (const auto &x : b_ext) {
        x.op().check_same_dims(a_ext.front());
    }

    CompositeResult out;
    if (a_ext.size() == 1 && b_ext.size() == 1) {
        const auto np = neyman_pearson_simple(a_ext[0], b_ext[0], eps);
        out.beta = np.bracket();
        out.null_weights = {1.0};
        out.alt_weights = {1.0};
        return out;
    }

    const detail::CompositeProblem prob(a_ext, b_ext, eps);
    const std::size_t na = a_ext.size(), nb = b_ext.size(), m = na + nb;
    const std::size_t d = a_ext.front().dim();
    auto mixtures = [&](const std::vector<double> &u, const std::vector<double> &q) {
        double s = 0;
        for (double v : u) {
            s += v;
        }
        std::vector<double> p(na, 1.0 / static_cast<double>(na));
        if (s > 0) {
            for (std::size_t i = 0; i < na; i++) {
                p[i] = u[i] / s;
            }
        }
        return std::pair{mixture(a_ext, p), mixture(b_ext, q)};
    };

    double best_lower = 0;
    double best_upper = 1.0;
    std::vector<double> best_u, best_q;
    auto converged = [&]() { return best_upper - best_lower <= options.abs_tol + options.rel_tol * best_upper; };

    // warm start from the barycentres
    std::vector<double> q(nb, 1.0 / static_cast<double>(nb));
    std::vector<double> u(na, 1.0);
    {
        const auto [ra, sb] = mixtures(std::vector<double>(na, 1.0), q);
        const auto np = neyman_pearson_simple(ra, sb, eps);
        const double t = np.threshold > 0 ? np.threshold : 1.0;
        for (auto &v : u) {
            v = t / static_cast<double>(na);
        }
        best_upper = std::min(best_upper, prob.repaired_upper(np.test.op().matrix()));
        best_u = u;
        best_q = q;
    }

    auto point = prob.at(u, q);
    auto record = [&](const detail::CompositeProblem::Point &p, double mu) {
        if (p.exact > best_lower) {
            best_lower = p.exact;
            best_u = p.u;
            best_q = p.q;
        }
        best_upper = std::min(best_upper, prob.repaired_upper(p, prob.test_entries(p, mu)));
    };

    double scale = 0;
    for (double l : point.lambda) {
        scale = std::max(scale, std::abs(l));
    }
    scale = std::max(scale, 1e-12);
    double mu = 0.1 * scale / static_cast<double>(d);
    const double barrier_terms = static_cast<double>(2 * d + m);
    int it = 0;
    record(point, mu);
    while (!converged() && it < options.max_iterations && mu > 1e-16 * scale) {
        // centre at the current barrier weight
        for (int inner = 0; inner < 50 && it < options.max_iterations; inner++, it++) {
            std::vector<double> grad, hess;
            prob.derivatives(point, mu, grad, hess);
            // KKT system with the constraint sum_j dq_j = 0
            const std::size_t n = m + 1;
            std::vector<double> kkt(n * n, 0.0), rhs(n, 0.0);
            for (std::size_t r = 0; r < m; r++) {
                for (std::size_t c = 0; c < m; c++) {
                    kkt[r * n + c] = hess[r * m + c];
                }
                rhs[r] = -grad[r];
            }
            for (std::size_t j = 0; j < nb; j++) {
                kkt[(na + j) * n + m] = 1.0;
                kkt[m * n + na + j] = 1.0;
            }
            const auto step = detail::solve_dense(std::move(kkt), std::move(rhs));
            double decrement = 0;
            for (std::size_t k = 0; k < m; k++) {
                decrement -= grad[k] * step[k];
            }
            if (decrement <= 1e-10 * mu) {
                break;
            }
            // fraction to the boundary, then backtracking on the barrier value
            double t = 1.0;
            for (std::size_t i = 0; i < na; i++) {
                if (step[i] < 0) {
                    t = std::min(t, -0.95 * point.u[i] / step[i]);
                }
            }
            for (std::size_t j = 0; j < nb; j++) {
                if (step[na + j] < 0) {
                    t = std::min(t, -0.95 * point.q[j] / step[na + j]);
                }
            }
            const double f0 = prob.barrier_value(point, mu);
            bool moved = false;
            for (int ls = 0; ls < 60; ls++, t *= 0.5) {
                std::vector<double> u2(na), q2(nb);
                for (std::size_t i = 0; i < na; i++) {
                    u2[i] = point.u[i] + t * step[i];
                }
                double qs = 0;
                for (std::size_t j = 0; j < nb; j++) {
                    q2[j] = point.q[j] + t * step[na + j];
                    qs += q2[j];
                }
                for (auto &v : q2) {
                    v /= qs;
                }
                auto next = prob.at(std::move(u2), std::move(q2));
                if (prob.barrier_value(next, mu) <= f0 - 0.25 * t * decrement) {
                    point = std::move(next);
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                break;
            }
            record(point, mu);
            if (decrement < 1e-3 * mu) {
                break;
            }
        }
        best_upper = std::min(best_upper, prob.diagonal_lp_upper(point));
        if (barrier_terms * mu < options.abs_tol) {
            break;
        }
        mu *= 0.2;
    }

    // exact simple solve on the best mixtures tightens both ends
    {
        const auto [ra, sb] = mixtures(best_u, best_q);
        const auto np = neyman_pearson_simple(ra, sb, eps);
        best_lower = std::max(best_lower, np.beta_lower);
        best_upper = std::min(best_upper, prob.repaired_upper(np.test.op().matrix()));
    }
    best_lower = std::min(best_lower, best_upper);

    double s = 0;
    for (double v : best_u) {
        s += v;
    }
    out.null_weights.assign(na, 1.0 / static_cast<double>(na));
    if (s > 0) {
        for (std::size_t i = 0; i < na; i++) {
            out.null_weights[i] = best_u[i] / s;
        }
    }
    out.alt_weights = best_q;
    out.iterations = it;
    out.beta = {best_lower, best_upper,
                "upper: feasible test from the dual central path (repaired, LP-refined); lower: weak duality, " +
                    std::to_string(it) + " Newton steps"};
    return out;
}

}  // namespace steinlab
