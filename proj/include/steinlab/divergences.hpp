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
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"
#include "steinlab/operator.hpp"

namespace steinlab {

/// +infinity is a distinguished value ordered above every real; it is
/// serialized as the string "inf".
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline nlohmann::json number_to_json(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

inline double number_from_json(const nlohmann::json &j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") {
            return kInf;
        }
        if (s == "-inf") {
            return -kInf;
        }
        throw Error(ErrorCode::Parse, "unexpected number string '" + s + "'");
    }
    return j.get<double>();
}

/// Certified interval [lower, upper] for a solver-derived quantity.
struct DivergenceBracket {
    double lower = 0;
    double upper = 0;
    std::string cert;

    double width() const {
        if (std::isinf(upper) && std::isinf(lower)) {
            return 0.0;
        }
        return upper - lower;
    }
    bool contains(double v, double tol = 0.0) const {
        return v >= lower - tol && v <= upper + tol;
    }
    bool well_ordered() const {
        return lower <= upper + 1e-7;
    }
    static DivergenceBracket exact(double v, std::string cert) {
        return {v, v, std::move(cert)};
    }
    DivergenceBracket scaled(double s) const {
        return {lower * s, upper * s, cert};
    }

    nlohmann::json to_json() const {
        return {{"lower", number_to_json(lower)}, {"upper", number_to_json(upper)}, {"cert", cert}};
    }
    static DivergenceBracket from_json(const nlohmann::json &j) {
        return {number_from_json(j.at("lower")), number_from_json(j.at("upper")), j.value("cert", "")};
    }
};

/// -log2 of a beta bracket: the D_H bracket, with 0 mapped to +inf.
inline DivergenceBracket neg_log2_bracket(const DivergenceBracket &beta) {
    auto nl = [](double b) { return b <= 0 ? kInf : -std::log2(b); };
    return {nl(beta.upper), nl(beta.lower), beta.cert};
}

/// Operator 0 <= E <= I; spectrum clipped to [0,1] after a 1e-9 check.
class TestOperator {
   public:
    explicit TestOperator(const HermitianOperator &e) : e_(e) {
        const EigenSystem es = eig_hermitian(e);
        if (es.values.back() < -kPsdTol || es.values.front() > 1.0 + kPsdTol) {
            throw Error(ErrorCode::InvalidArgument, "test operator spectrum outside [0,1]");
        }
        if (es.values.back() < 0 || es.values.front() > 1.0) {
            e_ = HermitianOperator(e.dims(), es.reconstruct([](double v) { return std::clamp(v, 0.0, 1.0); }));
        }
    }
    const HermitianOperator &op() const noexcept {
        return e_;
    }
    double expectation(const HermitianOperator &state) const {
        return trace_product_real(e_.matrix(), state.matrix());
    }

   private:
    HermitianOperator e_;
};

// ---------------------------------------------------------------------------
// Umegaki relative entropy.

namespace detail {

/// D(rho||sigma) in bits from precomputed spectra. Returns +inf when rho has
/// more than `support_tol` weight outside supp(sigma).
inline double umegaki_from_spectra(const EigenSystem &rho_es, const CMatrix &rho, const EigenSystem &sigma_es,
                                   double cutoff, double support_tol) {
    double neg_entropy = 0;
    for (double l : rho_es.values) {
        if (l > cutoff) {
            neg_entropy += l * std::log2(l);
        }
    }
    const std::size_t n = rho.rows();
    double cross = 0;
    double outside = 0;
    for (std::size_t j = 0; j < n; j++) {
        // <v_j| rho |v_j>
        double w = 0;
        for (std::size_t r = 0; r < n; r++) {
            cplx acc = 0;
            for (std::size_t c = 0; c < n; c++) {
                acc += rho(r, c) * sigma_es.vectors(c, j);
            }
            w += (std::conj(sigma_es.vectors(r, j)) * acc).real();
        }
        const double mu = sigma_es.values[j];
        if (mu > cutoff) {
            cross += w * std::log2(mu);
        } else {
            outside += w;
        }
    }
    if (outside > support_tol) {
        return kInf;
    }
    return std::max(0.0, neg_entropy - cross);
}

}  // namespace detail

/// D(rho||sigma) = Tr[rho (log2 rho - log2 sigma)] in bits, +inf when the
/// support of rho is not contained in that of sigma (at tolerance 1e-10).
inline double umegaki(const DensityOperator &rho, const DensityOperator &sigma) {
    rho.op().check_same_dims(sigma.op());
    if (!support_contained(rho, sigma, kSupportTol)) {
        return kInf;
    }
    const EigenSystem rho_es = eig_hermitian(rho);
    const EigenSystem sigma_es = eig_hermitian(sigma);
    return detail::umegaki_from_spectra(rho_es, rho.matrix(), sigma_es, kZeroCutoff, kInf);
}

/// Umegaki value together with the support decision at both declared
/// cutoffs; `support_sensitive` flags instances where they disagree.
struct UmegakiReport {
    double value = 0;
    bool contained_at_1e12 = true;
    bool contained_at_1e10 = true;
    bool support_sensitive = false;
};

inline UmegakiReport umegaki_report(const DensityOperator &rho, const DensityOperator &sigma) {
    UmegakiReport r;
    r.value = umegaki(rho, sigma);
    r.contained_at_1e12 = support_contained(rho, sigma, kZeroCutoff);
    r.contained_at_1e10 = support_contained(rho, sigma, kSupportTol);
    r.support_sensitive = r.contained_at_1e12 != r.contained_at_1e10;
    return r;
}

// ---------------------------------------------------------------------------
// Neyman-Pearson tests.

struct NeymanPearsonResult {
    TestOperator test;
    /// Tr[sigma E] of the returned feasible test.
    double beta = 0;
    /// Weak-duality lower bound on the optimal beta.
    double beta_lower = 0;
    /// Multiplier t in rho - t sigma at which the test was built.
    double threshold = 0;
    /// Type-I success Tr[rho E].
    double alpha_success = 0;

    double residual() const {
        return beta - beta_lower;
    }
    /// D_H^eps in bits, +inf for a perfect test.
    double dh() const {
        return beta <= 0 ? kInf : -std::log2(beta);
    }
    DivergenceBracket bracket() const {
        return {beta_lower, beta, "neyman-pearson: primal test, dual multiplier t=" + std::to_string(threshold)};
    }
};

namespace detail {

/// Tr[X_+] for Hermitian X given its spectrum.
inline double positive_trace(const std::vector<double> &values) {
    double s = 0;
    for (double v : values) {
        s += std::max(v, 0.0);
    }
    return s;
}

/// <v_j| m |v_j> for every column of `vectors`.
inline std::vector<double> diagonal_weights(const CMatrix &m, const CMatrix &vectors) {
    const std::size_t n = m.rows();
    const CMatrix mv = m * vectors;
    std::vector<double> w(vectors.cols());
    for (std::size_t j = 0; j < vectors.cols(); j++) {
        double s = 0;
        for (std::size_t r = 0; r < n; r++) {
            s += (std::conj(vectors(r, j)) * mv(r, j)).real();
        }
        w[j] = s;
    }
    return w;
}

/// Test sum_i e_i |v_i><v_i| filled greedily in descending eigenvalue order,
/// with eigenvalues closer than `group_tol` treated as one eigenspace that
/// receives a uniform fractional weight at the threshold.
inline CMatrix greedy_threshold_test(const EigenSystem &es, const std::vector<double> &rho_weights, double target,
                                     double group_tol) {
    const std::size_t n = es.values.size();
    std::vector<double> e(n, 0.0);
    double acc = 0;
    std::size_t i = 0;
    while (i < n && acc < target) {
        std::size_t j = i + 1;
        while (j < n && es.values[j - 1] - es.values[j] <= group_tol) {
            j++;
        }
        double group = 0;
        for (std::size_t k = i; k < j; k++) {
            group += std::max(0.0, rho_weights[k]);
        }
        if (acc + group <= target) {
            for (std::size_t k = i; k < j; k++) {
                e[k] = 1.0;
            }
            acc += group;
        } else {
            const double q = group > 0 ? (target - acc) / group : 0.0;
            for (std::size_t k = i; k < j; k++) {
                e[k] = std::clamp(q, 0.0, 1.0);
            }
            acc = target;
        }
        i = j;
    }
    std::size_t idx = 0;
    return es.reconstruct([&](double) { return e[idx++]; });
}

}  // namespace detail

/// Optimal test minimizing Tr[sigma E] subject to Tr[rho E] >= 1 - eps.
///
/// The multiplier t of rho - t sigma is located by bisection on
/// [0, 2 lambda_max(rho) / lambda_min^+(sigma)]; the test is the projector on
/// the positive part plus a fractional weight on the threshold eigenspace.
/// The dual value ((1 - eps) - Tr[(rho - t sigma)_+]) / t certifies optimality.
inline NeymanPearsonResult neyman_pearson_simple(const DensityOperator &rho, const DensityOperator &sigma,
                                                 double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
    }
    rho.op().check_same_dims(sigma.op());
    const double target = 1.0 - eps;
    const EigenSystem rho_es = eig_hermitian(rho);
    const EigenSystem sigma_es = eig_hermitian(sigma);
    double sigma_min_pos = 1.0;
    for (double v : sigma_es.values) {
        if (v > kZeroCutoff) {
            sigma_min_pos = std::min(sigma_min_pos, v);
        }
    }
    const CMatrix &r = rho.matrix();
    const CMatrix &s = sigma.matrix();

    auto shifted = [&](double t) { return eig_jacobi(r - s * cplx(t)); };
    auto positive_mass = [&](const EigenSystem &es) {
        const auto w = detail::diagonal_weights(r, es.vectors);
        double m = 0;
        for (std::size_t i = 0; i < w.size(); i++) {
            if (es.values[i] > 0) {
                m += w[i];
            }
        }
        return m;
    };

    double lo = 0.0;
    double hi = 2.0 * rho_es.values.front() / sigma_min_pos;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; it++) {
        const double mid = 0.5 * (lo + hi);
        if (positive_mass(shifted(mid)) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double t = hi;
    const EigenSystem es = shifted(t);
    const auto rho_w = detail::diagonal_weights(r, es.vectors);
    const double group_tol = 1e-9 * std::max(1.0, t);
    CMatrix e = detail::greedy_threshold_test(es, rho_w, target, group_tol);
    HermitianOperator eop(rho.dims(), e);
    TestOperator test(eop);
    double beta = std::max(0.0, test.expectation(sigma));
    if (beta < 1e-15) {
        beta = 0.0;
    }
    const double dual = t > 0 ? (target - detail::positive_trace(es.values)) / t : 0.0;
    NeymanPearsonResult out{test, beta, std::clamp(dual, 0.0, beta), t, test.expectation(rho)};
    return out;
}

/// Classical Neyman-Pearson: sort outcomes by likelihood ratio and randomize
/// on the threshold outcome. Returns the optimal beta.
inline double classical_neyman_pearson(std::span<const double> p, std::span<const double> q, double eps) {
    if (p.size() != q.size()) {
        throw Error(ErrorCode::DimMismatch, "distributions differ in length");
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
    }
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    // descending p/q, q = 0 first; compared as cross products to avoid division
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return p[a] * q[b] > p[b] * q[a];
    });
    const double target = 1.0 - eps;
    double acc = 0, beta = 0;
    for (std::size_t i : order) {
        if (acc >= target) {
            break;
        }
        if (p[i] <= 0) {
            continue;
        }
        const double take = std::min(1.0, (target - acc) / p[i]);
        acc += take * p[i];
        beta += take * q[i];
    }
    return beta;
}

// ---------------------------------------------------------------------------
// Pinching and measured relative entropy.

namespace detail {

/// Index ranges [begin, end) of eigenvalues equal within `tol` (consecutive,
/// descending order).
inline std::vector<std::pair<std::size_t, std::size_t>> eigen_groups(const std::vector<double> &values, double tol) {
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i + 1;
        while (j < values.size() && values[j - 1] - values[j] <= tol) {
            j++;
        }
        groups.emplace_back(i, j);
        i = j;
    }
    return groups;
}

inline CMatrix columns(const CMatrix &m, std::size_t begin, std::size_t end) {
    CMatrix out(m.rows(), end - begin);
    for (std::size_t r = 0; r < m.rows(); r++) {
        for (std::size_t c = begin; c < end; c++) {
            out(r, c - begin) = m(r, c);
        }
    }
    return out;
}

}  // namespace detail

inline constexpr double kPinchGroupTol = 1e-9;

/// sum_lambda P_lambda rho P_lambda over the eigenprojectors of sigma.
inline DensityOperator pinch(const DensityOperator &rho, const DensityOperator &sigma) {
    rho.op().check_same_dims(sigma.op());
    const EigenSystem es = eig_hermitian(sigma);
    if (es.values.back() < -kPsdTol) {
        throw Error(ErrorCode::NotPSD, "pinching reference is not PSD");
    }
    const std::size_t n = rho.dim();
    CMatrix out(n, n);
    for (const auto &[b, e] : detail::eigen_groups(es.values, kPinchGroupTol)) {
        const CMatrix w = detail::columns(es.vectors, b, e);
        const CMatrix proj = w * w.adjoint();
        out += proj * rho.matrix() * proj;
    }
    return DensityOperator::trusted(HermitianOperator(rho.dims(), out));
}

/// Outcome distributions (p, q) of rho and sigma under the projective
/// measurement in a joint eigenbasis of sigma and pinch(rho, sigma).
struct OutcomeDistributions {
    std::vector<double> p;
    std::vector<double> q;
};

inline OutcomeDistributions pinched_outcome_distributions(const DensityOperator &rho, const DensityOperator &sigma) {
    rho.op().check_same_dims(sigma.op());
    const EigenSystem es = eig_hermitian(sigma);
    if (es.values.back() < -kPsdTol) {
        throw Error(ErrorCode::NotPSD, "pinching reference is not PSD");
    }
    OutcomeDistributions out;
    for (const auto &[b, e] : detail::eigen_groups(es.values, kPinchGroupTol)) {
        const CMatrix w = detail::columns(es.vectors, b, e);
        const CMatrix block = w.adjoint() * rho.matrix() * w;
        const EigenSystem bes = eig_jacobi(block);
        const CMatrix basis = w * bes.vectors;
        const auto q = detail::diagonal_weights(sigma.matrix(), basis);
        for (std::size_t k = 0; k < bes.values.size(); k++) {
            out.p.push_back(std::max(0.0, bes.values[k]));
            out.q.push_back(std::max(0.0, q[k]));
        }
    }
    return out;
}

/// Classical KL (bits) of the outcome distributions of a projective
/// measurement in a joint eigenbasis of sigma and its pinching of rho. It is
/// a genuine measurement, hence a lower bound on the measured and the
/// Umegaki relative entropy, and it equals D(pinch(rho)||sigma).
inline double measured_relent_pinched(const DensityOperator &rho, const DensityOperator &sigma) {
    const auto d = pinched_outcome_distributions(rho, sigma);
    double kl = 0;
    for (std::size_t k = 0; k < d.p.size(); k++) {
        const double p = d.p[k];
        if (p <= kZeroCutoff) {
            continue;
        }
        if (d.q[k] <= kZeroCutoff) {
            if (p > kSupportTol) {
                return kInf;
            }
            continue;
        }
        kl += p * std::log2(p / d.q[k]);
    }
    return std::max(0.0, kl);
}

/// Auxiliary function of the continuity bound: (x+1)log2(x+1) - x log2 x.
inline double g_afw(double x) {
    if (x < 0) {
        throw Error(ErrorCode::InvalidArgument, "g_afw of a negative argument");
    }
    if (x == 0) {
        return 0.0;
    }
    return (x + 1) * std::log2(x + 1) - x * std::log2(x);
}

/// Binary entropy in bits.
inline double binary_entropy(double p) {
    if (p <= 0 || p >= 1) {
        return 0.0;
    }
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// ---------------------------------------------------------------------------
// Relative entropy between convex hulls.

struct HullRelentOptions {
    /// Stop once the Frank-Wolfe gap falls below this.
    double gap_tol = 1e-6;
    int max_iterations = 20000;
};

struct HullRelentResult {
    DivergenceBracket bracket;
    std::vector<double> weights_a;
    std::vector<double> weights_b;
    int iterations = 0;
    double gap = 0;
};

namespace detail {

inline CMatrix combine(const std::vector<const CMatrix *> &ms, const std::vector<double> &w) {
    CMatrix out(ms.front()->rows(), ms.front()->cols());
    for (std::size_t i = 0; i < ms.size(); i++) {
        if (w[i] != 0) {
            out.add_scaled(*ms[i], w[i]);
        }
    }
    return out;
}

struct HullPoint {
    double f = kInf;
    std::vector<double> grad_a;
    std::vector<double> grad_b;
};

/// f(u,w) = D(rho_u || sigma_w) and its gradient. The sigma-gradient uses the
/// Frechet derivative of log in the eigenbasis of sigma_w (divided
/// differences); the rho-gradient drops the constant 1/ln 2, which is
/// irrelevant on the simplex.
inline HullPoint hull_objective(const std::vector<const CMatrix *> &a, const std::vector<const CMatrix *> &b,
                                const std::vector<double> &u, const std::vector<double> &w, bool need_grad) {
    HullPoint out;
    const CMatrix rho = combine(a, u);
    const CMatrix sigma = combine(b, w);
    const EigenSystem res = eig_jacobi(rho);
    const EigenSystem ses = eig_jacobi(sigma);
    out.f = umegaki_from_spectra(res, rho, ses, kZeroCutoff, kSupportTol);
    if (!need_grad || std::isinf(out.f)) {
        return out;
    }
    const std::size_t d = rho.rows();
    const auto &lam = ses.values;
    const CMatrix rt = ses.vectors.adjoint() * rho * ses.vectors;
    CMatrix g(d, d);
    for (std::size_t x = 0; x < d; x++) {
        for (std::size_t y = 0; y < d; y++) {
            const double la = lam[x], lb = lam[y];
            if (la <= kZeroCutoff || lb <= kZeroCutoff) {
                continue;
            }
            double gamma;
            if (std::abs(la - lb) > 1e-10 * std::max(la, lb)) {
                gamma = (std::log(la) - std::log(lb)) / (la - lb);
            } else {
                gamma = 2.0 / (la + lb);
            }
            g(x, y) = rt(x, y) * gamma;
        }
    }
    const CMatrix k = ses.vectors * g * ses.vectors.adjoint();
    out.grad_b.resize(b.size());
    for (std::size_t j = 0; j < b.size(); j++) {
        out.grad_b[j] = -trace_product_real(k, *b[j]) / kLn2;
    }
    out.grad_a.assign(a.size(), 0.0);
    if (a.size() > 1) {
        const CMatrix diff = res.reconstruct([](double v) { return std::log2(std::max(v, 1e-30)); }) -
                             ses.reconstruct([](double v) { return std::log2(std::max(v, 1e-30)); });
        for (std::size_t i = 0; i < a.size(); i++) {
            out.grad_a[i] = trace_product_real(diff, *a[i]);
        }
    }
    return out;
}

inline double simplex_gap(const std::vector<double> &x, const std::vector<double> &g) {
    if (x.size() <= 1) {
        return 0.0;
    }
    double dot = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        dot += x[i] * g[i];
    }
    return std::max(0.0, dot - *std::min_element(g.begin(), g.end()));
}

inline std::vector<double> eg_step(const std::vector<double> &x, const std::vector<double> &g, double eta) {
    if (x.size() <= 1) {
        return x;
    }
    const double gmin = *std::min_element(g.begin(), g.end());
    std::vector<double> out(x.size());
    double total = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        out[i] = x[i] * std::exp(-eta * (g[i] - gmin));
        total += out[i];
    }
    for (auto &v : out) {
        v /= total;
    }
    return out;
}

}  // namespace detail

/// Bracket on inf { D(rho||sigma) : rho in co(a_ext), sigma in co(b_ext) },
/// minimized jointly over both weight vectors by exponentiated gradient with
/// backtracking. upper = achieved value, lower = upper - Frank-Wolfe gap
/// (a certified bound by joint convexity).
inline HullRelentResult relent_between_hulls(std::span<const DensityOperator> a_ext,
                                             std::span<const DensityOperator> b_ext, HullRelentOptions options = {}) {
    if (a_ext.empty() || b_ext.empty()) {
        throw Error(ErrorCode::InvalidArgument, "hull lists must be nonempty");
    }
    if (a_ext.size() > 64 || b_ext.size() > 64) {
        throw Error(ErrorCode::CapExceeded, "hull lists are limited to 64 elements");
    }
    for (const auto &x : a_ext) {
        x.op().check_same_dims(a_ext.front());
        x.op().check_same_dims(b_ext.front());
    }
    for (const auto &x : b_ext) {
        x.op().check_same_dims(b_ext.front());
    }

    HullRelentResult out;
    out.weights_a.assign(a_ext.size(), 0.0);
    out.weights_b.assign(b_ext.size(), 1.0 / static_cast<double>(b_ext.size()));

    // Any sigma in the relative interior of co(b_ext) has the largest support;
    // members of a_ext outside it can never carry weight.
    const DensityOperator bary = barycentre(b_ext);
    std::vector<std::size_t> feasible;
    for (std::size_t i = 0; i < a_ext.size(); i++) {
        if (support_contained(a_ext[i], bary, kSupportTol)) {
            feasible.push_back(i);
        }
    }
    if (feasible.empty()) {
        out.bracket = {kInf, kInf, "support of every null member escapes the alternative hull"};
        return out;
    }

    std::vector<const CMatrix *> a, b;
    for (std::size_t i : feasible) {
        a.push_back(&a_ext[i].matrix());
    }
    for (const auto &x : b_ext) {
        b.push_back(&x.matrix());
    }
    std::vector<double> u(a.size(), 1.0 / static_cast<double>(a.size()));
    std::vector<double> w = out.weights_b;

    detail::HullPoint cur = detail::hull_objective(a, b, u, w, true);
    double gap = detail::simplex_gap(u, cur.grad_a) + detail::simplex_gap(w, cur.grad_b);
    double eta = 1.0;
    int it = 0;
    for (; it < options.max_iterations && gap > options.gap_tol; it++) {
        bool accepted = false;
        while (eta > 1e-14) {
            auto u2 = detail::eg_step(u, cur.grad_a, eta);
            auto w2 = detail::eg_step(w, cur.grad_b, eta);
            double lin = 0;
            for (std::size_t i = 0; i < u.size(); i++) {
                lin += cur.grad_a[i] * (u2[i] - u[i]);
            }
            for (std::size_t j = 0; j < w.size(); j++) {
                lin += cur.grad_b[j] * (w2[j] - w[j]);
            }
            const double f2 = detail::hull_objective(a, b, u2, w2, false).f;
            if (f2 <= cur.f + 1e-4 * lin) {
                u = std::move(u2);
                w = std::move(w2);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) {
            break;
        }
        eta *= 2.0;
        cur = detail::hull_objective(a, b, u, w, true);
        gap = detail::simplex_gap(u, cur.grad_a) + detail::simplex_gap(w, cur.grad_b);
    }

    for (std::size_t k = 0; k < feasible.size(); k++) {
        out.weights_a[feasible[k]] = u[k];
    }
    out.weights_b = w;
    out.iterations = it;
    out.gap = gap;
    out.bracket = {std::max(0.0, cur.f - gap), cur.f,
                   "exponentiated gradient: upper=achieved hull point, lower=upper-FW gap after " +
                       std::to_string(it) + " iterations"};
    return out;
}

/// Bracket on inf_w D(rho || sum_j w_j tau_j).
inline HullRelentResult relent_to_hull(const DensityOperator &rho, std::span<const DensityOperator> hull_ext,
                                       HullRelentOptions options = {}) {
    return relent_between_hulls(std::span<const DensityOperator>(&rho, 1), hull_ext, options);
}

}  // namespace steinlab
