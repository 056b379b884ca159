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
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "steinlab/divergences.hpp"
#include "steinlab/lp.hpp"
#include "steinlab/random.hpp"

namespace steinlab {

// ---------------------------------------------------------------------------
// Finitely supported measures.

inline constexpr std::size_t kMaxMeasureSupport = 64;

class DiscreteMeasure {
   public:
    DiscreteMeasure(std::vector<DensityOperator> support, std::vector<double> weights)
        : support_(std::move(support)), weights_(std::move(weights)) {
        if (support_.empty() || support_.size() != weights_.size()) {
            throw Error(ErrorCode::InvalidArgument, "measure needs matching nonempty support and weights");
        }
        if (support_.size() > kMaxMeasureSupport) {
            throw Error(ErrorCode::CapExceeded, "measure support exceeds 64 points");
        }
        double total = 0;
        for (double w : weights_) {
            if (w < 0) {
                throw Error(ErrorCode::InvalidArgument, "negative measure weight");
            }
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-10) {
            throw Error(ErrorCode::InvalidArgument, "measure weights must sum to 1");
        }
        for (const auto &s : support_) {
            s.op().check_same_dims(support_.front());
        }
    }
    static DiscreteMeasure point_mass(const DensityOperator &s) {
        return DiscreteMeasure({s}, {1.0});
    }
    static DiscreteMeasure uniform(std::vector<DensityOperator> support) {
        std::vector<double> w(support.size(), 1.0 / static_cast<double>(support.size()));
        return DiscreteMeasure(std::move(support), std::move(w));
    }

    const std::vector<DensityOperator> &support() const noexcept {
        return support_;
    }
    const std::vector<double> &weights() const noexcept {
        return weights_;
    }
    std::size_t size() const noexcept {
        return support_.size();
    }
    DensityOperator barycentre() const {
        return mixture(support_, weights_);
    }

   private:
    std::vector<DensityOperator> support_;
    std::vector<double> weights_;
};

/// sum_j w_j sigma_j^{(x)n}.
inline DensityOperator iid_mixture_state(const DiscreteMeasure &mu, std::size_t n) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "copy count must be positive");
    }
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < n; i++) {
        dims.insert(dims.end(), mu.support().front().dims().begin(), mu.support().front().dims().end());
    }
    const std::size_t total = checked_total_dim(dims, "iid mixture");
    CMatrix acc(total, total);
    for (std::size_t j = 0; j < mu.size(); j++) {
        if (mu.weights()[j] != 0) {
            acc.add_scaled(tensor_power(mu.support()[j], n).matrix(), mu.weights()[j]);
        }
    }
    return DensityOperator::trusted(HermitianOperator(dims, acc));
}

/// Carathéodory reduction: re-weights onto at most d^2 support points (the
/// states form a (d^2-1)-dimensional affine set) with the same barycentre.
inline DiscreteMeasure caratheodory_reduce(const DiscreteMeasure &mu) {
    const std::size_t d = mu.support().front().dim();
    const std::size_t coords = d * d;
    std::vector<DensityOperator> pts = mu.support();
    std::vector<double> w = mu.weights();
    auto prune = [&]() {
        std::vector<DensityOperator> p2;
        std::vector<double> w2;
        for (std::size_t i = 0; i < pts.size(); i++) {
            if (w[i] > 1e-15) {
                p2.push_back(pts[i]);
                w2.push_back(w[i]);
            }
        }
        pts = std::move(p2);
        w = std::move(w2);
    };
    prune();
    // the trace coordinates duplicate the all-ones row, so rank <= coords
    while (pts.size() > coords) {
        // null vector of the (coords+1) x k matrix [vec(rho_j); 1], k > rows
        const std::size_t k = pts.size();
        const std::size_t rows = coords + 1;
        std::vector<std::vector<double>> m(rows, std::vector<double>(k));
        for (std::size_t j = 0; j < k; j++) {
            const CMatrix &x = pts[j].matrix();
            std::size_t r = 0;
            for (std::size_t a = 0; a < d; a++) {
                for (std::size_t b = a; b < d; b++) {
                    m[r++][j] = x(a, b).real();
                    if (b > a) {
                        m[r++][j] = x(a, b).imag();
                    }
                }
            }
            m[rows - 1][j] = 1.0;
        }
        // reduced row echelon form
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t c = 0; c < k && row < rows; c++) {
            std::size_t best = row;
            for (std::size_t r = row; r < rows; r++) {
                if (std::abs(m[r][c]) > std::abs(m[best][c])) {
                    best = r;
                }
            }
            if (std::abs(m[best][c]) < 1e-12) {
                continue;
            }
            std::swap(m[row], m[best]);
            const double p = m[row][c];
            for (auto &v : m[row]) {
                v /= p;
            }
            for (std::size_t r = 0; r < rows; r++) {
                if (r != row && m[r][c] != 0) {
                    const double f = m[r][c];
                    for (std::size_t cc = 0; cc < k; cc++) {
                        m[r][cc] -= f * m[row][cc];
                    }
                }
            }
            pivots.push_back(c);
            row++;
        }
        std::size_t free_col = 0;
        while (std::find(pivots.begin(), pivots.end(), free_col) != pivots.end()) {
            free_col++;
        }
        std::vector<double> z(k, 0.0);
        z[free_col] = 1.0;
        for (std::size_t r = 0; r < pivots.size(); r++) {
            z[pivots[r]] = -m[r][free_col];
        }
        // move along z until a weight hits zero (z sums to zero, so some z_i > 0)
        double t = kInf;
        for (std::size_t i = 0; i < k; i++) {
            if (z[i] > 1e-14) {
                t = std::min(t, w[i] / z[i]);
            }
        }
        for (std::size_t i = 0; i < k; i++) {
            w[i] = std::max(0.0, w[i] - t * z[i]);
        }
        std::size_t zero = 0;
        for (std::size_t i = 0; i < k; i++) {
            if (z[i] > 1e-14 && w[i] < w[zero]) {
                zero = i;
            }
        }
        w[zero] = 0.0;
        prune();
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto &v : w) {
        v /= total;
    }
    return DiscreteMeasure(std::move(pts), std::move(w));
}

// ---------------------------------------------------------------------------
// Types.

struct NType {
    std::size_t alphabet_size = 0;
    std::vector<std::size_t> counts;

    NType(std::size_t k, std::vector<std::size_t> c) : alphabet_size(k), counts(std::move(c)) {
        if (counts.size() != alphabet_size) {
            throw Error(ErrorCode::InvalidArgument, "type counts do not match the alphabet size");
        }
    }
    std::size_t n() const {
        return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    }
    std::vector<double> frequencies() const {
        std::vector<double> f(counts.size());
        const double nn = static_cast<double>(n());
        for (std::size_t i = 0; i < counts.size(); i++) {
            f[i] = static_cast<double>(counts[i]) / nn;
        }
        return f;
    }
    /// Number of sequences of this type: the multinomial coefficient.
    double class_size() const {
        double lg = std::lgamma(static_cast<double>(n()) + 1);
        for (auto c : counts) {
            lg -= std::lgamma(static_cast<double>(c) + 1);
        }
        return std::round(std::exp(lg));
    }
    bool operator==(const NType &) const = default;
};

inline double type_count(std::size_t k, std::size_t n) {
    // C(n + k - 1, k - 1)
    double c = 1;
    for (std::size_t i = 1; i < k; i++) {
        c = c * static_cast<double>(n + i) / static_cast<double>(i);
    }
    return std::round(c);
}

/// All compositions of n into k parts, lexicographic in the count vector.
inline std::vector<NType> enumerate_types(std::size_t k, std::size_t n) {
    if (k == 0) {
        throw Error(ErrorCode::InvalidArgument, "alphabet must be nonempty");
    }
    if (type_count(k, n) > 1e6) {
        throw Error(ErrorCode::CapExceeded, "more than 10^6 types");
    }
    std::vector<NType> out;
    std::vector<std::size_t> c(k, 0);
    auto rec = [&](auto &&self, std::size_t pos, std::size_t left) -> void {
        if (pos + 1 == k) {
            c[pos] = left;
            out.emplace_back(k, c);
            return;
        }
        for (std::size_t v = 0; v <= left; v++) {
            c[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    rec(rec, 0, n);
    return out;
}

/// gamma_{n,V}: uniform average of sigma_{x_1} (x) ... (x) sigma_{x_n} over all
/// sequences x of type V.
inline DensityOperator type_class_state(std::span<const DensityOperator> base, const NType &v) {
    if (base.size() != v.alphabet_size) {
        throw Error(ErrorCode::DimMismatch, "type alphabet differs from the base size");
    }
    const std::size_t n = v.n();
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "type of length zero");
    }
    std::vector<std::size_t> seq;
    for (std::size_t x = 0; x < v.counts.size(); x++) {
        seq.insert(seq.end(), v.counts[x], x);
    }
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < n; i++) {
        dims.insert(dims.end(), base.front().dims().begin(), base.front().dims().end());
    }
    const std::size_t total = checked_total_dim(dims, "type class state");
    CMatrix acc(total, total);
    std::size_t count = 0;
    do {
        CMatrix term = base[seq[0]].matrix();
        for (std::size_t i = 1; i < n; i++) {
            term = kron(term, base[seq[i]].matrix());
        }
        acc += term;
        count++;
    } while (std::next_permutation(seq.begin(), seq.end()));
    acc *= cplx(1.0 / static_cast<double>(count));
    return DensityOperator::trusted(HermitianOperator(dims, acc));
}

/// The gamma_{n,V} spanning set of the symmetric part of co(base^{(x)n, av}).
inline std::vector<std::pair<NType, DensityOperator>> av_hull_symmetric_decomposition(
    std::span<const DensityOperator> base, std::size_t n) {
    std::vector<std::pair<NType, DensityOperator>> out;
    for (auto &v : enumerate_types(base.size(), n)) {
        auto g = type_class_state(base, v);
        out.emplace_back(std::move(v), std::move(g));
    }
    return out;
}

/// (sum_x V(x) sigma_x)^{(x)n} for every n-type V: the type grid of co(base)
/// raised to the n-th tensor power.
inline std::vector<DensityOperator> iid_type_grid(std::span<const DensityOperator> base, std::size_t n) {
    std::vector<DensityOperator> out;
    for (const auto &v : enumerate_types(base.size(), n)) {
        out.push_back(tensor_power(mixture(base, v.frequencies()), n));
    }
    return out;
}

// ---------------------------------------------------------------------------
// delta-covers.

struct DeltaCover {
    std::vector<DensityOperator> centers;
    /// assignment[i] = index of the center dominating base[i].
    std::vector<std::size_t> assignment;
    /// Rank of each center's support.
    std::vector<std::size_t> support_rank;
    /// min eigenvalue of 2^delta center - sigma per base element.
    std::vector<double> slack;
};

/// Greedy cover with sigma <= 2^delta center(sigma). Barycentres of the
/// still-uncovered states are tried first; a state they miss gets the center
/// (1-p) bary(base) + p sigma with p = 2^{-delta}, which always dominates it.
inline DeltaCover delta_cover(std::span<const DensityOperator> base, double delta) {
    if (base.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty base");
    }
    if (!(delta > 0)) {
        throw Error(ErrorCode::InvalidArgument, "delta must be positive");
    }
    const double scale = std::exp2(delta);
    DeltaCover out;
    out.assignment.assign(base.size(), 0);
    out.slack.assign(base.size(), 0.0);
    std::vector<bool> covered(base.size(), false);
    const DensityOperator full = barycentre(base);

    auto try_center = [&](const DensityOperator &c) {
        bool any = false;
        for (std::size_t i = 0; i < base.size(); i++) {
            if (covered[i]) {
                continue;
            }
            const double s = min_eigenvalue(c.op().scaled(scale) - base[i].op());
            if (s >= -kPsdTol) {
                covered[i] = true;
                out.assignment[i] = out.centers.size();
                out.slack[i] = s;
                any = true;
            }
        }
        if (any) {
            const auto es = eig_hermitian(c);
            out.support_rank.push_back(static_cast<std::size_t>(
                std::count_if(es.values.begin(), es.values.end(), [](double v) { return v > kZeroCutoff; })));
            out.centers.push_back(c);
        }
        return any;
    };

    while (std::find(covered.begin(), covered.end(), false) != covered.end()) {
        std::vector<DensityOperator> rest;
        for (std::size_t i = 0; i < base.size(); i++) {
            if (!covered[i]) {
                rest.push_back(base[i]);
            }
        }
        if (try_center(barycentre(rest))) {
            continue;
        }
        const std::size_t first =
            static_cast<std::size_t>(std::find(covered.begin(), covered.end(), false) - covered.begin());
        const double p = 1.0 / scale;
        const std::vector<DensityOperator> pair{full, base[first]};
        const std::vector<double> w{1.0 - p, p};
        try_center(mixture(pair, w));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stabiliser states.

namespace detail {

using StateVector = std::vector<cplx>;

inline StateVector apply_single(const StateVector &psi, std::size_t qubits, std::size_t target, const cplx g[2][2]) {
    StateVector out(psi.size());
    const std::size_t bit = std::size_t{1} << (qubits - 1 - target);
    for (std::size_t i = 0; i < psi.size(); i++) {
        if (i & bit) {
            continue;
        }
        const cplx a = psi[i], b = psi[i | bit];
        out[i] = g[0][0] * a + g[0][1] * b;
        out[i | bit] = g[1][0] * a + g[1][1] * b;
    }
    return out;
}

inline StateVector apply_cnot(const StateVector &psi, std::size_t qubits, std::size_t control, std::size_t target) {
    StateVector out = psi;
    const std::size_t cb = std::size_t{1} << (qubits - 1 - control);
    const std::size_t tb = std::size_t{1} << (qubits - 1 - target);
    for (std::size_t i = 0; i < psi.size(); i++) {
        if (i & cb) {
            out[i] = psi[i ^ tb];
        }
    }
    return out;
}

inline double fidelity(const StateVector &a, const StateVector &b) {
    cplx s = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        s += std::conj(a[i]) * b[i];
    }
    return std::norm(s);
}

}  // namespace detail

/// Pure stabiliser states on 1 or 2 qubits: the orbit of |0..0> under
/// H, S and CNOT, deduplicated at fidelity 1 - 1e-9.
inline std::vector<DensityOperator> stabiliser_states(std::size_t qubits) {
    if (qubits < 1 || qubits > 2) {
        throw Error(ErrorCode::Unsupported, "stabiliser enumeration supports 1 or 2 qubits");
    }
    const std::size_t dim = std::size_t{1} << qubits;
    const double r = 1.0 / std::sqrt(2.0);
    const cplx h[2][2] = {{r, r}, {r, -r}};
    const cplx s[2][2] = {{1, 0}, {0, cplx(0, 1)}};

    detail::StateVector start(dim, 0.0);
    start[0] = 1.0;
    std::vector<detail::StateVector> seen{start};
    std::deque<detail::StateVector> frontier{start};
    auto visit = [&](detail::StateVector v) {
        for (const auto &x : seen) {
            if (detail::fidelity(x, v) > 1.0 - 1e-9) {
                return;
            }
        }
        seen.push_back(v);
        frontier.push_back(std::move(v));
    };
    while (!frontier.empty()) {
        const auto psi = frontier.front();
        frontier.pop_front();
        for (std::size_t q = 0; q < qubits; q++) {
            visit(detail::apply_single(psi, qubits, q, h));
            visit(detail::apply_single(psi, qubits, q, s));
        }
        if (qubits == 2) {
            visit(detail::apply_cnot(psi, qubits, 0, 1));
            visit(detail::apply_cnot(psi, qubits, 1, 0));
        }
    }
    std::vector<DensityOperator> out;
    const std::vector<std::size_t> dims(qubits, 2);
    for (const auto &v : seen) {
        out.push_back(DensityOperator::pure(dims, v));
    }
    return out;
}

/// 2^n prod_{k=1..n} (2^k + 1).
inline std::size_t stabiliser_count_formula(std::size_t qubits) {
    std::size_t c = std::size_t{1} << qubits;
    for (std::size_t k = 1; k <= qubits; k++) {
        c *= (std::size_t{1} << k) + 1;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Separable approximations.

/// PPT test across the split of every copy into (A, B) halves. `copy_dims`
/// are the dims of one copy, {d_A, d_B}; the operator may hold several copies.
inline bool separable_outer_check(const HermitianOperator &rho, const std::vector<std::size_t> &copy_dims,
                                  double tol = 1e-9) {
    if (copy_dims.size() != 2) {
        throw Error(ErrorCode::BadSubsystem, "bipartition needs exactly two local dimensions");
    }
    const std::size_t per = copy_dims[0] * copy_dims[1];
    std::size_t copies = 0;
    for (std::size_t d = rho.dim(); d > 1; d /= per) {
        if (d % per != 0) {
            throw Error(ErrorCode::BadSubsystem, "operator dimension is not a power of the copy dimension");
        }
        copies++;
    }
    std::vector<std::size_t> fine;
    std::vector<std::size_t> b_parts;
    for (std::size_t c = 0; c < copies; c++) {
        fine.push_back(copy_dims[0]);
        fine.push_back(copy_dims[1]);
        b_parts.push_back(2 * c + 1);
    }
    const HermitianOperator pt = partial_transpose(rho.with_dims(fine), b_parts);
    return min_eigenvalue(pt) >= -tol;
}

// ---------------------------------------------------------------------------
// Families.

enum class FamilyKind { ExplicitHull, IIDPower, AVProduct, SeparableInner, SeparableOuter, StabiliserHull };

inline const char *family_kind_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::ExplicitHull:
            return "explicit";
        case FamilyKind::IIDPower:
            return "iid";
        case FamilyKind::AVProduct:
            return "av";
        case FamilyKind::SeparableInner:
            return "sep-inner";
        case FamilyKind::SeparableOuter:
            return "sep-outer";
        case FamilyKind::StabiliserHull:
            return "stab";
    }
    return "?";
}

inline FamilyKind family_kind_from_name(const std::string &s) {
    for (auto k : {FamilyKind::ExplicitHull, FamilyKind::IIDPower, FamilyKind::AVProduct, FamilyKind::SeparableInner,
                   FamilyKind::SeparableOuter, FamilyKind::StabiliserHull}) {
        if (s == family_kind_name(k)) {
            return k;
        }
    }
    throw Error(ErrorCode::Parse, "unknown family kind '" + s + "'");
}

/// Upper bound on the number of explicit extreme points materialized.
inline constexpr std::size_t kMaxExtremePoints = 4096;

/// Convex hypothesis set at a fixed copy count n. Hull kinds are the convex
/// hull of their materialized extreme points.
class StateFamily {
   public:
    StateFamily(FamilyKind kind, std::vector<DensityOperator> base, std::size_t n,
                std::vector<std::size_t> copy_dims = {})
        : kind_(kind), base_(std::move(base)), n_(n), copy_dims_(std::move(copy_dims)) {
        if (n_ == 0) {
            throw Error(ErrorCode::InvalidArgument, "copy count must be positive");
        }
        if (kind_ != FamilyKind::SeparableOuter) {
            if (base_.empty()) {
                throw Error(ErrorCode::InvalidArgument, "family base must be nonempty");
            }
            for (const auto &b : base_) {
                b.op().check_same_dims(base_.front());
            }
        }
        if ((kind_ == FamilyKind::SeparableInner || kind_ == FamilyKind::SeparableOuter) && copy_dims_.size() != 2) {
            throw Error(ErrorCode::BadSubsystem, "separable families need a bipartition {d_A, d_B}");
        }
        if (copy_dims_.empty() && !base_.empty()) {
            copy_dims_ = base_.front().dims();
        }
    }

    static StateFamily explicit_hull(std::vector<DensityOperator> ext) {
        return StateFamily(FamilyKind::ExplicitHull, std::move(ext), 1);
    }
    static StateFamily iid(std::vector<DensityOperator> base, std::size_t n) {
        return StateFamily(FamilyKind::IIDPower, std::move(base), n);
    }
    static StateFamily av(std::vector<DensityOperator> base, std::size_t n) {
        return StateFamily(FamilyKind::AVProduct, std::move(base), n);
    }
    /// Stabiliser hull on n qubits.
    static StateFamily stabiliser(std::size_t qubits) {
        return StateFamily(FamilyKind::StabiliserHull, stabiliser_states(qubits), qubits, {2});
    }
    /// Level-1 inner approximation: the d_A d_B computational-basis product
    /// states plus `samples` random pure product states (deterministic in
    /// `seed`); level n is the hull of n-fold products of level-1 members.
    static StateFamily separable_inner(std::size_t d_a, std::size_t d_b, std::size_t samples, std::uint64_t seed,
                                       std::size_t n = 1) {
        std::vector<DensityOperator> base;
        for (std::size_t a = 0; a < d_a; a++) {
            for (std::size_t b = 0; b < d_b; b++) {
                base.push_back(DensityOperator::trusted(
                    HermitianOperator({d_a * d_b}, tensor(DensityOperator::basis({d_a}, a),
                                                          DensityOperator::basis({d_b}, b))
                                                       .matrix())));
            }
        }
        Rng rng(seed);
        for (std::size_t s = 0; s < samples; s++) {
            const auto pa = random_pure_state({d_a}, rng);
            const auto pb = random_pure_state({d_b}, rng);
            base.push_back(DensityOperator::trusted(HermitianOperator({d_a * d_b}, tensor(pa, pb).matrix())));
        }
        return StateFamily(FamilyKind::SeparableInner, std::move(base), n, {d_a, d_b});
    }
    static StateFamily separable_outer(std::size_t d_a, std::size_t d_b, std::size_t n = 1) {
        return StateFamily(FamilyKind::SeparableOuter, {}, n, {d_a, d_b});
    }

    FamilyKind kind() const noexcept {
        return kind_;
    }
    const std::vector<DensityOperator> &base() const noexcept {
        return base_;
    }
    std::size_t n() const noexcept {
        return n_;
    }
    const std::vector<std::size_t> &copy_dims() const noexcept {
        return copy_dims_;
    }

    /// Same family at copy count m.
    StateFamily at(std::size_t m) const {
        if (kind_ == FamilyKind::StabiliserHull) {
            return stabiliser(m);
        }
        if (kind_ == FamilyKind::ExplicitHull && m != n_) {
            throw Error(ErrorCode::Unsupported, "explicit hulls live at a single copy count");
        }
        StateFamily f = *this;
        f.n_ = m;
        return f;
    }

    /// Dims of a level-n operator: each copy is one tensor factor.
    std::vector<std::size_t> level_dims() const {
        if (kind_ == FamilyKind::ExplicitHull || kind_ == FamilyKind::StabiliserHull) {
            return base_.front().dims();
        }
        const std::size_t per =
            kind_ == FamilyKind::SeparableInner || kind_ == FamilyKind::SeparableOuter
                ? copy_dims_[0] * copy_dims_[1]
                : base_.front().dim();
        if (kind_ == FamilyKind::SeparableOuter) {
            return std::vector<std::size_t>(n_, per);
        }
        std::vector<std::size_t> dims;
        for (std::size_t i = 0; i < n_; i++) {
            dims.insert(dims.end(), base_.front().dims().begin(), base_.front().dims().end());
        }
        return dims;
    }

    /// Every extreme point of the level-n hull.
    std::vector<DensityOperator> extreme_points() const {
        switch (kind_) {
            case FamilyKind::ExplicitHull:
            case FamilyKind::StabiliserHull:
                return base_;
            case FamilyKind::IIDPower:
                throw Error(ErrorCode::Unsupported,
                            "composite iid hulls are not polytopes; use spanning_set or the type grid");
            case FamilyKind::SeparableOuter:
                throw Error(ErrorCode::Unsupported, "the PPT outer family has no finite extreme-point list");
            case FamilyKind::AVProduct:
            case FamilyKind::SeparableInner:
                break;
        }
        const double count = std::pow(static_cast<double>(base_.size()), static_cast<double>(n_));
        if (count > static_cast<double>(kMaxExtremePoints)) {
            throw Error(ErrorCode::CapExceeded, "too many product extreme points");
        }
        checked_total_dim(level_dims(), "family level");
        std::vector<DensityOperator> out;
        std::vector<std::size_t> idx(n_, 0);
        while (true) {
            std::vector<DensityOperator> factors;
            for (auto i : idx) {
                factors.push_back(base_[i]);
            }
            out.push_back(tensor_all(factors));
            std::size_t p = n_;
            while (p > 0 && ++idx[p - 1] == base_.size()) {
                idx[--p] = 0;
            }
            if (p == 0) {
                break;
            }
        }
        return out;
    }

    /// Finite list whose hull contains every permutation-symmetric member:
    /// gamma_{n,V} states for product kinds, sigma^{(x)n} for iid.
    std::vector<DensityOperator> spanning_set() const {
        switch (kind_) {
            case FamilyKind::IIDPower: {
                std::vector<DensityOperator> out;
                for (const auto &b : base_) {
                    out.push_back(tensor_power(b, n_));
                }
                return out;
            }
            case FamilyKind::AVProduct:
            case FamilyKind::SeparableInner: {
                std::vector<DensityOperator> out;
                for (auto &[v, g] : av_hull_symmetric_decomposition(base_, n_)) {
                    out.push_back(std::move(g));
                }
                return out;
            }
            default:
                return extreme_points();
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["kind"] = family_kind_name(kind_);
        j["n"] = n_;
        j["copy_dims"] = copy_dims_;
        j["base_size"] = base_.size();
        return j;
    }

   private:
    FamilyKind kind_;
    std::vector<DensityOperator> base_;
    std::size_t n_;
    std::vector<std::size_t> copy_dims_;
};

// ---------------------------------------------------------------------------
// Membership.

struct HullMembership {
    bool member = false;
    /// Minimal L1 residual of sum_j w_j ext_j - rho over real coordinates.
    double residual = 0;
    std::vector<double> weights;
};

/// Exact hull-membership LP: minimize the L1 residual of the linear system
/// sum_j w_j ext_j = rho over the probability simplex.
inline HullMembership hull_lp_membership(std::span<const DensityOperator> ext, const HermitianOperator &rho,
                                         double tol = 1e-8) {
    if (ext.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty hull");
    }
    const std::size_t d = rho.dim();
    for (const auto &e : ext) {
        if (e.dim() != d) {
            throw Error(ErrorCode::DimMismatch, "hull member dimension differs");
        }
    }
    const std::size_t k = ext.size();
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    for (std::size_t a = 0; a < d; a++) {
        for (std::size_t b = a; b < d; b++) {
            coords.emplace_back(a, b);
        }
    }
    std::vector<std::pair<std::size_t, bool>> eqs;  // (coord, imaginary)
    for (std::size_t c = 0; c < coords.size(); c++) {
        eqs.emplace_back(c, false);
        if (coords[c].first != coords[c].second) {
            eqs.emplace_back(c, true);
        }
    }
    const std::size_t m = eqs.size();
    LinearProgram lp;
    lp.cost.assign(k + 2 * m, 0.0);
    for (std::size_t i = 0; i < 2 * m; i++) {
        lp.cost[k + i] = 1.0;
    }
    for (std::size_t e = 0; e < m; e++) {
        const auto [c, im] = eqs[e];
        const auto [a, b] = coords[c];
        std::vector<double> row(k + 2 * m, 0.0);
        for (std::size_t j = 0; j < k; j++) {
            const cplx v = ext[j].matrix()(a, b);
            row[j] = im ? v.imag() : v.real();
        }
        row[k + 2 * e] = 1.0;
        row[k + 2 * e + 1] = -1.0;
        const cplx t = rho.matrix()(a, b);
        lp.add_row(std::move(row), RowSense::Equal, im ? t.imag() : t.real());
    }
    std::vector<double> ones(k + 2 * m, 0.0);
    std::fill(ones.begin(), ones.begin() + static_cast<std::ptrdiff_t>(k), 1.0);
    lp.add_row(std::move(ones), RowSense::Equal, rho.trace());
    const LpResult res = solve_lp(lp);
    HullMembership out;
    if (res.status != LpStatus::Optimal) {
        out.residual = kInf;
        return out;
    }
    out.residual = res.value;
    out.member = res.value <= tol;
    out.weights.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

/// Frobenius distance from rho to co(ext) by away-step Frank-Wolfe.
inline double hull_distance(std::span<const DensityOperator> ext, const HermitianOperator &rho,
                            double gap_tol = 1e-7, int max_iterations = 100000) {
    if (ext.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty hull");
    }
    const std::size_t k = ext.size();
    // Gram data: G_ij = <e_i, e_j>, r_i = <e_i, rho>
    std::vector<double> g(k * k), r(k);
    for (std::size_t i = 0; i < k; i++) {
        r[i] = trace_product_real(ext[i].matrix(), rho.matrix());
        for (std::size_t j = i; j < k; j++) {
            g[i * k + j] = g[j * k + i] = trace_product_real(ext[i].matrix(), ext[j].matrix());
        }
    }
    const double rr = trace_product_real(rho.matrix(), rho.matrix());
    std::vector<double> w(k, 0.0);
    std::size_t start = 0;
    for (std::size_t i = 1; i < k; i++) {
        if (g[i * k + i] - 2 * r[i] < g[start * k + start] - 2 * r[start]) {
            start = i;
        }
    }
    w[start] = 1.0;
    std::vector<double> gw(k);  // (G w)_i
    auto refresh = [&]() {
        for (std::size_t i = 0; i < k; i++) {
            double s = 0;
            for (std::size_t j = 0; j < k; j++) {
                s += g[i * k + j] * w[j];
            }
            gw[i] = s;
        }
    };
    auto objective = [&]() {
        double wgw = 0, wr = 0;
        for (std::size_t i = 0; i < k; i++) {
            wgw += w[i] * gw[i];
            wr += w[i] * r[i];
        }
        return std::max(0.0, wgw - 2 * wr + rr);
    };
    refresh();
    for (int it = 0; it < max_iterations; it++) {
        const double f = objective();
        if (f <= 1e-14) {
            break;
        }
        // gradient of f in w (up to factor 2): G w - r
        std::vector<double> grad(k);
        for (std::size_t i = 0; i < k; i++) {
            grad[i] = gw[i] - r[i];
        }
        double wg = 0;
        for (std::size_t i = 0; i < k; i++) {
            wg += w[i] * grad[i];
        }
        std::size_t s = 0, a = k;
        for (std::size_t i = 0; i < k; i++) {
            if (grad[i] < grad[s]) {
                s = i;
            }
            if (w[i] > 0 && (a == k || grad[i] > grad[a])) {
                a = i;
            }
        }
        const double fw_gap = 2 * (wg - grad[s]);
        if (fw_gap <= gap_tol * std::max(f, 1e-7)) {
            break;
        }
        // direction d = e_s - w (FW) or w - e_a (away)
        std::vector<double> dir(k);
        double max_step;
        if (wg - grad[s] >= grad[a] - wg) {
            for (std::size_t i = 0; i < k; i++) {
                dir[i] = -w[i];
            }
            dir[s] += 1.0;
            max_step = 1.0;
        } else {
            for (std::size_t i = 0; i < k; i++) {
                dir[i] = w[i];
            }
            dir[a] -= 1.0;
            max_step = w[a] / (1.0 - w[a]);
        }
        // exact line search on the quadratic
        double num = 0, den = 0;
        for (std::size_t i = 0; i < k; i++) {
            num -= dir[i] * grad[i];
            double gd = 0;
            for (std::size_t j = 0; j < k; j++) {
                gd += g[i * k + j] * dir[j];
            }
            den += dir[i] * gd;
        }
        double step = den > 0 ? num / den : max_step;
        step = std::clamp(step, 0.0, max_step);
        if (step == 0.0) {
            break;
        }
        for (std::size_t i = 0; i < k; i++) {
            w[i] = std::max(0.0, w[i] + step * dir[i]);
        }
        refresh();
    }
    return std::sqrt(objective());
}

/// Frobenius distance from rho to the family (hull kinds only).
inline double membership_distance(const StateFamily &family, const HermitianOperator &rho) {
    if (family.kind() == FamilyKind::SeparableOuter || family.kind() == FamilyKind::IIDPower) {
        throw Error(ErrorCode::Unsupported, "membership distance needs a hull-like family");
    }
    const auto ext = family.extreme_points();
    return hull_distance(ext, rho);
}

/// Membership decision: PPT for the outer family, the exact hull LP otherwise.
inline bool family_contains(const StateFamily &family, const HermitianOperator &rho, double tol = 1e-8) {
    if (family.kind() == FamilyKind::SeparableOuter) {
        return std::abs(rho.trace() - 1.0) <= kTraceTol && is_psd(rho) &&
               separable_outer_check(rho, family.copy_dims());
    }
    if (family.kind() == FamilyKind::IIDPower) {
        throw Error(ErrorCode::Unsupported, "composite iid hulls are not polytopes");
    }
    const auto ext = family.extreme_points();
    return hull_lp_membership(ext, rho, tol).member;
}

}  // namespace steinlab
