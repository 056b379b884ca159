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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "steinlab/eigen.hpp"
#include "steinlab/matrix.hpp"

namespace steinlab {

// ---------------------------------------------------------------------------
// Tolerances shared across modules.

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kZeroCutoff = 1e-12;
inline constexpr double kSupportTol = 1e-10;
inline constexpr double kLn2 = 0.69314718055994530942;

// ---------------------------------------------------------------------------
// Dense dimension cap.

inline std::atomic<std::size_t> &dimension_cap_storage() {
    static std::atomic<std::size_t> cap{4096};
    return cap;
}

inline std::size_t dimension_cap() {
    return dimension_cap_storage().load();
}

/// Temporarily overrides the global cap; restores the previous value on exit.
class ScopedDimensionCap {
   public:
    explicit ScopedDimensionCap(std::size_t cap) : previous_(dimension_cap_storage().exchange(cap)) {
    }
    ~ScopedDimensionCap() {
        dimension_cap_storage().store(previous_);
    }
    ScopedDimensionCap(const ScopedDimensionCap &) = delete;
    ScopedDimensionCap &operator=(const ScopedDimensionCap &) = delete;

   private:
    std::size_t previous_;
};

/// Product of `dims`, failing with CapExceeded instead of overflowing.
inline std::size_t checked_total_dim(const std::vector<std::size_t> &dims, const char *what) {
    const std::size_t cap = dimension_cap();
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0 || total > cap / d) {
            throw Error(ErrorCode::CapExceeded,
                        std::string(what) + ": dimension exceeds cap " + std::to_string(cap));
        }
        total *= d;
    }
    return total;
}

// ---------------------------------------------------------------------------
// HermitianOperator.

/// Dense Hermitian operator on a tensor product of local spaces. An empty
/// `dims` list denotes the trivial one-dimensional system (a real scalar).
class HermitianOperator {
   public:
    HermitianOperator() : HermitianOperator(std::vector<std::size_t>{}, CMatrix(1, 1)) {
    }

    HermitianOperator(std::vector<std::size_t> dims, const CMatrix &entries) : dims_(std::move(dims)) {
        for (std::size_t d : dims_) {
            if (d < 2) {
                throw Error(ErrorCode::InvalidArgument, "local dimensions must be at least 2");
            }
        }
        const std::size_t total = checked_total_dim(dims_, "HermitianOperator");
        if (!entries.square() || entries.rows() != total) {
            throw Error(ErrorCode::DimMismatch, "matrix size " + std::to_string(entries.rows()) +
                                                    " does not match product of dims " +
                                                    std::to_string(total));
        }
        m_ = hermitian_part(entries);
    }

    /// Single-factor operator.
    static HermitianOperator from_matrix(const CMatrix &entries) {
        return HermitianOperator({entries.rows()}, entries);
    }

    static HermitianOperator identity(std::vector<std::size_t> dims) {
        const std::size_t total = checked_total_dim(dims, "identity");
        return HermitianOperator(std::move(dims), CMatrix::identity(total));
    }

    static HermitianOperator diagonal(std::vector<std::size_t> dims, std::span<const double> values) {
        return HermitianOperator(std::move(dims), CMatrix::diagonal(values));
    }

    static HermitianOperator zero(std::vector<std::size_t> dims) {
        const std::size_t total = checked_total_dim(dims, "zero");
        return HermitianOperator(std::move(dims), CMatrix(total, total));
    }

    const std::vector<std::size_t> &dims() const noexcept {
        return dims_;
    }
    std::size_t dim() const noexcept {
        return m_.rows();
    }
    std::size_t factors() const noexcept {
        return dims_.size();
    }
    const CMatrix &matrix() const noexcept {
        return m_;
    }
    cplx operator()(std::size_t r, std::size_t c) const {
        return m_(r, c);
    }
    double trace() const {
        return m_.trace().real();
    }

    HermitianOperator operator+(const HermitianOperator &o) const {
        check_same_dims(o);
        return HermitianOperator(dims_, m_ + o.m_);
    }
    HermitianOperator operator-(const HermitianOperator &o) const {
        check_same_dims(o);
        return HermitianOperator(dims_, m_ - o.m_);
    }
    HermitianOperator scaled(double s) const {
        return HermitianOperator(dims_, m_ * cplx(s));
    }
    /// Keeps the dims but relabels them, e.g. to view [2,2] as [4].
    HermitianOperator with_dims(std::vector<std::size_t> dims) const {
        return HermitianOperator(std::move(dims), m_);
    }

    void check_same_dims(const HermitianOperator &o) const {
        if (dims_ != o.dims_) {
            throw Error(ErrorCode::DimMismatch, "operator dims differ");
        }
    }

   private:
    std::vector<std::size_t> dims_;
    CMatrix m_;
};

/// sum_j w_j X_j; all operands share dims.
inline HermitianOperator weighted_sum(std::span<const HermitianOperator> ops, std::span<const double> weights) {
    if (ops.empty() || ops.size() != weights.size()) {
        throw Error(ErrorCode::InvalidArgument, "weighted_sum needs matching non-empty lists");
    }
    CMatrix acc(ops[0].dim(), ops[0].dim());
    for (std::size_t j = 0; j < ops.size(); j++) {
        ops[0].check_same_dims(ops[j]);
        if (weights[j] != 0.0) {
            acc.add_scaled(ops[j].matrix(), weights[j]);
        }
    }
    return HermitianOperator(ops[0].dims(), acc);
}

// ---------------------------------------------------------------------------
// Spectral calculus.

inline EigenSystem eig_hermitian(const HermitianOperator &x) {
    return eig_jacobi(x.matrix());
}

inline double min_eigenvalue(const HermitianOperator &x) {
    return eig_hermitian(x).values.back();
}

inline double max_eigenvalue(const HermitianOperator &x) {
    return eig_hermitian(x).values.front();
}

template <typename F>
HermitianOperator apply_function(const HermitianOperator &x, F &&f) {
    const EigenSystem es = eig_hermitian(x);
    return HermitianOperator(x.dims(), es.reconstruct(f));
}

inline bool is_psd(const HermitianOperator &x, double tol = kPsdTol) {
    return min_eigenvalue(x) >= -tol;
}

/// Base-2 matrix logarithm of a PSD operator. Eigenvalues at or below
/// `cutoff` map to 0 when `support_only` is set; otherwise they are an error.
inline HermitianOperator matrix_log2(const HermitianOperator &x, bool support_only, double cutoff = kZeroCutoff) {
    const EigenSystem es = eig_hermitian(x);
    if (es.values.back() < -kPsdTol) {
        throw Error(ErrorCode::NotPSD, "matrix_log2 of an operator with eigenvalue " +
                                           std::to_string(es.values.back()));
    }
    if (!support_only && es.values.back() <= cutoff) {
        throw Error(ErrorCode::InvalidArgument, "matrix_log2 of a singular operator requires support_only");
    }
    return HermitianOperator(x.dims(), es.reconstruct([&](double v) { return v > cutoff ? std::log2(v) : 0.0; }));
}

struct PositiveNegativeParts {
    HermitianOperator pos;
    HermitianOperator neg;
};

/// X = pos - neg with pos, neg PSD and orthogonally supported.
inline PositiveNegativeParts positive_negative_parts(const HermitianOperator &x) {
    const EigenSystem es = eig_hermitian(x);
    return {HermitianOperator(x.dims(), es.reconstruct([](double v) { return v > 0 ? v : 0.0; })),
            HermitianOperator(x.dims(), es.reconstruct([](double v) { return v < 0 ? -v : 0.0; }))};
}

inline double trace_norm(const HermitianOperator &x) {
    const EigenSystem es = eig_hermitian(x);
    double s = 0;
    for (double v : es.values) {
        s += std::abs(v);
    }
    return s;
}

inline double operator_norm(const CMatrix &m) {
    // sqrt of the largest eigenvalue of M^dagger M
    const EigenSystem es = eig_jacobi(m.adjoint() * m);
    return std::sqrt(std::max(0.0, es.values.front()));
}

inline HermitianOperator support_projector(const HermitianOperator &x, double tol = kZeroCutoff) {
    const EigenSystem es = eig_hermitian(x);
    if (es.values.back() < -kPsdTol) {
        throw Error(ErrorCode::NotPSD, "support_projector of a non-PSD operator");
    }
    return HermitianOperator(x.dims(), es.reconstruct([&](double v) { return v > tol ? 1.0 : 0.0; }));
}

/// supp(a) within supp(b): ||(I - P_b) P_a||_op <= tol.
inline bool support_contained(const HermitianOperator &a, const HermitianOperator &b, double tol = kSupportTol) {
    a.check_same_dims(b);
    const HermitianOperator pa = support_projector(a, tol);
    const HermitianOperator pb = support_projector(b, tol);
    const CMatrix outside = (CMatrix::identity(a.dim()) - pb.matrix()) * pa.matrix();
    return operator_norm(outside) <= tol;
}

// ---------------------------------------------------------------------------
// DensityOperator.

/// PSD, unit-trace HermitianOperator.
class DensityOperator {
   public:
    explicit DensityOperator(HermitianOperator op) : op_(std::move(op)) {
        if (std::abs(op_.trace() - 1.0) > kTraceTol) {
            throw Error(ErrorCode::InvalidArgument, "state trace " + std::to_string(op_.trace()) + " differs from 1");
        }
        const double lmin = min_eigenvalue(op_);
        if (lmin < -kPsdTol) {
            throw Error(ErrorCode::NotPSD, "state has eigenvalue " + std::to_string(lmin));
        }
    }

    /// Skips validation; for results of operations that provably yield states.
    static DensityOperator trusted(HermitianOperator op) {
        return DensityOperator(std::move(op), Trusted{});
    }

    static DensityOperator maximally_mixed(std::vector<std::size_t> dims) {
        const std::size_t total = checked_total_dim(dims, "maximally_mixed");
        return trusted(HermitianOperator(std::move(dims), CMatrix::identity(total) * cplx(1.0 / total)));
    }

    /// |psi><psi| / <psi|psi>.
    static DensityOperator pure(std::vector<std::size_t> dims, std::span<const cplx> amplitudes) {
        double norm = 0;
        for (const auto &a : amplitudes) {
            norm += std::norm(a);
        }
        if (norm <= 0) {
            throw Error(ErrorCode::InvalidArgument, "zero state vector");
        }
        const std::size_t n = amplitudes.size();
        CMatrix m(n, n);
        for (std::size_t r = 0; r < n; r++) {
            for (std::size_t c = 0; c < n; c++) {
                m(r, c) = amplitudes[r] * std::conj(amplitudes[c]) / norm;
            }
        }
        return trusted(HermitianOperator(std::move(dims), m));
    }

    static DensityOperator basis(std::vector<std::size_t> dims, std::size_t index) {
        const std::size_t total = checked_total_dim(dims, "basis");
        if (index >= total) {
            throw Error(ErrorCode::InvalidArgument, "basis index out of range");
        }
        std::vector<cplx> amps(total);
        amps[index] = 1.0;
        return pure(std::move(dims), amps);
    }

    static DensityOperator diagonal(std::vector<std::size_t> dims, std::span<const double> probs) {
        return DensityOperator(HermitianOperator::diagonal(std::move(dims), probs));
    }

    const HermitianOperator &op() const noexcept {
        return op_;
    }
    operator const HermitianOperator &() const noexcept {
        return op_;
    }
    const std::vector<std::size_t> &dims() const noexcept {
        return op_.dims();
    }
    std::size_t dim() const noexcept {
        return op_.dim();
    }
    const CMatrix &matrix() const noexcept {
        return op_.matrix();
    }

   private:
    struct Trusted {};
    DensityOperator(HermitianOperator op, Trusted) : op_(std::move(op)) {
    }

    HermitianOperator op_;
};

/// Convex combination of states; weights must be a probability vector.
inline DensityOperator mixture(std::span<const DensityOperator> states, std::span<const double> weights) {
    if (states.empty() || states.size() != weights.size()) {
        throw Error(ErrorCode::InvalidArgument, "mixture needs matching non-empty lists");
    }
    double total = 0;
    for (double w : weights) {
        if (w < -1e-12) {
            throw Error(ErrorCode::InvalidArgument, "negative mixture weight");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "mixture weights do not sum to 1");
    }
    CMatrix acc(states[0].dim(), states[0].dim());
    for (std::size_t j = 0; j < states.size(); j++) {
        states[0].op().check_same_dims(states[j].op());
        if (weights[j] != 0.0) {
            acc.add_scaled(states[j].matrix(), weights[j]);
        }
    }
    return DensityOperator::trusted(HermitianOperator(states[0].dims(), acc));
}

inline DensityOperator barycentre(std::span<const DensityOperator> states) {
    std::vector<double> w(states.size(), 1.0 / static_cast<double>(states.size()));
    return mixture(states, w);
}

// ---------------------------------------------------------------------------
// Tensor structure.

inline HermitianOperator tensor(const HermitianOperator &a, const HermitianOperator &b) {
    std::vector<std::size_t> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    checked_total_dim(dims, "tensor");
    return HermitianOperator(std::move(dims), kron(a.matrix(), b.matrix()));
}

inline DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
    return DensityOperator::trusted(tensor(a.op(), b.op()));
}

template <typename Op>
Op tensor_all(std::span<const Op> factors) {
    if (factors.empty()) {
        throw Error(ErrorCode::InvalidArgument, "tensor of an empty list");
    }
    Op acc = factors[0];
    for (std::size_t i = 1; i < factors.size(); i++) {
        acc = tensor(acc, factors[i]);
    }
    return acc;
}

template <typename Op>
Op tensor_all(const std::vector<Op> &factors) {
    return tensor_all(std::span<const Op>(factors));
}

template <typename Op>
Op tensor_power(const Op &x, std::size_t n) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "tensor power 0");
    }
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < n; i++) {
        dims.insert(dims.end(), x.dims().begin(), x.dims().end());
    }
    checked_total_dim(dims, "tensor_power");
    Op acc = x;
    for (std::size_t i = 1; i < n; i++) {
        acc = tensor(acc, x);
    }
    return acc;
}

namespace detail {

inline std::vector<std::size_t> strides_of(const std::vector<std::size_t> &dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) {
        s[i - 1] = s[i] * dims[i];
    }
    return s;
}

inline std::vector<std::size_t> digits_of(std::size_t index, const std::vector<std::size_t> &dims) {
    std::vector<std::size_t> d(dims.size());
    for (std::size_t i = dims.size(); i-- > 0;) {
        d[i] = index % dims[i];
        index /= dims[i];
    }
    return d;
}

inline void check_factor_indices(const std::vector<std::size_t> &idx, std::size_t factors, bool allow_empty) {
    if (idx.empty() && !allow_empty) {
        throw Error(ErrorCode::BadSubsystem, "empty subsystem list");
    }
    std::vector<std::size_t> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorCode::BadSubsystem, "repeated subsystem index");
    }
    for (std::size_t i : sorted) {
        if (i >= factors) {
            throw Error(ErrorCode::BadSubsystem,
                        "subsystem " + std::to_string(i) + " out of range for " + std::to_string(factors) + " factors");
        }
    }
}

}  // namespace detail

/// Traces out every factor not listed in `keep`; kept factors stay in their
/// original order. An empty `keep` returns the scalar Tr[x].
inline HermitianOperator partial_trace(const HermitianOperator &x, std::vector<std::size_t> keep) {
    detail::check_factor_indices(keep, x.factors(), true);
    std::sort(keep.begin(), keep.end());
    const auto &dims = x.dims();
    std::vector<bool> kept(dims.size(), false);
    std::vector<std::size_t> kept_dims;
    for (std::size_t k : keep) {
        kept[k] = true;
        kept_dims.push_back(dims[k]);
    }
    std::size_t kdim = 1;
    for (std::size_t d : kept_dims) {
        kdim *= d;
    }
    const std::size_t tdim = x.dim() / kdim;

    // groups[t][a] = full index whose traced digits encode t and kept digits encode a
    std::vector<std::size_t> group(tdim * kdim);
    for (std::size_t full = 0; full < x.dim(); full++) {
        const auto digits = detail::digits_of(full, dims);
        std::size_t a = 0, t = 0;
        for (std::size_t i = 0; i < dims.size(); i++) {
            if (kept[i]) {
                a = a * dims[i] + digits[i];
            } else {
                t = t * dims[i] + digits[i];
            }
        }
        group[t * kdim + a] = full;
    }
    CMatrix out(kdim, kdim);
    const CMatrix &m = x.matrix();
    for (std::size_t t = 0; t < tdim; t++) {
        const std::size_t *g = &group[t * kdim];
        for (std::size_t a = 0; a < kdim; a++) {
            for (std::size_t b = 0; b < kdim; b++) {
                out(a, b) += m(g[a], g[b]);
            }
        }
    }
    return HermitianOperator(std::move(kept_dims), out);
}

inline DensityOperator partial_trace(const DensityOperator &x, std::vector<std::size_t> keep) {
    return DensityOperator::trusted(partial_trace(x.op(), std::move(keep)));
}

/// Transpose on the listed factors.
inline HermitianOperator partial_transpose(const HermitianOperator &x, const std::vector<std::size_t> &subsystems) {
    detail::check_factor_indices(subsystems, x.factors(), false);
    const auto &dims = x.dims();
    const auto strides = detail::strides_of(dims);
    std::vector<bool> flip(dims.size(), false);
    for (std::size_t s : subsystems) {
        flip[s] = true;
    }
    const std::size_t n = x.dim();
    CMatrix out(n, n);
    for (std::size_t r = 0; r < n; r++) {
        const auto rd = detail::digits_of(r, dims);
        for (std::size_t c = 0; c < n; c++) {
            const auto cd = detail::digits_of(c, dims);
            std::size_t r2 = 0, c2 = 0;
            for (std::size_t i = 0; i < dims.size(); i++) {
                r2 += (flip[i] ? cd[i] : rd[i]) * strides[i];
                c2 += (flip[i] ? rd[i] : cd[i]) * strides[i];
            }
            out(r2, c2) = x(r, c);
        }
    }
    return HermitianOperator(dims, out);
}

// ---------------------------------------------------------------------------
// Permutations of tensor factors.

/// Bijection on {0..n-1}; factor i is moved to position mapping[i].
class Permutation {
   public:
    explicit Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
        std::vector<bool> seen(mapping_.size(), false);
        for (std::size_t m : mapping_) {
            if (m >= mapping_.size() || seen[m]) {
                throw Error(ErrorCode::InvalidArgument, "permutation mapping is not a bijection");
            }
            seen[m] = true;
        }
    }
    static Permutation identity(std::size_t n) {
        std::vector<std::size_t> m(n);
        std::iota(m.begin(), m.end(), 0);
        return Permutation(std::move(m));
    }
    static Permutation transposition(std::size_t n, std::size_t i, std::size_t j) {
        std::vector<std::size_t> m(n);
        std::iota(m.begin(), m.end(), 0);
        std::swap(m.at(i), m.at(j));
        return Permutation(std::move(m));
    }

    std::size_t size() const noexcept {
        return mapping_.size();
    }
    std::size_t operator[](std::size_t i) const {
        return mapping_[i];
    }
    const std::vector<std::size_t> &mapping() const noexcept {
        return mapping_;
    }

   private:
    std::vector<std::size_t> mapping_;
};

/// All n! permutations in lexicographic order of their mapping.
inline std::vector<Permutation> all_permutations(std::size_t n) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), 0);
    std::vector<Permutation> out;
    do {
        out.emplace_back(m);
    } while (std::next_permutation(m.begin(), m.end()));
    return out;
}

namespace detail {

/// index_map[out] = in, for the relabelling that sends factor i to p[i].
inline std::vector<std::size_t> permutation_index_map(const Permutation &p, const std::vector<std::size_t> &dims) {
    if (p.size() != dims.size()) {
        throw Error(ErrorCode::BadSubsystem, "permutation size differs from factor count");
    }
    std::vector<std::size_t> out_dims(dims.size());
    for (std::size_t i = 0; i < dims.size(); i++) {
        out_dims[p[i]] = dims[i];
    }
    const auto in_strides = strides_of(dims);
    std::size_t total = 1;
    for (std::size_t d : dims) {
        total *= d;
    }
    std::vector<std::size_t> map(total);
    for (std::size_t o = 0; o < total; o++) {
        const auto od = digits_of(o, out_dims);
        std::size_t in = 0;
        for (std::size_t i = 0; i < dims.size(); i++) {
            in += od[p[i]] * in_strides[i];
        }
        map[o] = in;
    }
    return map;
}

}  // namespace detail

/// U_p x U_p^dagger, computed by index relabelling.
inline HermitianOperator permute_factors(const HermitianOperator &x, const Permutation &p) {
    const auto map = detail::permutation_index_map(p, x.dims());
    std::vector<std::size_t> out_dims(x.factors());
    for (std::size_t i = 0; i < x.factors(); i++) {
        out_dims[p[i]] = x.dims()[i];
    }
    const std::size_t n = x.dim();
    CMatrix out(n, n);
    for (std::size_t r = 0; r < n; r++) {
        for (std::size_t c = 0; c < n; c++) {
            out(r, c) = x(map[r], map[c]);
        }
    }
    return HermitianOperator(std::move(out_dims), out);
}

inline DensityOperator permute_factors(const DensityOperator &x, const Permutation &p) {
    return DensityOperator::trusted(permute_factors(x.op(), p));
}

/// The unitary U_p on (C^local_dim)^{tensor n}.
inline CMatrix permutation_unitary(const Permutation &p, std::size_t local_dim) {
    std::vector<std::size_t> dims(p.size(), local_dim);
    const std::size_t total = checked_total_dim(dims, "permutation_unitary");
    const auto map = detail::permutation_index_map(p, dims);
    CMatrix u(total, total);
    for (std::size_t o = 0; o < total; o++) {
        u(o, map[o]) = 1.0;
    }
    return u;
}

struct SymmetrizeOptions {
    /// Full-group averaging is used up to this many factors.
    std::size_t max_full_factors = 6;
    /// When > 0 and the factor count exceeds max_full_factors, average over
    /// this many uniformly sampled permutations instead of failing.
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// E_pi U_pi x U_pi^dagger over S_n (or a declared random sample of it).
inline HermitianOperator symmetrize(const HermitianOperator &x, SymmetrizeOptions options = {}) {
    const std::size_t n = x.factors();
    if (n == 0) {
        return x;
    }
    for (std::size_t d : x.dims()) {
        if (d != x.dims()[0]) {
            throw Error(ErrorCode::BadSubsystem, "symmetrize requires equal local dimensions");
        }
    }
    CMatrix acc(x.dim(), x.dim());
    if (n <= options.max_full_factors) {
        const auto perms = all_permutations(n);
        for (const auto &p : perms) {
            acc += permute_factors(x, p).matrix();
        }
        acc *= cplx(1.0 / static_cast<double>(perms.size()));
        return HermitianOperator(x.dims(), acc);
    }
    if (options.samples == 0) {
        throw Error(ErrorCode::CapExceeded,
                    "symmetrize over " + std::to_string(n) + " factors needs sampling mode");
    }
    std::mt19937_64 rng(options.seed);
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), 0);
    for (std::size_t s = 0; s < options.samples; s++) {
        std::shuffle(m.begin(), m.end(), rng);
        acc += permute_factors(x, Permutation(m)).matrix();
    }
    acc *= cplx(1.0 / static_cast<double>(options.samples));
    return HermitianOperator(x.dims(), acc);
}

inline DensityOperator symmetrize(const DensityOperator &x, SymmetrizeOptions options = {}) {
    return DensityOperator::trusted(symmetrize(x.op(), options));
}

/// Largest ||U_p x U_p^dagger - x||_max over all permutations of the factors.
inline double permutation_asymmetry(const HermitianOperator &x) {
    double worst = 0;
    for (const auto &p : all_permutations(x.factors())) {
        worst = std::max(worst, (permute_factors(x, p).matrix() - x.matrix()).max_abs());
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Depolarising map.

/// (1 - delta) x + delta Tr[x] tau. On unit-trace inputs this is the usual
/// (1 - delta) x + delta tau.
inline HermitianOperator depolarise(const HermitianOperator &x, double delta, const HermitianOperator &tau) {
    if (delta < 0.0 || delta > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "depolarising parameter outside [0,1]");
    }
    if (x.dims() != tau.dims()) {
        throw Error(ErrorCode::DimMismatch, "depolarise: tau dims differ from input");
    }
    CMatrix out = x.matrix() * cplx(1.0 - delta);
    out.add_scaled(tau.matrix(), delta * x.trace());
    return HermitianOperator(x.dims(), out);
}

inline DensityOperator depolarise(const DensityOperator &x, double delta, const DensityOperator &tau) {
    return DensityOperator::trusted(depolarise(x.op(), delta, tau.op()));
}

/// || [a, b] ||_max, used for commutation assertions.
inline double commutator_norm(const CMatrix &a, const CMatrix &b) {
    return (a * b - b * a).max_abs();
}

}  // namespace steinlab
