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
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "steinlab/error.hpp"

namespace steinlab {

using cplx = std::complex<double>;

/// Plain (a+bi)(c+di). std::complex's operator* goes through the Annex G
/// inf/nan recovery path, which dominates the inner loops here; our inputs
/// are always finite.
inline cplx cmul(const cplx &x, const cplx &y) {
    return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

/// Dense row-major complex matrix. Small and deliberately plain: every
/// algorithm in the library works on dimensions of at most a few hundred.
class CMatrix {
   public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    }
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw Error(ErrorCode::DimMismatch, "matrix data size does not match shape");
        }
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; i++) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static CMatrix diagonal(std::span<const double> values) {
        CMatrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); i++) {
            m(i, i) = values[i];
        }
        return m;
    }

    std::size_t rows() const noexcept {
        return rows_;
    }
    std::size_t cols() const noexcept {
        return cols_;
    }
    bool square() const noexcept {
        return rows_ == cols_;
    }

    cplx &operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    const cplx &operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    std::span<cplx> data() noexcept {
        return data_;
    }
    std::span<const cplx> data() const noexcept {
        return data_;
    }

    CMatrix adjoint() const {
        CMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; r++) {
            for (std::size_t c = 0; c < cols_; c++) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    CMatrix transpose() const {
        CMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; r++) {
            for (std::size_t c = 0; c < cols_; c++) {
                out(c, r) = (*this)(r, c);
            }
        }
        return out;
    }

    cplx trace() const {
        cplx t = 0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); i++) {
            t += (*this)(i, i);
        }
        return t;
    }

    double frobenius_norm() const {
        double s = 0;
        for (const auto &v : data_) {
            s += std::norm(v);
        }
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0;
        for (const auto &v : data_) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }

    CMatrix &operator+=(const CMatrix &other) {
        check_same_shape(other);
        for (std::size_t i = 0; i < data_.size(); i++) {
            data_[i] += other.data_[i];
        }
        return *this;
    }
    CMatrix &operator-=(const CMatrix &other) {
        check_same_shape(other);
        for (std::size_t i = 0; i < data_.size(); i++) {
            data_[i] -= other.data_[i];
        }
        return *this;
    }
    CMatrix &operator*=(cplx s) {
        for (auto &v : data_) {
            v *= s;
        }
        return *this;
    }

    /// y += a * x, the workhorse of every mixture computation.
    void add_scaled(const CMatrix &x, double a) {
        check_same_shape(x);
        for (std::size_t i = 0; i < data_.size(); i++) {
            data_[i] += a * x.data_[i];
        }
    }

    friend CMatrix operator+(CMatrix a, const CMatrix &b) {
        a += b;
        return a;
    }
    friend CMatrix operator-(CMatrix a, const CMatrix &b) {
        a -= b;
        return a;
    }
    friend CMatrix operator*(CMatrix a, cplx s) {
        a *= s;
        return a;
    }
    friend CMatrix operator*(cplx s, CMatrix a) {
        a *= s;
        return a;
    }
    friend CMatrix operator*(const CMatrix &a, const CMatrix &b) {
        if (a.cols_ != b.rows_) {
            throw Error(ErrorCode::DimMismatch, "matrix product shape mismatch");
        }
        CMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; i++) {
            cplx *orow = &out.data_[i * b.cols_];
            for (std::size_t k = 0; k < a.cols_; k++) {
                const cplx aik = a.data_[i * a.cols_ + k];
                if (aik == cplx(0)) {
                    continue;
                }
                const cplx *brow = &b.data_[k * b.cols_];
                for (std::size_t j = 0; j < b.cols_; j++) {
                    orow[j] += cmul(aik, brow[j]);
                }
            }
        }
        return out;
    }

   private:
    void check_same_shape(const CMatrix &other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            throw Error(ErrorCode::DimMismatch, "matrix shapes differ");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Kronecker product.
inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ar++) {
        for (std::size_t ac = 0; ac < a.cols(); ac++) {
            const cplx s = a(ar, ac);
            if (s == cplx(0)) {
                continue;
            }
            for (std::size_t br = 0; br < b.rows(); br++) {
                for (std::size_t bc = 0; bc < b.cols(); bc++) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = cmul(s, b(br, bc));
                }
            }
        }
    }
    return out;
}

/// Re Tr[a b] for Hermitian a, b without forming the product.
inline double trace_product_real(const CMatrix &a, const CMatrix &b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw Error(ErrorCode::DimMismatch, "trace product shape mismatch");
    }
    double s = 0;
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            s += (a(i, k) * b(k, i)).real();
        }
    }
    return s;
}

/// (M + M^dagger) / 2.
inline CMatrix hermitian_part(const CMatrix &m) {
    if (!m.square()) {
        throw Error(ErrorCode::DimMismatch, "hermitian part of a non-square matrix");
    }
    CMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); r++) {
        for (std::size_t c = 0; c < m.cols(); c++) {
            out(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
        }
        out(r, r) = out(r, r).real();
    }
    return out;
}

}  // namespace steinlab
