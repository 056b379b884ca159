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
#include <numeric>
#include <vector>

#include "steinlab/matrix.hpp"

namespace steinlab {

/// Eigenvalues sorted descending; column j of `vectors` belongs to values[j].
struct EigenSystem {
    std::vector<double> values;
    CMatrix vectors;

    /// V diag(f(values)) V^dagger.
    template <typename F>
    CMatrix reconstruct(F &&f) const {
        const std::size_t n = values.size();
        CMatrix out(n, n);
        for (std::size_t j = 0; j < n; j++) {
            const double w = f(values[j]);
            if (w == 0.0) {
                continue;
            }
            for (std::size_t r = 0; r < n; r++) {
                const cplx vr = w * vectors(r, j);
                for (std::size_t c = 0; c < n; c++) {
                    out(r, c) += vr * std::conj(vectors(c, j));
                }
            }
        }
        return out;
    }
};

struct JacobiOptions {
    double threshold = 1e-12;
    int max_sweeps = 100;
};

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
///
/// Each (p, q) rotation first removes the phase of A(p, q) and then applies the
/// real symmetric Schur rotation, so the iteration never leaves the Hermitian
/// manifold. Sweeps stop once the off-diagonal Frobenius norm drops below
/// `threshold` times the Frobenius norm of the input.
inline EigenSystem eig_jacobi(const CMatrix &input, JacobiOptions options = {}) {
    if (!input.square()) {
        throw Error(ErrorCode::DimMismatch, "eigendecomposition of a non-square matrix");
    }
    const std::size_t n = input.rows();
    CMatrix a = hermitian_part(input);
    CMatrix v = CMatrix::identity(n);
    const double scale = a.frobenius_norm();

    auto off_norm = [&]() {
        double s = 0;
        for (std::size_t r = 0; r < n; r++) {
            for (std::size_t c = r + 1; c < n; c++) {
                s += 2.0 * std::norm(a(r, c));
            }
        }
        return std::sqrt(s);
    };

    bool converged = scale == 0.0 || n < 2;
    for (int sweep = 0; !converged && sweep < options.max_sweeps; sweep++) {
        if (off_norm() <= options.threshold * scale) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300 || r <= 1e-18 * scale) {
                    continue;
                }
                const cplx e = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = tau >= 0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                          : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx ce = std::conj(e);
                const cplx jqp = -s * ce;
                const cplx jqq = c * ce;
                for (std::size_t k = 0; k < n; k++) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = akp * c + cmul(akq, jqp);
                    a(k, q) = akp * s + cmul(akq, jqq);
                }
                const cplx se = s * e;
                const cplx cee = c * e;
                for (std::size_t k = 0; k < n; k++) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk - cmul(se, aqk);
                    a(q, k) = s * apk + cmul(cee, aqk);
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; k++) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = vkp * c + cmul(vkq, jqp);
                    v(k, q) = vkp * s + cmul(vkq, jqq);
                }
            }
        }
    }
    if (!converged && off_norm() > options.threshold * scale) {
        throw Error(ErrorCode::EigFailure,
                    "Jacobi iteration did not converge within " + std::to_string(options.max_sweeps) +
                        " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
    EigenSystem out{std::vector<double>(n), CMatrix(n, n)};
    for (std::size_t j = 0; j < n; j++) {
        out.values[j] = a(order[j], order[j]).real();
        for (std::size_t r = 0; r < n; r++) {
            out.vectors(r, j) = v(r, order[j]);
        }
    }
    return out;
}

}  // namespace steinlab
