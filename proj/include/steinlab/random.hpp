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

#include <cstdint>
#include <random>
#include <vector>

#include "steinlab/operator.hpp"

namespace steinlab {

using Rng = std::mt19937_64;

inline CMatrix complex_gaussian(std::size_t rows, std::size_t cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(rows, cols);
    for (auto &v : g.data()) {
        const double re = normal(rng);
        const double im = normal(rng);
        v = cplx(re, im);
    }
    return g;
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal folded back into Q.
inline CMatrix random_unitary(std::size_t n, Rng &rng) {
    CMatrix q = complex_gaussian(n, n, rng);
    // modified Gram-Schmidt on columns
    for (std::size_t j = 0; j < n; j++) {
        for (std::size_t k = 0; k < j; k++) {
            cplx proj = 0;
            for (std::size_t r = 0; r < n; r++) {
                proj += std::conj(q(r, k)) * q(r, j);
            }
            for (std::size_t r = 0; r < n; r++) {
                q(r, j) -= proj * q(r, k);
            }
        }
        double norm = 0;
        for (std::size_t r = 0; r < n; r++) {
            norm += std::norm(q(r, j));
        }
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < n; r++) {
            q(r, j) /= norm;
        }
    }
    return q;
}

inline std::vector<cplx> random_vector(std::size_t n, Rng &rng) {
    CMatrix g = complex_gaussian(n, 1, rng);
    return {g.data().begin(), g.data().end()};
}

inline DensityOperator random_pure_state(std::vector<std::size_t> dims, Rng &rng) {
    const std::size_t total = checked_total_dim(dims, "random_pure_state");
    const auto v = random_vector(total, rng);
    return DensityOperator::pure(std::move(dims), v);
}

/// A A^dagger / Tr with A = U G, U Haar and G complex Gaussian of the given
/// rank (full rank by default): generic full-rank instances.
inline DensityOperator random_state(std::vector<std::size_t> dims, Rng &rng, std::size_t rank = 0) {
    const std::size_t total = checked_total_dim(dims, "random_state");
    if (rank == 0 || rank > total) {
        rank = total;
    }
    const CMatrix a = random_unitary(total, rng) * complex_gaussian(total, rank, rng);
    CMatrix m = a * a.adjoint();
    m *= cplx(1.0 / m.trace().real());
    return DensityOperator::trusted(HermitianOperator(std::move(dims), m));
}

/// Random diagonal (commuting) state with full support.
inline DensityOperator random_diagonal_state(std::vector<std::size_t> dims, Rng &rng) {
    const std::size_t total = checked_total_dim(dims, "random_diagonal_state");
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> p(total);
    double s = 0;
    for (auto &x : p) {
        x = expo(rng) + 1e-3;
        s += x;
    }
    for (auto &x : p) {
        x /= s;
    }
    return DensityOperator::trusted(HermitianOperator::diagonal(std::move(dims), p));
}

/// Random point of the probability simplex (flat Dirichlet).
inline std::vector<double> random_simplex_point(std::size_t k, Rng &rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(k);
    double s = 0;
    for (auto &x : w) {
        x = expo(rng);
        s += x;
    }
    for (auto &x : w) {
        x /= s;
    }
    return w;
}

}  // namespace steinlab
