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

#include <gtest/gtest.h>

#include "steinlab/composite.hpp"
#include "steinlab/lp.hpp"
#include "steinlab/random.hpp"

namespace steinlab {
namespace {

// Commuting families: beta = min_t max_j q_j.t  s.t.  p_i.t >= 1-eps, 0 <= t <= 1.
double classical_composite_lp(const std::vector<std::vector<double>> &ps, const std::vector<std::vector<double>> &qs,
                              double eps) {
    const std::size_t d = ps.front().size();
    LinearProgram lp;
    lp.cost.assign(d + 1, 0.0);
    lp.cost[d] = 1;
    for (const auto &q : qs) {
        std::vector<double> r(q);
        r.push_back(-1);
        lp.add_row(r, RowSense::LessEqual, 0);
    }
    for (const auto &p : ps) {
        std::vector<double> r(p);
        r.push_back(0);
        lp.add_row(r, RowSense::GreaterEqual, 1 - eps);
    }
    for (std::size_t x = 0; x < d; x++) {
        std::vector<double> r(d + 1, 0.0);
        r[x] = 1;
        lp.add_row(r, RowSense::LessEqual, 1);
    }
    const auto res = solve_lp(lp);
    EXPECT_EQ(res.status, LpStatus::Optimal);
    return res.value;
}

TEST(Composite, CommutingFamiliesMatchLp) {
    Rng rng(21);
    for (int t = 0; t < 12; t++) {
        const std::size_t d = 2 + t % 4;
        std::vector<std::vector<double>> ps, qs;
        std::vector<DensityOperator> a, b;
        for (int i = 0; i < 1 + t % 3; i++) {
            ps.push_back(random_simplex_point(d, rng));
            a.push_back(DensityOperator::diagonal({d}, ps.back()));
        }
        for (int i = 0; i < 1 + (t / 3) % 3; i++) {
            qs.push_back(random_simplex_point(d, rng));
            b.push_back(DensityOperator::diagonal({d}, qs.back()));
        }
        for (double eps : {0.05, 0.2}) {
            const double oracle = classical_composite_lp(ps, qs, eps);
            const auto r = dh_eps_composite(a, b, eps);
            EXPECT_TRUE(r.beta.contains(oracle, 1e-9))
                << "t=" << t << " [" << r.beta.lower << ", " << r.beta.upper << "] vs " << oracle;
            EXPECT_LT(r.beta.width(), 1e-6);
        }
    }
}

TEST(Composite, SingletonsDelegateToNeymanPearson) {
    Rng rng(3);
    const auto r = random_state({3}, rng), s = random_state({3}, rng);
    const auto c = dh_eps_composite(std::vector<DensityOperator>{r}, std::vector<DensityOperator>{s}, 0.1);
    const auto np = neyman_pearson_simple(r, s, 0.1);
    EXPECT_EQ(c.beta.upper, np.beta);
    EXPECT_EQ(c.beta.lower, np.beta_lower);
}

// Minimax: beta(co A, co B) = max over mixtures of the simple NP value.
TEST(Composite, QuantumQubitsMatchMinimaxGrid) {
    Rng rng(5);
    for (int t = 0; t < 3; t++) {
        const std::vector<DensityOperator> a = {random_state({2}, rng), random_state({2}, rng)};
        const std::vector<DensityOperator> b = {random_state({2}, rng), random_state({2}, rng)};
        const double eps = 0.15;
        double grid = 0;
        constexpr int kSteps = 80;
        for (int i = 0; i <= kSteps; i++) {
            for (int j = 0; j <= kSteps; j++) {
                const std::vector<double> u = {i / double(kSteps), 1 - i / double(kSteps)};
                const std::vector<double> w = {j / double(kSteps), 1 - j / double(kSteps)};
                grid = std::max(grid, neyman_pearson_simple(mixture(a, u), mixture(b, w), eps).beta);
            }
        }
        const auto r = dh_eps_composite(a, b, eps);
        EXPECT_GE(r.beta.upper, grid - 1e-9);
        EXPECT_LT(r.beta.upper - grid, 2e-3);
        EXPECT_LT(r.beta.width(), 1e-6);
    }
}

TEST(Composite, ConvexificationDoesNotMoveBeta) {
    Rng rng(8);
    std::vector<DensityOperator> a = {random_state({2, 2}, rng), random_state({2, 2}, rng)};
    std::vector<DensityOperator> b = {random_state({2, 2}, rng), random_state({2, 2}, rng), random_state({2, 2}, rng)};
    const auto base = dh_eps_composite(a, b, 0.1);
    const std::vector<double> w = {0.3, 0.7};
    a.push_back(mixture(std::vector<DensityOperator>{a[0], a[1]}, w));
    b.push_back(mixture(std::vector<DensityOperator>{b[0], b[2]}, w));
    const auto conv = dh_eps_composite(a, b, 0.1);
    EXPECT_LT(std::max(base.beta.lower, conv.beta.lower) - std::min(base.beta.upper, conv.beta.upper), 1e-5);
}

TEST(Composite, SelfTestIsOneMinusEps) {
    Rng rng(9);
    const std::vector<DensityOperator> a = {random_state({3}, rng), random_state({3}, rng)};
    const auto r = dh_eps_composite(a, a, 0.3);
    EXPECT_TRUE(r.beta.contains(0.7, 1e-7));
}

TEST(Composite, Errors) {
    Rng rng(1);
    const std::vector<DensityOperator> a = {random_state({2}, rng)};
    EXPECT_THROW(dh_eps_composite(a, a, 0.0), Error);
    EXPECT_THROW(dh_eps_composite(a, a, 1.0), Error);
    const std::vector<DensityOperator> many(65, DensityOperator::maximally_mixed({2}));
    try {
        dh_eps_composite(a, many, 0.1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
    }
    const std::vector<DensityOperator> other = {DensityOperator::maximally_mixed({3})};
    EXPECT_THROW(dh_eps_composite(a, other, 0.1), Error);
}

}  // namespace
}  // namespace steinlab
