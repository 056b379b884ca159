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

#include <array>
#include <cmath>
#include <set>

#include "steinlab/families.hpp"
#include "steinlab/random.hpp"

namespace steinlab {
namespace {

std::array<double, 3> bloch(const HermitianOperator &r) {
    return {2 * r(0, 1).real(), -2 * r(0, 1).imag(), (r(0, 0) - r(1, 1)).real()};
}

double binom(std::size_t n, std::size_t k) {
    double out = 1;
    for (std::size_t i = 1; i <= k; i++) {
        out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return out;
}

TEST(Types, CountIsStarsAndBars) {
    for (std::size_t k = 1; k <= 4; k++) {
        for (std::size_t n = 1; n <= 5; n++) {
            const auto types = enumerate_types(k, n);
            EXPECT_EQ(static_cast<double>(types.size()), binom(n + k - 1, k - 1));
            EXPECT_EQ(type_count(k, n), binom(n + k - 1, k - 1));
            double total = 0;
            for (const auto &v : types) {
                EXPECT_EQ(v.n(), n);
                total += v.class_size();
            }
            EXPECT_NEAR(total, std::pow(static_cast<double>(k), static_cast<double>(n)), 1e-9);
        }
    }
}

TEST(Types, ClassStateOfClassicalBase) {
    const std::vector<DensityOperator> base = {DensityOperator::basis({2}, 0), DensityOperator::basis({2}, 1)};
    const auto g = type_class_state(base, NType(2, {1, 1}));
    const std::vector<double> expect = {0, 0.5, 0.5, 0};
    EXPECT_LT((g.matrix() - CMatrix::diagonal(expect)).max_abs(), 1e-15);
}

// sum_V |T_V| gamma_V = (sum_x sigma_x)^{(x)n}
TEST(Types, GammaStatesResolveThePower) {
    Rng rng(4);
    const std::vector<DensityOperator> base = {random_state({2}, rng), random_state({2}, rng), random_state({2}, rng)};
    const std::size_t n = 3;
    CMatrix lhs(8, 8);
    for (const auto &[v, g] : av_hull_symmetric_decomposition(base, n)) {
        lhs.add_scaled(g.matrix(), v.class_size());
    }
    CMatrix s = base[0].matrix() + base[1].matrix() + base[2].matrix();
    const CMatrix rhs = kron(kron(s, s), s);
    EXPECT_LT((lhs - rhs).max_abs(), 1e-12);
}

TEST(Types, IidGridHasOnePowerPerType) {
    Rng rng(5);
    const std::vector<DensityOperator> base = {random_state({2}, rng), random_state({2}, rng)};
    const auto grid = iid_type_grid(base, 3);
    ASSERT_EQ(grid.size(), 4u);
    // V = (3,0) is base[0]^{(x)3}
    bool found = false;
    for (const auto &g : grid) {
        found = found || (g.matrix() - tensor_power(base[0], 3).matrix()).max_abs() < 1e-14;
    }
    EXPECT_TRUE(found);
}

TEST(Measures, ValidationAndCaratheodory) {
    EXPECT_THROW(DiscreteMeasure({DensityOperator::maximally_mixed({2})}, {0.5}), Error);
    Rng rng(6);
    std::vector<DensityOperator> pts;
    for (int i = 0; i < 12; i++) {
        pts.push_back(random_state({2}, rng));
    }
    const auto mu = DiscreteMeasure::uniform(pts);
    const auto red = caratheodory_reduce(mu);
    EXPECT_LE(red.size(), 4u);  // 3 real coordinates + 1
    EXPECT_LT((red.barycentre().matrix() - mu.barycentre().matrix()).max_abs(), 1e-10);
}

TEST(Measures, IidMixtureOfPointMassIsPower) {
    Rng rng(7);
    const auto s = random_state({2}, rng);
    EXPECT_LT((iid_mixture_state(DiscreteMeasure::point_mass(s), 3).matrix() - tensor_power(s, 3).matrix()).max_abs(),
              1e-14);
}

TEST(DeltaCover, EveryStateIsDominated) {
    Rng rng(8);
    std::vector<DensityOperator> base;
    for (int i = 0; i < 6; i++) {
        base.push_back(random_state({2}, rng));
    }
    for (double delta : {0.1, 0.5, 1.0}) {
        const auto cover = delta_cover(base, delta);
        ASSERT_EQ(cover.assignment.size(), base.size());
        for (std::size_t i = 0; i < base.size(); i++) {
            const auto &c = cover.centers.at(cover.assignment[i]);
            const CMatrix diff = c.matrix() * cplx(std::pow(2.0, delta)) - base[i].matrix();
            EXPECT_GE(min_eigenvalue(HermitianOperator({2}, diff)), -1e-12);
        }
    }
    EXPECT_THROW(delta_cover(base, 0.0), Error);
}

TEST(Stabiliser, CountsMatchOrderFormula) {
    EXPECT_EQ(stabiliser_states(1).size(), 6u);
    EXPECT_EQ(stabiliser_states(2).size(), 60u);
    // 2^n prod_{k=1..n} (2^k + 1)
    EXPECT_EQ(stabiliser_count_formula(1), 2u * 3u);
    EXPECT_EQ(stabiliser_count_formula(2), 4u * 3u * 5u);
    EXPECT_THROW(stabiliser_states(3), Error);
}

TEST(Stabiliser, SingleQubitStatesArePauliEigenstates) {
    std::set<std::array<int, 3>> seen;
    for (const auto &s : stabiliser_states(1)) {
        const auto b = bloch(s.op());
        std::array<int, 3> r;
        for (int k = 0; k < 3; k++) {
            r[k] = static_cast<int>(std::lround(b[k]));
            EXPECT_NEAR(b[k], r[k], 1e-12);
        }
        EXPECT_EQ(std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]), 1);
        seen.insert(r);
    }
    EXPECT_EQ(seen.size(), 6u);
}

TEST(Stabiliser, BarycentresAreMaximallyMixed) {
    EXPECT_LT((barycentre(stabiliser_states(1)).matrix() - DensityOperator::maximally_mixed({2}).matrix()).max_abs(),
              1e-12);
    EXPECT_LT(
        (barycentre(stabiliser_states(2)).matrix() - DensityOperator::maximally_mixed({2, 2}).matrix()).max_abs(),
        1e-12);
    for (const auto &s : stabiliser_states(2)) {
        EXPECT_NEAR(max_eigenvalue(s.op()), 1.0, 1e-12);
    }
}

// The single-qubit stabiliser hull is the octahedron |x|+|y|+|z| <= 1.
TEST(HullMembership, OctahedronOracle) {
    const auto ext = stabiliser_states(1);
    Rng rng(9);
    int inside = 0;
    for (int t = 0; t < 40; t++) {
        const auto r = random_state({2}, rng);
        const auto b = bloch(r.op());
        const double l1 = std::abs(b[0]) + std::abs(b[1]) + std::abs(b[2]);
        if (std::abs(l1 - 1) < 1e-6) {
            continue;
        }
        const auto m = hull_lp_membership(ext, r.op());
        EXPECT_EQ(m.member, l1 < 1) << "l1=" << l1;
        inside += l1 < 1;
        if (m.member) {
            EXPECT_NEAR(hull_distance(ext, r.op()), 0.0, 1e-5);
        } else {
            EXPECT_GT(hull_distance(ext, r.op()), 0.0);
        }
    }
    EXPECT_GT(inside, 0);
    // magic state
    const std::vector<cplx> t_state = {1 / std::sqrt(2.0), std::polar(1 / std::sqrt(2.0), M_PI / 4)};
    EXPECT_FALSE(hull_lp_membership(ext, DensityOperator::pure({2}, t_state).op()).member);
}

// Werner states are separable iff p <= 1/3; PPT decides it for two qubits.
TEST(Separable, WernerThreshold) {
    const std::vector<cplx> psi = {0, 1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0};
    const auto singlet = DensityOperator::pure({2, 2}, psi);
    const auto mm = DensityOperator::maximally_mixed({2, 2});
    for (double p : {0.0, 0.2, 0.33, 0.34, 0.5, 1.0}) {
        const std::vector<DensityOperator> parts = {singlet, mm};
        const std::vector<double> w = {p, 1 - p};
        EXPECT_EQ(separable_outer_check(mixture(parts, w).op(), {2, 2}), p <= 1.0 / 3) << p;
    }
}

TEST(StateFamily, Levels) {
    Rng rng(10);
    const std::vector<DensityOperator> base = {random_state({2}, rng), random_state({2}, rng)};
    const auto av = StateFamily::av(base, 1);
    EXPECT_EQ(av.at(2).extreme_points().size(), 4u);
    EXPECT_EQ(av.at(2).level_dims(), (std::vector<std::size_t>{2, 2}));
    const auto sep = StateFamily::separable_inner(2, 2, 3, 1);
    EXPECT_EQ(sep.base().size(), 4u + 3u);
    for (const auto &s : sep.base()) {
        EXPECT_TRUE(separable_outer_check(s.op(), {2, 2}));
        EXPECT_NEAR(max_eigenvalue(s.op()), 1.0, 1e-12);
    }
    EXPECT_EQ(StateFamily::stabiliser(1).extreme_points().size(), 6u);
    EXPECT_THROW(StateFamily::iid({}, 1), Error);
    EXPECT_THROW(StateFamily::av(base, 0), Error);
}

}  // namespace
}  // namespace steinlab
