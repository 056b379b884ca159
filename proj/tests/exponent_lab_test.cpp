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

#include <cmath>
#include <numbers>

#include "steinlab/exponent_lab.hpp"
#include "steinlab/random.hpp"

namespace steinlab {
namespace {

TEST(AlternativeList, SizesByMode) {
    Rng rng(1);
    const std::vector<DensityOperator> base = {random_state({2}, rng), random_state({2}, rng), random_state({2}, rng)};
    for (std::size_t n = 1; n <= 3; n++) {
        EXPECT_EQ(alternative_list(base, AltMode::IID, n).size(), static_cast<std::size_t>(type_count(3, n)));
        EXPECT_EQ(alternative_list(base, AltMode::AV, n).size(), static_cast<std::size_t>(type_count(3, n)));
    }
    const std::vector<DensityOperator> one = {base[0]};
    const auto l = alternative_list(one, AltMode::AV, 3);
    ASSERT_EQ(l.size(), 1u);
    EXPECT_LT((l[0].matrix() - tensor_power(base[0], 3).matrix()).max_abs(), 1e-15);
    EXPECT_EQ(alt_mode_from_name("av"), AltMode::AV);
    EXPECT_THROW(alt_mode_from_name("both"), Error);
}

// Singleton vs singleton reduces to Neyman-Pearson on tensor powers.
TEST(Scan, SingletonReproducesNeymanPearson) {
    Rng rng(2);
    const auto r = random_state({2}, rng), s = random_state({2}, rng);
    const ListSequence a_seq = [&](std::size_t n) { return std::vector<DensityOperator>{tensor_power(r, n)}; };
    const std::vector<DensityOperator> b = {s};
    const auto scan = scan_exponents("single", a_seq, b, AltMode::IID, 0.1, {1, 2, 3, 4});
    ASSERT_EQ(scan.rows.size(), 4u);
    EXPECT_TRUE(scan.well_formed());
    const double d = umegaki(r, s);
    for (const auto &row : scan.rows) {
        const auto np = neyman_pearson_simple(tensor_power(r, row.n), tensor_power(s, row.n), 0.1);
        EXPECT_EQ(row.beta.upper, np.beta);
        EXPECT_EQ(row.beta.lower, np.beta_lower);
        EXPECT_NEAR(row.rate.lower, -std::log2(np.beta) / static_cast<double>(row.n), 1e-12);
        // additivity of D on products
        EXPECT_NEAR(row.relent.upper, d, 1e-9);
        EXPECT_GE(row.converse_slack, -1e-9);
    }
    const std::string csv = scan.to_csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,beta_lower,beta_upper,rate_lower,rate_upper,relent_lower,relent_upper");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Scan, MultiEpsSharesRelativeEntropy) {
    Rng rng(3);
    const std::vector<DensityOperator> a = {random_state({2}, rng)};
    const std::vector<DensityOperator> b = {random_state({2}, rng), random_state({2}, rng)};
    const ListSequence a_seq = [&](std::size_t n) { return alternative_list(a, AltMode::IID, n); };
    const auto scans = scan_exponents("multi", a_seq, b, AltMode::AV, std::vector<double>{0.05, 0.3}, {1, 2});
    ASSERT_EQ(scans.size(), 2u);
    for (std::size_t i = 0; i < 2; i++) {
        EXPECT_EQ(scans[0].rows[i].relent.upper, scans[1].rows[i].relent.upper);
        // larger eps -> smaller beta
        EXPECT_LE(scans[1].rows[i].beta.upper, scans[0].rows[i].beta.lower + 1e-12);
    }
}

TEST(Converse, EntropyTerm) {
    EXPECT_NEAR(converse_entropy(0.5), 1.0, 1e-15);
    EXPECT_NEAR(converse_entropy(0.1), -0.1 * std::log2(0.1) - 0.9 * std::log2(0.9), 1e-15);
    EXPECT_EQ(converse_entropy(0.7), 1.0);
}

TEST(Sandwich, TwoElementBaseHolds) {
    Rng rng(4);
    const std::vector<DensityOperator> base = {random_state({2}, rng), random_state({2}, rng)};
    const auto rho = random_state({2}, rng);
    for (std::size_t n = 1; n <= 3; n++) {
        const std::vector<DensityOperator> a = {tensor_power(rho, n)};
        const auto res = sandwich_av_iid(a, base, 2, 0.0, n);
        EXPECT_NEAR(res.correction, (1 + 2 * std::log2(n + 1.0)) / static_cast<double>(n), 1e-15);
        EXPECT_TRUE(res.report.passed()) << n;
        // the av hull contains the iid grid, so av <= iid
        EXPECT_LE(res.av.lower, res.iid.upper + 1e-9);
    }
}

TEST(Basel, WeightsAndMass) {
    EXPECT_NEAR(basel_weight(1), 6 / (std::numbers::pi * std::numbers::pi), 1e-15);
    EXPECT_NEAR(basel_weight(3), basel_weight(1) / 9, 1e-16);
    EXPECT_LT(basel_mass(1000), 1.0);
    EXPECT_NEAR(basel_mass(100000), 1.0, 1e-5);
}

TEST(Basel, MixRenormalisesAndMerges) {
    Rng rng(5);
    const auto s0 = random_state({2}, rng), s1 = random_state({2}, rng);
    std::vector<DiscreteMeasure> ms;
    for (int k = 0; k < 8; k++) {
        ms.push_back(k % 2 ? DiscreteMeasure::point_mass(s0) : DiscreteMeasure::uniform({s0, s1}));
    }
    const auto mix = basel_mix(ms);
    EXPECT_EQ(mix.size(), 2u);
    double total = 0;
    for (double w : mix.weights()) {
        total += w;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    // oracle: weight of s1 is sum over even k of c_k/2
    double expect = 0;
    for (int k = 0; k < 8; k += 2) {
        expect += basel_weight(k + 1) / basel_mass(8) / 2;
    }
    const std::size_t i1 = (mix.support()[0].matrix() - s1.matrix()).max_abs() < 1e-15 ? 0 : 1;
    EXPECT_NEAR(mix.weights()[i1], expect, 1e-14);
    EXPECT_THROW(basel_mix({}), Error);
}

TEST(Attacker, MeasureOverSingletonIsPointMass) {
    Rng rng(6);
    const auto r = random_state({2}, rng), s = random_state({2}, rng);
    const std::vector<DensityOperator> a = {tensor_power(r, 2)}, b = {s};
    const auto best = best_attacker_measure(a, b, 2);
    EXPECT_NEAR(best.measure.weights()[0], 1.0, 1e-15);
    EXPECT_NEAR(best.value.upper, 2 * umegaki(r, s), 1e-9);
}

TEST(Fekete, SubadditiveSequence) {
    // n a_n = n + sqrt(n) is subadditive
    std::vector<double> a;
    for (int n = 1; n <= 8; n++) {
        a.push_back(1 + 1 / std::sqrt(n));
    }
    const auto f = fekete_report(a, true);
    EXPECT_TRUE(f.violations.empty());
    EXPECT_EQ(f.candidate_n, 8u);
    EXPECT_NEAR(f.candidate, a.back(), 1e-15);
    // n a_n = n^2 is not
    std::vector<double> b = {1, 2, 3, 4};
    EXPECT_FALSE(fekete_report(b, true).violations.empty());
    EXPECT_THROW(fekete_report(std::vector<double>{1, 2}, true), Error);
}

}  // namespace
}  // namespace steinlab
