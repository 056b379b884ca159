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

#include "steinlab/axioms.hpp"
#include "steinlab/random.hpp"

namespace steinlab {
namespace {

void expect_pass(const AxiomAudit &audit, const std::vector<std::string> &ids) {
    for (const auto &id : ids) {
        const auto *r = audit.find(id);
        ASSERT_NE(r, nullptr) << id;
        EXPECT_EQ(r->verdict, Verdict::Pass) << id << " worst slack " << r->worst_slack;
        EXPECT_GT(r->instances, 0u) << id;
    }
}

TEST(AxiomAudit, StabiliserOneQubit) {
    AxiomAuditOptions opt;
    opt.seed = 4;
    const auto audit = axiom_audit(StateFamily::stabiliser(1), DensityOperator::maximally_mixed({2}), opt);
    expect_pass(audit, {"axiom-QI-tau", "axiom-QI-a", "axiom-QI-b", "axiom-QII", "axiom-QIII", "axiom-QIV"});
    // smallest nonzero eigenvalue of I/2, minus the declared margin
    EXPECT_NEAR(audit.c, 0.5 - 1e-10, 1e-15);
}

TEST(AxiomAudit, StabiliserTwoQubits) {
    AxiomAuditOptions opt;
    opt.max_n = 2;
    opt.seed = 2;
    // tau lives on one copy (one qubit); level 2 is the two-qubit hull
    const auto audit = axiom_audit(StateFamily::stabiliser(2), DensityOperator::maximally_mixed({2}), opt);
    expect_pass(audit, {"axiom-QI-tau", "axiom-QI-a", "axiom-QI-b", "axiom-QII", "axiom-QIII"});
}

TEST(AxiomAudit, SeparableInnerClosure) {
    AxiomAuditOptions opt;
    opt.seed = 6;
    const auto audit =
        axiom_audit(StateFamily::separable_inner(2, 2, 2, 3), DensityOperator::maximally_mixed({4}), opt);
    expect_pass(audit, {"axiom-QII", "axiom-QIII"});
}

TEST(AxiomAudit, AvProductIsClosedUnderPowers) {
    Rng rng(1);
    const std::vector<DensityOperator> base = {random_state({2}, rng), random_state({2}, rng),
                                               DensityOperator::maximally_mixed({2})};
    AxiomAuditOptions opt;
    opt.seed = 8;
    const auto audit = axiom_audit(StateFamily::av(base, 1), DensityOperator::maximally_mixed({2}), opt);
    expect_pass(audit, {"axiom-QII"});
}

TEST(AxiomAudit, FailureIsReplayable) {
    // a single pure state cannot contain tau = I/2
    const auto fam = StateFamily::explicit_hull({DensityOperator::basis({2}, 0)});
    AxiomAuditOptions opt;
    opt.seed = 11;
    opt.max_n = 1;
    const auto a = axiom_audit(fam, DensityOperator::maximally_mixed({2}), opt);
    const auto b = axiom_audit(fam, DensityOperator::maximally_mixed({2}), opt);
    ASSERT_NE(a.find("axiom-QI-tau"), nullptr);
    EXPECT_EQ(a.find("axiom-QI-tau")->verdict, Verdict::Fail);
    ASSERT_EQ(a.reports.size(), b.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); i++) {
        EXPECT_EQ(a.reports[i].to_json().dump(), b.reports[i].to_json().dump());
    }
}

// On product inputs the blockwise map factorises.
TEST(Depolarise, BlockwiseMatchesProductOracle) {
    Rng rng(3);
    const auto tau = DensityOperator::maximally_mixed({2});
    const auto a = random_state({2}, rng), b = random_state({2}, rng);
    const auto x = tensor(a, b);
    for (double delta : {0.0, 0.3, 1.0}) {
        const auto expect = tensor(depolarise(a, delta, tau), depolarise(b, delta, tau));
        const auto got = detail::blockwise_depolarise(x.op(), 2, delta, tau.op());
        EXPECT_LT((got.matrix() - expect.matrix()).max_abs(), 1e-14) << delta;
    }
    EXPECT_THROW(detail::blockwise_depolarise(x.op(), 1, 0.5, tau.op()), Error);
}

}  // namespace
}  // namespace steinlab
