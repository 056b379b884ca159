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

#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "steinlab/families.hpp"
#include "steinlab/report.hpp"

namespace steinlab {

struct AxiomAuditOptions {
    std::size_t max_n = 2;
    /// Random members drawn per level, on top of up to `samples` extreme points.
    std::size_t samples = 4;
    std::uint64_t seed = 1;
    std::vector<double> deltas = {0.25, 0.5, 0.75, 1.0};
    /// Filter grid: F = (1 - lambda) G + lambda I.
    std::vector<double> lambdas = {1.0, 0.999, 0.99, 0.95};
    double tol = 1e-6;
};

struct AxiomAudit {
    std::vector<CheckReport> reports;
    /// Largest 1 - lambda at which every filtered member stayed in the cone.
    double filter_radius = 0;
    /// c as used: smallest nonzero eigenvalue of tau minus 1e-10.
    double c = 0;

    const CheckReport *find(const std::string &id) const {
        for (const auto &r : reports) {
            if (r.id == id) {
                return &r;
            }
        }
        return nullptr;
    }
};

namespace detail {

/// Membership slack: 0 for members, otherwise minus the exact LP residual
/// (stabiliser hulls), the Frobenius distance to the hull (other hulls) or
/// the iid factorisation defect.
inline double membership_slack(const StateFamily &f, const HermitianOperator &rho) {
    if (f.kind() == FamilyKind::IIDPower) {
        // rho must equal s^{(x)n} for its one-copy marginal s, with s in co(base)
        const std::size_t n = f.n();
        const std::size_t per = f.base().front().dims().size();
        std::vector<std::size_t> keep(per);
        std::iota(keep.begin(), keep.end(), 0);
        const HermitianOperator s = partial_trace(rho, keep);
        const HermitianOperator power = tensor_power(s, n);
        const double defect = (power.matrix() - rho.matrix()).frobenius_norm();
        const auto m = hull_lp_membership(f.base(), s);
        return -(defect + m.residual);
    }
    if (f.kind() == FamilyKind::SeparableOuter) {
        return family_contains(f, rho) ? 0.0 : -1.0;
    }
    const auto ext = f.extreme_points();
    if (f.kind() == FamilyKind::StabiliserHull) {
        return -hull_lp_membership(ext, rho).residual;
    }
    return -hull_distance(ext, rho);
}

/// Extreme points plus random mixtures: members of the family at its level.
inline std::vector<DensityOperator> sample_members(const StateFamily &f, std::size_t samples, Rng &rng) {
    std::vector<DensityOperator> out;
    if (f.kind() == FamilyKind::SeparableOuter) {
        return out;
    }
    if (f.kind() == FamilyKind::IIDPower) {
        for (std::size_t s = 0; s < samples; s++) {
            const auto w = random_simplex_point(f.base().size(), rng);
            out.push_back(tensor_power(mixture(f.base(), w), f.n()));
        }
        return out;
    }
    const auto ext = f.extreme_points();
    std::uniform_int_distribution<std::size_t> pick(0, ext.size() - 1);
    for (std::size_t s = 0; s < std::min(samples, ext.size()); s++) {
        out.push_back(ext[pick(rng)]);
    }
    for (std::size_t s = 0; s < samples; s++) {
        std::vector<DensityOperator> pts;
        for (int t = 0; t < 3; t++) {
            pts.push_back(ext[pick(rng)]);
        }
        out.push_back(mixture(pts, random_simplex_point(pts.size(), rng)));
    }
    return out;
}

/// (M_{delta, tau_k})^{(x)m} applied blockwise, expanded as a sum over the
/// subsets of blocks that get replaced by tau_k.
inline HermitianOperator blockwise_depolarise(const HermitianOperator &rho, std::size_t m, double delta,
                                              const HermitianOperator &tau_k) {
    const std::size_t factors = rho.factors();
    const std::size_t per_block = factors / m;
    if (per_block * m != factors || tau_k.factors() != per_block) {
        throw Error(ErrorCode::BadSubsystem, "block structure does not match the operator");
    }
    CMatrix acc(rho.dim(), rho.dim());
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); mask++) {
        const auto replaced = static_cast<std::size_t>(std::popcount(mask));
        const double coeff = std::pow(1.0 - delta, static_cast<double>(m - replaced)) *
                             std::pow(delta, static_cast<double>(replaced));
        if (coeff == 0.0) {
            continue;
        }
        if (replaced == 0) {
            acc.add_scaled(rho.matrix(), coeff);
            continue;
        }
        std::vector<std::size_t> keep, moved;
        for (std::size_t b = 0; b < m; b++) {
            for (std::size_t f = b * per_block; f < (b + 1) * per_block; f++) {
                ((mask >> b) & 1 ? moved : keep).push_back(f);
            }
        }
        const HermitianOperator fill = tensor_power(tau_k, replaced);
        const HermitianOperator x = keep.empty() ? fill.scaled(rho.trace()) : tensor(partial_trace(rho, keep), fill);
        // x has factors [keep..., moved...]; send each back to its position
        std::vector<std::size_t> mapping;
        mapping.insert(mapping.end(), keep.begin(), keep.end());
        mapping.insert(mapping.end(), moved.begin(), moved.end());
        acc.add_scaled(permute_factors(x, Permutation(mapping)).matrix(), coeff);
    }
    return HermitianOperator(rho.dims(), acc);
}

/// Lifts a permutation of copies to the factors when each copy spans `per`
/// tensor factors.
inline Permutation copy_permutation(const Permutation &p, std::size_t per) {
    std::vector<std::size_t> mapping;
    for (std::size_t i = 0; i < p.size(); i++) {
        for (std::size_t j = 0; j < per; j++) {
            mapping.push_back(p[i] * per + j);
        }
    }
    return Permutation(mapping);
}

inline HermitianOperator sqrt_psd(const HermitianOperator &x) {
    return apply_function(x, [](double v) { return std::sqrt(std::max(0.0, v)); });
}

}  // namespace detail

/// Audits the four axioms on a family sequence n -> family.at(n), n <= max_n,
/// with tau the depolarising state. Stabiliser membership is the exact hull
/// LP; other hulls use the Frank-Wolfe distance. The filtering axiom is
/// sampled on a lambda grid.
inline AxiomAudit axiom_audit(const StateFamily &family, const DensityOperator &tau, const AxiomAuditOptions &opt) {
    AxiomAudit out;
    {
        const auto es = eig_hermitian(tau);
        double lmin = 1.0;
        for (double v : es.values) {
            if (v > kZeroCutoff) {
                lmin = std::min(lmin, v);
            }
        }
        out.c = lmin - 1e-10;
    }
    const std::size_t max_n = opt.max_n;
    auto level = [&](std::size_t n) { return family.at(n); };
    auto per_copy_of = [](const StateFamily &f) { return f.level_dims().size() / f.n(); };
    Rng rng(opt.seed);

    CheckReport tau_in("axiom-QI-tau", "depolarising state belongs to the first level", opt.seed, opt.tol);
    tau_in.record(detail::membership_slack(level(1), tau));
    out.reports.push_back(tau_in.finish());

    CheckReport qia("axiom-QI-a", "support of members inside supp(tau)^n", opt.seed, opt.tol);
    CheckReport qib("axiom-QI-b", "blockwise depolarising toward tau^k keeps membership", opt.seed, opt.tol);
    CheckReport qii("axiom-QII", "closed under tensor powers", opt.seed, opt.tol);
    CheckReport qiii("axiom-QIII", "closed under permutations", opt.seed, opt.tol);
    CheckReport qiv("axiom-QIV", "filtered partial traces stay in the cone", opt.seed, opt.tol);
    CheckReport prod("tensor-product-closure", "closed under arbitrary tensor products (informational)", opt.seed,
                     opt.tol);

    std::vector<std::vector<DensityOperator>> members(max_n + 1);
    for (std::size_t n = 1; n <= max_n; n++) {
        members[n] = detail::sample_members(level(n), opt.samples, rng);
    }

    for (std::size_t n = 1; n <= max_n; n++) {
        const auto fam = level(n);
        const auto tau_n = tensor_power(tau.op(), n);
        const auto proj = support_projector(tau_n, kZeroCutoff);
        for (std::size_t i = 0; i < members[n].size(); i++) {
            const auto &rho = members[n][i];
            const double leak = std::abs(rho.op().trace() - trace_product_real(proj.matrix(), rho.matrix()));
            qia.record(-leak, {{"n", n}, {"member", i}});
        }
        // (b): every factorisation n = m k
        for (std::size_t k = 1; k <= n; k++) {
            if (n % k != 0) {
                continue;
            }
            const std::size_t m = n / k;
            const auto tau_k = tensor_power(tau.op(), k);
            for (std::size_t i = 0; i < members[n].size(); i++) {
                for (double delta : opt.deltas) {
                    const auto y = detail::blockwise_depolarise(members[n][i], m, delta, tau_k);
                    qib.record(detail::membership_slack(fam, y),
                               {{"n", n}, {"m", m}, {"k", k}, {"member", i}, {"delta", delta}});
                }
            }
        }
        // II: rho_k^{(x)m} in F_{mk}
        for (std::size_t k = 1; 2 * k <= max_n; k++) {
            for (std::size_t m = 2; m * k <= max_n; m++) {
                if (m * k != n) {
                    continue;
                }
                for (std::size_t i = 0; i < members[k].size(); i++) {
                    const auto y = tensor_power(members[k][i].op(), m);
                    qii.record(detail::membership_slack(fam, y), {{"k", k}, {"m", m}, {"member", i}});
                }
            }
        }
        // tensor products of distinct members (not an axiom)
        for (std::size_t k = 1; 2 * k == n; k++) {
            const auto &ms = members[k];
            if (ms.size() >= 2) {
                const auto y = tensor(ms.front().op(), ms.back().op());
                prod.record(detail::membership_slack(fam, y), {{"k", k}});
            }
        }
        // III
        if (n >= 2) {
            for (std::size_t i = 0; i < members[n].size(); i++) {
                for (const auto &p : all_permutations(n)) {
                    const auto y = permute_factors(members[n][i].op(), detail::copy_permutation(p, per_copy_of(fam)));
                    qiii.record(detail::membership_slack(fam, y), {{"n", n}, {"member", i}, {"mapping", p.mapping()}});
                }
            }
        }
    }

    // IV: Tr_{last k}[rho_{n+k} (I (x) F_k)] in cone(F_n)
    std::vector<double> worst_per_lambda(opt.lambdas.size(), 0.0);
    bool any_iv = false;
    for (std::size_t total = 2; total <= max_n; total++) {
        for (std::size_t k = 1; k < total; k++) {
            const std::size_t n = total - k;
            const auto fam_n = level(n);
            const auto fam_t = level(total);
            const auto tdims = fam_t.level_dims();
            const std::size_t factors = tdims.size();
            const std::size_t per_copy = factors / total;
            std::vector<std::size_t> kdims(tdims.end() - static_cast<std::ptrdiff_t>(k * per_copy), tdims.end());
            const std::size_t dk = checked_total_dim(kdims, "filter");
            const auto g = random_state(kdims, rng).op().scaled(static_cast<double>(dk));
            std::vector<std::size_t> keep(factors - k * per_copy);
            std::iota(keep.begin(), keep.end(), 0);
            for (std::size_t i = 0; i < members[total].size(); i++) {
                for (std::size_t li = 0; li < opt.lambdas.size(); li++) {
                    const double lambda = opt.lambdas[li];
                    const auto f = g.scaled(1.0 - lambda) + HermitianOperator::identity(kdims).scaled(lambda);
                    const auto root = detail::sqrt_psd(f);
                    const auto lift = tensor(HermitianOperator::identity(fam_n.level_dims()), root);
                    const HermitianOperator sandwiched(members[total][i].dims(),
                                                       lift.matrix() * members[total][i].matrix() * lift.matrix());
                    auto y = partial_trace(sandwiched, keep);
                    const double tr = y.trace();
                    if (tr <= kZeroCutoff) {
                        continue;  // the zero operator is in every cone
                    }
                    y = y.scaled(1.0 / tr).with_dims(fam_n.level_dims());
                    const double s = detail::membership_slack(fam_n, y);
                    worst_per_lambda[li] = std::min(worst_per_lambda[li], s);
                    any_iv = true;
                    if (lambda == 1.0) {
                        qiv.record(s, {{"n", n}, {"k", k}, {"member", i}, {"lambda", lambda}});
                    }
                }
            }
        }
    }
    // the grid below lambda = 1 only ever upgrades to pass or inconclusive
    double radius = 0;
    bool all_grid = true;
    for (std::size_t li = 0; li < opt.lambdas.size(); li++) {
        if (worst_per_lambda[li] >= -opt.tol) {
            radius = std::max(radius, 1.0 - opt.lambdas[li]);
        } else {
            all_grid = false;
        }
    }
    out.filter_radius = radius;
    qiv.details["grid_radius"] = radius;
    qiv.details["grid_lambdas"] = opt.lambdas;
    qiv.details["pass_at_grid"] = all_grid && any_iv;
    if (!any_iv || !all_grid) {
        qiv.inconclusive = true;
    }

    for (auto *r : {&qia, &qib, &qii, &qiii, &qiv, &prod}) {
        out.reports.push_back(r->finish());
    }
    return out;
}

}  // namespace steinlab
