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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "steinlab/exponent_lab.hpp"
#include "steinlab/random.hpp"
#include "steinlab/report.hpp"

namespace steinlab {

/// Per-check / per-trial seed: FNV-1a of the label mixed into the suite seed
/// through splitmix64.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : label) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (h | 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace detail {

/// a - b with inf - inf read as 0 (both sides agree on +inf).
inline double inf_diff(double a, double b) {
    if (std::isinf(a) && std::isinf(b) && (a > 0) == (b > 0)) {
        return 0.0;
    }
    return a - b;
}

inline std::vector<std::size_t> qubit_dims(std::size_t n) {
    return std::vector<std::size_t>(n, 2);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pinching.

/// (d-1)(d/2+1) log2(n+1): log of the spectrum-size bound of a
/// permutation-invariant state on n copies of C^d.
inline double pinching_constant(std::size_t d, std::size_t n) {
    const double dd = static_cast<double>(d);
    return (dd - 1.0) * (dd / 2.0 + 1.0) * std::log2(static_cast<double>(n) + 1.0);
}

/// D - C <= D_pinched <= D for random rho_n and permutation-invariant sigma_n
/// on n qubits. `constant_scale` multiplies C; anything but 1 is a perturbed
/// inequality, used only as a fixture.
inline CheckReport check_pinching(std::size_t n, std::size_t trials, std::uint64_t seed,
                                  double constant_scale = 1.0) {
    if (n == 0 || n > 4) {
        throw Error(ErrorCode::InvalidArgument, "check_pinching supports 1 <= n <= 4");
    }
    CheckReport r("pinching", "asymptotic spectral pinching bounds", seed, 1e-6);
    const double c = constant_scale * pinching_constant(2, n);
    r.details["constant"] = c;
    std::size_t max_groups = 0;
    for (std::size_t t = 0; t < trials; t++) {
        const std::uint64_t s = derive_seed(seed, "pinching/" + std::to_string(n) + "/" + std::to_string(t));
        Rng rng(s);
        const auto dims = detail::qubit_dims(n);
        const auto rho = random_state(dims, rng);
        const auto sigma = symmetrize(random_state(dims, rng));
        const double d = umegaki(rho, sigma);
        const double dp = measured_relent_pinched(rho, sigma);
        max_groups = std::max(max_groups, detail::eigen_groups(eig_hermitian(sigma).values, kPinchGroupTol).size());
        const nlohmann::json replay = {{"n", n}, {"trial", t}, {"seed", s}, {"D", d}, {"D_pinched", dp}};
        r.record(dp - (d - c), replay);
        r.record(d - dp, replay);
    }
    r.details["max_distinct_eigenvalues"] = max_groups;
    return r;
}

// ---------------------------------------------------------------------------
// Continuity chain.

/// D(rho^n||B_n) - D(rho'^n||B_n) <= n (eps log2(1/c) + g(eps)), both
/// orderings, with eps = ||rho - rho'||_1 / 2 and c just below the smallest
/// nonzero eigenvalue of tau. `b_family` must be a hull kind whose base
/// contains tau; the level-n hull is then closed under partial traces and
/// tau insertion. Otherwise the report is inconclusive.
inline CheckReport check_afw_chain(const DensityOperator &rho, const DensityOperator &rho_prime,
                                   const StateFamily &b_family, const DensityOperator &tau, std::size_t n,
                                   std::uint64_t seed, HullRelentOptions options = {}) {
    CheckReport r("afw-chain", "continuity bound for the relative entropy of resource", seed, 1e-5);
    const bool hull_kind = b_family.kind() == FamilyKind::AVProduct || b_family.kind() == FamilyKind::SeparableInner;
    const bool supports_ok = support_contained(rho, tau) && support_contained(rho_prime, tau);
    const bool tau_in_base =
        hull_kind && hull_lp_membership(b_family.base(), tau.op(), 1e-8).member;
    if (!hull_kind || !supports_ok || !tau_in_base) {
        r.inconclusive = true;
        r.details["condition_audit"] = {
            {"hull_kind", hull_kind}, {"supports_in_tau", supports_ok}, {"tau_in_base", tau_in_base}};
        return r;
    }
    const auto bn = b_family.at(n).spanning_set();
    const auto lo = [&](const DensityOperator &x) {
        return relent_to_hull(tensor_power(x, n), bn, options).bracket;
    };
    const auto a = lo(rho);
    const auto b = lo(rho_prime);
    const auto tes = eig_hermitian(tau);
    double c = kInf;
    for (double v : tes.values) {
        if (v > kZeroCutoff) {
            c = std::min(c, v);
        }
    }
    c -= 1e-10;
    const double eps = 0.5 * trace_norm(rho.op() - rho_prime.op());
    const double bound = static_cast<double>(n) * (eps * std::log2(1.0 / c) + g_afw(eps));
    const nlohmann::json replay = {{"n", n},
                                   {"seed", seed},
                                   {"eps", eps},
                                   {"c", c},
                                   {"bound", bound},
                                   {"D_rho", a.to_json()},
                                   {"D_rho_prime", b.to_json()}};
    r.record(bound - detail::inf_diff(a.upper, b.lower), replay);
    r.record(bound - detail::inf_diff(b.upper, a.lower), replay);
    return r;
}

/// Randomized perturbation pairs on a qubit with tau = I/2 and B the
/// arbitrarily varying hull of {tau, random state}.
inline CheckReport check_afw_random(std::size_t trials, std::size_t n_max, std::uint64_t seed,
                                    HullRelentOptions options = {}) {
    CheckReport r("afw-chain", "continuity bound for the relative entropy of resource", seed, 1e-5);
    const auto tau = DensityOperator::maximally_mixed({2});
    for (std::size_t t = 0; t < trials; t++) {
        const std::uint64_t s = derive_seed(seed, "afw/" + std::to_string(t));
        Rng rng(s);
        const auto rho = random_state({2}, rng);
        const auto omega = random_state({2}, rng);
        std::uniform_real_distribution<double> unif(0.01, 0.3);
        const double w = unif(rng);
        const std::vector<DensityOperator> pair = {rho, omega};
        const std::vector<double> weights = {1.0 - w, w};
        const auto rho_prime = mixture(pair, weights);
        const auto fam = StateFamily::av({tau, random_state({2}, rng)}, 1);
        for (std::size_t n = 1; n <= n_max; n++) {
            auto one = check_afw_chain(rho, rho_prime, fam, tau, n, s, options);
            if (!one.details.is_null() && one.details.contains("worst_instance")) {
                one.details["worst_instance"]["trial"] = t;
            }
            r.absorb(one);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Type and measure domination.

/// min-eig[(sum_x V(x) sigma_x)^{(x)n} - (n+1)^{-|X|} gamma_{n,V}] >= -1e-9 for
/// every n-type V over `base`.
inline CheckReport check_type_domination(std::span<const DensityOperator> base, std::size_t n,
                                         std::uint64_t seed = 0) {
    if (n == 0 || n > 5) {
        throw Error(ErrorCode::InvalidArgument, "check_type_domination supports 1 <= n <= 5");
    }
    CheckReport r("type-domination", "operator domination of type-class states", seed, 1e-9);
    const double k = static_cast<double>(base.size());
    const double factor = std::pow(static_cast<double>(n) + 1.0, -k);
    double shadow = kInf;
    for (auto &[v, gamma] : av_hull_symmetric_decomposition(base, n)) {
        const auto freq = v.frequencies();
        const auto mixed = mixture(base, freq);
        const auto lhs = tensor_power(mixed, n).op() - gamma.op().scaled(factor);
        r.record(min_eigenvalue(lhs), {{"n", n}, {"type", v.counts}});
        // scalar shadow: V^n(T_V) >= (n+1)^{-|X|}
        double logp = std::log(v.class_size());
        for (std::size_t x = 0; x < freq.size(); x++) {
            if (v.counts[x] > 0) {
                logp += static_cast<double>(v.counts[x]) * std::log(freq[x]);
            }
        }
        shadow = std::min(shadow, std::exp(logp) - factor);
    }
    r.details["scalar_shadow_min_slack"] = shadow;
    return r;
}

/// iid_mixture_state(mu, n) >= (6/pi^2 k^2)/Z_N iid_mixture_state(mu_k, n) for
/// the Basel mixture mu of `measures`, plus its normalization.
inline CheckReport check_measure_domination(const std::vector<DiscreteMeasure> &measures, std::size_t n,
                                            std::uint64_t seed = 0) {
    CheckReport r("measure-domination", "Basel-weighted mixture dominates each component", seed, 1e-9);
    const auto mu = basel_mix(measures);
    const double z = basel_mass(measures.size());
    const auto big = iid_mixture_state(mu, n);
    for (std::size_t k = 0; k < measures.size(); k++) {
        const double w = basel_weight(k + 1) / z;
        const auto lhs = big.op() - iid_mixture_state(measures[k], n).op().scaled(w);
        r.record(min_eigenvalue(lhs), {{"n", n}, {"N", measures.size()}, {"k", k + 1}});
    }
    double total = 0;
    for (double w : mu.weights()) {
        total += w;
    }
    r.record(-std::abs(total - 1.0), {{"normalization_error", total - 1.0}});
    r.details["first_weight"] = basel_weight(1);
    return r;
}

// ---------------------------------------------------------------------------
// Sandwich, convexification, symmetrization.

/// av <= iid <= av + correction for n = 1..n_max, with b_base as its own
/// cover (delta = 0, |X| = |b_base|).
inline CheckReport check_sandwich(const ListSequence &a_seq, std::span<const DensityOperator> b_base,
                                  std::size_t n_max, std::uint64_t seed = 0, HullRelentOptions options = {}) {
    CheckReport r("sandwich-av-iid", "av/iid regularised relative entropy sandwich", seed, 1e-6);
    for (std::size_t n = 1; n <= n_max; n++) {
        r.absorb(sandwich_av_iid(a_seq(n), b_base, b_base.size(), 0.0, n, options, seed).report);
    }
    return r;
}

/// beta_eps brackets over (a, b) and over the lists with random 2-point
/// mixtures appended overlap within 1e-5.
inline CheckReport check_convexify_invariance(std::span<const DensityOperator> a_ext,
                                              std::span<const DensityOperator> b_ext, double eps,
                                              std::uint64_t seed = 0, CompositeOptions options = {}) {
    if (a_ext.size() > 16 || b_ext.size() > 16) {
        throw Error(ErrorCode::CapExceeded, "convexification check takes lists of at most 16 states");
    }
    CheckReport r("convexify-invariance", "beta is unchanged by convexifying both hypotheses", seed, 1e-5);
    Rng rng(seed);
    auto grow = [&](std::span<const DensityOperator> ext) {
        std::vector<DensityOperator> out(ext.begin(), ext.end());
        if (ext.size() < 2) {
            return out;
        }
        std::uniform_int_distribution<std::size_t> pick(0, ext.size() - 1);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int k = 0; k < 2; k++) {
            const std::size_t i = pick(rng), j = pick(rng);
            const double w = unif(rng);
            const std::vector<DensityOperator> pair = {ext[i], ext[j]};
            const std::vector<double> weights = {w, 1.0 - w};
            out.push_back(mixture(pair, weights));
        }
        return out;
    };
    const auto a2 = grow(a_ext);
    const auto b2 = grow(b_ext);
    const auto x = dh_eps_composite(a_ext, b_ext, eps, options).beta;
    const auto y = dh_eps_composite(a2, b2, eps, options).beta;
    r.record(std::min(x.upper, y.upper) - std::max(x.lower, y.lower),
             {{"seed", seed}, {"eps", eps}, {"original", x.to_json()}, {"convexified", y.to_json()}});
    return r;
}

/// D(sym rho || sym sigma) <= D(rho || sigma) + 1e-8.
inline CheckReport check_symmetrization(const DensityOperator &rho_n, const DensityOperator &sigma_n,
                                        std::uint64_t seed = 0) {
    if (rho_n.op().factors() > 4) {
        throw Error(ErrorCode::InvalidArgument, "check_symmetrization supports at most 4 factors");
    }
    CheckReport r("symmetrization", "relative entropy restricted to permutation-invariant states", seed, 1e-8);
    const double d = umegaki(rho_n, sigma_n);
    const double ds = umegaki(symmetrize(rho_n), symmetrize(sigma_n));
    r.record(detail::inf_diff(d, ds), {{"seed", seed}, {"D", number_to_json(d)}, {"D_sym", number_to_json(ds)}});
    return r;
}

// ---------------------------------------------------------------------------
// Stein convergence.

/// Exact -log2 beta_eps(p^n || q^n) for product distributions, aggregating
/// outcomes by type (the likelihood ratio is constant on a type class).
inline double classical_iid_dh(std::span<const double> p, std::span<const double> q, std::size_t n, double eps) {
    std::vector<double> pp, qq;
    for (const auto &v : enumerate_types(p.size(), n)) {
        double lp = std::lgamma(static_cast<double>(n) + 1.0), lq = lp;
        bool zp = false, zq = false;
        for (std::size_t x = 0; x < p.size(); x++) {
            const double k = static_cast<double>(v.counts[x]);
            lp -= std::lgamma(k + 1.0);
            lq -= std::lgamma(k + 1.0);
            if (v.counts[x] > 0) {
                zp = zp || p[x] <= 0;
                zq = zq || q[x] <= 0;
                lp += p[x] > 0 ? k * std::log(p[x]) : 0.0;
                lq += q[x] > 0 ? k * std::log(q[x]) : 0.0;
            }
        }
        pp.push_back(zp ? 0.0 : std::exp(lp));
        qq.push_back(zq ? 0.0 : std::exp(lq));
    }
    const double beta = classical_neyman_pearson(pp, qq, eps);
    return beta <= 0 ? kInf : -std::log2(beta);
}

struct SteinPoint {
    std::size_t n = 0;
    /// a_n = (1/n) D_H^eps(rho^n || sigma^n).
    DivergenceBracket a;
    /// (1/n) classical D_H^eps of the pinched pair.
    double pinched = 0;
};

/// Records a_n for n in [n_min, n_max] and asserts, per n,
/// (i) a_n >= (1/n) D_H of the pinched measurement and
/// a_n <= (D + h/n)/(1-eps); and (ii) |a_{n_max} - D| < |a_{n_min} - D| (strict).
/// Commuting pairs use the exact classical oracle.
inline CheckReport check_stein_convergence(const DensityOperator &rho, const DensityOperator &sigma, double eps,
                                           std::size_t n_min, std::size_t n_max, std::uint64_t seed = 0) {
    if (n_min == 0 || n_min >= n_max) {
        throw Error(ErrorCode::InvalidArgument, "check_stein_convergence needs 1 <= n_min < n_max");
    }
    const bool commuting = commutator_norm(rho.matrix(), sigma.matrix()) <= 1e-10;
    if (!commuting && rho.dim() == 2 && n_max > 10) {
        throw Error(ErrorCode::CapExceeded, "quantum Stein runs are limited to n <= 10 for qubits");
    }
    CheckReport r("stein-convergence", "Stein exponent between two simple iid hypotheses", seed, 1e-6);
    const double d = umegaki(rho, sigma);
    const double h = converse_entropy(eps);
    std::vector<SteinPoint> points;
    const auto single = pinched_outcome_distributions(rho, sigma);
    for (std::size_t n = n_min; n <= n_max; n++) {
        const double inv = 1.0 / static_cast<double>(n);
        SteinPoint pt;
        pt.n = n;
        if (commuting) {
            const double v = classical_iid_dh(single.p, single.q, n, eps) * inv;
            pt.a = DivergenceBracket::exact(v, "classical likelihood-ratio oracle over types");
            pt.pinched = v;
        } else {
            const auto rn = tensor_power(rho, n);
            const auto sn = tensor_power(sigma, n);
            pt.a = neg_log2_bracket(neyman_pearson_simple(rn, sn, eps).bracket()).scaled(inv);
            const auto dist = pinched_outcome_distributions(rn, sn);
            const double beta = classical_neyman_pearson(dist.p, dist.q, eps);
            pt.pinched = (beta <= 0 ? kInf : -std::log2(beta)) * inv;
        }
        const nlohmann::json replay = {{"n", n}, {"a_n", pt.a.to_json()}, {"pinched", number_to_json(pt.pinched)}};
        r.record(detail::inf_diff(pt.a.lower, pt.pinched), replay);
        r.record(detail::inf_diff((d + h * inv) / (1.0 - eps), pt.a.upper), replay);
        points.push_back(pt);
    }
    // strict trend, no tolerance
    const auto &first = points.front().a;
    const auto &last = points.back().a;
    double trend;
    if (std::isinf(d)) {
        trend = std::isinf(first.lower) && std::isinf(last.lower) ? 0.0 : -1.0;
    } else {
        const double far_last = std::max(std::abs(last.lower - d), std::abs(last.upper - d));
        const double near_first = std::min(std::abs(first.lower - d), std::abs(first.upper - d));
        trend = near_first - far_last;
        if (!(trend > 0)) {
            trend = -1.0;
        }
    }
    r.record(trend, {{"trend", "|a_nmax - D| < |a_nmin - D|"},
                     {"a_first", first.to_json()},
                     {"a_last", last.to_json()}});
    nlohmann::json seq = nlohmann::json::array();
    for (const auto &p : points) {
        seq.push_back({{"n", p.n}, {"a_n", p.a.to_json()}});
    }
    r.details["D"] = number_to_json(d);
    r.details["sequence"] = seq;
    r.details["commuting"] = commuting;
    return r;
}

// ---------------------------------------------------------------------------
// Data processing.

struct ChannelSpec {
    enum class Kind { Identity, PartialTrace, Depolarise };
    Kind kind = Kind::Identity;
    std::vector<std::size_t> keep;
    double delta = 0;

    DensityOperator apply(const DensityOperator &x) const {
        switch (kind) {
            case Kind::Identity:
                return x;
            case Kind::PartialTrace:
                return partial_trace(x, keep);
            case Kind::Depolarise:
                return depolarise(x, delta, DensityOperator::maximally_mixed(x.dims()));
        }
        return x;
    }
    nlohmann::json to_json() const {
        switch (kind) {
            case Kind::Identity:
                return {{"channel", "identity"}};
            case Kind::PartialTrace:
                return {{"channel", "partial_trace"}, {"keep", keep}};
            case Kind::Depolarise:
                return {{"channel", "depolarise"}, {"delta", delta}};
        }
        return nullptr;
    }
};

/// D_H^eps and Umegaki are non-increasing under the channel.
inline CheckReport check_dpi_dh(const DensityOperator &rho, const DensityOperator &sigma, double eps,
                                const ChannelSpec &channel, std::uint64_t seed = 0) {
    CheckReport r("dpi", "data processing for hypothesis-testing and Umegaki relative entropies", seed, 1e-6);
    const auto ro = channel.apply(rho);
    const auto so = channel.apply(sigma);
    const auto in = neg_log2_bracket(neyman_pearson_simple(rho, sigma, eps).bracket());
    const auto out = neg_log2_bracket(neyman_pearson_simple(ro, so, eps).bracket());
    nlohmann::json replay = channel.to_json();
    replay["seed"] = seed;
    replay["dh_in"] = in.to_json();
    replay["dh_out"] = out.to_json();
    r.record(detail::inf_diff(in.lower, out.upper), replay);
    r.record(detail::inf_diff(umegaki(rho, sigma), umegaki(ro, so)), replay);
    return r;
}

/// Converse shadow on a finished scan: each row's converse slack.
inline CheckReport check_converse_shadow(const ExponentScan &scan, std::uint64_t seed = 0) {
    CheckReport r("converse-shadow", "finite-n converse: rate <= (D + h2/n)/(1-eps)", seed, 1e-4);
    for (const auto &row : scan.rows) {
        r.record(row.converse_slack, {{"scenario", scan.scenario}, {"n", row.n}});
    }
    r.details["label"] = "data-processing shadow; weaker than an exact finite-n converse";
    return r;
}

// ---------------------------------------------------------------------------
// Suite.

struct HarnessConfig {
    std::uint64_t seed = 1;
    double eps = 0.1;
    /// The strict trend is a finite-n statement whose truth depends on eps:
    /// the second-order term can put a_nmin accidentally close to D.
    double stein_eps = 0.2;
    std::size_t trials = 4;
    std::size_t pinching_n_max = 3;
    std::size_t afw_n_max = 2;
    std::size_t type_n_max = 4;
    std::size_t measure_n_max = 3;
    std::size_t measure_count = 8;
    std::size_t sandwich_n_max = 3;
    std::size_t symmetrization_n_max = 3;
    std::size_t stein_classical_n_max = 14;
    std::size_t stein_quantum_n_max = 5;
    std::size_t scan_n_max = 3;
    bool inject_violation = false;

    nlohmann::json to_json() const {
        return {{"schema", 1},
                {"seed", seed},
                {"eps", eps},
                {"stein_eps", stein_eps},
                {"trials", trials},
                {"pinching_n_max", pinching_n_max},
                {"afw_n_max", afw_n_max},
                {"type_n_max", type_n_max},
                {"measure_n_max", measure_n_max},
                {"measure_count", measure_count},
                {"sandwich_n_max", sandwich_n_max},
                {"symmetrization_n_max", symmetrization_n_max},
                {"stein_classical_n_max", stein_classical_n_max},
                {"stein_quantum_n_max", stein_quantum_n_max},
                {"scan_n_max", scan_n_max},
                {"inject_violation", inject_violation}};
    }

    /// Every key optional except "schema"; unknown keys and bad values are
    /// reported with their location.
    static HarnessConfig from_json(const nlohmann::json &j, const std::string &where = "config") {
        if (!j.is_object()) {
            throw Error(ErrorCode::Parse, where + ": expected a JSON object");
        }
        if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != 1) {
            throw Error(ErrorCode::Parse, where + ".schema: expected 1");
        }
        HarnessConfig c;
        const std::set<std::string> size_keys = {
            "trials",          "pinching_n_max",        "afw_n_max",           "type_n_max",
            "measure_n_max",   "measure_count",         "sandwich_n_max",      "symmetrization_n_max",
            "stein_classical_n_max", "stein_quantum_n_max", "scan_n_max"};
        for (const auto &[key, value] : j.items()) {
            const std::string at = where + "." + key;
            if (key == "schema") {
                continue;
            }
            if (key == "seed") {
                if (!value.is_number_unsigned()) {
                    throw Error(ErrorCode::Parse, at + ": expected an unsigned integer");
                }
                c.seed = value.get<std::uint64_t>();
            } else if (key == "eps" || key == "stein_eps") {
                if (!value.is_number() || !(value.get<double>() > 0 && value.get<double>() < 1)) {
                    throw Error(ErrorCode::Parse, at + ": expected a number in (0,1)");
                }
                (key == "eps" ? c.eps : c.stein_eps) = value.get<double>();
            } else if (key == "inject_violation") {
                if (!value.is_boolean()) {
                    throw Error(ErrorCode::Parse, at + ": expected a boolean");
                }
                c.inject_violation = value.get<bool>();
            } else if (size_keys.count(key)) {
                if (!value.is_number_unsigned() || value.get<std::size_t>() == 0) {
                    throw Error(ErrorCode::Parse, at + ": expected a positive integer");
                }
                const auto v = value.get<std::size_t>();
                if (key == "trials") c.trials = v;
                if (key == "pinching_n_max") c.pinching_n_max = v;
                if (key == "afw_n_max") c.afw_n_max = v;
                if (key == "type_n_max") c.type_n_max = v;
                if (key == "measure_n_max") c.measure_n_max = v;
                if (key == "measure_count") c.measure_count = v;
                if (key == "sandwich_n_max") c.sandwich_n_max = v;
                if (key == "symmetrization_n_max") c.symmetrization_n_max = v;
                if (key == "stein_classical_n_max") c.stein_classical_n_max = v;
                if (key == "stein_quantum_n_max") c.stein_quantum_n_max = v;
                if (key == "scan_n_max") c.scan_n_max = v;
            } else {
                throw Error(ErrorCode::Parse, at + ": unknown key");
            }
        }
        if (c.pinching_n_max > 4) {
            throw Error(ErrorCode::Parse, where + ".pinching_n_max: at most 4");
        }
        if (c.type_n_max > 5) {
            throw Error(ErrorCode::Parse, where + ".type_n_max: at most 5");
        }
        if (c.symmetrization_n_max > 4) {
            throw Error(ErrorCode::Parse, where + ".symmetrization_n_max: at most 4");
        }
        if (c.stein_quantum_n_max > 10 || c.stein_quantum_n_max < 2 || c.stein_classical_n_max < 3) {
            throw Error(ErrorCode::Parse, where + ".stein_*_n_max: quantum in [2,10], classical >= 3");
        }
        if (c.measure_count > 64) {
            throw Error(ErrorCode::Parse, where + ".measure_count: at most 64");
        }
        return c;
    }
};

/// Runs every check; deterministic in `seed`, reports ordered by id.
inline std::vector<CheckReport> run_all(const HarnessConfig &config, std::uint64_t seed) {
    std::vector<CheckReport> out;
    const double eps = config.eps;

    {
        CheckReport r("pinching", "asymptotic spectral pinching bounds", derive_seed(seed, "pinching"), 1e-6);
        for (std::size_t n = 1; n <= config.pinching_n_max; n++) {
            r.absorb(check_pinching(n, config.trials, r.seed));
        }
        out.push_back(r.finish());
    }
    out.push_back(check_afw_random(config.trials, config.afw_n_max, derive_seed(seed, "afw-chain")).finish());
    {
        CheckReport r("type-domination", "operator domination of type-class states", derive_seed(seed, "types"),
                      1e-9);
        Rng rng(r.seed);
        for (std::size_t k = 1; k <= 3; k++) {
            std::vector<DensityOperator> base;
            for (std::size_t i = 0; i < k; i++) {
                base.push_back(random_state({2}, rng));
            }
            for (std::size_t n = 1; n <= config.type_n_max; n++) {
                r.absorb(check_type_domination(base, n, r.seed));
            }
        }
        out.push_back(r.finish());
    }
    {
        CheckReport r("measure-domination", "Basel-weighted mixture dominates each component",
                      derive_seed(seed, "measures"), 1e-9);
        Rng rng(r.seed);
        std::vector<DiscreteMeasure> measures;
        for (std::size_t k = 0; k < config.measure_count; k++) {
            std::uniform_int_distribution<std::size_t> size(1, 3);
            std::vector<DensityOperator> support;
            const std::size_t m = size(rng);
            for (std::size_t i = 0; i < m; i++) {
                support.push_back(random_state({2}, rng));
            }
            measures.emplace_back(std::move(support), random_simplex_point(m, rng));
        }
        for (std::size_t big_n = 1; big_n <= measures.size(); big_n++) {
            const std::vector<DiscreteMeasure> prefix(measures.begin(), measures.begin() + big_n);
            for (std::size_t n = 1; n <= config.measure_n_max; n++) {
                r.absorb(check_measure_domination(prefix, n, r.seed));
            }
        }
        out.push_back(r.finish());
    }
    {
        const std::uint64_t s = derive_seed(seed, "sandwich");
        Rng rng(s);
        const std::vector<DensityOperator> base = {random_state({2}, rng), random_state({2}, rng)};
        const auto rho = random_state({2}, rng);
        const ListSequence a_seq = [rho](std::size_t n) { return std::vector<DensityOperator>{tensor_power(rho, n)}; };
        out.push_back(check_sandwich(a_seq, base, config.sandwich_n_max, s).finish());
    }
    {
        CheckReport r("convexify-invariance", "beta is unchanged by convexifying both hypotheses",
                      derive_seed(seed, "convexify"), 1e-5);
        for (std::size_t t = 0; t < config.trials; t++) {
            const std::uint64_t s = derive_seed(r.seed, std::to_string(t));
            Rng rng(s);
            std::vector<DensityOperator> a, b;
            for (int i = 0; i < 3; i++) {
                a.push_back(random_state({2}, rng));
                b.push_back(random_state({2}, rng));
            }
            r.absorb(check_convexify_invariance(a, b, eps, s));
        }
        out.push_back(r.finish());
    }
    {
        CheckReport r("symmetrization", "relative entropy restricted to permutation-invariant states",
                      derive_seed(seed, "symmetrization"), 1e-8);
        for (std::size_t n = 2; n <= config.symmetrization_n_max; n++) {
            for (std::size_t t = 0; t < config.trials; t++) {
                const std::uint64_t s = derive_seed(r.seed, std::to_string(n) + "/" + std::to_string(t));
                Rng rng(s);
                const auto dims = detail::qubit_dims(n);
                r.absorb(check_symmetrization(random_state(dims, rng), random_state(dims, rng), s));
            }
        }
        out.push_back(r.finish());
    }
    {
        CheckReport r("stein-convergence", "Stein exponent between two simple iid hypotheses",
                      derive_seed(seed, "stein"), 1e-6);
        const std::vector<double> p = {0.5, 0.5}, q = {0.25, 0.75};
        const auto rho = DensityOperator::diagonal({2}, p);
        const auto sigma = DensityOperator::diagonal({2}, q);
        r.absorb(check_stein_convergence(rho, sigma, config.stein_eps, 2, config.stein_classical_n_max, r.seed));
        // fixed non-commuting pair: 0.8|+><+| + 0.1 I vs diag(0.7, 0.3). Random
        // pairs are not used here because a_n need not approach D
        // monotonically at n <= 5.
        const std::vector<cplx> plus = {1.0, 1.0};
        const std::vector<DensityOperator> parts = {DensityOperator::pure({2}, plus),
                                                    DensityOperator::maximally_mixed({2})};
        const std::vector<double> w = {0.8, 0.2};
        const std::vector<double> diag = {0.7, 0.3};
        r.absorb(check_stein_convergence(mixture(parts, w), DensityOperator::diagonal({2}, diag), config.stein_eps,
                                         1, config.stein_quantum_n_max, r.seed));
        out.push_back(r.finish());
    }
    {
        CheckReport r("dpi", "data processing for hypothesis-testing and Umegaki relative entropies",
                      derive_seed(seed, "dpi"), 1e-6);
        for (std::size_t t = 0; t < config.trials; t++) {
            const std::uint64_t s = derive_seed(r.seed, std::to_string(t));
            Rng rng(s);
            const auto rho = random_state({2, 2}, rng);
            const auto sigma = random_state({2, 2}, rng);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            ChannelSpec pt{ChannelSpec::Kind::PartialTrace, {t % 2}, 0.0};
            ChannelSpec dep{ChannelSpec::Kind::Depolarise, {}, unif(rng)};
            r.absorb(check_dpi_dh(rho, sigma, eps, pt, s));
            r.absorb(check_dpi_dh(rho, sigma, eps, dep, s));
        }
        out.push_back(r.finish());
    }
    {
        const std::uint64_t s = derive_seed(seed, "converse");
        Rng rng(s);
        const std::vector<DensityOperator> base = {random_state({2}, rng), random_state({2}, rng)};
        const auto rho = random_state({2}, rng);
        const ListSequence a_seq = [rho](std::size_t n) { return std::vector<DensityOperator>{tensor_power(rho, n)}; };
        std::vector<std::size_t> ns;
        for (std::size_t n = 1; n <= config.scan_n_max; n++) {
            ns.push_back(n);
        }
        CheckReport r("converse-shadow", "finite-n converse: rate <= (D + h2/n)/(1-eps)", s, 1e-4);
        for (AltMode mode : {AltMode::IID, AltMode::AV}) {
            r.absorb(check_converse_shadow(scan_exponents("converse", a_seq, base, mode, eps, ns), s));
        }
        out.push_back(r.finish());
    }
    if (config.inject_violation) {
        auto r = check_pinching(1, 1, derive_seed(seed, "injected"), -1.0);
        r.id = "injected-violation";
        r.anchor = "perturbed pinching inequality (fixture)";
        out.push_back(r.finish());
    }
    std::sort(out.begin(), out.end(), [](const CheckReport &a, const CheckReport &b) { return a.id < b.id; });
    return out;
}

inline std::vector<CheckReport> run_all(const HarnessConfig &config) {
    return run_all(config, config.seed);
}

}  // namespace steinlab
