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
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "steinlab/composite.hpp"
#include "steinlab/families.hpp"
#include "steinlab/report.hpp"

namespace steinlab {

enum class AltMode { IID, AV };

inline const char *alt_mode_name(AltMode m) {
    return m == AltMode::IID ? "iid" : "av";
}

inline AltMode alt_mode_from_name(const std::string &s) {
    if (s == "iid") {
        return AltMode::IID;
    }
    if (s == "av") {
        return AltMode::AV;
    }
    throw Error(ErrorCode::Parse, "mode must be 'iid' or 'av', got '" + s + "'");
}

/// Finite list whose hull stands in for the n-copy alternative built from
/// B_1 = co(b_base):
///   av  -> the gamma_{n,V} states (spanning the symmetric part exactly);
///   iid -> (sum_x V(x) sigma_x)^{(x)n} over the n-types V (an inner
///          approximation of co{sigma^{(x)n} : sigma in B_1}; exact for
///          singleton bases).
inline std::vector<DensityOperator> alternative_list(std::span<const DensityOperator> b_base, AltMode mode,
                                                     std::size_t n) {
    if (b_base.size() == 1) {
        return {tensor_power(b_base.front(), n)};
    }
    if (mode == AltMode::IID) {
        return iid_type_grid(b_base, n);
    }
    std::vector<DensityOperator> out;
    for (auto &[v, g] : av_hull_symmetric_decomposition(b_base, n)) {
        out.push_back(std::move(g));
    }
    return out;
}

/// beta_eps bracket between two families at their copy counts. Product
/// kinds use the gamma spanning set, which is exact whenever the other
/// family is closed under permutations.
inline CompositeResult beta_eps_families(const StateFamily &a, const StateFamily &b, double eps,
                                         CompositeOptions options = {}) {
    const auto al = a.spanning_set();
    const auto bl = b.spanning_set();
    return dh_eps_composite(al, bl, eps, options);
}

// ---------------------------------------------------------------------------
// Scans.

using ListSequence = std::function<std::vector<DensityOperator>(std::size_t)>;

struct ScanRow {
    std::size_t n = 0;
    DivergenceBracket beta;
    /// -(1/n) log2 beta.
    DivergenceBracket rate;
    /// (1/n) D(co A_n || co B_n).
    DivergenceBracket relent;
    /// Converse shadow: (relent + h/n)/(1-eps) - rate.lower, h = h2 of the
    /// worst admissible type-I success.
    double converse_slack = 0;
};

struct ExponentScan {
    std::string scenario;
    double eps = 0;
    AltMode mode = AltMode::IID;
    std::vector<ScanRow> rows;
    nlohmann::json metadata = nlohmann::json::object();

    bool well_formed() const {
        for (std::size_t i = 0; i < rows.size(); i++) {
            if (i > 0 && rows[i].n <= rows[i - 1].n) {
                return false;
            }
            if (!rows[i].beta.well_ordered() || !rows[i].rate.well_ordered() || !rows[i].relent.well_ordered()) {
                return false;
            }
        }
        return true;
    }

    std::string to_csv() const {
        std::ostringstream out;
        out << "n,beta_lower,beta_upper,rate_lower,rate_upper,relent_lower,relent_upper\n";
        for (const auto &r : rows) {
            out << r.n << ',' << format_sig(r.beta.lower, 12) << ',' << format_sig(r.beta.upper, 12) << ','
                << format_sig(r.rate.lower, 12) << ',' << format_sig(r.rate.upper, 12) << ','
                << format_sig(r.relent.lower, 12) << ',' << format_sig(r.relent.upper, 12) << '\n';
        }
        return out.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["scenario"] = scenario;
        j["eps"] = eps;
        j["mode"] = alt_mode_name(mode);
        j["metadata"] = metadata;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &r : rows) {
            arr.push_back({{"n", r.n},
                           {"beta", r.beta.to_json()},
                           {"rate", r.rate.to_json()},
                           {"relent", r.relent.to_json()},
                           {"converse_slack", number_to_json(r.converse_slack)}});
        }
        j["rows"] = std::move(arr);
        return j;
    }
};

/// Largest binary entropy of a type-I success probability in [1-eps, 1].
inline double converse_entropy(double eps) {
    return eps <= 0.5 ? binary_entropy(eps) : 1.0;
}

/// Per-n brackets on (1/n) D(co A_n || co B_n), with B_n from `b_base` in the
/// given mode and A_n supplied as a finite (spanning) list.
inline std::vector<DivergenceBracket> regularised_relent_scan(const ListSequence &a_seq,
                                                              std::span<const DensityOperator> b_base, AltMode mode,
                                                              std::size_t n_max, HullRelentOptions options = {}) {
    std::vector<DivergenceBracket> out;
    for (std::size_t n = 1; n <= n_max; n++) {
        const auto a = a_seq(n);
        const auto b = alternative_list(b_base, mode, n);
        out.push_back(relent_between_hulls(a, b, options).bracket.scaled(1.0 / static_cast<double>(n)));
    }
    return out;
}

struct ScanOptions {
    CompositeOptions composite;
    HullRelentOptions hull;
};

/// Full scans, one per eps: beta, rate and relative-entropy brackets per n,
/// plus the converse shadow -(1/n) log2 beta <= ((1/n) D + h/n) / (1 - eps).
/// The relative entropy does not depend on eps and is solved once per n.
inline std::vector<ExponentScan> scan_exponents(const std::string &scenario, const ListSequence &a_seq,
                                                std::span<const DensityOperator> b_base, AltMode mode,
                                                const std::vector<double> &eps_list,
                                                const std::vector<std::size_t> &n_values,
                                                const ScanOptions &options = {}) {
    std::vector<ExponentScan> scans(eps_list.size());
    for (std::size_t k = 0; k < eps_list.size(); k++) {
        auto &scan = scans[k];
        scan.scenario = scenario;
        scan.eps = eps_list[k];
        scan.mode = mode;
        scan.metadata["b_base_size"] = b_base.size();
        scan.metadata["hull_gap_tol"] = options.hull.gap_tol;
        scan.metadata["composite_max_iterations"] = options.composite.max_iterations;
    }
    for (std::size_t n : n_values) {
        const auto a = a_seq(n);
        const auto b = alternative_list(b_base, mode, n);
        const double inv = 1.0 / static_cast<double>(n);
        const DivergenceBracket relent = relent_between_hulls(a, b, options.hull).bracket.scaled(inv);
        for (std::size_t k = 0; k < eps_list.size(); k++) {
            const double eps = eps_list[k];
            ScanRow row;
            row.n = n;
            row.beta = dh_eps_composite(a, b, eps, options.composite).beta;
            row.rate = neg_log2_bracket(row.beta).scaled(inv);
            row.relent = relent;
            const double bound = (row.relent.upper + converse_entropy(eps) * inv) / (1.0 - eps);
            row.converse_slack = std::isinf(row.rate.lower) && std::isinf(bound) ? 0.0 : bound - row.rate.lower;
            scans[k].rows.push_back(std::move(row));
        }
    }
    return scans;
}

inline ExponentScan scan_exponents(const std::string &scenario, const ListSequence &a_seq,
                                   std::span<const DensityOperator> b_base, AltMode mode, double eps,
                                   const std::vector<std::size_t> &n_values, const ScanOptions &options = {}) {
    return scan_exponents(scenario, a_seq, b_base, mode, std::vector<double>{eps}, n_values, options).front();
}

// ---------------------------------------------------------------------------
// av <-> iid sandwich.

struct SandwichResult {
    /// (1/n) D(A_n || co B^av) and (1/n) D(A_n || co B^iid) brackets.
    DivergenceBracket av;
    DivergenceBracket iid;
    double correction = 0;
    CheckReport report;
};

/// (1 + |X| log2(n+1))/n + delta.
inline double sandwich_correction(std::size_t cover_size, double delta, std::size_t n) {
    return (1.0 + static_cast<double>(cover_size) * std::log2(static_cast<double>(n) + 1.0)) /
               static_cast<double>(n) +
           delta;
}

/// Checks av <= iid <= av + correction with adversarial bracket ends:
/// av.lower <= iid.upper and iid.lower <= av.upper + correction.
inline SandwichResult sandwich_av_iid(std::span<const DensityOperator> a_list, std::span<const DensityOperator> b_base,
                                      std::size_t cover_size, double delta, std::size_t n,
                                      HullRelentOptions options = {}, std::uint64_t seed = 0) {
    SandwichResult out;
    const double inv = 1.0 / static_cast<double>(n);
    out.av = relent_between_hulls(a_list, alternative_list(b_base, AltMode::AV, n), options).bracket.scaled(inv);
    out.iid = relent_between_hulls(a_list, alternative_list(b_base, AltMode::IID, n), options).bracket.scaled(inv);
    out.correction = sandwich_correction(cover_size, delta, n);
    out.report = CheckReport("sandwich-av-iid", "av/iid regularised relative entropy sandwich", seed, 1e-6);
    auto diff = [](double a, double b) { return std::isinf(a) && std::isinf(b) ? 0.0 : a - b; };
    const nlohmann::json info = {{"n", n},
                                 {"av", out.av.to_json()},
                                 {"iid", out.iid.to_json()},
                                 {"correction", out.correction}};
    out.report.record(diff(out.iid.upper, out.av.lower), info);
    out.report.record(diff(out.av.upper + out.correction, out.iid.lower), info);
    out.report.finish();
    return out;
}

// ---------------------------------------------------------------------------
// Measures.

/// 6 / (pi^2 n^2).
inline double basel_weight(std::size_t n) {
    const double nn = static_cast<double>(n);
    return 6.0 / (std::numbers::pi * std::numbers::pi * nn * nn);
}

/// Truncated mass sum_{n <= N} 6/(pi^2 n^2).
inline double basel_mass(std::size_t count) {
    double z = 0;
    for (std::size_t n = 1; n <= count; n++) {
        z += basel_weight(n);
    }
    return z;
}

/// mu = sum_{n<=N} (6/pi^2 n^2) mu_n / Z_N, merging identical support points.
inline DiscreteMeasure basel_mix(const std::vector<DiscreteMeasure> &measures) {
    if (measures.empty()) {
        throw Error(ErrorCode::InvalidArgument, "basel_mix of an empty list");
    }
    if (measures.size() > 64) {
        throw Error(ErrorCode::CapExceeded, "basel_mix supports at most 64 measures");
    }
    const double z = basel_mass(measures.size());
    std::vector<DensityOperator> support;
    std::vector<double> weights;
    for (std::size_t k = 0; k < measures.size(); k++) {
        const double c = basel_weight(k + 1) / z;
        for (std::size_t j = 0; j < measures[k].size(); j++) {
            const auto &s = measures[k].support()[j];
            std::size_t found = support.size();
            for (std::size_t i = 0; i < support.size(); i++) {
                if ((support[i].matrix() - s.matrix()).max_abs() <= 1e-14) {
                    found = i;
                    break;
                }
            }
            if (found == support.size()) {
                support.push_back(s);
                weights.push_back(0.0);
            }
            weights[found] += c * measures[k].weights()[j];
        }
    }
    double total = 0;
    for (double w : weights) {
        total += w;
    }
    for (auto &w : weights) {
        w /= total;
    }
    return DiscreteMeasure(std::move(support), std::move(weights));
}

struct AttackerMeasure {
    DiscreteMeasure measure;
    DivergenceBracket value;
};

/// Measure over b_base minimizing D(co A_n || sum_j mu_j sigma_j^{(x)n}).
inline AttackerMeasure best_attacker_measure(std::span<const DensityOperator> a_list,
                                             std::span<const DensityOperator> b_base, std::size_t n,
                                             HullRelentOptions options = {}) {
    std::vector<DensityOperator> powers;
    for (const auto &b : b_base) {
        powers.push_back(tensor_power(b, n));
    }
    auto res = relent_between_hulls(a_list, powers, options);
    std::vector<DensityOperator> support(b_base.begin(), b_base.end());
    double total = 0;
    for (double w : res.weights_b) {
        total += w;
    }
    for (auto &w : res.weights_b) {
        w /= total;
    }
    return {DiscreteMeasure(std::move(support), std::move(res.weights_b)), res.bracket};
}

// ---------------------------------------------------------------------------
// Fekete.

struct FeketeSummary {
    /// inf over the observed n of the normalized values (upper bracket ends).
    double candidate = 0;
    std::size_t candidate_n = 0;
    double last = 0;
    /// max - min of the upper ends over the second half of the sequence.
    double oscillation = 0;
    /// (m, n) pairs with (m+n) a_{m+n} > m a_m + n a_n + tol.
    std::vector<std::pair<std::size_t, std::size_t>> violations;

    nlohmann::json to_json() const {
        nlohmann::json v = nlohmann::json::array();
        for (auto [m, n] : violations) {
            v.push_back({m, n});
        }
        return {{"candidate", number_to_json(candidate)},
                {"candidate_n", candidate_n},
                {"last", number_to_json(last)},
                {"oscillation", number_to_json(oscillation)},
                {"violations", v}};
    }
};

/// Fekete-style summary of a normalized sequence a_n (index 0 is n = 1).
/// Subadditivity of n a_n is checked with adversarial bracket ends.
inline FeketeSummary fekete_report(const std::vector<DivergenceBracket> &values, bool subadditive_expected,
                                   double tol = 1e-6) {
    if (values.size() < 3) {
        throw Error(ErrorCode::InvalidArgument, "fekete_report needs at least 3 values");
    }
    FeketeSummary s;
    s.candidate = kInf;
    for (std::size_t i = 0; i < values.size(); i++) {
        if (values[i].upper < s.candidate) {
            s.candidate = values[i].upper;
            s.candidate_n = i + 1;
        }
    }
    s.last = values.back().upper;
    double lo = kInf, hi = -kInf;
    for (std::size_t i = values.size() / 2; i < values.size(); i++) {
        lo = std::min(lo, values[i].upper);
        hi = std::max(hi, values[i].upper);
    }
    s.oscillation = std::isinf(lo) || std::isinf(hi) ? 0.0 : hi - lo;
    if (subadditive_expected) {
        for (std::size_t m = 1; m <= values.size(); m++) {
            for (std::size_t n = m; m + n <= values.size(); n++) {
                const double lhs = static_cast<double>(m + n) * values[m + n - 1].lower;
                const double rhs = static_cast<double>(m) * values[m - 1].upper +
                                   static_cast<double>(n) * values[n - 1].upper;
                if (lhs > rhs + tol) {
                    s.violations.emplace_back(m, n);
                }
            }
        }
    }
    return s;
}

inline FeketeSummary fekete_report(const std::vector<double> &values, bool subadditive_expected, double tol = 1e-6) {
    std::vector<DivergenceBracket> b;
    for (double v : values) {
        b.push_back(DivergenceBracket::exact(v, "value"));
    }
    return fekete_report(b, subadditive_expected, tol);
}

}  // namespace steinlab
