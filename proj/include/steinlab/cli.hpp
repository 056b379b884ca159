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

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "steinlab/axioms.hpp"
#include "steinlab/exponent_lab.hpp"
#include "steinlab/harness.hpp"
#include "steinlab/operator_json.hpp"

namespace steinlab {

enum ExitStatus : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitCap = 3 };

inline int exit_status_for(ErrorCode code) {
    return code == ErrorCode::CapExceeded ? kExitCap : kExitUsage;
}

// ---------------------------------------------------------------------------
// Output plumbing.

/// Writes `contents` to `path` via a sibling temp file and a rename, so a
/// reader never sees a half-written artifact.
inline void write_atomic(const std::filesystem::path &path, const std::string &contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
        }
        f << contents;
        f.flush();
        if (!f) {
            throw Error(ErrorCode::InvalidArgument, "short write to " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

inline std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// The only non-reproducible bytes we emit live here, next to the artifacts.
inline void write_sidecar(const std::filesystem::path &dir, const std::string &stem, const std::string &command,
                          const std::vector<std::string> &files) {
    nlohmann::json j;
    j["command"] = command;
    j["written_at"] = utc_timestamp();
    j["files"] = files;
    write_atomic(dir / (stem + ".meta.json"), j.dump(2) + "\n");
}

inline std::vector<double> parse_eps_list(const std::string &csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !(v > 0 && v < 1)) {
            throw Error(ErrorCode::Parse, "--eps: '" + item + "' is not a number in (0,1)");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw Error(ErrorCode::Parse, "--eps: empty list");
    }
    return out;
}

inline nlohmann::json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Parse, "cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Parse, path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Scenario configs.

/// Two-qubit Werner state p |psi-><psi-| + (1-p) I/4.
inline DensityOperator werner_state(double p) {
    if (!(p >= 0 && p <= 1)) {
        throw Error(ErrorCode::InvalidArgument, "werner weight must lie in [0,1]");
    }
    const std::vector<cplx> psi = {0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0};
    const std::vector<DensityOperator> parts = {DensityOperator::pure({4}, psi), DensityOperator::maximally_mixed({4})};
    const std::vector<double> w = {p, 1 - p};
    return mixture(parts, w);
}

namespace detail {

template <typename T>
T json_get(const nlohmann::json &j, const std::string &key, const std::string &at) {
    if (!j.contains(key)) {
        throw Error(ErrorCode::Parse, at + "." + key + ": missing");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw Error(ErrorCode::Parse, at + "." + key + ": wrong type");
    }
}

inline void reject_unknown(const nlohmann::json &j, std::initializer_list<const char *> known, const std::string &at) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(known.begin(), known.end(), [&](const char *k) { return it.key() == k; })) {
            throw Error(ErrorCode::Parse, at + "." + it.key() + ": unknown key");
        }
    }
}

}  // namespace detail

/// One state reference: an inline operator object, {"file": path} (relative
/// to the config), or {"builtin": werner|maximally_mixed|basis|diagonal, ...}.
inline DensityOperator resolve_state(const nlohmann::json &j, const std::filesystem::path &base_dir,
                                     const std::string &at) {
    if (!j.is_object()) {
        throw Error(ErrorCode::Parse, at + ": expected an object");
    }
    if (j.contains("file")) {
        const auto rel = detail::json_get<std::string>(j, "file", at);
        const std::filesystem::path p = std::filesystem::path(rel).is_absolute() ? std::filesystem::path(rel) : base_dir / rel;
        return DensityOperator(load_operator(p.string()));
    }
    if (j.contains("builtin")) {
        const auto name = detail::json_get<std::string>(j, "builtin", at);
        if (name == "werner") {
            return werner_state(detail::json_get<double>(j, "p", at));
        }
        const auto dims = detail::json_get<std::vector<std::size_t>>(j, "dims", at);
        if (name == "maximally_mixed") {
            return DensityOperator::maximally_mixed(dims);
        }
        if (name == "basis") {
            return DensityOperator::basis(dims, detail::json_get<std::size_t>(j, "index", at));
        }
        if (name == "diagonal") {
            const auto p = detail::json_get<std::vector<double>>(j, "p", at);
            return DensityOperator::diagonal(dims, p);
        }
        throw Error(ErrorCode::Parse, at + ".builtin: unknown state '" + name + "'");
    }
    return DensityOperator(operator_from_json(j));
}

/// Base states plus the copy-structure mode of one hypothesis.
struct HypothesisSpec {
    std::vector<DensityOperator> base;
    AltMode mode = AltMode::IID;
    nlohmann::json descriptor;

    /// Number of list elements at level n (before building them).
    double list_size(std::size_t n) const {
        return base.size() == 1 ? 1.0 : type_count(base.size(), n);
    }
    std::vector<DensityOperator> list(std::size_t n) const {
        return alternative_list(base, mode, n);
    }
};

/// {"states": [...]} or {"family": {"kind": "sep-inner"|"stab", ...}}, plus
/// "mode": "iid"|"av" (default iid).
inline HypothesisSpec parse_hypothesis(const nlohmann::json &j, const std::filesystem::path &base_dir,
                                       std::uint64_t seed, const std::string &at) {
    if (!j.is_object()) {
        throw Error(ErrorCode::Parse, at + ": expected an object");
    }
    detail::reject_unknown(j, {"states", "family", "mode"}, at);
    HypothesisSpec h;
    h.descriptor = j;
    h.mode = alt_mode_from_name(j.value("mode", "iid"));
    if (j.contains("states") == j.contains("family")) {
        throw Error(ErrorCode::Parse, at + ": give exactly one of 'states' or 'family'");
    }
    if (j.contains("states")) {
        const auto &arr = j.at("states");
        if (!arr.is_array() || arr.empty()) {
            throw Error(ErrorCode::Parse, at + ".states: expected a nonempty array");
        }
        for (std::size_t i = 0; i < arr.size(); i++) {
            h.base.push_back(resolve_state(arr[i], base_dir, at + ".states[" + std::to_string(i) + "]"));
        }
    } else {
        const auto &f = j.at("family");
        const std::string fat = at + ".family";
        const auto kind = detail::json_get<std::string>(f, "kind", fat);
        if (kind == "sep-inner") {
            detail::reject_unknown(f, {"kind", "dims", "samples", "seed"}, fat);
            const auto dims = detail::json_get<std::vector<std::size_t>>(f, "dims", fat);
            if (dims.size() != 2) {
                throw Error(ErrorCode::Parse, fat + ".dims: expected [d_A, d_B]");
            }
            h.base = StateFamily::separable_inner(dims[0], dims[1], f.value("samples", std::size_t{2}),
                                                  f.value("seed", seed))
                         .base();
        } else if (kind == "stab") {
            detail::reject_unknown(f, {"kind", "qubits"}, fat);
            h.base = stabiliser_states(f.value("qubits", std::size_t{1}));
        } else {
            throw Error(ErrorCode::Unsupported, fat + ".kind: unsupported family '" + kind + "'");
        }
    }
    for (const auto &s : h.base) {
        s.op().check_same_dims(h.base.front());
    }
    return h;
}

struct ScenarioConfig {
    std::string scenario;
    HypothesisSpec null_h;
    HypothesisSpec alt_h;
    std::vector<double> eps;
    std::size_t n_min = 1;
    std::size_t n_max = 1;
    ScanOptions options;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    static ScenarioConfig from_json(const nlohmann::json &j, const std::filesystem::path &base_dir,
                                    std::optional<std::uint64_t> seed_override = std::nullopt) {
        const std::string at = "config";
        if (!j.is_object()) {
            throw Error(ErrorCode::Parse, at + ": expected a JSON object");
        }
        detail::reject_unknown(j, {"schema", "scenario", "null", "alternative", "eps", "n", "tolerances", "seed", "out"},
                               at);
        if (!j.contains("schema") || j.at("schema") != 1) {
            throw Error(ErrorCode::Parse, at + ".schema: expected 1");
        }
        ScenarioConfig c;
        c.scenario = detail::json_get<std::string>(j, "scenario", at);
        if (c.scenario.empty() || c.scenario.find_first_of("/\\") != std::string::npos) {
            throw Error(ErrorCode::Parse, at + ".scenario: must be a nonempty plain name");
        }
        c.seed = seed_override.value_or(j.value("seed", std::uint64_t{1}));
        c.null_h = parse_hypothesis(j.at("null"), base_dir, c.seed, at + ".null");
        if (!j.contains("alternative")) {
            throw Error(ErrorCode::Parse, at + ".alternative: missing");
        }
        c.alt_h = parse_hypothesis(j.at("alternative"), base_dir, c.seed, at + ".alternative");
        c.null_h.base.front().op().check_same_dims(c.alt_h.base.front());
        c.eps = detail::json_get<std::vector<double>>(j, "eps", at);
        if (c.eps.empty()) {
            throw Error(ErrorCode::Parse, at + ".eps: empty");
        }
        for (double e : c.eps) {
            if (!(e > 0 && e < 1)) {
                throw Error(ErrorCode::Parse, at + ".eps: every value must lie in (0,1)");
            }
        }
        const auto &n = j.value("n", nlohmann::json::object());
        if (!n.is_object()) {
            throw Error(ErrorCode::Parse, at + ".n: expected {\"min\": .., \"max\": ..}");
        }
        detail::reject_unknown(n, {"min", "max"}, at + ".n");
        c.n_min = n.value("min", std::size_t{1});
        c.n_max = n.value("max", c.n_min);
        if (c.n_min < 1 || c.n_max < c.n_min) {
            throw Error(ErrorCode::Parse, at + ".n: need 1 <= min <= max");
        }
        const auto &t = j.value("tolerances", nlohmann::json::object());
        if (!t.is_object()) {
            throw Error(ErrorCode::Parse, at + ".tolerances: expected an object");
        }
        detail::reject_unknown(t, {"hull_gap", "composite_abs", "composite_rel"}, at + ".tolerances");
        c.options.hull.gap_tol = t.value("hull_gap", c.options.hull.gap_tol);
        c.options.composite.abs_tol = t.value("composite_abs", c.options.composite.abs_tol);
        c.options.composite.rel_tol = t.value("composite_rel", c.options.composite.rel_tol);
        if (!(c.options.hull.gap_tol > 0) || !(c.options.composite.abs_tol > 0) ||
            !(c.options.composite.rel_tol > 0)) {
            throw Error(ErrorCode::Parse, at + ".tolerances: must be positive");
        }
        if (j.contains("out")) {
            const auto o = detail::json_get<std::string>(j, "out", at);
            c.out_dir = std::filesystem::path(o).is_absolute() ? o : (base_dir / o).string();
        }
        return c;
    }

    /// Throws CapExceeded naming the first n whose lists or dimension would
    /// exceed the desk-scale limits.
    void check_caps() const {
        const std::size_t d = null_h.base.front().dim();
        for (std::size_t n = n_min; n <= n_max; n++) {
            const double dim = std::pow(static_cast<double>(d), static_cast<double>(n));
            const std::string where = "n=" + std::to_string(n) + ": ";
            if (dim > 4096) {
                throw Error(ErrorCode::CapExceeded, where + "dimension " + format_sig(dim, 6) + " exceeds 4096");
            }
            if (null_h.list_size(n) > 64 || alt_h.list_size(n) > 64) {
                throw Error(ErrorCode::CapExceeded, where + "hypothesis list exceeds 64 states");
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Subcommands.

struct CliStreams {
    std::ostream &out;
    std::ostream &err;
};

inline std::string eps_tag(double eps) {
    return "eps" + format_sig(eps, 6);
}

inline int cmd_scan(const std::string &config_path, std::optional<std::string> out_dir,
                    std::optional<std::uint64_t> seed, std::optional<std::string> eps_csv,
                    std::optional<std::size_t> n_max, std::optional<double> tol, CliStreams io) {
    const auto j = read_json_file(config_path);
    auto cfg = ScenarioConfig::from_json(j, std::filesystem::path(config_path).parent_path(), seed);
    if (out_dir) {
        cfg.out_dir = *out_dir;
    }
    if (eps_csv) {
        cfg.eps = parse_eps_list(*eps_csv);
    }
    if (n_max) {
        if (*n_max < cfg.n_min) {
            throw Error(ErrorCode::Parse, "--nmax below the configured minimum n");
        }
        cfg.n_max = *n_max;
    }
    if (tol) {
        if (!(*tol > 0)) {
            throw Error(ErrorCode::Parse, "--tol must be positive");
        }
        cfg.options.hull.gap_tol = *tol;
    }
    cfg.check_caps();

    std::vector<std::size_t> ns;
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; n++) {
        ns.push_back(n);
    }
    const HypothesisSpec &null_h = cfg.null_h;
    const ListSequence a_seq = [&null_h](std::size_t n) { return null_h.list(n); };
    const std::filesystem::path dir(cfg.out_dir);
    std::vector<std::string> written;
    auto scans = scan_exponents(cfg.scenario, a_seq, cfg.alt_h.base, cfg.alt_h.mode, cfg.eps, ns, cfg.options);
    for (auto &scan : scans) {
        const double eps = scan.eps;
        scan.metadata["null"] = cfg.null_h.descriptor;
        scan.metadata["alternative"] = cfg.alt_h.descriptor;
        scan.metadata["null_mode"] = alt_mode_name(cfg.null_h.mode);
        scan.metadata["seed"] = cfg.seed;
        scan.metadata["composite_abs_tol"] = cfg.options.composite.abs_tol;
        scan.metadata["composite_rel_tol"] = cfg.options.composite.rel_tol;
        const std::string stem = cfg.scenario + "_" + eps_tag(eps);
        write_atomic(dir / (stem + ".csv"), scan.to_csv());
        write_atomic(dir / (stem + ".json"), scan.to_json().dump(2) + "\n");
        written.push_back(stem + ".csv");
        written.push_back(stem + ".json");
        for (const auto &r : scan.rows) {
            io.out << cfg.scenario << " eps=" << format_sig(eps, 6) << " n=" << r.n << " rate=["
                   << format_sig(r.rate.lower, 8) << ", " << format_sig(r.rate.upper, 8) << "] relent=["
                   << format_sig(r.relent.lower, 8) << ", " << format_sig(r.relent.upper, 8) << "] bits\n";
        }
    }
    write_sidecar(dir, cfg.scenario, "scan", written);
    return kExitOk;
}

inline int cmd_check(std::optional<std::string> config_path, std::optional<std::string> out_dir,
                     std::optional<std::uint64_t> seed, std::optional<std::string> eps_csv, CliStreams io) {
    HarnessConfig cfg;
    if (config_path) {
        cfg = HarnessConfig::from_json(read_json_file(*config_path), *config_path);
    }
    if (seed) {
        cfg.seed = *seed;
    }
    if (eps_csv) {
        const auto e = parse_eps_list(*eps_csv);
        if (e.size() != 1) {
            throw Error(ErrorCode::Parse, "check takes a single --eps value");
        }
        cfg.eps = e.front();
    }
    const auto reports = run_all(cfg);
    const auto report = suite_to_json(reports, cfg.seed);
    io.out << suite_table(reports);
    if (out_dir) {
        const std::filesystem::path dir(*out_dir);
        write_atomic(dir / "report.json", report.dump(2) + "\n");
        write_sidecar(dir, "report", "check", {"report.json"});
    }
    const bool ok = suite_passed(reports);
    io.out << (ok ? "all checks passed\n" : "some checks FAILED\n");
    return ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_divergence(const std::string &name, const std::string &a_path, const std::string &b_path,
                          std::optional<std::string> eps_csv, std::optional<std::string> out_dir, CliStreams io) {
    const DensityOperator rho(load_operator(a_path));
    const DensityOperator sigma(load_operator(b_path));
    rho.op().check_same_dims(sigma);
    nlohmann::json j;
    j["divergence"] = name;
    j["units"] = "bits";
    if (name == "umegaki" || name == "measured") {
        if (eps_csv) {
            throw Error(ErrorCode::Parse, "--eps applies to dh only");
        }
        const double v = name == "umegaki" ? umegaki(rho, sigma) : measured_relent_pinched(rho, sigma);
        j["value"] = number_to_json(v);
        io.out << name << " = " << format_sig(v, 12) << " bits\n";
    } else if (name == "dh") {
        if (!eps_csv) {
            throw Error(ErrorCode::Parse, "dh needs --eps");
        }
        nlohmann::json arr = nlohmann::json::array();
        for (double eps : parse_eps_list(*eps_csv)) {
            const auto np = neyman_pearson_simple(rho, sigma, eps);
            const auto b = neg_log2_bracket(np.bracket());
            arr.push_back({{"eps", eps}, {"beta", np.bracket().to_json()}, {"dh", b.to_json()}});
            io.out << "dh eps=" << format_sig(eps, 6) << " = [" << format_sig(b.lower, 12) << ", "
                   << format_sig(b.upper, 12) << "] bits\n";
        }
        j["values"] = std::move(arr);
    } else {
        throw Error(ErrorCode::Parse, "unknown divergence '" + name + "' (umegaki, measured, dh)");
    }
    if (out_dir) {
        const std::filesystem::path dir(*out_dir);
        write_atomic(dir / ("divergence_" + name + ".json"), j.dump(2) + "\n");
        write_sidecar(dir, "divergence_" + name, "divergence", {"divergence_" + name + ".json"});
    }
    return kExitOk;
}

struct FamilyArgs {
    std::string action;
    std::string kind;
    std::size_t qubits = 1;
    std::vector<std::size_t> dims = {2, 2};
    std::size_t samples = 2;
    std::vector<std::string> state_files;
    std::size_t n_max = 2;
    std::uint64_t seed = 1;
};

inline StateFamily build_family(const FamilyArgs &a) {
    if (a.kind == "stab") {
        return StateFamily::stabiliser(a.qubits);
    }
    if (a.kind == "sep-inner") {
        if (a.dims.size() != 2) {
            throw Error(ErrorCode::Parse, "--dims expects d_A,d_B");
        }
        return StateFamily::separable_inner(a.dims[0], a.dims[1], a.samples, a.seed);
    }
    if (a.kind == "av" || a.kind == "iid" || a.kind == "explicit") {
        if (a.state_files.empty()) {
            throw Error(ErrorCode::Parse, a.kind + " family needs --states");
        }
        std::vector<DensityOperator> base;
        for (const auto &f : a.state_files) {
            base.emplace_back(load_operator(f));
        }
        if (a.kind == "av") {
            return StateFamily::av(std::move(base), 1);
        }
        if (a.kind == "iid") {
            return StateFamily::iid(std::move(base), 1);
        }
        return StateFamily::explicit_hull(std::move(base));
    }
    throw Error(ErrorCode::Unsupported, "unsupported family '" + a.kind + "' (stab, sep-inner, av, iid, explicit)");
}

inline int cmd_family(const FamilyArgs &a, std::optional<std::string> out_dir, CliStreams io) {
    const StateFamily fam = build_family(a);
    const std::string stem = "family_" + a.kind + "_" + a.action;
    if (a.action == "enumerate") {
        const auto pts = fam.extreme_points();
        std::string doc = "[\n";
        for (std::size_t i = 0; i < pts.size(); i++) {
            doc += "  " + operator_to_json(pts[i]) + (i + 1 < pts.size() ? ",\n" : "\n");
        }
        doc += "]\n";
        io.out << family_kind_name(fam.kind()) << ": " << pts.size() << " states\n";
        if (out_dir) {
            const std::filesystem::path dir(*out_dir);
            write_atomic(dir / (stem + ".json"), doc);
            write_sidecar(dir, stem, "family", {stem + ".json"});
        }
        return kExitOk;
    }
    if (a.action != "audit") {
        throw Error(ErrorCode::Parse, "family action must be 'audit' or 'enumerate'");
    }
    AxiomAuditOptions opt;
    opt.max_n = a.n_max;
    opt.seed = a.seed;
    // tau lives on a single copy
    const auto tau = DensityOperator::maximally_mixed(fam.at(1).base().front().dims());
    const auto audit = axiom_audit(fam, tau, opt);
    io.out << suite_table(audit.reports);
    io.out << "filter radius at grid: " << format_sig(audit.filter_radius, 6) << "\n";
    bool ok = true;
    for (const auto &r : audit.reports) {
        // closure under arbitrary products is informational only
        ok = ok && (r.verdict != Verdict::Fail || r.id == "tensor-product-closure");
    }
    if (out_dir) {
        auto j = suite_to_json(audit.reports, a.seed);
        j["family"] = family_kind_name(fam.kind());
        j["filter_radius"] = number_to_json(audit.filter_radius);
        j["c"] = number_to_json(audit.c);
        const std::filesystem::path dir(*out_dir);
        write_atomic(dir / (stem + ".json"), j.dump(2) + "\n");
        write_sidecar(dir, stem, "family", {stem + ".json"});
    }
    return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// Dispatcher.

/// Entry point shared by the binary and the tests. Never throws.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out = std::cout,
                   std::ostream &err = std::cerr) {
    CliStreams io{out, err};
    CLI::App app{"steinlab: composite quantum hypothesis testing at desk scale"};
    app.require_subcommand(1);

    std::string config, out_dir, eps_csv;
    std::uint64_t seed = 0;
    std::size_t n_max = 0;
    double tol = 0;

    auto *scan = app.add_subcommand("scan", "run an exponent scan from a scenario config");
    scan->add_option("--config", config, "scenario JSON")->required();
    scan->add_option("--out", out_dir, "output directory (overrides the config)");
    scan->add_option("--seed", seed, "seed (overrides the config)");
    scan->add_option("--eps", eps_csv, "comma-separated eps list (overrides the config)");
    scan->add_option("--nmax", n_max, "largest n (overrides the config)");
    scan->add_option("--tol", tol, "hull relative-entropy gap tolerance");

    auto *check = app.add_subcommand("check", "run the verification suite");
    check->add_option("--config", config, "harness config JSON");
    check->add_option("--out", out_dir, "write report.json here");
    check->add_option("--seed", seed, "suite seed");
    check->add_option("--eps", eps_csv, "eps used by the suite");

    std::string div_name, a_path, b_path;
    auto *div = app.add_subcommand("divergence", "evaluate a divergence between two operator files");
    div->add_option("name", div_name, "umegaki | measured | dh")->required();
    div->add_option("a", a_path, "first operator JSON")->required();
    div->add_option("b", b_path, "second operator JSON")->required();
    div->add_option("--eps", eps_csv, "comma-separated eps list (dh)");
    div->add_option("--out", out_dir, "write JSON here");

    FamilyArgs fa;
    std::string dims_csv;
    auto *family = app.add_subcommand("family", "audit or enumerate a state family");
    family->add_option("action", fa.action, "audit | enumerate")->required();
    family->add_option("kind", fa.kind, "stab | sep-inner | av | iid | explicit")->required();
    family->add_option("--qubits", fa.qubits, "stabiliser qubit count");
    family->add_option("--dims", dims_csv, "bipartition d_A,d_B for sep-inner");
    family->add_option("--samples", fa.samples, "random product states for sep-inner");
    family->add_option("--states", fa.state_files, "operator files for av/iid/explicit");
    family->add_option("--nmax", n_max, "largest level audited");
    family->add_option("--seed", seed, "seed");
    family->add_option("--out", out_dir, "write JSON here");

    std::vector<std::string> argv_store = {"steinlab"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &s : argv_store) {
        argv.push_back(s.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto opt_str = [](CLI::App *sub, const char *flag, const std::string &v) {
        return sub->count(flag) ? std::optional<std::string>(v) : std::nullopt;
    };
    auto opt_seed = [&](CLI::App *sub) {
        return sub->count("--seed") ? std::optional<std::uint64_t>(seed) : std::nullopt;
    };
    try {
        if (scan->parsed()) {
            return cmd_scan(config, opt_str(scan, "--out", out_dir), opt_seed(scan), opt_str(scan, "--eps", eps_csv),
                            scan->count("--nmax") ? std::optional<std::size_t>(n_max) : std::nullopt,
                            scan->count("--tol") ? std::optional<double>(tol) : std::nullopt, io);
        }
        if (check->parsed()) {
            return cmd_check(opt_str(check, "--config", config), opt_str(check, "--out", out_dir), opt_seed(check),
                             opt_str(check, "--eps", eps_csv), io);
        }
        if (div->parsed()) {
            return cmd_divergence(div_name, a_path, b_path, opt_str(div, "--eps", eps_csv),
                                  opt_str(div, "--out", out_dir), io);
        }
        if (family->parsed()) {
            if (!dims_csv.empty()) {
                fa.dims.clear();
                std::stringstream ss(dims_csv);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    try {
                        fa.dims.push_back(static_cast<std::size_t>(std::stoul(item)));
                    } catch (const std::exception &) {
                        throw Error(ErrorCode::Parse, "--dims: bad entry '" + item + "'");
                    }
                }
            }
            if (family->count("--nmax")) {
                fa.n_max = n_max;
            }
            if (family->count("--seed")) {
                fa.seed = seed;
            }
            return cmd_family(fa, opt_str(family, "--out", out_dir), io);
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_status_for(e.code());
    } catch (const nlohmann::json::exception &e) {
        err << "error: Parse: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace steinlab
