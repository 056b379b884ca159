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
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "steinlab/operator_json.hpp"

namespace steinlab {

enum class Verdict { Pass, Fail, Inconclusive };

inline const char *verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass:
            return "pass";
        case Verdict::Fail:
            return "fail";
        case Verdict::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

/// Outcome of one verified inequality over a batch of instances. The slack is
/// signed: negative means the inequality was violated by that much.
struct CheckReport {
    std::string id;
    std::string anchor;
    std::uint64_t seed = 0;
    std::size_t instances = 0;
    double worst_slack = kInfSlack;
    double tolerance = 0;
    Verdict verdict = Verdict::Pass;
    /// Set when the check could not decide (e.g. preconditions not met).
    bool inconclusive = false;
    /// Free-form replay data: the worst instance and anything else useful.
    nlohmann::json details = nlohmann::json::object();

    static constexpr double kInfSlack = 1e300;

    CheckReport() = default;
    CheckReport(std::string id_, std::string anchor_, std::uint64_t seed_, double tol)
        : id(std::move(id_)), anchor(std::move(anchor_)), seed(seed_), tolerance(tol) {
    }

    /// Records one instance; keeps `replay` for the worst one.
    void record(double slack, nlohmann::json replay = nullptr) {
        instances++;
        if (std::isnan(slack)) {
            slack = -kInfSlack;
        }
        if (slack < worst_slack) {
            worst_slack = slack;
            if (!replay.is_null()) {
                details["worst_instance"] = std::move(replay);
            }
        }
    }

    /// Folds the instances of `other` (same inequality) into this report.
    void absorb(const CheckReport &other) {
        instances += other.instances;
        inconclusive = inconclusive || other.inconclusive;
        if (other.instances > 0 && other.worst_slack < worst_slack) {
            worst_slack = other.worst_slack;
            if (other.details.contains("worst_instance")) {
                details["worst_instance"] = other.details["worst_instance"];
            }
        }
    }

    /// Verdict: fail iff worst slack < -tolerance.
    CheckReport &finish() {
        if (instances > 0 && worst_slack < -tolerance) {
            verdict = Verdict::Fail;
        } else if (inconclusive || instances == 0) {
            verdict = Verdict::Inconclusive;
        } else {
            verdict = Verdict::Pass;
        }
        return *this;
    }

    bool passed() const {
        return verdict == Verdict::Pass;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["id"] = id;
        j["anchor"] = anchor;
        j["seed"] = seed;
        j["instances"] = instances;
        j["worst_slack"] = instances == 0 ? nlohmann::json(nullptr) : nlohmann::json(format_sig(worst_slack, 12));
        j["tolerance"] = tolerance;
        j["verdict"] = verdict_name(verdict);
        j["details"] = details;
        return j;
    }
};

inline nlohmann::json suite_to_json(const std::vector<CheckReport> &reports, std::uint64_t seed) {
    nlohmann::json j;
    j["schema"] = 1;
    j["seed"] = seed;
    std::size_t failed = 0;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : reports) {
        arr.push_back(r.to_json());
        failed += r.verdict == Verdict::Fail;
    }
    j["checks"] = std::move(arr);
    j["failed"] = failed;
    return j;
}

inline std::string suite_table(const std::vector<CheckReport> &reports) {
    std::size_t w = 5;
    for (const auto &r : reports) {
        w = std::max(w, r.id.size());
    }
    std::ostringstream out;
    out << "check" << std::string(w - 5 + 2, ' ') << "verdict       instances  worst slack\n";
    for (const auto &r : reports) {
        out << r.id << std::string(w - r.id.size() + 2, ' ');
        std::string v = verdict_name(r.verdict);
        out << v << std::string(14 - v.size(), ' ');
        std::string n = std::to_string(r.instances);
        out << std::string(9 - std::min<std::size_t>(9, n.size()), ' ') << n << "  ";
        out << (r.instances == 0 ? std::string("-") : format_sig(r.worst_slack, 6)) << "\n";
    }
    return out.str();
}

inline bool suite_passed(const std::vector<CheckReport> &reports) {
    return std::none_of(reports.begin(), reports.end(), [](const CheckReport &r) { return r.verdict == Verdict::Fail; });
}

}  // namespace steinlab
