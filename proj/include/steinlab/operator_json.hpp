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
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"
#include "steinlab/operator.hpp"

namespace steinlab {

/// 17 significant digits; enough to round-trip any double.
inline std::string format_exact(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "\"inf\"" : "\"-inf\"";
    }
    if (v == 0.0) {
        return "0";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_sig(double v, int digits) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    if (v == 0.0) {
        v = 0.0;  // no "-0"
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

/// {"dims": [...], "re": [[...]], "im": [[...]]}, row-major, every entry
/// written with 17 significant digits.
inline std::string operator_to_json(const HermitianOperator &x) {
    std::ostringstream out;
    out << "{\"dims\": [";
    for (std::size_t i = 0; i < x.dims().size(); i++) {
        out << (i ? ", " : "") << x.dims()[i];
    }
    out << "], ";
    for (int part = 0; part < 2; part++) {
        out << (part == 0 ? "\"re\": [" : ", \"im\": [");
        for (std::size_t r = 0; r < x.dim(); r++) {
            out << (r ? ", [" : "[");
            for (std::size_t c = 0; c < x.dim(); c++) {
                const double v = part == 0 ? x(r, c).real() : x(r, c).imag();
                out << (c ? ", " : "") << format_exact(v);
            }
            out << "]";
        }
        out << "]";
    }
    out << "}";
    return out.str();
}

inline HermitianOperator operator_from_json(const nlohmann::json &j) {
    try {
        const auto dims = j.at("dims").get<std::vector<std::size_t>>();
        const auto &re = j.at("re");
        const std::size_t n = re.size();
        const bool has_im = j.contains("im");
        CMatrix m(n, n);
        for (std::size_t r = 0; r < n; r++) {
            if (re.at(r).size() != n) {
                throw Error(ErrorCode::Parse, "operator JSON row " + std::to_string(r) + " has wrong length");
            }
            for (std::size_t c = 0; c < n; c++) {
                const double im = has_im ? j.at("im").at(r).at(c).get<double>() : 0.0;
                m(r, c) = cplx(re.at(r).at(c).get<double>(), im);
            }
        }
        const double scale = std::max(1.0, m.max_abs());
        if ((m - m.adjoint()).max_abs() > 1e-8 * scale) {
            throw Error(ErrorCode::Parse, "operator JSON is not Hermitian");
        }
        return HermitianOperator(dims, m);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Parse, std::string("operator JSON: ") + e.what());
    }
}

inline HermitianOperator load_operator(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Parse, "cannot open operator file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Parse, path + ": " + e.what());
    }
    return operator_from_json(j);
}

}  // namespace steinlab
