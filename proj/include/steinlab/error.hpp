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

#include <stdexcept>
#include <string>

namespace steinlab {

enum class ErrorCode {
    CapExceeded,
    BadSubsystem,
    EigFailure,
    NotPSD,
    DimMismatch,
    InvalidArgument,
    NoFeasibleTest,
    Unsupported,
    Parse,
};

inline const char *error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::CapExceeded:
            return "CapExceeded";
        case ErrorCode::BadSubsystem:
            return "BadSubsystem";
        case ErrorCode::EigFailure:
            return "EigFailure";
        case ErrorCode::NotPSD:
            return "NotPSD";
        case ErrorCode::DimMismatch:
            return "DimMismatch";
        case ErrorCode::InvalidArgument:
            return "InvalidArgument";
        case ErrorCode::NoFeasibleTest:
            return "NoFeasibleTest";
        case ErrorCode::Unsupported:
            return "Unsupported";
        case ErrorCode::Parse:
            return "Parse";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace steinlab
