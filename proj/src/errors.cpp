// Copyright 2026 The trine-estimators Authors
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

#include "trine/errors.hpp"

namespace trine {

const char *error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument:
        return "invalid argument";
    case ErrorCode::Range:
        return "range error";
    case ErrorCode::Convergence:
        return "convergence error";
    case ErrorCode::Capacity:
        return "capacity error";
    case ErrorCode::Consistency:
        return "consistency error";
    case ErrorCode::Io:
        return "i/o error";
    case ErrorCode::Unsupported:
        return "unsupported";
    }
    return "unknown error";
}

void fail(ErrorCode code, const std::string &message) { throw Error(code, message); }

} // namespace trine
