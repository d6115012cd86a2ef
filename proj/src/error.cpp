// Copyright 2026 The parreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "parreg/error.hpp"

namespace parreg {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "E_INVALID_ARGUMENT";
    case ErrorCode::Configuration: return "E_CONFIG";
    case ErrorCode::Domain: return "E_DOMAIN";
    case ErrorCode::Geometry: return "E_GEOMETRY";
    case ErrorCode::Range: return "E_RANGE";
    case ErrorCode::Resolution: return "E_RESOLUTION";
    case ErrorCode::MalformedHeader: return "E_MALFORMED_HEADER";
    case ErrorCode::TruncatedPayload: return "E_TRUNCATED";
    case ErrorCode::ChecksumMismatch: return "E_CHECKSUM";
    case ErrorCode::Io: return "E_IO";
    case ErrorCode::Numerical: return "E_NUMERICAL";
    case ErrorCode::Fit: return "E_FIT";
    case ErrorCode::Internal: return "E_INTERNAL";
  }
  return "E_UNKNOWN";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace parreg
