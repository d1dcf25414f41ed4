// Copyright 2026 The robustlimit Authors
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

#include "robustlimit/errors.hpp"

namespace robustlimit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotAntiHermitian: return "NotAntiHermitian";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::StageOneFailed: return "StageOneFailed";
    case ErrorKind::Nonconvergence: return "Nonconvergence";
  }
  return "Unknown";
}

}  // namespace robustlimit
