// Copyright 2026 The Quantale Authors
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
#include "quantale/error.hpp"

namespace quantale {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::ZeroProbabilityCondition: return "ZeroProbabilityCondition";
    case ErrorCode::ExplosionGuard: return "ExplosionGuard";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::PreciseQuantifierInFastPath: return "PreciseQuantifierInFastPath";
    case ErrorCode::AllFalse: return "AllFalse";
    case ErrorCode::NoViableUtterance: return "NoViableUtterance";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace quantale
