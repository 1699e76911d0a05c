/******************************************************************************
 * Copyright 2026 The roadtrack Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "roadtrack/core/error.hpp"

namespace roadtrack {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kTooFewPoints: return "TooFewPoints";
    case ErrorKind::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::kAtInfinity: return "AtInfinity";
    case ErrorKind::kParallelLines: return "ParallelLines";
    case ErrorKind::kNoAbovePlaneSamples: return "NoAbovePlaneSamples";
    case ErrorKind::kDegenerateX: return "DegenerateX";
    case ErrorKind::kNoSharedObjects: return "NoSharedObjects";
    case ErrorKind::kNonMonotoneTrack: return "NonMonotoneTrack";
    case ErrorKind::kDisconnectedChain: return "DisconnectedChain";
    case ErrorKind::kTooFewObservations: return "TooFewObservations";
    case ErrorKind::kZeroDuration: return "ZeroDuration";
    case ErrorKind::kOutOfDomain: return "OutOfDomain";
    case ErrorKind::kDirectionMismatch: return "DirectionMismatch";
    case ErrorKind::kEmptyScene: return "EmptyScene";
    case ErrorKind::kZeroDistance: return "ZeroDistance";
    case ErrorKind::kInfeasibleDensity: return "InfeasibleDensity";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kValidationError: return "ValidationError";
    case ErrorKind::kSchemaMismatch: return "SchemaMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidationError:
    case ErrorKind::kInfeasibleDensity:
    case ErrorKind::kDirectionMismatch:
      return 2;
    case ErrorKind::kParseError:
    case ErrorKind::kSchemaMismatch:
      return 3;
    default:
      return 4;
  }
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace roadtrack
