#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roadtrack {

enum class ErrorKind {
  // geometry
  kTooFewPoints,
  kDegenerateConfiguration,
  kAtInfinity,
  kParallelLines,
  kNoAbovePlaneSamples,
  kDegenerateX,
  // timesync
  kNoSharedObjects,
  kNonMonotoneTrack,
  kDisconnectedChain,
  kTooFewObservations,
  kZeroDuration,
  kOutOfDomain,
  // tracking / evaluation / simulator
  kDirectionMismatch,
  kEmptyScene,
  kZeroDistance,
  kInfeasibleDensity,
  // io / cli
  kParseError,
  kValidationError,
  kSchemaMismatch,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// 2 = validation, 3 = parse / schema, 4 = numerical failure.
int exit_code(ErrorKind kind);

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace roadtrack
