#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jpdsr {

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class ErrorKind {
  Shape,              ///< frame or image dimensions disagree
  InsufficientData,   ///< too few frames for the estimator
  Config,             ///< invalid parameter or configuration
  State,              ///< operation called on a value in the wrong state
  Io,                 ///< file could not be read or written
  Format,             ///< file content does not match the expected layout
  Resolution,         ///< sub-grid too coarse for the requested model
  DegenerateDensity,  ///< zero-mass object, nothing to sample
  EmptyFilter,        ///< filtering removed every plane
  DegeneratePlane,    ///< plane mean is zero, cannot normalize
  Interpolation,      ///< invalid entry without any valid neighbour
  Protocol,           ///< phase-shift set does not match the protocol
  SizeGuard,          ///< problem too large for a brute-force routine
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace jpdsr
