// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace figr {

enum class Errc {
  InvalidArgument,
  MalformedAction,
  RoundLimitExceeded,
  EpisodeFinished,
  PolicyUnavailable,
  MissingSuitabilityTag,
  LengthMismatch,
  ShapeMismatch,
  NumericalError,
  EmptyList,
  HandshakeMismatch,
  FrameTooLarge,
  Timeout,
  ProtocolError,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Exception type for every operation-level failure outside the interpreter.
/// Interpreter failures are values (figscript::ExecError), not exceptions.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace figr
