// SPDX-License-Identifier: Apache-2.0
#include "figr/util/error.hpp"

namespace figr {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::MalformedAction: return "MalformedAction";
    case Errc::RoundLimitExceeded: return "RoundLimitExceeded";
    case Errc::EpisodeFinished: return "EpisodeFinished";
    case Errc::PolicyUnavailable: return "PolicyUnavailable";
    case Errc::MissingSuitabilityTag: return "MissingSuitabilityTag";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NumericalError: return "NumericalError";
    case Errc::EmptyList: return "EmptyList";
    case Errc::HandshakeMismatch: return "HandshakeMismatch";
    case Errc::FrameTooLarge: return "FrameTooLarge";
    case Errc::Timeout: return "Timeout";
    case Errc::ProtocolError: return "ProtocolError";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace figr
