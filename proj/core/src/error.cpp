#include "alab/error.hpp"

namespace alab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SpanTooShort: return "SpanTooShort";
    case ErrorCode::InvalidSignal: return "InvalidSignal";
    case ErrorCode::MisalignedOffset: return "MisalignedOffset";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::OutOfWindow: return "OutOfWindow";
    case ErrorCode::UnstableStep: return "UnstableStep";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace alab
