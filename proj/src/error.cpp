#include "setsum/error.hpp"

namespace setsum {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::UnknownCourse: return "UnknownCourse";
    case Errc::DuplicateResponseId: return "DuplicateResponseId";
    case Errc::EnrollmentExceeded: return "EnrollmentExceeded";
    case Errc::InvalidTemplate: return "InvalidTemplate";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::SingleClassCorpus: return "SingleClassCorpus";
    case Errc::EmptyAspect: return "EmptyAspect";
    case Errc::MissingSeedToken: return "MissingSeedToken";
    case Errc::InvalidAspectSpec: return "InvalidAspectSpec";
    case Errc::TooFewSentences: return "TooFewSentences";
    case Errc::EmptySummary: return "EmptySummary";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace setsum
