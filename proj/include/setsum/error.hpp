#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace setsum {

enum class Errc {
  MalformedRow,
  UnknownCourse,
  DuplicateResponseId,
  EnrollmentExceeded,
  InvalidTemplate,
  DimensionMismatch,
  EmptyFile,
  SingleClassCorpus,
  EmptyAspect,
  MissingSeedToken,
  InvalidAspectSpec,
  TooFewSentences,
  EmptySummary,
  InvalidArgument,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Base exception for every recoverable failure in the library. The code
/// identifies the failure class; what() carries a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace setsum
