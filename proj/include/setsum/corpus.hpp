#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "setsum/error.hpp"

namespace setsum {

/// "semester + course number"; unique per course.
struct CourseKey {
  std::string term;
  std::string course_id;

  std::string str() const { return term + "/" + course_id; }
  auto operator<=>(const CourseKey&) const = default;
};

/// Parses "TERM/COURSE" (or "TERM:COURSE").
CourseKey parse_course_key(std::string_view text);

enum class Question { CourseRate, InstructorRate, CourseComments, InstructorComments };

std::string_view to_string(Question q) noexcept;
/// Accepts the enum spelling as well as the short forms "course" and
/// "instructor" (which name the open-ended questions).
Question question_from_string(std::string_view text);
/// "course" / "instructor"; used in paths, ids and JSON.
std::string_view short_name(Question q) noexcept;

constexpr bool is_open_ended(Question q) noexcept {
  return q == Question::CourseComments || q == Question::InstructorComments;
}

/// Comment questions are paired with the rating asking about the same thing.
constexpr Question paired_rating(Question q) noexcept {
  switch (q) {
    case Question::CourseComments: return Question::CourseRate;
    case Question::InstructorComments: return Question::InstructorRate;
    default: return q;
  }
}

struct CourseRoster {
  CourseKey key;
  int enrollment = 0;

  bool operator==(const CourseRoster&) const = default;
};

/// One student's questionnaire. Skipped questions are absent, never 0 or "".
struct SetResponse {
  CourseKey key;
  std::string response_id;
  std::optional<int> course_rate;
  std::optional<int> instructor_rate;
  std::optional<std::string> course_comment;
  std::optional<std::string> instructor_comment;

  std::optional<int> rating(Question q) const;
  const std::optional<std::string>& comment(Question q) const;

  bool operator==(const SetResponse&) const = default;
};

struct Sentence {
  std::string id;
  std::string source_response_id;
  Question question = Question::CourseComments;
  std::string text;
  std::vector<std::string> tokens;
  std::size_t index_in_comment = 0;
  // Byte range of `text` inside the parent comment.
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct CourseData {
  CourseRoster roster;
  std::vector<SetResponse> responses;
};

struct RowError {
  std::string file;
  std::size_t line = 0;
  Errc code = Errc::MalformedRow;
  std::string message;
};

/// Raised by parse_corpus with every offending row, not just the first.
class CorpusError : public Error {
 public:
  explicit CorpusError(std::vector<RowError> rows);

  const std::vector<RowError>& rows() const noexcept { return rows_; }

 private:
  std::vector<RowError> rows_;
};

/// Courses are returned sorted by key; responses keep file order.
std::vector<CourseData> parse_corpus(const std::filesystem::path& roster_file,
                                     const std::filesystem::path& responses_file);
std::vector<CourseData> parse_corpus(std::istream& roster, std::istream& responses);

void write_roster_csv(std::ostream& out, std::span<const CourseData> courses);
void write_responses_csv(std::ostream& out, std::span<const CourseData> courses);

/// Lowercased maximal runs of letters, digits and apostrophes. Bytes >= 0x80
/// count as letters so UTF-8 words stay whole. Edge apostrophes are trimmed.
std::vector<std::string> tokenize(std::string_view text);

std::string sentence_id(std::string_view response_id, Question q, std::size_t index);

/// Splits on runs of . ! ? followed by whitespace (or end of text), except
/// after a known abbreviation. Fragments without any token are merged into
/// the neighbouring sentence. Whitespace-only input yields no sentences.
std::vector<Sentence> segment_comment(std::string_view comment,
                                      std::string_view response_id = {},
                                      Question question = Question::CourseComments);

/// All sentences of one open-ended question across `responses`, in order.
std::vector<Sentence> segment_responses(std::span<const SetResponse> responses, Question question);

}  // namespace setsum
