#include "setsum/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "setsum/csv.hpp"

namespace setsum {

namespace {

constexpr std::string_view kRosterHeader[] = {"term", "course_id", "enrollment"};
constexpr std::string_view kResponsesHeader[] = {"term",          "course_id",          "response_id",
                                                 "course_rate",   "instructor_rate",    "course_comment",
                                                 "instructor_comment"};

template <std::size_t N>
bool header_matches(const csv::Record& rec, const std::string_view (&expected)[N]) {
  if (rec.fields.size() != N) return false;
  for (std::size_t i = 0; i < N; ++i) {
    if (rec.fields[i] != expected[i]) return false;
  }
  return true;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

CourseKey parse_course_key(std::string_view text) {
  auto pos = text.find_first_of("/:");
  if (pos == std::string_view::npos || pos == 0 || pos + 1 == text.size()) {
    throw Error(Errc::InvalidArgument, "course key must look like TERM/COURSE: " + std::string(text));
  }
  return CourseKey{std::string(text.substr(0, pos)), std::string(text.substr(pos + 1))};
}

std::string_view to_string(Question q) noexcept {
  switch (q) {
    case Question::CourseRate: return "CourseRate";
    case Question::InstructorRate: return "InstructorRate";
    case Question::CourseComments: return "CourseComments";
    case Question::InstructorComments: return "InstructorComments";
  }
  return "?";
}

std::string_view short_name(Question q) noexcept {
  switch (q) {
    case Question::CourseRate:
    case Question::CourseComments: return "course";
    case Question::InstructorRate:
    case Question::InstructorComments: return "instructor";
  }
  return "?";
}

Question question_from_string(std::string_view text) {
  if (text == "CourseRate") return Question::CourseRate;
  if (text == "InstructorRate") return Question::InstructorRate;
  if (text == "CourseComments" || text == "course") return Question::CourseComments;
  if (text == "InstructorComments" || text == "instructor") return Question::InstructorComments;
  throw Error(Errc::InvalidArgument, "unknown question: " + std::string(text));
}

std::optional<int> SetResponse::rating(Question q) const {
  switch (paired_rating(q)) {
    case Question::CourseRate: return course_rate;
    case Question::InstructorRate: return instructor_rate;
    default: return std::nullopt;
  }
}

const std::optional<std::string>& SetResponse::comment(Question q) const {
  static const std::optional<std::string> none;
  switch (q) {
    case Question::CourseComments: return course_comment;
    case Question::InstructorComments: return instructor_comment;
    default: return none;
  }
}

CorpusError::CorpusError(std::vector<RowError> rows)
    : Error(rows.empty() ? Errc::MalformedRow : rows.front().code,
            [&] {
              std::ostringstream msg;
              msg << rows.size() << " invalid row(s)";
              for (const auto& r : rows) {
                msg << "\n  " << r.file << ':' << r.line << ": " << to_string(r.code) << ": " << r.message;
              }
              return msg.str();
            }()),
      rows_(std::move(rows)) {}

std::vector<CourseData> parse_corpus(const std::filesystem::path& roster_file,
                                     const std::filesystem::path& responses_file) {
  auto roster = open_input(roster_file);
  auto responses = open_input(responses_file);
  return parse_corpus(roster, responses);
}

std::vector<CourseData> parse_corpus(std::istream& roster_in, std::istream& responses_in) {
  std::vector<RowError> errors;
  std::map<CourseKey, CourseData> courses;

  auto roster_rows = csv::read(roster_in);
  if (roster_rows.empty() || !header_matches(roster_rows.front(), kRosterHeader)) {
    throw Error(Errc::MalformedRow, "roster: missing header term,course_id,enrollment");
  }
  for (std::size_t i = 1; i < roster_rows.size(); ++i) {
    const auto& rec = roster_rows[i];
    auto fail = [&](Errc code, std::string msg) {
      errors.push_back({"roster", rec.line, code, std::move(msg)});
    };
    if (rec.fields.size() != 3) {
      fail(Errc::MalformedRow, "expected 3 columns, got " + std::to_string(rec.fields.size()));
      continue;
    }
    CourseKey key{rec.fields[0], rec.fields[1]};
    if (key.term.empty() || key.course_id.empty()) {
      fail(Errc::MalformedRow, "empty term or course_id");
      continue;
    }
    auto enrollment = parse_int(rec.fields[2]);
    if (!enrollment || *enrollment < 1) {
      fail(Errc::MalformedRow, "enrollment must be a positive integer: '" + rec.fields[2] + "'");
      continue;
    }
    if (courses.contains(key)) {
      fail(Errc::MalformedRow, "duplicate course " + key.str());
      continue;
    }
    courses.emplace(key, CourseData{CourseRoster{key, *enrollment}, {}});
  }

  auto response_rows = csv::read(responses_in);
  if (response_rows.empty() || !header_matches(response_rows.front(), kResponsesHeader)) {
    throw Error(Errc::MalformedRow, "responses: missing header");
  }
  std::set<std::string> seen_ids;
  for (std::size_t i = 1; i < response_rows.size(); ++i) {
    const auto& rec = response_rows[i];
    auto fail = [&](Errc code, std::string msg) {
      errors.push_back({"responses", rec.line, code, std::move(msg)});
    };
    if (rec.fields.size() != 7) {
      fail(Errc::MalformedRow, "expected 7 columns, got " + std::to_string(rec.fields.size()));
      continue;
    }
    const auto& f = rec.fields;
    SetResponse resp;
    resp.key = CourseKey{f[0], f[1]};
    resp.response_id = f[2];
    if (resp.response_id.empty()) {
      fail(Errc::MalformedRow, "empty response_id");
      continue;
    }

    bool row_ok = true;
    auto rating = [&](const std::string& field, const char* name) -> std::optional<int> {
      if (field.empty()) return std::nullopt;
      auto v = parse_int(field);
      if (!v || *v < 1 || *v > 5) {
        fail(Errc::MalformedRow, std::string(name) + " must be an integer 1-5, got '" + field + "'");
        row_ok = false;
        return std::nullopt;
      }
      return v;
    };
    resp.course_rate = rating(f[3], "course_rate");
    resp.instructor_rate = rating(f[4], "instructor_rate");
    if (!is_blank(f[5])) resp.course_comment = f[5];
    if (!is_blank(f[6])) resp.instructor_comment = f[6];
    if (!row_ok) continue;

    if (!resp.course_rate && !resp.instructor_rate && !resp.course_comment && !resp.instructor_comment) {
      fail(Errc::MalformedRow, "response " + resp.response_id + " answers no question");
      continue;
    }
    auto it = courses.find(resp.key);
    if (it == courses.end()) {
      fail(Errc::UnknownCourse, "response " + resp.response_id + " references unknown course " + resp.key.str());
      continue;
    }
    if (!seen_ids.insert(resp.response_id).second) {
      fail(Errc::DuplicateResponseId, "duplicate response_id " + resp.response_id);
      continue;
    }
    it->second.responses.push_back(std::move(resp));
  }

  for (const auto& [key, course] : courses) {
    if (static_cast<int>(course.responses.size()) > course.roster.enrollment) {
      errors.push_back({"responses", 0, Errc::EnrollmentExceeded,
                        key.str() + " has " + std::to_string(course.responses.size()) +
                            " responses but enrollment " + std::to_string(course.roster.enrollment)});
    }
  }

  if (!errors.empty()) throw CorpusError(std::move(errors));

  std::vector<CourseData> out;
  out.reserve(courses.size());
  for (auto& [key, course] : courses) out.push_back(std::move(course));
  return out;
}

void write_roster_csv(std::ostream& out, std::span<const CourseData> courses) {
  out << "term,course_id,enrollment\n";
  for (const auto& c : courses) {
    const std::string row[] = {c.roster.key.term, c.roster.key.course_id, std::to_string(c.roster.enrollment)};
    csv::write_row(out, row);
  }
}

void write_responses_csv(std::ostream& out, std::span<const CourseData> courses) {
  out << "term,course_id,response_id,course_rate,instructor_rate,course_comment,instructor_comment\n";
  auto num = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& c : courses) {
    for (const auto& r : c.responses) {
      const std::string row[] = {r.key.term,
                                 r.key.course_id,
                                 r.response_id,
                                 num(r.course_rate),
                                 num(r.instructor_rate),
                                 r.course_comment.value_or(""),
                                 r.instructor_comment.value_or("")};
      csv::write_row(out, row);
    }
  }
}

}  // namespace setsum
