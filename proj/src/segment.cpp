#include <algorithm>
#include <array>
#include <cctype>
#include <iterator>
#include <optional>

#include "setsum/corpus.hpp"

namespace setsum {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || c == '\'' || u >= 0x80;
}

constexpr std::array<std::string_view, 14> kAbbreviations = {
    "e.g", "i.e", "etc", "vs", "dr", "mr", "mrs", "ms", "prof", "st", "jr", "sr", "approx", "cf"};

// True when the word ending right before `dot` is a known abbreviation.
bool ends_with_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && !is_space(text[b - 1])) --b;
  std::string word;
  for (std::size_t i = b; i < dot; ++i) {
    word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
  }
  while (!word.empty() && (word.front() == '(' || word.front() == '"')) word.erase(word.begin());
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    std::string_view run = text.substr(i, j - i);
    while (!run.empty() && run.front() == '\'') run.remove_prefix(1);
    while (!run.empty() && run.back() == '\'') run.remove_suffix(1);
    if (!run.empty()) {
      std::string tok(run);
      for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      tokens.push_back(std::move(tok));
    }
    i = j;
  }
  return tokens;
}

std::string sentence_id(std::string_view response_id, Question q, std::size_t index) {
  return std::string(response_id) + ":" + std::string(short_name(q)) + ":" + std::to_string(index);
}

std::vector<Sentence> segment_comment(std::string_view comment, std::string_view response_id,
                                      Question question) {
  struct Piece {
    std::size_t begin, end;
  };
  std::vector<Piece> pieces;

  std::size_t start = 0;
  while (start < comment.size() && is_space(comment[start])) ++start;
  std::size_t i = start;
  while (i < comment.size()) {
    if (!is_terminal(comment[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < comment.size() && is_terminal(comment[j])) ++j;
    while (j < comment.size() && is_closer(comment[j])) ++j;
    const bool at_break = j == comment.size() || is_space(comment[j]);
    const bool single_dot = j - i == 1 && comment[i] == '.';
    if (at_break && !(single_dot && ends_with_abbreviation(comment, i))) {
      pieces.push_back({start, j});
      start = j;
      while (start < comment.size() && is_space(comment[start])) ++start;
    }
    i = j;
  }
  if (start < comment.size()) {
    std::size_t end = comment.size();
    while (end > start && is_space(comment[end - 1])) --end;
    pieces.push_back({start, end});
  }

  std::vector<Sentence> out;
  std::optional<std::size_t> pending_begin;
  for (const auto& p : pieces) {
    std::size_t begin = pending_begin.value_or(p.begin);
    auto tokens = tokenize(comment.substr(p.begin, p.end - p.begin));
    if (tokens.empty()) {
      if (!out.empty()) {
        auto& prev = out.back();
        prev.end = p.end;
        prev.text = std::string(comment.substr(prev.begin, prev.end - prev.begin));
      } else {
        pending_begin = begin;
      }
      continue;
    }
    pending_begin.reset();
    Sentence s;
    s.source_response_id = std::string(response_id);
    s.question = question;
    s.index_in_comment = out.size();
    s.id = sentence_id(response_id, question, s.index_in_comment);
    s.begin = begin;
    s.end = p.end;
    s.text = std::string(comment.substr(begin, p.end - begin));
    s.tokens = tokenize(s.text);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Sentence> segment_responses(std::span<const SetResponse> responses, Question question) {
  std::vector<Sentence> all;
  for (const auto& r : responses) {
    const auto& text = r.comment(question);
    if (!text) continue;
    auto sentences = segment_comment(*text, r.response_id, question);
    std::move(sentences.begin(), sentences.end(), std::back_inserter(all));
  }
  return all;
}

}  // namespace setsum
