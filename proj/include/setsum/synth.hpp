#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "setsum/aspect.hpp"
#include "setsum/corpus.hpp"
#include "setsum/embed.hpp"

namespace setsum {

struct AspectTemplate {
  std::string name;
  std::vector<std::string> positive;
  std::vector<std::string> negative;
};

struct SynthTemplates {
  std::vector<AspectTemplate> course;
  std::vector<AspectTemplate> instructor;

  const std::vector<AspectTemplate>& for_question(Question q) const {
    return q == Question::InstructorComments ? instructor : course;
  }
  /// Throws InvalidTemplate unless every aspect has >= 2 non-empty phrases per polarity.
  void validate() const;
};

SynthTemplates templates_from_json(const nlohmann::json& j);
SynthTemplates load_templates(const std::filesystem::path& path);

struct SynthConfig {
  std::uint64_t seed = 7;
  int n_courses = 1;
  int n_students = 10;  // response rows per course
  // enrollment = round(n_students / submission_rate)
  double submission_rate = 0.5;
  // Probability that a submitted response answers each question.
  double course_rate_presence = 0.92;
  double instructor_rate_presence = 0.86;
  double course_comment_presence = 0.34;
  double instructor_comment_presence = 0.32;
  int min_sentences = 1;
  int max_sentences = 4;
  // Per-course probability that a comment sentence is positive, U(lo, hi).
  double min_positivity = 0.55;
  double max_positivity = 0.9;
};

struct SentenceLabel {
  std::string response_id;
  Question question = Question::CourseComments;
  std::size_t sentence_index = 0;
  std::string aspect;
  bool positive = false;
};

struct SyntheticCorpus {
  std::vector<CourseData> courses;
  std::vector<SentenceLabel> labels;
  // Sentences drawn per "<question>/<aspect>" while generating.
  std::map<std::string, std::size_t> aspect_draws;
};

/// Deterministic for a fixed config. Each comment concatenates template
/// sentences; a comment with more positive than negative sentences is paired
/// with a rating of 4-5, otherwise 1-3.
SyntheticCorpus generate_synthetic(const SynthConfig& config, const SynthTemplates& templates);

struct EmbeddingSynthConfig {
  Eigen::Index dimension = 50;
  double aspect_scale = 4.0;
  double polarity_scale = 3.0;
  double noise = 0.15;
  std::uint64_t seed = 11;
};

/// Word table with one orthonormal direction per aspect (across all aspect
/// sets) plus a polarity direction. A seed word points along the weighted mix
/// of the aspects it seeds; a word that only occurs in positive (negative)
/// template phrases gets +(-) the polarity direction; everything gets
/// isotropic noise.
WordEmbeddingTable synthesize_embeddings(const SynthTemplates& templates, std::span<const AspectSet> aspect_sets,
                                         const EmbeddingSynthConfig& config = {});

nlohmann::json to_json(const SentenceLabel& label);
SentenceLabel label_from_json(const nlohmann::json& j);
std::vector<SentenceLabel> load_labels(const std::filesystem::path& path);

struct SynthFiles {
  std::filesystem::path roster;
  std::filesystem::path responses;
  std::filesystem::path labels;
  std::filesystem::path embeddings;
};

/// roster.csv, responses.csv, labels.jsonl and (when given) embeddings.txt.
SynthFiles write_synthetic(const std::filesystem::path& dir, const SyntheticCorpus& corpus,
                           const WordEmbeddingTable* embeddings = nullptr);

}  // namespace setsum
