#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "setsum/aspect.hpp"
#include "setsum/corpus.hpp"
#include "setsum/embed.hpp"
#include "setsum/rank.hpp"
#include "setsum/sentiment.hpp"
#include "setsum/summarize.hpp"

namespace setsum {

struct RatingStats {
  Question question = Question::CourseRate;
  int respondents = 0;
  int enrollment = 0;
  double response_rate = 0.0;
  std::array<int, 5> histogram{};  // index = score - 1
  int positive_count = 0;          // scores 4-5
  int negative_count = 0;          // scores 1-3
  double mean = 0.0;
  double median = 0.0;
};

struct CommentStats {
  Question question = Question::CourseComments;
  int respondents = 0;
  int enrollment = 0;
  double response_rate = 0.0;
  int sentence_count = 0;
  int positive_sentences = 0;
  int negative_sentences = 0;
};

struct AspectBubble {
  std::string aspect;
  int sentence_count = 0;
  double mean_positive_prob = 0.0;
};

struct SentenceRecord {
  std::string id;
  std::string response_id;
  std::size_t index_in_comment = 0;
  std::string text;
  double p_positive = 0.0;
  std::vector<std::string> aspects;
  std::map<std::string, double> centrality;  // per assigned aspect
};

struct AspectSummary {
  std::string aspect;
  std::size_t cluster_size = 0;
  Summary ours;
  SummaryScore ours_score;
  Summary baseline;
  SummaryScore baseline_score;
};

struct QuestionAnalysis {
  Question question = Question::CourseComments;
  CommentStats stats;
  std::vector<AspectBubble> bubbles;
  std::vector<AspectSummary> summaries;
  std::vector<SentenceRecord> sentences;
  std::map<std::string, std::string> comments;  // response_id -> full comment text
};

struct CourseAnalysis {
  CourseKey key;
  int enrollment = 0;
  RatingStats course_rating;
  RatingStats instructor_rating;
  QuestionAnalysis course_comments;
  QuestionAnalysis instructor_comments;

  const QuestionAnalysis& comments(Question q) const {
    return q == Question::InstructorComments ? instructor_comments : course_comments;
  }
};

struct QuestionModels {
  SentimentModel sentiment;
  MateModel mate;
};

struct PipelineModels {
  WordEmbeddingTable embeddings;
  QuestionModels course;
  QuestionModels instructor;
  std::unordered_map<std::string, Vector> sentence_overrides;
  LexRankOptions lexrank;
  std::size_t summary_size = kSummarySize;

  const QuestionModels& for_question(Question q) const {
    return q == Question::InstructorComments ? instructor : course;
  }
};

/// Expects `models_dir` to hold sentiment_{course,instructor}.json and
/// mate_{course,instructor}.json.
PipelineModels load_pipeline_models(const std::filesystem::path& models_dir,
                                    const std::filesystem::path& embeddings_file);

/// Mean and median are over present ratings only; no respondents gives zeroed stats.
RatingStats compute_rating_stats(const CourseRoster& roster, std::span<const SetResponse> responses,
                                 Question question);

/// Sentence embedding, honouring any precomputed override for the id.
SentenceVector embed_sentence(const Sentence& sentence, const PipelineModels& models);

/// segment -> embed -> sentiment -> aspects -> per-aspect LexRank ->
/// summary + baseline + scores, for both open-ended questions.
CourseAnalysis compute_course_analysis(const CourseData& course, const PipelineModels& models);

/// Courses are independent; `workers` threads each take whole courses.
/// Output order matches input order.
std::vector<CourseAnalysis> analyze_courses(std::span<const CourseData> courses, const PipelineModels& models,
                                            unsigned workers = 1);

nlohmann::json to_json(const RatingStats& stats);
nlohmann::json to_json(const CommentStats& stats);
nlohmann::json to_json(const QuestionAnalysis& analysis);
nlohmann::json to_json(const CourseAnalysis& analysis);

std::filesystem::path analysis_path(const std::filesystem::path& root, const CourseKey& key);
/// Writes root/<term>/<course_id>.json via a temp file and rename.
void write_analysis(const std::filesystem::path& root, const CourseAnalysis& analysis);

}  // namespace setsum
