#include "fixture.hpp"

#include <atomic>
#include <chrono>

namespace setsum::testing {

std::filesystem::path data_dir() { return SETSUM_DATA_DIR; }
std::filesystem::path schema_dir() { return SETSUM_SCHEMA_DIR; }

SynthTemplates shipped_templates() { return load_templates(data_dir() / "synth_templates.json"); }

AspectSet shipped_aspects(Question q) {
  return load_aspect_set(data_dir() /
                         (q == Question::InstructorComments ? "aspects_instructor.json" : "aspects_course.json"));
}

namespace {

QuestionModels train_question(const SyntheticCorpus& corpus, Question q, const WordEmbeddingTable& table,
                              std::uint64_t seed) {
  std::vector<SetResponse> responses;
  for (const auto& c : corpus.courses) responses.insert(responses.end(), c.responses.begin(), c.responses.end());
  QuestionModels out;
  out.sentiment = train_sentiment(build_training_pairs(responses, q, table, seed), q);
  std::vector<SentenceVector> vectors;
  for (const auto& s : segment_responses(responses, q)) vectors.push_back(sentence_embedding(s.tokens, table, s.id));
  MateTrainOptions options;
  options.seed = seed;
  out.mate = mate_train(build_aspect_matrix(shipped_aspects(q), table, seed), vectors, options);
  return out;
}

}  // namespace

TrainedPipeline train_pipeline(const SynthConfig& config, const EmbeddingSynthConfig& embed) {
  const auto templates = shipped_templates();
  const AspectSet sets[] = {shipped_aspects(Question::CourseComments), shipped_aspects(Question::InstructorComments)};
  TrainedPipeline out;
  out.corpus = generate_synthetic(config, templates);
  out.models.embeddings = synthesize_embeddings(templates, sets, embed);
  out.models.course = train_question(out.corpus, Question::CourseComments, out.models.embeddings, config.seed);
  out.models.instructor = train_question(out.corpus, Question::InstructorComments, out.models.embeddings, config.seed);
  return out;
}

SynthConfig dense_config(int courses, std::uint64_t seed) {
  SynthConfig config;
  config.seed = seed;
  config.n_courses = courses;
  config.n_students = 60;
  config.course_comment_presence = 0.8;
  config.instructor_comment_presence = 0.8;
  return config;
}

TempDir::TempDir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = std::filesystem::temp_directory_path() /
          (prefix + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace setsum::testing
