#include "setsum/analytics.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace setsum {

PipelineModels load_pipeline_models(const std::filesystem::path& models_dir,
                                    const std::filesystem::path& embeddings_file) {
  PipelineModels models;
  models.embeddings = load_embeddings(embeddings_file);
  models.course.sentiment = load_sentiment_model(models_dir / "sentiment_course.json");
  models.instructor.sentiment = load_sentiment_model(models_dir / "sentiment_instructor.json");
  models.course.mate = load_mate_model(models_dir / "mate_course.json");
  models.instructor.mate = load_mate_model(models_dir / "mate_instructor.json");
  return models;
}

RatingStats compute_rating_stats(const CourseRoster& roster, std::span<const SetResponse> responses,
                                 Question question) {
  if (is_open_ended(question)) throw Error(Errc::InvalidArgument, "rating stats need a quantitative question");
  RatingStats stats;
  stats.question = question;
  stats.enrollment = roster.enrollment;
  std::vector<int> values;
  for (const auto& r : responses) {
    if (auto v = r.rating(question)) values.push_back(*v);
  }
  stats.respondents = static_cast<int>(values.size());
  if (values.empty()) return stats;

  stats.response_rate = static_cast<double>(stats.respondents) / static_cast<double>(roster.enrollment);
  double sum = 0.0;
  for (int v : values) {
    ++stats.histogram[static_cast<std::size_t>(v - 1)];
    (rating_is_positive(v) ? stats.positive_count : stats.negative_count) += 1;
    sum += v;
  }
  stats.mean = sum / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  stats.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return stats;
}

SentenceVector embed_sentence(const Sentence& sentence, const PipelineModels& models) {
  if (auto it = models.sentence_overrides.find(sentence.id); it != models.sentence_overrides.end()) {
    return SentenceVector(sentence.id, it->second);
  }
  return sentence_embedding(sentence.tokens, models.embeddings, sentence.id);
}

namespace {

QuestionAnalysis analyze_question(const CourseData& course, Question question, const PipelineModels& models) {
  const QuestionModels& qm = models.for_question(question);
  QuestionAnalysis qa;
  qa.question = question;
  qa.stats.question = question;
  qa.stats.enrollment = course.roster.enrollment;
  for (const auto& r : course.responses) {
    if (const auto& text = r.comment(question)) {
      qa.comments.emplace(r.response_id, *text);
      ++qa.stats.respondents;
    }
  }
  qa.stats.response_rate =
      static_cast<double>(qa.stats.respondents) / static_cast<double>(course.roster.enrollment);

  const auto sentences = segment_responses(course.responses, question);
  std::vector<SentenceVector> vectors;
  vectors.reserve(sentences.size());
  const auto K = static_cast<std::size_t>(qm.mate.K());
  std::vector<std::vector<std::size_t>> members(K);

  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto& s = sentences[i];
    vectors.push_back(embed_sentence(s, models));
    SentenceRecord rec;
    rec.id = s.id;
    rec.response_id = s.source_response_id;
    rec.index_in_comment = s.index_in_comment;
    rec.text = s.text;
    rec.p_positive = predict_sentence(qm.sentiment, vectors.back().vector);
    const auto assignment = assign_aspects(qm.mate, vectors.back());
    for (std::size_t k : assignment.assigned) {
      rec.aspects.push_back(qm.mate.aspect_names[k]);
      members[k].push_back(i);
    }
    (is_positive(rec.p_positive) ? qa.stats.positive_sentences : qa.stats.negative_sentences) += 1;
    qa.sentences.push_back(std::move(rec));
  }
  qa.stats.sentence_count = static_cast<int>(sentences.size());

  for (std::size_t k = 0; k < K; ++k) {
    if (members[k].empty()) continue;
    const std::string& name = qm.mate.aspect_names[k];
    std::vector<SentenceVector> cluster_vectors;
    Cluster cluster;
    cluster.aspect = name;
    cluster.sentiment.resize(static_cast<Eigen::Index>(members[k].size()));
    for (std::size_t j = 0; j < members[k].size(); ++j) {
      const std::size_t i = members[k][j];
      cluster_vectors.push_back(vectors[i]);
      cluster.ids.push_back(vectors[i].sentence_id);
      cluster.vectors.push_back(vectors[i].vector);
      cluster.sentiment[static_cast<Eigen::Index>(j)] = qa.sentences[i].p_positive;
    }
    const auto centrality = lexrank(cluster_vectors, models.lexrank, name);
    cluster.centrality = centrality.scores;
    for (std::size_t j = 0; j < members[k].size(); ++j) {
      qa.sentences[members[k][j]].centrality[name] = centrality.scores[static_cast<Eigen::Index>(j)];
    }

    AspectSummary summary;
    summary.aspect = name;
    summary.cluster_size = cluster.size();
    summary.ours = extract_summary(cluster, models.summary_size);
    summary.ours_score = score_summary(cluster, summary.ours);
    summary.baseline = baseline_topk(cluster, models.summary_size);
    summary.baseline_score = score_summary(cluster, summary.baseline);
    qa.summaries.push_back(std::move(summary));

    qa.bubbles.push_back({name, static_cast<int>(cluster.size()), cluster.mean_sentiment()});
  }
  return qa;
}

}  // namespace

CourseAnalysis compute_course_analysis(const CourseData& course, const PipelineModels& models) {
  CourseAnalysis out;
  out.key = course.roster.key;
  out.enrollment = course.roster.enrollment;
  out.course_rating = compute_rating_stats(course.roster, course.responses, Question::CourseRate);
  out.instructor_rating = compute_rating_stats(course.roster, course.responses, Question::InstructorRate);
  for (Question q : {Question::CourseComments, Question::InstructorComments}) {
    try {
      (q == Question::CourseComments ? out.course_comments : out.instructor_comments) =
          analyze_question(course, q, models);
    } catch (const Error& e) {
      throw Error(e.code(), course.roster.key.str() + " [" + std::string(short_name(q)) + "]: " + e.what());
    }
  }
  return out;
}

std::vector<CourseAnalysis> analyze_courses(std::span<const CourseData> courses, const PipelineModels& models,
                                            unsigned workers) {
  std::vector<CourseAnalysis> results(courses.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < courses.size(); i = next++) {
      try {
        results[i] = compute_course_analysis(courses[i], models);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, courses.size()))));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

nlohmann::json to_json(const RatingStats& s) {
  nlohmann::json histogram = nlohmann::json::object();
  for (int score = 1; score <= 5; ++score) histogram[std::to_string(score)] = s.histogram[score - 1];
  return {{"question", to_string(s.question)},
          {"respondents", s.respondents},
          {"enrollment", s.enrollment},
          {"response_rate", s.response_rate},
          {"histogram", histogram},
          {"positive_count", s.positive_count},
          {"negative_count", s.negative_count},
          {"mean", s.mean},
          {"median", s.median}};
}

nlohmann::json to_json(const CommentStats& s) {
  return {{"question", to_string(s.question)},
          {"respondents", s.respondents},
          {"enrollment", s.enrollment},
          {"response_rate", s.response_rate},
          {"sentence_count", s.sentence_count},
          {"positive_sentences", s.positive_sentences},
          {"negative_sentences", s.negative_sentences}};
}

namespace {

nlohmann::json summary_json(const Summary& summary, const SummaryScore& score) {
  return {{"sentence_ids", summary.sentence_ids},
          {"k_requested", summary.k_requested},
          {"score",
           {{"centrality", score.centrality},
            {"redundancy", score.redundancy},
            {"sentiment_diff", score.sentiment_diff}}}};
}

}  // namespace

nlohmann::json to_json(const QuestionAnalysis& qa) {
  nlohmann::json bubbles = nlohmann::json::array();
  for (const auto& b : qa.bubbles) {
    bubbles.push_back(
        {{"aspect", b.aspect}, {"sentence_count", b.sentence_count}, {"mean_positive_prob", b.mean_positive_prob}});
  }
  nlohmann::json summaries = nlohmann::json::array();
  for (const auto& s : qa.summaries) {
    summaries.push_back({{"aspect", s.aspect},
                         {"cluster_size", s.cluster_size},
                         {"ours", summary_json(s.ours, s.ours_score)},
                         {"baseline", summary_json(s.baseline, s.baseline_score)}});
  }
  nlohmann::json sentences = nlohmann::json::array();
  for (const auto& s : qa.sentences) {
    sentences.push_back({{"id", s.id},
                         {"response_id", s.response_id},
                         {"index_in_comment", s.index_in_comment},
                         {"text", s.text},
                         {"p_positive", s.p_positive},
                         {"label", is_positive(s.p_positive) ? "positive" : "negative"},
                         {"aspects", s.aspects},
                         {"centrality", s.centrality}});
  }
  return {{"question", short_name(qa.question)},
          {"stats", to_json(qa.stats)},
          {"bubbles", bubbles},
          {"summaries", summaries},
          {"sentences", sentences},
          {"comments", qa.comments}};
}

nlohmann::json to_json(const CourseAnalysis& a) {
  return {{"term", a.key.term},
          {"course_id", a.key.course_id},
          {"enrollment", a.enrollment},
          {"ratings", {{"course", to_json(a.course_rating)}, {"instructor", to_json(a.instructor_rating)}}},
          {"comments",
           {{"course", to_json(a.course_comments)}, {"instructor", to_json(a.instructor_comments)}}}};
}

std::filesystem::path analysis_path(const std::filesystem::path& root, const CourseKey& key) {
  return root / key.term / (key.course_id + ".json");
}

void write_analysis(const std::filesystem::path& root, const CourseAnalysis& analysis) {
  const auto target = analysis_path(root, analysis.key);
  std::filesystem::create_directories(target.parent_path());
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + tmp.string());
    out << to_json(analysis).dump(2) << '\n';
    if (!out) throw Error(Errc::Io, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace setsum
