#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"
#include "setsum/corpus.hpp"
#include "setsum/embed.hpp"

namespace setsum {

struct SentimentExample {
  Vector comment_vector;
  bool positive = false;
};

struct TrainingPairs {
  std::vector<SentimentExample> train;
  std::vector<SentimentExample> dev;
};

/// Ratings 4-5 are positive, 1-3 negative.
constexpr bool rating_is_positive(int rating) noexcept { return rating >= 4; }

/// One example per response that has both the comment and its paired
/// rating. The comment vector is the mean of its sentence vectors. Examples
/// are shuffled with `seed` and split 90/10 into train/dev.
TrainingPairs build_training_pairs(std::span<const SetResponse> responses, Question question,
                                   const WordEmbeddingTable& table, std::uint64_t seed = 17);

struct SentimentModel {
  Question trained_on = Question::CourseComments;
  Vector weights;
  double bias = 0.0;
  double dev_accuracy = 0.0;
  std::vector<double> loss_history;  // training loss before each epoch, plus the final value
};

struct SentimentTrainOptions {
  double learning_rate = 0.1;
  int epochs = 500;
  double l2 = 1e-4;
};

/// Mean cross-entropy plus l2/2 * |w|^2; the bias is not penalized.
double sentiment_loss(const Vector& weights, double bias, std::span<const SentimentExample> examples,
                      double l2);

struct SentimentGradient {
  Vector weights;
  double bias = 0.0;
};

SentimentGradient sentiment_gradient(const Vector& weights, double bias,
                                     std::span<const SentimentExample> examples, double l2);

/// Full-batch gradient descent from zero. Throws SingleClassCorpus unless
/// both labels occur in `train`.
SentimentModel train_sentiment(std::span<const SentimentExample> train, std::span<const SentimentExample> dev,
                               Question question, const SentimentTrainOptions& options = {});
SentimentModel train_sentiment(const TrainingPairs& pairs, Question question,
                               const SentimentTrainOptions& options = {});

double sigmoid(double logit) noexcept;

/// Probability of positive sentiment.
double predict_sentence(const SentimentModel& model, const Vector& sentence_vector);
inline bool is_positive(double p_positive) noexcept { return p_positive >= 0.5; }

double accuracy(const SentimentModel& model, std::span<const SentimentExample> examples);

nlohmann::json to_json(const SentimentModel& model);
SentimentModel sentiment_model_from_json(const nlohmann::json& j);
void save_sentiment_model(const std::filesystem::path& path, const SentimentModel& model);
SentimentModel load_sentiment_model(const std::filesystem::path& path);

}  // namespace setsum
