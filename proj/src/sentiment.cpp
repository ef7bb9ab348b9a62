#include "setsum/sentiment.hpp"

#include <cmath>
#include <fstream>

#include "setsum/random.hpp"

namespace setsum {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_dimension(const Vector& weights, const Vector& v) {
  if (weights.size() != v.size()) {
    throw Error(Errc::DimensionMismatch, "sentiment model has dimension " + std::to_string(weights.size()) +
                                             ", vector has " + std::to_string(v.size()));
  }
}

}  // namespace

double sigmoid(double logit) noexcept {
  if (logit >= 0) return 1.0 / (1.0 + std::exp(-logit));
  const double e = std::exp(logit);
  return e / (1.0 + e);
}

TrainingPairs build_training_pairs(std::span<const SetResponse> responses, Question question,
                                   const WordEmbeddingTable& table, std::uint64_t seed) {
  if (!is_open_ended(question)) {
    throw Error(Errc::InvalidArgument, "training pairs need an open-ended question");
  }
  std::vector<SentimentExample> all;
  for (const auto& r : responses) {
    const auto& text = r.comment(question);
    const auto rating = r.rating(question);
    if (!text || !rating) continue;
    auto sentences = segment_comment(*text, r.response_id, question);
    if (sentences.empty()) continue;
    Vector mean = Vector::Zero(table.dimension());
    for (const auto& s : sentences) mean += sentence_embedding(s.tokens, table).vector;
    mean /= static_cast<double>(sentences.size());
    all.push_back({std::move(mean), rating_is_positive(*rating)});
  }

  Rng rng(seed);
  rng.shuffle(std::span(all));
  const std::size_t n_dev = all.size() / 10;
  TrainingPairs out;
  out.dev.assign(std::make_move_iterator(all.begin()), std::make_move_iterator(all.begin() + n_dev));
  out.train.assign(std::make_move_iterator(all.begin() + n_dev), std::make_move_iterator(all.end()));
  return out;
}

double sentiment_loss(const Vector& weights, double bias, std::span<const SentimentExample> examples,
                      double l2) {
  double total = 0.0;
  for (const auto& ex : examples) {
    const double z = weights.dot(ex.comment_vector) + bias;
    total += softplus(z) - (ex.positive ? z : 0.0);
  }
  const double mean = examples.empty() ? 0.0 : total / static_cast<double>(examples.size());
  return mean + 0.5 * l2 * weights.squaredNorm();
}

SentimentGradient sentiment_gradient(const Vector& weights, double bias,
                                     std::span<const SentimentExample> examples, double l2) {
  SentimentGradient g{Vector::Zero(weights.size()), 0.0};
  for (const auto& ex : examples) {
    const double residual = sigmoid(weights.dot(ex.comment_vector) + bias) - (ex.positive ? 1.0 : 0.0);
    g.weights += residual * ex.comment_vector;
    g.bias += residual;
  }
  if (!examples.empty()) {
    const double inv = 1.0 / static_cast<double>(examples.size());
    g.weights *= inv;
    g.bias *= inv;
  }
  g.weights += l2 * weights;
  return g;
}

SentimentModel train_sentiment(std::span<const SentimentExample> train, std::span<const SentimentExample> dev,
                               Question question, const SentimentTrainOptions& options) {
  bool has_pos = false, has_neg = false;
  for (const auto& ex : train) (ex.positive ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) {
    throw Error(Errc::SingleClassCorpus, "sentiment training needs both positive and negative examples");
  }
  const Eigen::Index dim = train.front().comment_vector.size();
  for (const auto& ex : train) check_dimension(train.front().comment_vector, ex.comment_vector);

  SentimentModel model;
  model.trained_on = question;
  model.weights = Vector::Zero(dim);
  model.bias = 0.0;
  model.loss_history.reserve(static_cast<std::size_t>(options.epochs) + 1);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    model.loss_history.push_back(sentiment_loss(model.weights, model.bias, train, options.l2));
    auto g = sentiment_gradient(model.weights, model.bias, train, options.l2);
    model.weights -= options.learning_rate * g.weights;
    model.bias -= options.learning_rate * g.bias;
  }
  model.loss_history.push_back(sentiment_loss(model.weights, model.bias, train, options.l2));
  model.dev_accuracy = dev.empty() ? accuracy(model, train) : accuracy(model, dev);
  return model;
}

SentimentModel train_sentiment(const TrainingPairs& pairs, Question question, const SentimentTrainOptions& options) {
  return train_sentiment(pairs.train, pairs.dev, question, options);
}

double predict_sentence(const SentimentModel& model, const Vector& sentence_vector) {
  check_dimension(model.weights, sentence_vector);
  return sigmoid(model.weights.dot(sentence_vector) + model.bias);
}

double accuracy(const SentimentModel& model, std::span<const SentimentExample> examples) {
  if (examples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : examples) {
    if (is_positive(predict_sentence(model, ex.comment_vector)) == ex.positive) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

nlohmann::json to_json(const SentimentModel& model) {
  return {{"question", short_name(model.trained_on)},
          {"dimension", model.weights.size()},
          {"weights", std::vector<double>(model.weights.begin(), model.weights.end())},
          {"bias", model.bias},
          {"dev_accuracy", model.dev_accuracy}};
}

SentimentModel sentiment_model_from_json(const nlohmann::json& j) {
  SentimentModel m;
  m.trained_on = question_from_string(j.at("question").get<std::string>());
  auto w = j.at("weights").get<std::vector<double>>();
  const auto dim = j.at("dimension").get<Eigen::Index>();
  if (static_cast<Eigen::Index>(w.size()) != dim) {
    throw Error(Errc::DimensionMismatch, "sentiment model weights length does not match dimension");
  }
  m.weights = Eigen::Map<const Vector>(w.data(), dim);
  m.bias = j.at("bias").get<double>();
  m.dev_accuracy = j.value("dev_accuracy", 0.0);
  return m;
}

void save_sentiment_model(const std::filesystem::path& path, const SentimentModel& model) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << to_json(model).dump(2) << '\n';
}

SentimentModel load_sentiment_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return sentiment_model_from_json(nlohmann::json::parse(in));
}

}  // namespace setsum
