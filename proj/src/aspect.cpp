#include "setsum/aspect.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "setsum/random.hpp"

namespace setsum {

void AspectSpec::validate() const {
  auto fail = [&](const std::string& why) {
    throw Error(Errc::InvalidAspectSpec, "aspect '" + name + "': " + why);
  };
  if (name.empty()) fail("empty name");
  if (seeds.size() != kSeedCount) fail("expected 5 seed words, got " + std::to_string(seeds.size()));
  std::set<std::string> tokens;
  double sum = 0.0;
  for (const auto& s : seeds) {
    if (s.token.empty()) fail("empty seed token");
    if (!(s.weight > 0.0)) fail("seed '" + s.token + "' has non-positive weight");
    if (!tokens.insert(s.token).second) fail("duplicate seed '" + s.token + "'");
    sum += s.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) fail("seed weights sum to " + std::to_string(sum));
}

void AspectSet::validate() const {
  std::set<std::string> seen;
  for (const auto& a : aspects) {
    a.validate();
    if (!seen.insert(a.name).second) {
      throw Error(Errc::InvalidAspectSpec, "duplicate aspect name '" + a.name + "'");
    }
  }
  if (aspects.empty()) throw Error(Errc::InvalidAspectSpec, "aspect set is empty");
}

std::vector<std::string> AspectSet::names() const {
  std::vector<std::string> out;
  for (const auto& a : aspects) out.push_back(a.name);
  return out;
}

AspectSet aspect_set_from_json(const nlohmann::json& j, bool renormalize) {
  AspectSet set;
  set.question = question_from_string(j.at("question").get<std::string>());
  for (const auto& ja : j.at("aspects")) {
    AspectSpec spec;
    spec.name = ja.at("name").get<std::string>();
    for (const auto& js : ja.at("seeds")) {
      SeedWord seed{js.at(0).get<std::string>(), js.at(1).get<double>()};
      for (char& c : seed.token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      spec.seeds.push_back(std::move(seed));
    }
    if (renormalize) {
      const double sum = std::accumulate(spec.seeds.begin(), spec.seeds.end(), 0.0,
                                         [](double acc, const SeedWord& s) { return acc + s.weight; });
      if (sum > 0.0) {
        for (auto& s : spec.seeds) s.weight /= sum;
      }
    }
    set.aspects.push_back(std::move(spec));
  }
  set.validate();
  return set;
}

AspectSet load_aspect_set(const std::filesystem::path& path, bool renormalize) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return aspect_set_from_json(nlohmann::json::parse(in), renormalize);
}

nlohmann::json to_json(const AspectSet& set) {
  nlohmann::json aspects = nlohmann::json::array();
  for (const auto& a : set.aspects) {
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& s : a.seeds) seeds.push_back({s.token, s.weight});
    aspects.push_back({{"name", a.name}, {"seeds", seeds}});
  }
  return {{"question", short_name(set.question)}, {"aspects", aspects}};
}

MateModel build_aspect_matrix(const AspectSet& specs, const WordEmbeddingTable& table, std::uint64_t seed) {
  specs.validate();
  const auto K = static_cast<Eigen::Index>(specs.aspects.size());
  const Eigen::Index d = table.dimension();
  MateModel model;
  model.question = specs.question;
  model.aspect_names = specs.names();
  model.A = Matrix::Zero(K, d);
  for (Eigen::Index i = 0; i < K; ++i) {
    const auto& aspect = specs.aspects[static_cast<std::size_t>(i)];
    for (const auto& s : aspect.seeds) {
      const Vector* e = table.find(s.token);
      if (!e) {
        throw Error(Errc::MissingSeedToken,
                    "seed '" + s.token + "' of aspect '" + aspect.name + "' is not in the embedding table");
      }
      model.A.row(i) += s.weight * e->transpose();
    }
  }
  Rng rng(seed);
  model.W.resize(K, d);
  for (Eigen::Index r = 0; r < K; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) model.W(r, c) = rng.uniform(-0.01, 0.01);
  }
  model.b = Vector::Zero(K);
  return model;
}

namespace {

std::vector<MateSample> draw_samples(std::span<const Eigen::Index> order, Eigen::Index n_sentences,
                                     std::size_t negatives, Rng& rng) {
  std::vector<MateSample> samples;
  samples.reserve(order.size());
  const auto others = static_cast<std::uint64_t>(n_sentences - 1);
  for (Eigen::Index s : order) {
    MateSample sample{s, {}};
    sample.negatives.reserve(negatives);
    for (std::size_t k = 0; k < negatives; ++k) {
      auto n = static_cast<Eigen::Index>(rng.index(others));
      if (n >= s) ++n;
      sample.negatives.push_back(n);
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace

MateModel mate_train(MateModel model, std::span<const SentenceVector> sentences, const MateTrainOptions& options,
                     MateTrainReport* report) {
  const auto n = static_cast<Eigen::Index>(sentences.size());
  if (n < 2) throw Error(Errc::TooFewSentences, "MATE training needs at least 2 sentences");
  Matrix vectors(n, model.d());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = sentences[static_cast<std::size_t>(i)].vector;
    if (v.size() != model.d()) {
      throw Error(Errc::DimensionMismatch, "sentence " + std::to_string(i) + " has dimension " +
                                               std::to_string(v.size()) + ", model has " + std::to_string(model.d()));
    }
    vectors.row(i) = v.transpose();
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  Rng eval_rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  const auto eval_samples = draw_samples(order, n, options.negatives_per_sentence, eval_rng);
  if (report) {
    report->epoch_loss.clear();
    report->epoch_loss.push_back(mate_loss(model, vectors, std::span(eval_samples)));
  }

  Rng rng(options.seed);
  Matrix mW = Matrix::Zero(model.K(), model.d()), vW = mW;
  Vector mb = Vector::Zero(model.K()), vb = mb;
  MateGradient<double> grad;
  double beta1_t = 1.0, beta2_t = 1.0;
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      const auto samples =
          draw_samples(std::span(order).subspan(start, len), n, options.negatives_per_sentence, rng);
      mate_loss(model, vectors, std::span(samples), &grad);

      beta1_t *= options.beta1;
      beta2_t *= options.beta2;
      const double step = options.learning_rate * std::sqrt(1.0 - beta2_t) / (1.0 - beta1_t);
      mW = options.beta1 * mW + (1.0 - options.beta1) * grad.W;
      vW = options.beta2 * vW + (1.0 - options.beta2) * grad.W.cwiseAbs2();
      mb = options.beta1 * mb + (1.0 - options.beta1) * grad.b;
      vb = options.beta2 * vb + (1.0 - options.beta2) * grad.b.cwiseAbs2();
      const double eps_hat = options.epsilon * std::sqrt(1.0 - beta2_t);
      model.W.array() -= step * mW.array() / (vW.array().sqrt() + eps_hat);
      model.b.array() -= step * mb.array() / (vb.array().sqrt() + eps_hat);
    }
    if (report) report->epoch_loss.push_back(mate_loss(model, vectors, std::span(eval_samples)));
  }
  return model;
}

std::size_t AspectAssignment::top() const {
  Eigen::Index best = 0;
  probabilities.maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

std::vector<std::size_t> threshold_assignment(const Vector& probabilities, double threshold) {
  std::vector<std::size_t> assigned;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] > threshold) assigned.push_back(static_cast<std::size_t>(i));
  }
  if (assigned.empty() && probabilities.size() > 0) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < probabilities.size(); ++i) {
      if (probabilities[i] > probabilities[best]) best = i;
    }
    assigned.push_back(static_cast<std::size_t>(best));
  }
  return assigned;
}

AspectAssignment assign_aspects(const MateModel& model, const SentenceVector& v, double threshold) {
  AspectAssignment out;
  out.sentence_id = v.sentence_id;
  out.probabilities = mate_forward(model, v).p;
  out.assigned = threshold_assignment(out.probabilities, threshold);
  return out;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (static_cast<Eigen::Index>(j.size()) != rows) {
    throw Error(Errc::DimensionMismatch, std::string(name) + " has wrong row count");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    auto row = j.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(Errc::DimensionMismatch, std::string(name) + " has wrong column count");
    }
    m.row(r) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), cols);
  }
  return m;
}

}  // namespace

nlohmann::json to_json(const MateModel& model) {
  return {{"question", short_name(model.question)},
          {"K", model.K()},
          {"d", model.d()},
          {"W", matrix_to_json(model.W)},
          {"b", std::vector<double>(model.b.begin(), model.b.end())},
          {"A", matrix_to_json(model.A)},
          {"aspect_names", model.aspect_names}};
}

MateModel mate_model_from_json(const nlohmann::json& j) {
  MateModel m;
  const auto K = j.at("K").get<Eigen::Index>();
  const auto d = j.at("d").get<Eigen::Index>();
  if (j.contains("question")) m.question = question_from_string(j.at("question").get<std::string>());
  m.aspect_names = j.at("aspect_names").get<std::vector<std::string>>();
  if (static_cast<Eigen::Index>(m.aspect_names.size()) != K) {
    throw Error(Errc::DimensionMismatch, "aspect_names length does not match K");
  }
  m.W = matrix_from_json(j.at("W"), K, d, "W");
  m.A = matrix_from_json(j.at("A"), K, d, "A");
  auto b = j.at("b").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(b.size()) != K) throw Error(Errc::DimensionMismatch, "b length does not match K");
  m.b = Eigen::Map<const Vector>(b.data(), K);
  return m;
}

void save_mate_model(const std::filesystem::path& path, const MateModel& model) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << to_json(model).dump() << '\n';
}

MateModel load_mate_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return mate_model_from_json(nlohmann::json::parse(in));
}

}  // namespace setsum
