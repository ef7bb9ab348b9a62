#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "setsum/corpus.hpp"
#include "setsum/embed.hpp"

namespace setsum {

struct SeedWord {
  std::string token;
  double weight = 0.0;
};

/// A named aspect defined by exactly five weighted seed words.
struct AspectSpec {
  static constexpr std::size_t kSeedCount = 5;

  std::string name;
  std::vector<SeedWord> seeds;

  /// Throws InvalidAspectSpec unless there are 5 distinct seeds with
  /// strictly positive weights summing to 1 within 1e-9.
  void validate() const;
};

struct AspectSet {
  Question question = Question::CourseComments;
  std::vector<AspectSpec> aspects;

  void validate() const;
  std::vector<std::string> names() const;
};

/// Seed tokens are lowercased. With `renormalize`, each aspect's weights are
/// divided by their sum before validation (published tables are rounded).
AspectSet aspect_set_from_json(const nlohmann::json& j, bool renormalize = true);
AspectSet load_aspect_set(const std::filesystem::path& path, bool renormalize = true);
nlohmann::json to_json(const AspectSet& set);

// ---------------------------------------------------------------------------
// Clarity scores for seed-word selection

struct AnnotatedSentence {
  Sentence sentence;
  std::vector<std::string> aspects;
};

using ClarityTable = std::map<std::string, std::vector<std::pair<std::string, double>>>;

/// score_a(w) = t_a(w) * log(t_a(w) / t(w)) where t = tf * idf,
/// tf_a(w) = count of w in aspect-a sentences / tokens in aspect-a sentences,
/// idf(w) = log((1 + N) / (1 + df(w))) + 1 over `all_sentences`.
/// Every corpus token is scored for every aspect (0 when absent from the
/// aspect); lists are sorted by score descending, then token ascending.
/// Aspects listed in `expected_aspects` but never annotated raise EmptyAspect.
ClarityTable clarity_scores(std::span<const AnnotatedSentence> annotated, std::span<const Sentence> all_sentences,
                            std::span<const std::string> expected_aspects = {});

// ---------------------------------------------------------------------------
// MATE aspect extractor

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// p = softmax(W v + b) over K aspects; r = A^T p reconstructs v. Only W and
/// b are trainable, A is frozen.
template <typename Scalar>
struct BasicMateModel {
  Question question = Question::CourseComments;
  std::vector<std::string> aspect_names;
  DenseMatrix<Scalar> W;  // K x d
  DenseVector<Scalar> b;  // K
  DenseMatrix<Scalar> A;  // K x d, row i = sum_j z_ij * e(seed_ij)

  Eigen::Index K() const { return A.rows(); }
  Eigen::Index d() const { return A.cols(); }
};

using MateModel = BasicMateModel<double>;

template <typename Derived>
DenseVector<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  DenseVector<Scalar> e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

template <typename Scalar>
struct MateOutput {
  DenseVector<Scalar> p;
  DenseVector<Scalar> r;
};

template <typename Scalar, typename Derived>
MateOutput<Scalar> mate_forward(const BasicMateModel<Scalar>& model, const Eigen::MatrixBase<Derived>& v) {
  if (v.size() != model.d()) {
    throw Error(Errc::DimensionMismatch, "MATE model has dimension " + std::to_string(model.d()) +
                                             ", sentence vector has " + std::to_string(v.size()));
  }
  MateOutput<Scalar> out;
  out.p = softmax(model.W * v + model.b);
  out.r = model.A.transpose() * out.p;
  return out;
}

inline MateOutput<double> mate_forward(const MateModel& model, const SentenceVector& v) {
  return mate_forward(model, v.vector);
}

/// One positive sentence with its sampled negatives (row indices into the
/// sentence matrix).
struct MateSample {
  Eigen::Index sentence = 0;
  std::vector<Eigen::Index> negatives;
};

template <typename Scalar>
struct MateGradient {
  DenseMatrix<Scalar> W;
  DenseVector<Scalar> b;
};

/// Sum over samples and negatives of max(0, 1 - r.v + r.v_neg). `vectors`
/// holds one sentence per row. When `grad` is given it receives dL/dW and
/// dL/db.
template <typename Scalar>
Scalar mate_loss(const BasicMateModel<Scalar>& model, const DenseMatrix<Scalar>& vectors,
                 std::span<const MateSample> samples, MateGradient<Scalar>* grad = nullptr) {
  if (grad) {
    grad->W.setZero(model.K(), model.d());
    grad->b.setZero(model.K());
  }
  Scalar loss(0);
  DenseVector<Scalar> dr(model.d());
  for (const auto& sample : samples) {
    const auto v = vectors.row(sample.sentence).transpose();
    const auto out = mate_forward(model, v);
    const Scalar pos = out.r.dot(v);
    dr.setZero();
    for (Eigen::Index n : sample.negatives) {
      const auto vn = vectors.row(n).transpose();
      const Scalar hinge = Scalar(1) - pos + out.r.dot(vn);
      if (hinge > Scalar(0)) {
        loss += hinge;
        dr += vn - v;
      }
    }
    if (grad && !dr.isZero(0)) {
      const DenseVector<Scalar> dp = model.A * dr;
      const DenseVector<Scalar> dz = out.p.cwiseProduct((dp.array() - out.p.dot(dp)).matrix());
      grad->W.noalias() += dz * v.transpose();
      grad->b += dz;
    }
  }
  return loss;
}

/// Untrained model: A filled from seed embeddings, W ~ U(-0.01, 0.01)
/// seeded, b = 0. Throws MissingSeedToken for seeds absent from the table.
MateModel build_aspect_matrix(const AspectSet& specs, const WordEmbeddingTable& table, std::uint64_t seed = 1);

struct MateTrainOptions {
  int epochs = 10;
  double learning_rate = 0.1;
  std::size_t batch_size = 50;
  std::size_t negatives_per_sentence = 20;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
};

struct MateTrainReport {
  // Loss on a fixed seeded negative draw; [0] is before training, then one per epoch.
  std::vector<double> epoch_loss;
};

/// Adam on W and b only; throws TooFewSentences for fewer than 2 sentences.
MateModel mate_train(MateModel model, std::span<const SentenceVector> sentences, const MateTrainOptions& options = {},
                     MateTrainReport* report = nullptr);

struct AspectAssignment {
  std::string sentence_id;
  Vector probabilities;
  std::vector<std::size_t> assigned;  // aspect indices, ascending

  std::size_t top() const;
};

inline constexpr double kAspectThreshold = 0.4;

/// Every aspect with p > threshold, else the argmax (lowest index on ties).
AspectAssignment assign_aspects(const MateModel& model, const SentenceVector& v,
                                double threshold = kAspectThreshold);
std::vector<std::size_t> threshold_assignment(const Vector& probabilities, double threshold = kAspectThreshold);

nlohmann::json to_json(const MateModel& model);
MateModel mate_model_from_json(const nlohmann::json& j);
void save_mate_model(const std::filesystem::path& path, const MateModel& model);
MateModel load_mate_model(const std::filesystem::path& path);

}  // namespace setsum
