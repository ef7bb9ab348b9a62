#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "setsum/error.hpp"

namespace setsum {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Frozen word vectors keyed by lowercase token. Unknown tokens map to the
/// zero vector.
class WordEmbeddingTable {
 public:
  explicit WordEmbeddingTable(Eigen::Index dimension = 0);

  Eigen::Index dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return tokens_.size(); }

  /// Returns false (and keeps the existing row) when the token is present.
  bool insert(std::string token, Vector vector);

  const Vector& lookup(std::string_view token) const;
  const Vector* find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token) != nullptr; }
  const Vector& oov_vector() const noexcept { return oov_; }

  /// Tokens in insertion (file) order.
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  Eigen::Index dimension_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Vector> rows_;
  Vector oov_;
};

/// Text layout: `token f1 ... fd` per line. Duplicate tokens keep the first row.
WordEmbeddingTable load_embeddings(const std::filesystem::path& path);
WordEmbeddingTable read_embeddings(std::istream& in, std::string_view source = "<stream>");
/// Writes shortest round-trip decimal for every component.
void write_embeddings(std::ostream& out, const WordEmbeddingTable& table);

struct SentenceVector {
  std::string sentence_id;
  Vector vector;
  double norm = 0.0;
  bool degenerate = false;  // every token was unknown

  SentenceVector() = default;
  SentenceVector(std::string id, Vector v, bool degenerate_ = false)
      : sentence_id(std::move(id)), vector(std::move(v)), norm(vector.norm()), degenerate(degenerate_) {}
};

/// Mean of per-token vectors (unknown tokens contribute zero).
SentenceVector sentence_embedding(std::span<const std::string> tokens, const WordEmbeddingTable& table,
                                  std::string sentence_id = {});

/// Cosine similarity with the convention cos = 0 when either side has zero norm.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& u, const Eigen::MatrixBase<DerivedB>& v) {
  using Scalar = typename DerivedA::Scalar;
  if (u.size() != v.size()) {
    throw Error(Errc::DimensionMismatch,
                "cosine of vectors with " + std::to_string(u.size()) + " and " + std::to_string(v.size()) +
                    " components");
  }
  const Scalar nu = u.norm();
  const Scalar nv = v.norm();
  if (nu == Scalar(0) || nv == Scalar(0)) return Scalar(0);
  const Scalar c = u.dot(v) / (nu * nv);
  return std::clamp(c, Scalar(-1), Scalar(1));
}

double cosine(const SentenceVector& u, const SentenceVector& v);

/// JSON lines `{sentence_id, vector:[...]}` keyed by sentence id.
std::unordered_map<std::string, Vector> load_sentence_overrides(const std::filesystem::path& path);

}  // namespace setsum
