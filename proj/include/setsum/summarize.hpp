#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "setsum/embed.hpp"

namespace setsum {

/// All sentences under one aspect, with what the extractor needs per
/// sentence. Index i refers to the same sentence in every field.
struct Cluster {
  std::string aspect;
  std::vector<std::string> ids;
  std::vector<Vector> vectors;
  Vector centrality;
  Vector sentiment;  // probability of positive sentiment

  std::size_t size() const noexcept { return ids.size(); }
  double mean_sentiment() const;
  /// Throws InvalidArgument when fields disagree in length or the cluster is empty.
  void validate() const;
};

inline constexpr std::size_t kSummarySize = 5;

/// max cosine between s and the selected sentences; 0 for an empty selection.
double cosine_to_selection(const Cluster& cluster, std::size_t s, std::span<const std::size_t> selected);

/// |mean p over selected + {s}| - mean p over the cluster|.
double sentiment_difference(const Cluster& cluster, std::size_t s, std::span<const std::size_t> selected);

/// J(s, S', S_a) = centrality_s - cosine_to_selection - sentiment_difference.
double objective(const Cluster& cluster, std::size_t s, std::span<const std::size_t> selected);

struct Summary {
  std::string aspect;
  std::vector<std::size_t> indices;  // selection order
  std::vector<std::string> sentence_ids;
  std::size_t k_requested = kSummarySize;
};

/// One greedy step: J for every cluster member (NaN for already selected
/// ones) and the index picked.
struct SelectionStep {
  std::vector<double> objective;
  std::size_t chosen = 0;
};

/// Greedy maximization of J, K times. Ties go to higher centrality, then the
/// lexicographically smaller id. Clusters of at most K sentences are returned
/// whole, ordered by centrality (same tie-break on id).
Summary extract_summary(const Cluster& cluster, std::size_t k = kSummarySize,
                        std::vector<SelectionStep>* trace = nullptr);

/// The K most central sentences, ties by id.
Summary baseline_topk(const Cluster& cluster, std::size_t k = kSummarySize);

struct SummaryScore {
  double centrality = 0.0;
  double redundancy = 0.0;
  double sentiment_diff = 0.0;
};

/// Mean centrality; mean over members of the max cosine to another member
/// (0 for a single sentence); |mean p(summary) - mean p(cluster)|.
/// Throws EmptySummary for an empty selection.
SummaryScore score_summary(const Cluster& cluster, std::span<const std::size_t> summary);
inline SummaryScore score_summary(const Cluster& cluster, const Summary& summary) {
  return score_summary(cluster, summary.indices);
}

}  // namespace setsum
