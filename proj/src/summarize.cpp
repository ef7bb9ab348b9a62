#include "setsum/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace setsum {

void Cluster::validate() const {
  const std::size_t n = ids.size();
  if (n == 0) throw Error(Errc::InvalidArgument, "cluster '" + aspect + "' is empty");
  if (vectors.size() != n || static_cast<std::size_t>(centrality.size()) != n ||
      static_cast<std::size_t>(sentiment.size()) != n) {
    throw Error(Errc::InvalidArgument, "cluster '" + aspect + "' has fields of different lengths");
  }
}

double cosine_to_selection(const Cluster& cluster, std::size_t s, std::span<const std::size_t> selected) {
  if (selected.empty()) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t t : selected) best = std::max(best, cosine(cluster.vectors[s], cluster.vectors[t]));
  return best;
}

namespace {

// Sums in ascending index order, the same order as the cluster mean, so a
// selection covering the whole cluster reproduces it exactly.
double mean_sentiment_of(const Cluster& cluster, std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end());
  double sum = 0.0;
  for (std::size_t i : members) sum += cluster.sentiment[static_cast<Eigen::Index>(i)];
  return sum / static_cast<double>(members.size());
}

}  // namespace

double Cluster::mean_sentiment() const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sentiment.size(); ++i) sum += sentiment[i];
  return sum / static_cast<double>(sentiment.size());
}

double sentiment_difference(const Cluster& cluster, std::size_t s, std::span<const std::size_t> selected) {
  std::vector<std::size_t> members(selected.begin(), selected.end());
  members.push_back(s);
  return std::abs(mean_sentiment_of(cluster, std::move(members)) - cluster.mean_sentiment());
}

double objective(const Cluster& cluster, std::size_t s, std::span<const std::size_t> selected) {
  return cluster.centrality[static_cast<Eigen::Index>(s)] - cosine_to_selection(cluster, s, selected) -
         sentiment_difference(cluster, s, selected);
}

namespace {

// Strict ordering: higher centrality first, then smaller id.
bool more_central(const Cluster& c, std::size_t a, std::size_t b) {
  const double ca = c.centrality[static_cast<Eigen::Index>(a)];
  const double cb = c.centrality[static_cast<Eigen::Index>(b)];
  if (ca != cb) return ca > cb;
  return c.ids[a] < c.ids[b];
}

std::vector<std::size_t> by_centrality(const Cluster& cluster) {
  std::vector<std::size_t> order(cluster.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return more_central(cluster, a, b); });
  return order;
}

Summary make_summary(const Cluster& cluster, std::vector<std::size_t> indices, std::size_t k) {
  Summary out;
  out.aspect = cluster.aspect;
  out.k_requested = k;
  for (std::size_t i : indices) out.sentence_ids.push_back(cluster.ids[i]);
  out.indices = std::move(indices);
  return out;
}

}  // namespace

Summary extract_summary(const Cluster& cluster, std::size_t k, std::vector<SelectionStep>* trace) {
  cluster.validate();
  if (trace) trace->clear();
  if (cluster.size() <= k) return make_summary(cluster, by_centrality(cluster), k);

  std::vector<std::size_t> selected;
  std::vector<bool> taken(cluster.size(), false);
  for (std::size_t step = 0; step < k; ++step) {
    SelectionStep record;
    record.objective.assign(cluster.size(), std::numeric_limits<double>::quiet_NaN());
    std::optional<std::size_t> best;
    for (std::size_t s = 0; s < cluster.size(); ++s) {
      if (taken[s]) continue;
      const double j = objective(cluster, s, selected);
      record.objective[s] = j;
      if (!best || j > record.objective[*best] ||
          (j == record.objective[*best] && more_central(cluster, s, *best))) {
        best = s;
      }
    }
    record.chosen = *best;
    taken[*best] = true;
    selected.push_back(*best);
    if (trace) trace->push_back(std::move(record));
  }
  return make_summary(cluster, std::move(selected), k);
}

Summary baseline_topk(const Cluster& cluster, std::size_t k) {
  cluster.validate();
  auto order = by_centrality(cluster);
  order.resize(std::min(k, order.size()));
  return make_summary(cluster, std::move(order), k);
}

SummaryScore score_summary(const Cluster& cluster, std::span<const std::size_t> summary) {
  if (summary.empty()) throw Error(Errc::EmptySummary, "cannot score an empty summary");
  cluster.validate();
  const auto n = static_cast<double>(summary.size());
  SummaryScore score;
  for (std::size_t s : summary) {
    score.centrality += cluster.centrality[static_cast<Eigen::Index>(s)];
    if (summary.size() > 1) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t t : summary) {
        if (t != s) best = std::max(best, cosine(cluster.vectors[s], cluster.vectors[t]));
      }
      score.redundancy += best;
    }
  }
  score.centrality /= n;
  score.redundancy /= n;
  score.sentiment_diff =
      std::abs(mean_sentiment_of(cluster, {summary.begin(), summary.end()}) - cluster.mean_sentiment());
  return score;
}

}  // namespace setsum
