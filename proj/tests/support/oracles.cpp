#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace setsum::testing {

double plain_cosine(const Vector& a, const Vector& b) {
  double dot = 0, na = 0, nb = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return c > 1 ? 1 : (c < -1 ? -1 : c);
}

namespace {

double mean_of(const Vector& v, const std::vector<std::size_t>& idx) {
  double s = 0;
  for (auto i : idx) s += v[static_cast<Eigen::Index>(i)];
  return s / static_cast<double>(idx.size());
}

double cluster_mean(const Vector& v) {
  double s = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += v[i];
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<std::size_t> greedy_oracle(const Cluster& c, std::size_t k) {
  const std::size_t n = c.size();
  std::vector<std::size_t> chosen;
  auto better_tie = [&](std::size_t a, std::size_t b) {
    const double ca = c.centrality[static_cast<Eigen::Index>(a)], cb = c.centrality[static_cast<Eigen::Index>(b)];
    return ca != cb ? ca > cb : c.ids[a] < c.ids[b];
  };
  if (n <= k) {
    for (std::size_t i = 0; i < n; ++i) chosen.push_back(i);
    std::sort(chosen.begin(), chosen.end(), better_tie);
    return chosen;
  }
  const double target = cluster_mean(c.sentiment);
  while (chosen.size() < k) {
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t s = 0; s < n; ++s) {
      if (std::find(chosen.begin(), chosen.end(), s) != chosen.end()) continue;
      double sim = 0;
      if (!chosen.empty()) {
        sim = -1e300;
        for (auto t : chosen) sim = std::max(sim, plain_cosine(c.vectors[s], c.vectors[t]));
      }
      auto with = chosen;
      with.push_back(s);
      const double j = c.centrality[static_cast<Eigen::Index>(s)] - sim - std::abs(mean_of(c.sentiment, with) - target);
      scored.emplace_back(j, s);
    }
    auto best = scored.front();
    for (const auto& cand : scored) {
      if (cand.first > best.first || (cand.first == best.first && better_tie(cand.second, best.second))) best = cand;
    }
    chosen.push_back(best.second);
  }
  return chosen;
}

OracleScore metric_oracle(const Cluster& c, const std::vector<std::size_t>& summary) {
  OracleScore out{mean_of(c.centrality, summary), 0.0, 0.0};
  if (summary.size() > 1) {
    double total = 0;
    for (auto s : summary) {
      double best = -1e300;
      for (auto t : summary) {
        if (t != s) best = std::max(best, plain_cosine(c.vectors[s], c.vectors[t]));
      }
      total += best;
    }
    out.redundancy = total / static_cast<double>(summary.size());
  }
  out.sentiment_diff = std::abs(mean_of(c.sentiment, summary) - cluster_mean(c.sentiment));
  return out;
}

std::vector<double> lexrank_oracle(const std::vector<Vector>& vectors, double damping) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      m(i, j) = std::max(0.0, plain_cosine(vectors[static_cast<std::size_t>(i)], vectors[static_cast<std::size_t>(j)]));
      row += m(i, j);
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row > 0 ? m(i, j) / row : 1.0 / static_cast<double>(n);
  }
  // (I - (1-d) M^T) p = d/N 1
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - (1.0 - damping) * m.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, damping / static_cast<double>(n));
  Eigen::VectorXd p = lhs.fullPivLu().solve(rhs);
  p /= p.sum();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(n) * p[i];
  return out;
}

}  // namespace setsum::testing
