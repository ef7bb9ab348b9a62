#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "setsum/embed.hpp"

namespace setsum {

struct LexRankOptions {
  double damping = 0.15;  // probability of jumping to a uniform node
  double tolerance = 1e-6;
  int max_iters = 1000;
};

/// Row-stochastic transition matrix of the cosine-similarity graph over the
/// rows of `vectors`: negative similarities clamped to 0, zero diagonal, and
/// all-zero rows replaced by uniform rows.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> similarity_transition(
    const Eigen::MatrixBase<Derived>& vectors) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = vectors.rows();
  Mat m = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar c = std::max(Scalar(0), cosine(vectors.row(i), vectors.row(j)));
      m(i, j) = c;
      m(j, i) = c;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar sum = m.row(i).sum();
    if (sum > Scalar(0)) {
      m.row(i) /= sum;
    } else {
      m.row(i).setConstant(Scalar(1) / Scalar(n));
    }
  }
  return m;
}

template <typename Scalar>
struct StationaryDistribution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p;
  int iterations = 0;
  Scalar last_change = Scalar(0);  // L1 norm of the final update
  bool converged = false;
};

/// Damped power iteration p <- damping/N + (1 - damping) * M^T p from the
/// uniform vector, stopping once the L1 change drops below tolerance.
template <typename Derived>
StationaryDistribution<typename Derived::Scalar> damped_power_iteration(const Eigen::MatrixBase<Derived>& transition,
                                                                        const LexRankOptions& options) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = transition.rows();
  const Scalar d = static_cast<Scalar>(options.damping);
  StationaryDistribution<Scalar> out;
  out.p = Vec::Constant(n, Scalar(1) / Scalar(n));
  Vec next(n);
  for (int it = 0; it < options.max_iters; ++it) {
    next.noalias() = (Scalar(1) - d) * (transition.transpose() * out.p);
    next.array() += d / Scalar(n);
    out.last_change = (next - out.p).template lpNorm<1>();
    out.p.swap(next);
    out.iterations = it + 1;
    if (out.last_change < static_cast<Scalar>(options.tolerance)) {
      out.converged = true;
      break;
    }
  }
  out.p /= out.p.sum();
  return out;
}

/// ||T(p) - p||_1 for the damped update T.
template <typename DerivedM, typename DerivedP>
typename DerivedM::Scalar stationarity_residual(const Eigen::MatrixBase<DerivedM>& transition,
                                                const Eigen::MatrixBase<DerivedP>& p, double damping) {
  using Scalar = typename DerivedM::Scalar;
  const Eigen::Index n = transition.rows();
  const Scalar d = static_cast<Scalar>(damping);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> next = (Scalar(1) - d) * (transition.transpose() * p);
  next.array() += d / Scalar(n);
  return (next - p).template lpNorm<1>();
}

/// Per-sentence LexRank centrality, scaled so the cluster mean is 1.
struct CentralityScores {
  std::string aspect;
  std::vector<std::string> sentence_ids;  // cluster order
  Vector scores;                          // aligned with sentence_ids
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;  // false means max_iters was hit; scores are the last iterate

  double at(std::string_view sentence_id) const;
};

/// Throws InvalidArgument for an empty cluster.
CentralityScores lexrank(std::span<const SentenceVector> cluster, const LexRankOptions& options = {},
                         std::string aspect = {});

}  // namespace setsum
