#include "setsum/rank.hpp"

namespace setsum {

double CentralityScores::at(std::string_view sentence_id) const {
  for (std::size_t i = 0; i < sentence_ids.size(); ++i) {
    if (sentence_ids[i] == sentence_id) return scores[static_cast<Eigen::Index>(i)];
  }
  throw Error(Errc::InvalidArgument, "sentence '" + std::string(sentence_id) + "' is not in the cluster");
}

CentralityScores lexrank(std::span<const SentenceVector> cluster, const LexRankOptions& options, std::string aspect) {
  if (cluster.empty()) throw Error(Errc::InvalidArgument, "lexrank of an empty cluster");
  const auto n = static_cast<Eigen::Index>(cluster.size());
  const Eigen::Index dim = cluster.front().vector.size();
  Matrix vectors(n, dim);
  CentralityScores out;
  out.aspect = std::move(aspect);
  out.sentence_ids.reserve(cluster.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = cluster[static_cast<std::size_t>(i)];
    if (s.vector.size() != dim) throw Error(Errc::DimensionMismatch, "cluster vectors differ in dimension");
    vectors.row(i) = s.vector.transpose();
    out.sentence_ids.push_back(s.sentence_id);
  }
  const Matrix transition = similarity_transition(vectors);
  const auto stationary = damped_power_iteration(transition, options);
  out.scores = static_cast<double>(n) * stationary.p;
  out.iterations = stationary.iterations;
  out.converged = stationary.converged;
  out.residual = stationarity_residual(transition, stationary.p, options.damping);
  return out;
}

}  // namespace setsum
