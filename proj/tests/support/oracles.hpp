#pragma once

// Straight-loop reference implementations used to cross-check the library.
// They share no code with it beyond the input types.

#include <string>
#include <vector>

#include "setsum/summarize.hpp"

namespace setsum::testing {

double plain_cosine(const Vector& a, const Vector& b);

/// Exhaustive argmax of the selection objective at every step.
std::vector<std::size_t> greedy_oracle(const Cluster& cluster, std::size_t k);

struct OracleScore {
  double centrality;
  double redundancy;
  double sentiment_diff;
};
OracleScore metric_oracle(const Cluster& cluster, const std::vector<std::size_t>& summary);

/// Centrality by solving the damped stationary equations directly.
std::vector<double> lexrank_oracle(const std::vector<Vector>& vectors, double damping);

}  // namespace setsum::testing
