#pragma once

// Neighbor-based explainability metrics and per-iteration textual reports.
//
// Influence of a candidate is the mean fitness difference to its most similar
// neighbors; under minimization a negative value marks a candidate that is
// better than its neighborhood. Diversity is one minus the mean similarity to
// those neighbors.

#include "spinex/core.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>

namespace spinex {

using NeighborLists = std::vector<std::vector<std::size_t>>;

// For each row, the k most similar other rows in descending similarity;
// ties go to the lower index. k is capped at n - 1.
inline NeighborLists identify_neighbors(const Matrix& similarities, std::size_t k = 5) {
  if (similarities.rows() != similarities.cols()) throw dimension_error("identify_neighbors: matrix not square");
  if (k == 0) throw std::invalid_argument("identify_neighbors: k must be >= 1");
  const auto n = static_cast<std::size_t>(similarities.rows());
  const std::size_t eff = n == 0 ? 0 : std::min(k, n - 1);
  NeighborLists out(n);
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) cand.push_back(j);
    const auto row = static_cast<Eigen::Index>(i);
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(eff), cand.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double sa = similarities(row, static_cast<Eigen::Index>(a));
                        const double sb = similarities(row, static_cast<Eigen::Index>(b));
                        if (sa != sb) return sa > sb;
                        return a < b;
                      });
    out[i].assign(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(eff));
  }
  return out;
}

// fitness is n x m; multi-objective differences are averaged over objectives.
inline Vector neighbor_influence(const Matrix& fitness, const NeighborLists& neighbors) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(neighbors.size()));
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    if (neighbors[i].empty()) continue;
    const auto r = static_cast<Eigen::Index>(i);
    double acc = 0.0;
    for (std::size_t nb : neighbors[i])
      acc += (fitness.row(r) - fitness.row(static_cast<Eigen::Index>(nb))).mean();
    out(r) = acc / static_cast<double>(neighbors[i].size());
  }
  return out;
}

inline Vector neighbor_diversity(const Matrix& similarities, const NeighborLists& neighbors) {
  Vector out = Vector::Ones(static_cast<Eigen::Index>(neighbors.size()));
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    if (neighbors[i].empty()) continue;
    const auto r = static_cast<Eigen::Index>(i);
    double acc = 0.0;
    for (std::size_t nb : neighbors[i]) acc += similarities(r, static_cast<Eigen::Index>(nb));
    out(r) = 1.0 - acc / static_cast<double>(neighbors[i].size());
  }
  return out;
}

namespace detail {
inline std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}
}  // namespace detail

// Human-readable summary of neighbor structure for one iteration. Only the
// population block of `similarities` (the first n rows/columns) is used.
inline std::string explain_iteration(const Matrix& space, const Matrix& similarities, const Matrix& fitness,
                                     std::size_t iteration) {
  const Eigen::Index n = space.rows();
  const Matrix sim = similarities.topLeftCorner(std::min(n, similarities.rows()), std::min(n, similarities.cols()));
  const std::size_t k = n > 1 ? std::min<std::size_t>(5, static_cast<std::size_t>(n - 1)) : 1;
  const auto neighbors = identify_neighbors(sim, k);
  const Vector influence = neighbor_influence(fitness, neighbors);
  const Vector diversity = neighbor_diversity(sim, neighbors);

  std::ostringstream os;
  os << "\nIteration " << iteration << " Explanation:\n";
  os << "Average neighbor influence: " << detail::fixed4(influence.size() ? influence.mean() : 0.0) << '\n';
  os << "Average neighbor diversity: " << detail::fixed4(diversity.size() ? diversity.mean() : 0.0) << '\n';
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(3, n); ++i) {
    os << "\nSolution " << i << ":\n";
    if (fitness.cols() == 1) {
      os << " Fitness: " << detail::fixed4(fitness(i, 0)) << '\n';
    } else {
      os << " Fitness: [";
      for (Eigen::Index c = 0; c < fitness.cols(); ++c) os << (c ? ", " : "") << detail::fixed4(fitness(i, c));
      os << "]\n";
    }
    os << " Neighbor influence: " << detail::fixed4(influence(i)) << '\n';
    os << " Neighbor diversity: " << detail::fixed4(diversity(i)) << '\n';
    os << " Top 3 similar neighbors: [";
    const auto& nb = neighbors[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < std::min<std::size_t>(3, nb.size()); ++j) os << (j ? ", " : "") << nb[j];
    os << "]\n";
  }
  return os.str();
}

// Neighbor metrics for one iteration, truncated to the common length.
inline ExplainabilitySnapshot make_snapshot(const Matrix& space, const Matrix& similarities, const Matrix& fitness,
                                            std::size_t iteration, std::size_t k = 5) {
  const Eigen::Index n = std::min(space.rows(), similarities.rows());
  const Matrix sim = similarities.topLeftCorner(n, n);
  const auto neighbors = identify_neighbors(sim, k);
  ExplainabilitySnapshot snap;
  snap.iteration = iteration;
  const Vector influence = neighbor_influence(fitness.topRows(n), neighbors);
  const Vector diversity = neighbor_diversity(sim, neighbors);
  const Eigen::Index len = std::min({influence.size(), diversity.size(), fitness.rows(), space.rows()});
  snap.influence = influence.head(len);
  snap.diversity = diversity.head(len);
  snap.fitness_values = fitness.topRows(len);
  snap.similarities = similarities.topLeftCorner(len, len);
  snap.solution_space = space.topRows(len);
  return snap;
}

}  // namespace spinex
