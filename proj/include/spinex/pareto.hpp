#pragma once

// Domination tests and Pareto-front maintenance (minimization).

#include "spinex/core.hpp"

#include <limits>
#include <numeric>
#include <set>

namespace spinex {

struct ParetoArchive {
  std::vector<std::vector<double>> solutions;
  std::vector<std::vector<double>> fitness;

  std::size_t size() const { return solutions.size(); }
  bool empty() const { return solutions.empty(); }
};

// a dominates b iff a <= b everywhere and a < b somewhere.
inline bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw dimension_error("dominates: objective vectors of length " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()));
  bool strict = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
    if (a[k] < b[k]) strict = true;
  }
  return strict;
}

// Indices of the members no other member dominates, in input order.
inline std::vector<std::size_t> pareto_indices(const std::vector<std::vector<double>>& fitness) {
  const std::size_t n = fitness.size();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < n && !dominated; ++j)
      if (j != i && dominates(fitness[j], fitness[i])) dominated = true;
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

inline ParetoArchive pareto_front(const std::vector<std::vector<double>>& solutions,
                                  const std::vector<std::vector<double>>& fitness) {
  if (solutions.size() != fitness.size())
    throw dimension_error("pareto_front: " + std::to_string(solutions.size()) + " solutions but " +
                          std::to_string(fitness.size()) + " fitness vectors");
  ParetoArchive out;
  for (std::size_t i : pareto_indices(fitness)) {
    out.solutions.push_back(solutions[i]);
    out.fitness.push_back(fitness[i]);
  }
  return out;
}

inline ParetoArchive pareto_front(const Matrix& solutions, const Matrix& fitness) {
  std::vector<std::vector<double>> s, f;
  for (Eigen::Index i = 0; i < solutions.rows(); ++i) {
    s.push_back(row_vector(solutions, i));
    f.push_back(row_vector(fitness, i));
  }
  return pareto_front(s, f);
}

using Evaluator = std::function<std::vector<double>(std::span<const double>)>;

// Front of archive + new_solutions, every member re-evaluated. Exact duplicate
// genotypes in the union are collapsed to their first occurrence.
inline ParetoArchive update_pareto_front(const ParetoArchive& archive,
                                         const std::vector<std::vector<double>>& new_solutions,
                                         const Evaluator& evaluator) {
  std::vector<std::vector<double>> combined;
  std::set<std::vector<double>> seen;
  auto add = [&](const std::vector<double>& s) {
    if (seen.insert(s).second) combined.push_back(s);
  };
  for (const auto& s : archive.solutions) add(s);
  for (const auto& s : new_solutions) add(s);

  std::vector<std::vector<double>> fit;
  fit.reserve(combined.size());
  for (const auto& s : combined) fit.push_back(evaluator(s));
  return pareto_front(combined, fit);
}

// Crowding distance within one front; boundary members get +infinity.
inline std::vector<double> crowding_distance(const std::vector<std::vector<double>>& fitness) {
  const std::size_t n = fitness.size();
  std::vector<double> dist(n, 0.0);
  if (n == 0) return dist;
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    return dist;
  }
  const std::size_t m = fitness.front().size();
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < m; ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a][k] < fitness[b][k]; });
    const double lo = fitness[order.front()][k];
    const double hi = fitness[order.back()][k];
    dist[order.front()] = std::numeric_limits<double>::infinity();
    dist[order.back()] = std::numeric_limits<double>::infinity();
    if (hi - lo <= 0.0) continue;
    for (std::size_t p = 1; p + 1 < n; ++p)
      dist[order[p]] += (fitness[order[p + 1]][k] - fitness[order[p - 1]][k]) / (hi - lo);
  }
  return dist;
}

// Repeatedly drops the most crowded member until the archive fits in cap.
inline void prune_by_crowding(ParetoArchive& archive, std::size_t cap) {
  while (cap > 0 && archive.size() > cap) {
    auto dist = crowding_distance(archive.fitness);
    const auto worst = static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
    archive.solutions.erase(archive.solutions.begin() + static_cast<std::ptrdiff_t>(worst));
    archive.fitness.erase(archive.fitness.begin() + static_cast<std::ptrdiff_t>(worst));
  }
}

// Component-wise minimum of the archive's objective vectors.
inline std::vector<double> ideal_point(const std::vector<std::vector<double>>& fitness) {
  if (fitness.empty()) return {};
  std::vector<double> ideal = fitness.front();
  for (const auto& f : fitness)
    for (std::size_t k = 0; k < ideal.size(); ++k) ideal[k] = std::min(ideal[k], f[k]);
  return ideal;
}

}  // namespace spinex
