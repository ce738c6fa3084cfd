#pragma once

// Shared data model: problems, configuration, engine state, run records and
// the genotype/phenotype plumbing every optimizer goes through.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinex {

// Row-major so that a candidate is a contiguous span.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown by CountingObjective once the evaluation budget is spent.
class budget_exhausted : public std::runtime_error {
 public:
  budget_exhausted() : std::runtime_error("evaluation budget exhausted") {}
};

struct Bound {
  double lower = 0.0;
  double upper = 1.0;
};

using Objective = std::function<std::vector<double>(std::span<const double>)>;

struct Problem {
  std::string name;
  std::size_t n_variables = 0;
  std::size_t n_objectives = 1;
  std::vector<Bound> bounds;
  Objective evaluate;
  std::optional<std::vector<double>> known_optimum;

  void validate() const {
    if (n_variables == 0) throw std::invalid_argument(name + ": n_variables must be positive");
    if (n_objectives == 0) throw std::invalid_argument(name + ": n_objectives must be positive");
    if (bounds.size() != n_variables)
      throw dimension_error(name + ": bounds length does not match n_variables");
    for (const auto& b : bounds)
      if (!(b.lower < b.upper)) throw std::invalid_argument(name + ": bound lower must be < upper");
    if (!evaluate) throw std::invalid_argument(name + ": missing objective");
  }
};

enum class SimilarityMethod { correlation, cosine, spearman, euclidean };

inline const char* to_string(SimilarityMethod m) {
  switch (m) {
    case SimilarityMethod::correlation: return "correlation";
    case SimilarityMethod::cosine: return "cosine";
    case SimilarityMethod::spearman: return "spearman";
    case SimilarityMethod::euclidean: return "euclidean";
  }
  return "?";
}

inline SimilarityMethod similarity_method_from_string(const std::string& s) {
  if (s == "correlation") return SimilarityMethod::correlation;
  if (s == "cosine") return SimilarityMethod::cosine;
  if (s == "spearman") return SimilarityMethod::spearman;
  if (s == "euclidean") return SimilarityMethod::euclidean;
  throw std::invalid_argument("unknown similarity method: " + s);
}

inline std::vector<SimilarityMethod> all_similarity_methods() {
  return {SimilarityMethod::correlation, SimilarityMethod::cosine, SimilarityMethod::spearman,
          SimilarityMethod::euclidean};
}

enum class TransformationStrategy { diagonal, cross_similarity };

struct OptimizerConfig {
  std::size_t population_size = 100;
  std::size_t max_iterations = 1000;
  std::vector<SimilarityMethod> similarity_methods = all_similarity_methods();
  bool allow_population_growth = false;
  bool is_multi_objective = false;
  bool verbose_explainability = false;
  double tolerance = 1e-6;
  // Early stop compares |best - tolerance_target| against tolerance.
  // Non-positive tolerance disables early stopping.
  double tolerance_target = 0.0;
  double diversity_threshold = 1e-3;
  double step_size_init = 0.1;
  double step_size_min = 1e-6;
  double step_size_max = 1.0;
  std::uint64_t seed = 0;

  TransformationStrategy transformation = TransformationStrategy::diagonal;
  bool adaptive_weights = false;
  // Replace the variable-wise metrics by sample-wise ones so every matrix is n x n.
  bool consistent_shapes = false;
  std::size_t snapshot_interval = 10;
  std::size_t local_search_iterations = 100;
  // 0 means unlimited.
  std::size_t max_evaluations = 0;
  // 0 means uncapped; otherwise the archive is pruned by crowding distance.
  std::size_t archive_cap = 0;

  void validate() const {
    if (population_size == 0) throw std::invalid_argument("population_size must be positive");
    if (max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
    if (similarity_methods.empty()) throw std::invalid_argument("similarity_methods must be nonempty");
    if (!(0.0 < step_size_min && step_size_min <= step_size_init && step_size_init <= step_size_max))
      throw std::invalid_argument("require 0 < step_size_min <= step_size_init <= step_size_max");
    if (snapshot_interval == 0) throw std::invalid_argument("snapshot_interval must be positive");
  }
};

struct EngineState {
  std::size_t iteration = 0;
  double step_size = 0.1;
  std::vector<double> weights;
  std::optional<std::vector<double>> best_solution;
  std::vector<double> best_fitness;
  std::size_t no_improvement_count = 0;
  std::size_t last_improvement_iteration = 0;
  std::size_t population_size = 0;

  static EngineState from_config(const OptimizerConfig& cfg) {
    EngineState s;
    s.step_size = cfg.step_size_init;
    s.population_size = cfg.population_size;
    s.weights.assign(cfg.similarity_methods.size(), 1.0 / static_cast<double>(cfg.similarity_methods.size()));
    return s;
  }
};

struct TrajectoryEntry {
  std::size_t iteration = 0;
  std::vector<double> solution;
  std::vector<double> fitness;
  std::optional<std::vector<double>> shift_vector;
};

struct ExplainabilitySnapshot {
  std::size_t iteration = 0;
  Vector influence;
  Vector diversity;
  Matrix fitness_values;
  Matrix similarities;
  Matrix solution_space;
};

struct IterationStat {
  std::size_t iteration = 0;
  double best_fitness = 0.0;  // single-objective only
  std::size_t archive_size = 0;
  std::vector<double> ideal_point;  // multi-objective only
  double step_size = 0.0;
};

struct RunRecord {
  std::string problem_name;
  std::string algorithm = "spinex";
  OptimizerConfig config;
  bool multi_objective = false;
  std::vector<TrajectoryEntry> trajectory;
  std::vector<ExplainabilitySnapshot> snapshots;
  std::vector<IterationStat> history;
  std::vector<std::vector<double>> pareto_solutions;
  std::vector<std::vector<double>> pareto_fitness;
  double wall_clock_seconds = 0.0;
  std::size_t evaluations = 0;
  std::size_t iterations_run = 0;
  std::string termination;
  std::map<std::string, double> stats;
};

// phenotype[i] = lower[i] + genotype[i] * (upper[i] - lower[i])
inline std::vector<double> scale_to_domain(std::span<const double> genotype, std::span<const Bound> bounds) {
  if (genotype.size() != bounds.size())
    throw dimension_error("scale_to_domain: genotype has " + std::to_string(genotype.size()) +
                          " entries, bounds has " + std::to_string(bounds.size()));
  std::vector<double> out(genotype.size());
  for (std::size_t i = 0; i < genotype.size(); ++i)
    out[i] = bounds[i].lower + genotype[i] * (bounds[i].upper - bounds[i].lower);
  return out;
}

// Min-max scaling to [0, 1]; a flat vector maps to all ones.
inline std::vector<double> normalize_fitness(std::span<const double> values) {
  std::vector<double> out(values.size(), 1.0);
  if (values.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  // numpy.isclose defaults
  if (std::abs(hi - lo) <= 1e-8 + 1e-5 * std::abs(lo)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / (hi - lo);
  return out;
}

inline Matrix init_solution_space(std::size_t population_size, std::size_t n_variables, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix m(static_cast<Eigen::Index>(population_size), static_cast<Eigen::Index>(n_variables));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = unif(rng);
  return m;
}

// Population standard deviation (ddof = 0).
inline double population_std(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

// Std of the single fitness column, or the mean of per-objective stds.
inline double fitness_diversity(const Matrix& fitness) {
  if (fitness.rows() == 0 || fitness.cols() == 0) return 0.0;
  double acc = 0.0;
  std::vector<double> col(static_cast<std::size_t>(fitness.rows()));
  for (Eigen::Index j = 0; j < fitness.cols(); ++j) {
    for (Eigen::Index i = 0; i < fitness.rows(); ++i) col[static_cast<std::size_t>(i)] = fitness(i, j);
    acc += population_std(col);
  }
  return acc / static_cast<double>(fitness.cols());
}

inline std::span<const double> row_span(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

inline std::vector<double> row_vector(const Matrix& m, Eigen::Index i) {
  auto s = row_span(m, i);
  return {s.begin(), s.end()};
}

inline Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw dimension_error("from_rows: ragged rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

// Evaluates genotypes through clamp + scale_to_domain, counting every call and
// enforcing an optional budget. Every algorithm in the library evaluates
// through one of these so budgets and counts are comparable.
class CountingObjective {
 public:
  explicit CountingObjective(const Problem& problem, std::size_t budget = 0)
      : problem_(&problem), budget_(budget) {}

  std::vector<double> operator()(std::span<const double> genotype) {
    if (budget_ != 0 && count_ >= budget_) throw budget_exhausted();
    ++count_;
    std::vector<double> g(genotype.begin(), genotype.end());
    for (double& x : g) x = std::clamp(x, 0.0, 1.0);
    auto phen = scale_to_domain(g, problem_->bounds);
    auto f = problem_->evaluate(phen);
    if (f.size() != problem_->n_objectives)
      throw dimension_error(problem_->name + ": objective returned " + std::to_string(f.size()) +
                            " values, expected " + std::to_string(problem_->n_objectives));
    return f;
  }

  double scalar(std::span<const double> genotype) { return (*this)(genotype).front(); }

  // Row-order evaluation of a whole population.
  Matrix evaluate_rows(const Matrix& space) {
    Matrix out(space.rows(), static_cast<Eigen::Index>(problem_->n_objectives));
    for (Eigen::Index i = 0; i < space.rows(); ++i) {
      auto f = (*this)(row_span(space, i));
      for (std::size_t k = 0; k < f.size(); ++k) out(i, static_cast<Eigen::Index>(k)) = f[k];
    }
    return out;
  }

  std::size_t count() const { return count_; }
  std::size_t budget() const { return budget_; }
  std::size_t remaining() const { return budget_ == 0 ? SIZE_MAX : budget_ - count_; }
  const Problem& problem() const { return *problem_; }

 private:
  const Problem* problem_;
  std::size_t budget_;
  std::size_t count_ = 0;
};

}  // namespace spinex
