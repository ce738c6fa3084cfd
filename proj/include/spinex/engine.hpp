#pragma once

// The similarity-driven population search: transformations, noise schedule,
// intensification, adaptive restart/escape/step size/population size,
// dimensional shift, similarity-weight adaptation and the optimize loop.

#include "spinex/core.hpp"
#include "spinex/explain.hpp"
#include "spinex/nelder_mead.hpp"
#include "spinex/pareto.hpp"
#include "spinex/similarity.hpp"

#include <array>
#include <chrono>
#include <limits>
#include <numeric>

namespace spinex {

namespace detail {

// N(0, sigma) draws; sigma == 0 yields exact zeros without consuming the stream.
inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double sigma, Rng& rng) {
  Matrix m = Matrix::Zero(rows, cols);
  if (sigma <= 0.0) return m;
  std::normal_distribution<double> dist(0.0, sigma);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

inline std::vector<std::size_t> argsort_column(const Matrix& fitness, Eigen::Index col = 0) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(fitness.rows()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return fitness(static_cast<Eigen::Index>(a), col) < fitness(static_cast<Eigen::Index>(b), col);
  });
  return idx;
}

// Best-first row order: by fitness for one objective, Pareto members first otherwise.
inline std::vector<std::size_t> elite_order(const Matrix& fitness) {
  if (fitness.cols() == 1) return argsort_column(fitness);
  std::vector<std::vector<double>> f;
  for (Eigen::Index i = 0; i < fitness.rows(); ++i) f.push_back(row_vector(fitness, i));
  auto front = pareto_indices(f);
  std::vector<bool> member(f.size(), false);
  for (auto i : front) member[i] = true;
  std::vector<std::size_t> order = front;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!member[i]) order.push_back(i);
  return order;
}

// k distinct values from [lo, hi) via partial Fisher-Yates.
inline std::vector<std::size_t> sample_without_replacement(std::size_t lo, std::size_t hi, std::size_t k, Rng& rng) {
  std::vector<std::size_t> pool(hi > lo ? hi - lo : 0);
  std::iota(pool.begin(), pool.end(), lo);
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

inline Matrix select_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

}  // namespace detail

// diag of the first n_variables column means of the similarity matrix; when
// the matrix has fewer columns the remaining entries are 1.
inline Matrix diagonal_transformation(const Matrix& similarities, std::size_t n_variables) {
  const auto d = static_cast<Eigen::Index>(n_variables);
  Matrix t = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    t(j, j) = (j < similarities.cols() && similarities.rows() > 0) ? similarities.col(j).mean() : 1.0;
  return t;
}

// Identity with off-diagonals set to the mean cross product of similarity
// columns i and j, symmetrized, plus identity, over its Frobenius norm.
inline Matrix cross_similarity_transformation(const Matrix& similarities, std::size_t n_variables) {
  const auto d = static_cast<Eigen::Index>(n_variables);
  if (similarities.cols() < d)
    throw dimension_error("cross_similarity_transformation: similarity matrix has fewer than n_variables columns");
  Matrix t = Matrix::Identity(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (i != j) t(i, j) = similarities.col(i).cwiseProduct(similarities.col(j)).mean();
  Matrix sym = (t + t.transpose()) / 2.0;
  sym += Matrix::Identity(d, d);
  return sym / sym.norm();
}

// Noise standard deviation after `iteration` iterations.
inline double noise_sigma(double step_size, std::size_t iteration) {
  return step_size * std::exp(-0.05 * static_cast<double>(iteration));
}

inline Matrix apply_transformation(const Matrix& space, const Matrix& transformation, double step_size,
                                   std::size_t iteration, Rng& rng) {
  if (transformation.rows() != space.cols() || transformation.cols() != space.cols())
    throw dimension_error("apply_transformation: transformation must be n_variables x n_variables");
  Matrix out = space * transformation;
  out += detail::gaussian_matrix(space.rows(), space.cols(), noise_sigma(step_size, iteration), rng);
  return out;
}

// Perturbed copies of the floor(0.1 * population) lowest-fitness rows.
inline Matrix intensify_search_around_best(const Matrix& space, const Matrix& fitness, double step_size, Rng& rng) {
  const auto keep = static_cast<std::size_t>(0.1 * static_cast<double>(space.rows()));
  auto order = detail::argsort_column(fitness);
  order.resize(std::min(keep, order.size()));
  Matrix best = detail::select_rows(space, order);
  best += detail::gaussian_matrix(best.rows(), best.cols(), step_size, rng);
  return best;
}

inline double restart_threshold(const EngineState& state, std::size_t max_iterations) {
  const double rate = (static_cast<double>(state.iteration) - static_cast<double>(state.last_improvement_iteration)) /
                      static_cast<double>(max_iterations);
  return 30.0 * (1.0 + rate);
}

// After prolonged stagnation: a fresh population whose head holds the best 10%
// of the old one, with a further 20% of the tail re-randomized.
inline Matrix adaptive_restart(const Matrix& space, const Matrix& fitness, EngineState& state,
                               std::size_t max_iterations, Rng& rng) {
  if (!(static_cast<double>(state.no_improvement_count) > restart_threshold(state, max_iterations))) return space;
  state.no_improvement_count = 0;
  state.last_improvement_iteration = state.iteration;

  const auto pop = static_cast<std::size_t>(space.rows());
  const auto n_keep = static_cast<std::size_t>(0.1 * static_cast<double>(pop));
  std::vector<std::size_t> keep;
  if (fitness.cols() == 1) {
    keep = detail::argsort_column(fitness);
  } else {
    std::vector<std::vector<double>> f;
    for (Eigen::Index i = 0; i < fitness.rows(); ++i) f.push_back(row_vector(fitness, i));
    keep = pareto_indices(f);
  }
  keep.resize(std::min(n_keep, keep.size()));

  Matrix fresh = init_solution_space(pop, static_cast<std::size_t>(space.cols()), rng);
  for (std::size_t i = 0; i < keep.size(); ++i)
    fresh.row(static_cast<Eigen::Index>(i)) = space.row(static_cast<Eigen::Index>(keep[i]));
  const auto n_div = static_cast<std::size_t>(0.2 * static_cast<double>(pop));
  auto div = detail::sample_without_replacement(keep.size(), pop, n_div, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t r : div)
    for (Eigen::Index j = 0; j < fresh.cols(); ++j) fresh(static_cast<Eigen::Index>(r), j) = unif(rng);
  return fresh;
}

inline constexpr std::array<double, 4> kEscapeLadder{0.1, 0.3, 0.6, 1.0};

inline double escape_intensity(std::size_t no_improvement_count, double step_size, double diversity,
                               double diversity_threshold) {
  const std::size_t severity = std::min<std::size_t>(no_improvement_count / 10, 3);
  double intensity = kEscapeLadder[severity] * step_size;
  if (diversity < diversity_threshold) intensity *= 2.0;
  return intensity;
}

// Each row is perturbed with probability 1/2; the result is clipped to [0, 1].
inline Matrix adaptive_escape(const Matrix& space, const Matrix& fitness, const EngineState& state,
                              double diversity_threshold, Rng& rng) {
  const double intensity =
      escape_intensity(state.no_improvement_count, state.step_size, fitness_diversity(fitness), diversity_threshold);
  std::bernoulli_distribution coin(0.5);
  std::vector<char> mask(static_cast<std::size_t>(space.rows()));
  for (auto& m : mask) m = coin(rng) ? 1 : 0;
  const Matrix noise = detail::gaussian_matrix(space.rows(), space.cols(), intensity, rng);
  Matrix out = space;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    if (mask[static_cast<std::size_t>(i)]) out.row(i) += noise.row(i);
  return out.cwiseMax(0.0).cwiseMin(1.0);
}

// Grow on low diversity, shrink on long stagnation; clamp after each stage.
inline double adaptive_parameters(EngineState& state, const Matrix& fitness, const OptimizerConfig& cfg) {
  const double diversity = fitness_diversity(fitness);
  state.step_size *= diversity < cfg.diversity_threshold ? 1.1 : 0.9;
  state.step_size = std::clamp(state.step_size, cfg.step_size_min, cfg.step_size_max);
  state.step_size *= state.no_improvement_count > 10 ? 0.9 : 1.1;
  state.step_size = std::clamp(state.step_size, cfg.step_size_min, cfg.step_size_max);
  return state.step_size;
}

inline std::size_t resized_population(std::size_t population, double diversity, std::size_t no_improvement_count,
                                      bool allow_growth, double diversity_threshold) {
  if (diversity < diversity_threshold) {
    if (allow_growth)
      return std::min(static_cast<std::size_t>(1.5 * static_cast<double>(population)), std::size_t{1000});
    return population;
  }
  if (no_improvement_count > 20)
    return std::max(static_cast<std::size_t>(0.8 * static_cast<double>(population)), std::size_t{50});
  return population;
}

struct PopulationResize {
  std::size_t new_size = 0;
  Matrix space;
};

// Growth keeps every existing row and appends uniform rows; shrinking keeps the
// best `new_size` rows.
inline PopulationResize adjust_population_size(EngineState& state, const Matrix& space, const Matrix& fitness,
                                               const OptimizerConfig& cfg, Rng& rng) {
  const auto old_size = static_cast<std::size_t>(space.rows());
  const std::size_t new_size = resized_population(old_size, fitness_diversity(fitness), state.no_improvement_count,
                                                  cfg.allow_population_growth, cfg.diversity_threshold);
  state.population_size = new_size;
  if (new_size == old_size) return {new_size, space};
  if (new_size > old_size) {
    Matrix out(static_cast<Eigen::Index>(new_size), space.cols());
    out.topRows(space.rows()) = space;
    out.bottomRows(static_cast<Eigen::Index>(new_size - old_size)) =
        init_solution_space(new_size - old_size, static_cast<std::size_t>(space.cols()), rng);
    return {new_size, std::move(out)};
  }
  auto order = detail::elite_order(fitness);
  order.resize(new_size);
  return {new_size, detail::select_rows(space, order)};
}

// Appends `extra_column`, then projects the expanded population onto the
// n_variables leading principal axes of its covariance. Each axis is signed so
// its largest-magnitude component is positive.
inline Matrix dimensional_shift_project(const Matrix& space, const Vector& extra_column) {
  const Eigen::Index n = space.rows();
  const Eigen::Index d = space.cols();
  if (n < 2) throw dimension_error("dimensional_shift: need at least 2 rows");
  if (extra_column.size() != n) throw dimension_error("dimensional_shift: column length mismatch");
  Eigen::MatrixXd expanded(n, d + 1);
  expanded.leftCols(d) = space;
  expanded.col(d) = extra_column;
  Eigen::MatrixXd centered = expanded.rowwise() - expanded.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error("dimensional_shift: eigendecomposition failed");
  // ascending eigenvalues; take the last d columns in descending order
  Eigen::MatrixXd basis(d + 1, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXd v = eig.eigenvectors().col(d - k);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    basis.col(k) = v;
  }
  return expanded * basis;
}

// With probability 0.1 the population passes through dimensional_shift_project
// with a uniform random extra column.
inline Matrix dimensional_shift(const Matrix& space, Rng& rng,
                                const std::function<void(const std::string&)>& on_warning = {}) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (!(unif(rng) < 0.1)) return space;
  if (space.rows() < 2) return space;
  Vector extra(space.rows());
  for (Eigen::Index i = 0; i < extra.size(); ++i) extra(i) = unif(rng);
  try {
    return dimensional_shift_project(space, extra);
  } catch (const std::exception& e) {
    if (on_warning) on_warning(e.what());
    return space;
  }
}

// 0.9 * old + 0.1 * softmin of the mean improvement ratio per method.
inline std::vector<double> adjust_weights(std::span<const double> old_weights, std::span<const double> fitness,
                                          double best_fitness) {
  const std::size_t k = old_weights.size();
  double mean_improvement = 1.0;
  if (best_fitness != 0.0 && !fitness.empty()) {
    double acc = 0.0;
    for (double f : fitness) acc += f / best_fitness;
    mean_improvement = acc / static_cast<double>(fitness.size());
  }
  // every method currently sees the same population-level improvement
  std::vector<double> fresh(k, std::exp(-mean_improvement));
  const double sum = std::accumulate(fresh.begin(), fresh.end(), 0.0);
  for (double& w : fresh) w = sum > 1e-10 ? w / sum : 1.0 / static_cast<double>(k);
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = 0.9 * old_weights[i] + 0.1 * fresh[i];
  return out;
}

// Per-candidate record of original, transformed and shift vector.
inline std::vector<TrajectoryEntry> track_solution_trajectory(const Matrix& original, const Matrix& transformed,
                                                              std::size_t iteration = 0) {
  if (original.rows() != transformed.rows() || original.cols() != transformed.cols())
    throw dimension_error("track_solution_trajectory: shape mismatch");
  std::vector<TrajectoryEntry> out;
  for (Eigen::Index i = 0; i < original.rows(); ++i) {
    TrajectoryEntry e;
    e.iteration = iteration;
    e.solution = row_vector(transformed, i);
    std::vector<double> shift(e.solution.size());
    for (std::size_t j = 0; j < shift.size(); ++j) shift[j] = e.solution[j] - original(i, static_cast<Eigen::Index>(j));
    e.shift_vector = std::move(shift);
    out.push_back(std::move(e));
  }
  return out;
}

struct RunHooks {
  std::function<void(const std::string&)> on_explanation;
  std::function<void(const std::string&)> on_warning;
};

struct OptimizeResult {
  // single-objective
  std::vector<double> best_solution;   // genotype in [0, 1]
  std::vector<double> best_phenotype;
  double best_fitness = std::numeric_limits<double>::infinity();
  // multi-objective
  ParetoArchive archive;
  RunRecord record;
};

inline std::vector<double> clamp_unit(std::vector<double> v) {
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
  return v;
}

inline OptimizeResult optimize(const Problem& problem, OptimizerConfig cfg, const RunHooks& hooks = {}) {
  problem.validate();
  cfg.validate();
  if (problem.n_objectives > 1) cfg.is_multi_objective = true;
  const bool multi = cfg.is_multi_objective;
  if (!multi && problem.n_objectives != 1)
    throw std::invalid_argument("optimize: single-objective mode needs a single-objective problem");

  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);
  CountingObjective counter(problem, cfg.max_evaluations);
  EngineState state = EngineState::from_config(cfg);
  const std::size_t d = problem.n_variables;

  OptimizeResult result;
  RunRecord& rec = result.record;
  rec.problem_name = problem.name;
  rec.config = cfg;
  rec.multi_objective = multi;

  SimilarityOptions sim_opts;
  sim_opts.consistent_shapes = cfg.consistent_shapes;
  sim_opts.on_warning = hooks.on_warning;

  Matrix space = init_solution_space(state.population_size, d, rng);
  ParetoArchive archive;
  bool have_best = false;
  rec.termination = "max_iterations";

  const std::size_t min_free_columns = std::min<std::size_t>(2, d);
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    state.iteration = it;
    rec.iterations_run = it + 1;
    try {
      // (1) variability guard
      bool all_flat = true;
      for (Eigen::Index j = 0; j < space.cols() && all_flat; ++j) {
        std::vector<double> col(static_cast<std::size_t>(space.rows()));
        for (Eigen::Index i = 0; i < space.rows(); ++i) col[static_cast<std::size_t>(i)] = space(i, j);
        if (population_std(col) >= 1e-8) all_flat = false;
      }
      if (all_flat) {
        space += detail::gaussian_matrix(space.rows(), space.cols(), 1e-5, rng);
        space = space.cwiseMax(0.0).cwiseMin(1.0);
      }
      std::size_t free_columns = 0;
      for (Eigen::Index j = 0; j < space.cols(); ++j)
        if ((space.col(j).array() != space(0, j)).any()) ++free_columns;
      if (free_columns < min_free_columns) {
        space = init_solution_space(state.population_size, d, rng);
        continue;
      }

      // (2) evaluation, (3) similarity
      const Matrix fitness = counter.evaluate_rows(space);
      if (cfg.adaptive_weights) sim_opts.weights = state.weights;
      const Matrix similarities = combined_similarity(space, cfg.similarity_methods, sim_opts);

      // (4) explainability
      if (cfg.verbose_explainability && it % cfg.snapshot_interval == 0) {
        rec.snapshots.push_back(make_snapshot(space, similarities, fitness, it));
        if (hooks.on_explanation) hooks.on_explanation(explain_iteration(space, similarities, fitness, it));
      }

      // (5) bookkeeping
      bool stop = false;
      if (!multi) {
        Eigen::Index cb = 0;
        fitness.col(0).minCoeff(&cb);
        if (!have_best || fitness(cb, 0) < result.best_fitness) {
          have_best = true;
          result.best_solution = row_vector(space, cb);
          result.best_fitness = fitness(cb, 0);
          NelderMeadOptions nm;
          nm.max_iterations = cfg.local_search_iterations;
          auto refined = nelder_mead_search([&](std::span<const double> g) { return counter.scalar(g); },
                                            result.best_solution, nm);
          // evaluation clamps, so refined.fx is also the value at the clamped point
          result.best_solution = clamp_unit(refined.x);
          result.best_fitness = refined.fx;
          state.best_solution = result.best_solution;
          state.best_fitness = {result.best_fitness};
          rec.trajectory.push_back({it, result.best_solution, {result.best_fitness}, std::nullopt});
          if (refined.budget_hit) throw budget_exhausted();
          state.no_improvement_count = 0;
          state.last_improvement_iteration = it;
          if (cfg.tolerance > 0.0 && std::abs(result.best_fitness - cfg.tolerance_target) <= cfg.tolerance) {
            rec.termination = "tolerance";
            stop = true;
          }
        } else {
          ++state.no_improvement_count;
        }
        if (cfg.adaptive_weights)
          state.weights = adjust_weights(state.weights, std::span<const double>(fitness.data(), static_cast<std::size_t>(fitness.rows())),
                                         result.best_fitness);
      } else {
        const std::size_t old_size = archive.size();
        const ParetoArchive current = pareto_front(space, fitness);
        archive = update_pareto_front(archive, current.solutions, [&](std::span<const double> g) { return counter(g); });
        if (cfg.archive_cap > 0) prune_by_crowding(archive, cfg.archive_cap);
        if (!archive.empty()) rec.trajectory.push_back({it, archive.solutions.back(), archive.fitness.back(), std::nullopt});
        if (archive.size() > old_size)
          state.no_improvement_count = 0;
        else
          ++state.no_improvement_count;
      }

      IterationStat stat;
      stat.iteration = it;
      stat.best_fitness = multi ? 0.0 : result.best_fitness;
      stat.archive_size = archive.size();
      if (multi) stat.ideal_point = ideal_point(archive.fitness);
      stat.step_size = state.step_size;
      rec.history.push_back(std::move(stat));
      if (stop) break;

      // (6) transformation and dimensional shift
      const Matrix transformation = cfg.transformation == TransformationStrategy::diagonal
                                        ? diagonal_transformation(similarities, d)
                                        : cross_similarity_transformation(similarities, d);
      space = apply_transformation(space, transformation, state.step_size, it, rng);
      space = dimensional_shift(space, rng, hooks.on_warning);

      // (7) intensification
      if (!multi) {
        const Matrix best_rows = intensify_search_around_best(space, fitness, state.step_size, rng);
        space.topRows(best_rows.rows()) = best_rows;
      }

      // (8) adaptation
      space = adaptive_restart(space, fitness, state, cfg.max_iterations, rng);
      space = adaptive_escape(space, fitness, state, cfg.diversity_threshold, rng);
      if (cfg.allow_population_growth) space = adjust_population_size(state, space, fitness, cfg, rng).space;
      adaptive_parameters(state, fitness, cfg);
    } catch (const budget_exhausted&) {
      rec.termination = "budget";
      break;
    } catch (const std::exception& e) {
      rec.termination = std::string("error at iteration ") + std::to_string(it) + ": " + e.what();
      if (hooks.on_warning) hooks.on_warning(rec.termination);
      break;
    }
  }

  rec.evaluations = counter.count();
  rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!multi) {
    if (!have_best) throw std::runtime_error("optimize(" + problem.name + "): no successful evaluation; " + rec.termination);
    result.best_phenotype = scale_to_domain(result.best_solution, problem.bounds);
  } else {
    if (archive.empty())
      throw std::runtime_error("optimize(" + problem.name + "): no successful evaluation; " + rec.termination);
    result.archive = archive;
    rec.pareto_solutions = archive.solutions;
    rec.pareto_fitness = archive.fitness;
  }
  return result;
}

}  // namespace spinex
