#pragma once

// Comparison algorithms sharing the Problem interface and the evaluation
// budget accounting of CountingObjective, plus the id-keyed registry the CLI
// runs experiments through.
//
// Defaults:
//   simulated annealing   T0 = 1.0, T <- 0.95 T per proposal, gaussian step 0.1
//   differential evolution DE/rand/1/bin, F = 0.8, CR = 0.9, population 50
//   nelder-mead restarts  100 simplex iterations per restart, uniform starts
//   random search         uniform genotype samples
//   nsga2                 population 100, SBX eta 15 p 0.9, polynomial mutation eta 20 p 1/n

#include "spinex/core.hpp"
#include "spinex/engine.hpp"
#include "spinex/nelder_mead.hpp"
#include "spinex/pareto.hpp"

#include <chrono>
#include <limits>
#include <map>
#include <numeric>

namespace spinex {

struct SimulatedAnnealingParams {
  double initial_temperature = 1.0;
  double cooling = 0.95;
  double step = 0.1;
};

struct DifferentialEvolutionParams {
  std::size_t population = 50;
  double f = 0.8;
  double cr = 0.9;
};

struct NelderMeadRestartParams {
  std::size_t max_iterations = 100;
};

struct Nsga2Params {
  std::size_t population = 100;
  double eta_crossover = 15.0;
  double p_crossover = 0.9;
  double eta_mutation = 20.0;
  double p_mutation = 0.0;  // 0 means 1 / n_variables
};

struct BaselineConfig {
  std::string algorithm;
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  SimulatedAnnealingParams sa;
  DifferentialEvolutionParams de;
  NelderMeadRestartParams nm;
  Nsga2Params nsga2;

  void validate() const {
    if (budget == 0) throw std::invalid_argument("baseline budget must be positive");
  }
};

struct AlgorithmResult {
  std::vector<double> best_solution;  // genotype, single-objective only
  // single-objective: {best}; multi-objective: ideal point of the archive
  std::vector<double> best_fitness;
  ParetoArchive archive;
  RunRecord record;
};

namespace detail {

class RunClock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline std::vector<double> uniform_genotype(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = unif(rng);
  return x;
}

inline void require_single(const Problem& p, const char* algo) {
  p.validate();
  if (p.n_objectives != 1) throw std::invalid_argument(std::string(algo) + " needs a single-objective problem");
}

// Tracks the best point and writes improvements into the run record.
struct BestTracker {
  AlgorithmResult& out;
  bool have = false;

  void offer(const std::vector<double>& x, double f, std::size_t iteration) {
    if (have && !(f < out.best_fitness[0])) return;
    have = true;
    out.best_solution = x;
    out.best_fitness = {f};
    out.record.trajectory.push_back({iteration, x, {f}, std::nullopt});
  }
};

inline void finish(AlgorithmResult& res, const Problem& p, const CountingObjective& counter, const RunClock& clock,
                   const char* algo, bool have_result) {
  res.record.algorithm = algo;
  res.record.problem_name = p.name;
  res.record.evaluations = counter.count();
  res.record.wall_clock_seconds = clock.seconds();
  if (!have_result) throw std::runtime_error(std::string(algo) + "(" + p.name + "): no successful evaluation");
}

inline void record_stat(RunRecord& rec, std::size_t iteration, double best, double step = 0.0) {
  IterationStat s;
  s.iteration = iteration;
  s.best_fitness = best;
  s.step_size = step;
  rec.history.push_back(std::move(s));
}

}  // namespace detail

inline AlgorithmResult simulated_annealing(const Problem& problem, const BaselineConfig& cfg) {
  detail::require_single(problem, "simulated_annealing");
  cfg.validate();
  detail::RunClock clock;
  Rng rng(cfg.seed);
  CountingObjective counter(problem, cfg.budget);
  AlgorithmResult res;
  detail::BestTracker best{res};
  const auto& prm = cfg.sa;

  std::normal_distribution<double> step(0.0, prm.step);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t proposals = 0, accepted = 0, uphill = 0;
  double temperature = prm.initial_temperature;
  try {
    std::vector<double> x = detail::uniform_genotype(problem.n_variables, rng);
    double fx = counter.scalar(x);
    best.offer(x, fx, 0);
    while (true) {
      std::vector<double> y = x;
      for (double& v : y) v = std::clamp(v + step(rng), 0.0, 1.0);
      const double fy = counter.scalar(y);
      ++proposals;
      const double delta = fy - fx;
      bool accept = delta <= 0.0;
      if (!accept) {
        const double p = std::exp(-delta / temperature);
        accept = unif(rng) < p;
        if (accept) ++uphill;
      }
      if (accept) {
        ++accepted;
        x = std::move(y);
        fx = fy;
        best.offer(x, fx, proposals);
      }
      temperature *= prm.cooling;
      if (proposals % 100 == 0) detail::record_stat(res.record, proposals, res.best_fitness[0], temperature);
    }
  } catch (const budget_exhausted&) {
    res.record.termination = "budget";
  }
  res.record.iterations_run = proposals;
  res.record.stats = {{"proposals", static_cast<double>(proposals)},
                      {"accepted", static_cast<double>(accepted)},
                      {"accepted_uphill", static_cast<double>(uphill)},
                      {"final_temperature", temperature}};
  detail::finish(res, problem, counter, clock, "simulated_annealing", best.have);
  return res;
}

// With cr = 0 no coordinate is taken from the mutant, so the trial equals the
// target; otherwise one random coordinate always crosses over.
inline AlgorithmResult differential_evolution(const Problem& problem, const BaselineConfig& cfg) {
  detail::require_single(problem, "differential_evolution");
  cfg.validate();
  const auto& prm = cfg.de;
  if (prm.population < 4) throw std::invalid_argument("differential_evolution: population must be >= 4");
  detail::RunClock clock;
  Rng rng(cfg.seed);
  CountingObjective counter(problem, cfg.budget);
  AlgorithmResult res;
  detail::BestTracker best{res};
  const std::size_t np = prm.population;
  const std::size_t d = problem.n_variables;

  std::vector<std::vector<double>> pop;
  std::vector<double> fit;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, np - 1);
  std::uniform_int_distribution<std::size_t> pick_dim(0, d - 1);
  std::size_t generation = 0;
  try {
    for (std::size_t i = 0; i < np; ++i) {
      pop.push_back(detail::uniform_genotype(d, rng));
      fit.push_back(counter.scalar(pop.back()));
      best.offer(pop.back(), fit.back(), 0);
    }
    detail::record_stat(res.record, 0, res.best_fitness[0]);
    while (true) {
      ++generation;
      for (std::size_t i = 0; i < np; ++i) {
        std::size_t r1, r2, r3;
        do r1 = pick(rng); while (r1 == i);
        do r2 = pick(rng); while (r2 == i || r2 == r1);
        do r3 = pick(rng); while (r3 == i || r3 == r1 || r3 == r2);
        const std::size_t jrand = pick_dim(rng);
        std::vector<double> trial = pop[i];
        for (std::size_t j = 0; j < d; ++j) {
          const bool cross = prm.cr > 0.0 && (unif(rng) < prm.cr || j == jrand);
          if (cross) trial[j] = std::clamp(pop[r1][j] + prm.f * (pop[r2][j] - pop[r3][j]), 0.0, 1.0);
        }
        const double ft = prm.cr == 0.0 ? fit[i] : counter.scalar(trial);
        if (ft <= fit[i]) {
          pop[i] = std::move(trial);
          fit[i] = ft;
          best.offer(pop[i], ft, generation);
        }
      }
      detail::record_stat(res.record, generation, res.best_fitness[0]);
      // a frozen population (F = 0, CR = 0) never spends budget; stop instead of spinning
      if (prm.cr == 0.0) break;
    }
  } catch (const budget_exhausted&) {
    res.record.termination = "budget";
  }
  if (res.record.termination.empty()) res.record.termination = "frozen";
  res.record.iterations_run = generation;
  detail::finish(res, problem, counter, clock, "differential_evolution", best.have);
  return res;
}

inline AlgorithmResult nelder_mead_restarts(const Problem& problem, const BaselineConfig& cfg) {
  detail::require_single(problem, "nelder_mead_restarts");
  cfg.validate();
  detail::RunClock clock;
  Rng rng(cfg.seed);
  CountingObjective counter(problem, cfg.budget);
  AlgorithmResult res;
  detail::BestTracker best{res};
  NelderMeadOptions opt;
  opt.max_iterations = cfg.nm.max_iterations;
  std::size_t restarts = 0;
  while (counter.remaining() > 0) {
    auto x0 = detail::uniform_genotype(problem.n_variables, rng);
    auto r = nelder_mead_search([&](std::span<const double> g) { return counter.scalar(g); }, x0, opt);
    if (r.evaluations > 0 && std::isfinite(r.fx)) best.offer(clamp_unit(r.x), r.fx, restarts);
    detail::record_stat(res.record, restarts, best.have ? res.best_fitness[0] : r.fx);
    ++restarts;
    if (r.budget_hit || r.evaluations == 0) break;
  }
  res.record.termination = "budget";
  res.record.iterations_run = restarts;
  res.record.stats = {{"restarts", static_cast<double>(restarts)}};
  detail::finish(res, problem, counter, clock, "nelder_mead_restarts", best.have);
  return res;
}

inline AlgorithmResult random_search(const Problem& problem, const BaselineConfig& cfg) {
  detail::require_single(problem, "random_search");
  cfg.validate();
  detail::RunClock clock;
  Rng rng(cfg.seed);
  CountingObjective counter(problem, cfg.budget);
  AlgorithmResult res;
  detail::BestTracker best{res};
  std::size_t i = 0;
  try {
    for (;; ++i) {
      auto x = detail::uniform_genotype(problem.n_variables, rng);
      best.offer(x, counter.scalar(x), i);
    }
  } catch (const budget_exhausted&) {
    res.record.termination = "budget";
  }
  res.record.iterations_run = i;
  detail::finish(res, problem, counter, clock, "random_search", best.have);
  return res;
}

// ---------------------------------------------------------------------------
// NSGA-II

// Fronts of indices, best first (Deb's fast non-dominated sort).
inline std::vector<std::vector<std::size_t>> fast_non_dominated_sort(const std::vector<std::vector<double>>& fitness) {
  const std::size_t n = fitness.size();
  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(fitness[p], fitness[q]))
        dominated_by_me[p].push_back(q);
      else if (dominates(fitness[q], fitness[p]))
        ++domination_count[p];
    }
    if (domination_count[p] == 0) fronts[0].push_back(p);
  }
  std::size_t k = 0;
  while (!fronts[k].empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : fronts[k])
      for (std::size_t q : dominated_by_me[p])
        if (--domination_count[q] == 0) next.push_back(q);
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
    ++k;
  }
  fronts.pop_back();
  return fronts;
}

namespace detail {

inline void sbx_crossover(std::vector<double>& a, std::vector<double>& b, double eta, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (unif(rng) > 0.5) continue;
    if (std::abs(a[j] - b[j]) < 1e-14) continue;
    const double u = unif(rng);
    const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0)) : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
    const double c1 = 0.5 * ((1 + beta) * a[j] + (1 - beta) * b[j]);
    const double c2 = 0.5 * ((1 - beta) * a[j] + (1 + beta) * b[j]);
    a[j] = std::clamp(c1, 0.0, 1.0);
    b[j] = std::clamp(c2, 0.0, 1.0);
  }
}

inline void polynomial_mutation(std::vector<double>& x, double eta, double p, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double& v : x) {
    if (unif(rng) >= p) continue;
    const double u = unif(rng);
    const double delta = u < 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0 : 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
    v = std::clamp(v + delta, 0.0, 1.0);
  }
}

}  // namespace detail

inline AlgorithmResult nsga2(const Problem& problem, const BaselineConfig& cfg) {
  problem.validate();
  cfg.validate();
  if (problem.n_objectives < 2) throw std::invalid_argument("nsga2 needs a multi-objective problem");
  const auto& prm = cfg.nsga2;
  std::size_t np = std::max<std::size_t>(prm.population, 4);
  np += np % 2;
  const double pm = prm.p_mutation > 0.0 ? prm.p_mutation : 1.0 / static_cast<double>(problem.n_variables);

  detail::RunClock clock;
  Rng rng(cfg.seed);
  CountingObjective counter(problem, cfg.budget);
  AlgorithmResult res;
  std::vector<std::vector<double>> pop, fit;
  std::vector<std::size_t> rank;
  std::vector<double> crowd;

  auto assign_rank_crowding = [&]() {
    rank.assign(pop.size(), 0);
    crowd.assign(pop.size(), 0.0);
    const auto fronts = fast_non_dominated_sort(fit);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
      std::vector<std::vector<double>> ff;
      for (std::size_t i : fronts[r]) ff.push_back(fit[i]);
      const auto cd = crowding_distance(ff);
      for (std::size_t k = 0; k < fronts[r].size(); ++k) {
        rank[fronts[r][k]] = r;
        crowd[fronts[r][k]] = cd[k];
      }
    }
  };

  std::size_t generation = 0;
  try {
    for (std::size_t i = 0; i < np; ++i) {
      auto x = detail::uniform_genotype(problem.n_variables, rng);
      auto f = counter(x);
      pop.push_back(std::move(x));
      fit.push_back(std::move(f));
    }
  } catch (const budget_exhausted&) {
    res.record.termination = "budget";
  }
  if (pop.empty()) throw std::runtime_error("nsga2(" + problem.name + "): no successful evaluation");
  assign_rank_crowding();

  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto tournament = [&]() {
    const std::size_t a = pick(rng), b = pick(rng);
    if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
    if (crowd[a] != crowd[b]) return crowd[a] > crowd[b] ? a : b;
    return std::min(a, b);
  };

  while (res.record.termination.empty()) {
    ++generation;
    std::vector<std::vector<double>> kids, kid_fit;
    try {
      while (kids.size() < np) {
        auto a = pop[tournament()];
        auto b = pop[tournament()];
        if (unif(rng) < prm.p_crossover) detail::sbx_crossover(a, b, prm.eta_crossover, rng);
        detail::polynomial_mutation(a, prm.eta_mutation, pm, rng);
        detail::polynomial_mutation(b, prm.eta_mutation, pm, rng);
        for (auto* c : {&a, &b}) {
          if (kids.size() >= np) break;
          auto f = counter(*c);
          kids.push_back(std::move(*c));
          kid_fit.push_back(std::move(f));
        }
      }
    } catch (const budget_exhausted&) {
      res.record.termination = "budget";
    }
    // environmental selection over parents + offspring
    std::vector<std::vector<double>> all = pop, all_fit = fit;
    all.insert(all.end(), kids.begin(), kids.end());
    all_fit.insert(all_fit.end(), kid_fit.begin(), kid_fit.end());
    const auto fronts = fast_non_dominated_sort(all_fit);
    std::vector<std::size_t> chosen;
    for (const auto& front : fronts) {
      if (chosen.size() + front.size() <= np) {
        chosen.insert(chosen.end(), front.begin(), front.end());
        continue;
      }
      std::vector<std::vector<double>> ff;
      for (std::size_t i : front) ff.push_back(all_fit[i]);
      const auto cd = crowding_distance(ff);
      std::vector<std::size_t> order(front.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cd[x] > cd[y]; });
      for (std::size_t k = 0; chosen.size() < np; ++k) chosen.push_back(front[order[k]]);
      break;
    }
    pop.clear();
    fit.clear();
    for (std::size_t i : chosen) {
      pop.push_back(all[i]);
      fit.push_back(all_fit[i]);
    }
    assign_rank_crowding();

    IterationStat stat;
    stat.iteration = generation;
    stat.archive_size = static_cast<std::size_t>(std::count(rank.begin(), rank.end(), std::size_t{0}));
    std::vector<std::vector<double>> first;
    for (std::size_t i = 0; i < pop.size(); ++i)
      if (rank[i] == 0) first.push_back(fit[i]);
    stat.ideal_point = ideal_point(first);
    res.record.history.push_back(std::move(stat));
  }

  // final first front, duplicates collapsed
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (rank[i] != 0 || !seen.insert(pop[i]).second) continue;
    res.archive.solutions.push_back(pop[i]);
    res.archive.fitness.push_back(fit[i]);
  }
  res.best_fitness = ideal_point(res.archive.fitness);
  res.record.multi_objective = true;
  res.record.pareto_solutions = res.archive.solutions;
  res.record.pareto_fitness = res.archive.fitness;
  res.record.iterations_run = generation;
  detail::finish(res, problem, counter, clock, "nsga2", true);
  return res;
}

// ---------------------------------------------------------------------------
// Registry

struct RunSettings {
  std::uint64_t seed = 0;
  std::size_t budget = 10000;
  // population of spinex and nsga2; 0 keeps their default
  std::size_t population = 0;
  std::map<std::string, double> params;
  bool verbose_explainability = false;
};

using AlgorithmFn = std::function<AlgorithmResult(const Problem&, const RunSettings&)>;

struct AlgorithmEntry {
  std::string id;
  bool single_objective = true;
  bool multi_objective = false;
  std::string description;
  AlgorithmFn run;
};

namespace detail {

inline double param_or(const RunSettings& s, const std::string& key, double fallback) {
  auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

inline BaselineConfig baseline_config(const std::string& id, const RunSettings& s) {
  BaselineConfig c;
  c.algorithm = id;
  c.budget = s.budget;
  c.seed = s.seed;
  c.sa.initial_temperature = param_or(s, "initial_temperature", c.sa.initial_temperature);
  c.sa.cooling = param_or(s, "cooling", c.sa.cooling);
  c.sa.step = param_or(s, "step", c.sa.step);
  c.de.f = param_or(s, "f", c.de.f);
  c.de.cr = param_or(s, "cr", c.de.cr);
  c.de.population = static_cast<std::size_t>(param_or(s, "de_population", static_cast<double>(c.de.population)));
  c.nm.max_iterations = static_cast<std::size_t>(param_or(s, "max_iterations", static_cast<double>(c.nm.max_iterations)));
  if (s.population) c.nsga2.population = s.population;
  return c;
}

// Adapts optimize() to the common result type. The budget caps evaluations;
// a known single-objective optimum becomes the early-stop target.
inline AlgorithmResult run_spinex(const Problem& problem, const RunSettings& s) {
  OptimizerConfig cfg;
  cfg.seed = s.seed;
  cfg.max_evaluations = s.budget;
  if (s.population) cfg.population_size = s.population;
  cfg.max_iterations = static_cast<std::size_t>(param_or(s, "max_iterations", static_cast<double>(cfg.max_iterations)));
  cfg.tolerance = param_or(s, "tolerance", cfg.tolerance);
  cfg.verbose_explainability = s.verbose_explainability;
  if (problem.n_objectives == 1 && problem.known_optimum) cfg.tolerance_target = problem.known_optimum->front();
  RunHooks hooks;
  hooks.on_warning = [](const std::string&) {};
  auto r = optimize(problem, cfg, hooks);
  AlgorithmResult out;
  out.record = std::move(r.record);
  if (problem.n_objectives == 1) {
    out.best_solution = r.best_solution;
    out.best_fitness = {r.best_fitness};
  } else {
    out.archive = r.archive;
    out.best_fitness = ideal_point(out.archive.fitness);
  }
  return out;
}

}  // namespace detail

class AlgorithmRegistry {
 public:
  void add(AlgorithmEntry e) {
    if (find(e.id)) throw std::invalid_argument("algorithm already registered: " + e.id);
    entries_.push_back(std::move(e));
  }

  const AlgorithmEntry* find(const std::string& id) const {
    for (const auto& e : entries_)
      if (e.id == id) return &e;
    return nullptr;
  }

  const AlgorithmEntry& at(const std::string& id) const {
    if (const auto* e = find(id)) return *e;
    throw std::invalid_argument("unknown algorithm: " + id);
  }

  const std::vector<AlgorithmEntry>& entries() const { return entries_; }

 private:
  std::vector<AlgorithmEntry> entries_;
};

inline AlgorithmRegistry& default_registry() {
  static AlgorithmRegistry reg = [] {
    AlgorithmRegistry r;
    auto baseline = [](AlgorithmResult (*fn)(const Problem&, const BaselineConfig&), std::string id) {
      return [fn, id](const Problem& p, const RunSettings& s) { return fn(p, detail::baseline_config(id, s)); };
    };
    r.add({"spinex", true, true, "similarity-driven population search", detail::run_spinex});
    r.add({"simulated_annealing", true, false, "geometric-cooling Metropolis search",
           baseline(simulated_annealing, "simulated_annealing")});
    r.add({"differential_evolution", true, false, "DE/rand/1/bin", baseline(differential_evolution, "differential_evolution")});
    r.add({"nelder_mead_restarts", true, false, "downhill simplex from random starts",
           baseline(nelder_mead_restarts, "nelder_mead_restarts")});
    r.add({"random_search", true, false, "uniform sampling control", baseline(random_search, "random_search")});
    r.add({"nsga2", false, true, "non-dominated sorting genetic algorithm", baseline(nsga2, "nsga2")});
    return r;
  }();
  return reg;
}

inline AlgorithmResult run_algorithm(const std::string& id, const Problem& problem, const RunSettings& settings) {
  const auto& e = default_registry().at(id);
  const bool multi = problem.n_objectives > 1;
  if (multi && !e.multi_objective) throw std::invalid_argument(id + " does not support multi-objective problems");
  if (!multi && !e.single_objective) throw std::invalid_argument(id + " does not support single-objective problems");
  return e.run(problem, settings);
}

}  // namespace spinex
