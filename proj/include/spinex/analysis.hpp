#pragma once

// Rank-sum tables and performance profiles over experiment results.

#include "spinex/csv.hpp"
#include "spinex/svg.hpp"

#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace spinex {

struct ResultCell {
  std::string problem;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t dims = 0;
  std::size_t objectives = 1;
  std::size_t population = 0;
  std::size_t budget = 0;
  std::vector<double> best_fitness;
  double wall_clock_s = 0.0;
  std::size_t evaluations = 0;
  std::optional<double> known_optimum;

  // Cells with equal keys belong to the same ranking group.
  std::string instance_key() const {
    return problem + "/d" + std::to_string(dims) + "/m" + std::to_string(objectives) + "/p" + std::to_string(population);
  }
};

enum class Aggregation { median, mean, best };

inline const char* to_string(Aggregation a) {
  switch (a) {
    case Aggregation::median: return "median";
    case Aggregation::mean: return "mean";
    case Aggregation::best: return "best";
  }
  return "?";
}

inline Aggregation aggregation_from_string(const std::string& s) {
  if (s == "median") return Aggregation::median;
  if (s == "mean") return Aggregation::mean;
  if (s == "best") return Aggregation::best;
  throw std::invalid_argument("unknown aggregation: " + s);
}

class incomplete_grid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double aggregate(std::vector<double> v, Aggregation how) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  for (double& x : v)
    if (std::isnan(x)) x = std::numeric_limits<double>::infinity();
  std::sort(v.begin(), v.end());
  switch (how) {
    case Aggregation::best: return v.front();
    case Aggregation::mean: {
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    }
    case Aggregation::median: {
      const std::size_t n = v.size();
      return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }
  }
  return v.front();
}

// Standard competition ranking ("1224"): ties share the lowest rank.
// NaN counts as worse than everything.
inline std::vector<std::size_t> competition_rank(const std::vector<double>& values) {
  auto key = [](double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; };
  std::vector<std::size_t> ranks(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t better = 0;
    for (std::size_t j = 0; j < values.size(); ++j)
      if (key(values[j]) < key(values[i])) ++better;
    ranks[i] = better + 1;
  }
  return ranks;
}

struct RankRow {
  std::string algorithm;
  double fitness_rank_sum = 0.0;
  std::size_t overall_rank = 0;
  double time_rank_sum = 0.0;
  std::size_t time_rank = 0;
};

struct RankTable {
  std::vector<RankRow> rows;  // ascending fitness rank sum
  std::vector<std::string> problems;
  // per problem, per algorithm (ordered as `algorithms`)
  std::vector<std::string> algorithms;
  std::vector<std::vector<double>> fitness_ranks;
  std::vector<std::vector<double>> time_ranks;
  Aggregation aggregation = Aggregation::median;
};

// Aggregated fitness vectors and times per (instance, algorithm).
struct GroupedCells {
  std::vector<std::string> problems;
  std::vector<std::string> algorithms;
  std::vector<std::vector<std::vector<double>>> fitness;  // [problem][algorithm][objective]
  std::vector<std::vector<double>> time;                  // [problem][algorithm]
  std::vector<std::optional<double>> known_optimum;       // [problem]
};

// Fails with every missing (problem, algorithm, seed) combination named.
inline GroupedCells group_cells(const std::vector<ResultCell>& cells, Aggregation how) {
  if (cells.empty()) throw incomplete_grid("no result cells");
  GroupedCells g;
  std::set<std::string> algos;
  std::map<std::string, std::set<std::uint64_t>> seeds;
  std::map<std::pair<std::string, std::string>, std::vector<const ResultCell*>> by;
  for (const auto& c : cells) {
    const auto key = c.instance_key();
    if (std::find(g.problems.begin(), g.problems.end(), key) == g.problems.end()) g.problems.push_back(key);
    algos.insert(c.algorithm);
    seeds[key].insert(c.seed);
    by[{key, c.algorithm}].push_back(&c);
  }
  g.algorithms.assign(algos.begin(), algos.end());

  std::vector<std::string> holes;
  for (const auto& p : g.problems)
    for (const auto& a : g.algorithms) {
      std::set<std::uint64_t> have;
      for (const auto* c : by[{p, a}]) have.insert(c->seed);
      for (auto s : seeds[p])
        if (!have.count(s)) holes.push_back(p + " x " + a + " x seed " + std::to_string(s));
    }
  if (!holes.empty()) {
    std::string msg = "incomplete grid, missing cells:";
    for (const auto& h : holes) msg += "\n  " + h;
    throw incomplete_grid(msg);
  }

  for (const auto& p : g.problems) {
    std::vector<std::vector<double>> fit_row;
    std::vector<double> time_row;
    std::optional<double> known;
    std::size_t m = 0;
    for (const auto& a : g.algorithms)
      for (const auto* c : by[{p, a}]) {
        m = std::max(m, c->best_fitness.size());
        if (c->known_optimum) known = c->known_optimum;
      }
    for (const auto& a : g.algorithms) {
      const auto& list = by[{p, a}];
      std::vector<double> agg(m);
      for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> v;
        for (const auto* c : list)
          v.push_back(k < c->best_fitness.size() ? c->best_fitness[k] : std::numeric_limits<double>::quiet_NaN());
        agg[k] = aggregate(v, how);
      }
      std::vector<double> t;
      for (const auto* c : list) t.push_back(c->wall_clock_s);
      fit_row.push_back(std::move(agg));
      time_row.push_back(aggregate(t, how));
    }
    g.fitness.push_back(std::move(fit_row));
    g.time.push_back(std::move(time_row));
    g.known_optimum.push_back(known);
  }
  return g;
}

// Per problem: competition ranks by fitness (per objective, summed, for
// multi-objective groups) and by time; sums over problems.
inline RankTable rank_cells(const std::vector<ResultCell>& cells, Aggregation how = Aggregation::median) {
  const GroupedCells g = group_cells(cells, how);
  RankTable t;
  t.aggregation = how;
  t.problems = g.problems;
  t.algorithms = g.algorithms;
  const std::size_t na = g.algorithms.size();
  std::vector<double> fit_sum(na, 0.0), time_sum(na, 0.0);
  for (std::size_t p = 0; p < g.problems.size(); ++p) {
    std::vector<double> fr(na, 0.0);
    const std::size_t m = g.fitness[p].empty() ? 0 : g.fitness[p][0].size();
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<double> col(na);
      for (std::size_t a = 0; a < na; ++a) col[a] = g.fitness[p][a][k];
      const auto r = competition_rank(col);
      for (std::size_t a = 0; a < na; ++a) fr[a] += static_cast<double>(r[a]);
    }
    const auto tr = competition_rank(g.time[p]);
    std::vector<double> trd(na);
    for (std::size_t a = 0; a < na; ++a) {
      trd[a] = static_cast<double>(tr[a]);
      fit_sum[a] += fr[a];
      time_sum[a] += trd[a];
    }
    t.fitness_ranks.push_back(std::move(fr));
    t.time_ranks.push_back(std::move(trd));
  }
  const auto overall = competition_rank(fit_sum);
  const auto timing = competition_rank(time_sum);
  for (std::size_t a = 0; a < na; ++a) t.rows.push_back({g.algorithms[a], fit_sum[a], overall[a], time_sum[a], timing[a]});
  std::stable_sort(t.rows.begin(), t.rows.end(), [](const RankRow& x, const RankRow& y) {
    if (x.fitness_rank_sum != y.fitness_rank_sum) return x.fitness_rank_sum < y.fitness_rank_sum;
    return x.algorithm < y.algorithm;
  });
  return t;
}

// ---------------------------------------------------------------------------
// Performance profiles

enum class ProfileMetric { fitness_gap, time };

inline const char* to_string(ProfileMetric m) { return m == ProfileMetric::time ? "time" : "fitness_gap"; }

inline ProfileMetric profile_metric_from_string(const std::string& s) {
  if (s == "time") return ProfileMetric::time;
  if (s == "fitness_gap") return ProfileMetric::fitness_gap;
  throw std::invalid_argument("unknown profile metric: " + s);
}

struct ProfileCurve {
  std::string algorithm;
  std::vector<double> ratios;                       // one per problem
  std::vector<std::pair<double, double>> steps;     // (tau, rho) at each breakpoint, tau ascending

  // Fraction of problems with ratio <= tau.
  double rho(double tau) const {
    if (ratios.empty()) return 0.0;
    std::size_t c = 0;
    for (double r : ratios)
      if (r <= tau) ++c;
    return static_cast<double>(c) / static_cast<double>(ratios.size());
  }
};

struct PerformanceProfile {
  ProfileMetric metric = ProfileMetric::fitness_gap;
  std::vector<std::string> problems;
  std::vector<ProfileCurve> curves;
};

// values[a][p] > 0. Ratios against the per-problem minimum; non-finite
// values give an infinite ratio.
inline std::vector<ProfileCurve> profile_from_values(const std::vector<std::string>& algorithms,
                                                     const std::vector<std::vector<double>>& values) {
  std::vector<ProfileCurve> curves(algorithms.size());
  const std::size_t np = values.empty() ? 0 : values[0].size();
  std::vector<double> best(np, std::numeric_limits<double>::infinity());
  for (const auto& row : values)
    for (std::size_t p = 0; p < np; ++p)
      if (std::isfinite(row[p])) best[p] = std::min(best[p], row[p]);
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    auto& c = curves[a];
    c.algorithm = algorithms[a];
    for (std::size_t p = 0; p < np; ++p) {
      const double v = values[a][p];
      c.ratios.push_back(std::isfinite(v) && std::isfinite(best[p]) ? v / best[p] : std::numeric_limits<double>::infinity());
    }
    std::vector<double> taus{1.0};
    for (double r : c.ratios)
      if (std::isfinite(r)) taus.push_back(r);
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    for (double tau : taus) c.steps.emplace_back(tau, c.rho(tau));
  }
  return curves;
}

inline PerformanceProfile performance_profile(const std::vector<ResultCell>& cells, ProfileMetric metric,
                                              Aggregation how = Aggregation::median) {
  const GroupedCells g = group_cells(cells, how);
  const std::size_t na = g.algorithms.size(), np = g.problems.size();
  std::vector<std::vector<double>> values(na, std::vector<double>(np));
  for (std::size_t p = 0; p < np; ++p) {
    if (metric == ProfileMetric::time) {
      for (std::size_t a = 0; a < na; ++a) values[a][p] = std::max(g.time[p][a], 1e-12);
      continue;
    }
    // per-objective gap, averaged over objectives
    const std::size_t m = g.fitness[p][0].size();
    std::vector<double> group_min(m, std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t k = 0; k < m; ++k)
        if (std::isfinite(g.fitness[p][a][k])) group_min[k] = std::min(group_min[k], g.fitness[p][a][k]);
    for (std::size_t a = 0; a < na; ++a) {
      double gap = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double f = g.fitness[p][a][k];
        if (m == 1 && g.known_optimum[p])
          gap += std::max(f - *g.known_optimum[p], 1e-12);
        else
          gap += f - group_min[k] + 1e-12;
      }
      values[a][p] = gap / static_cast<double>(m);
    }
  }
  PerformanceProfile prof;
  prof.metric = metric;
  prof.problems = g.problems;
  prof.curves = profile_from_values(g.algorithms, values);
  return prof;
}

// ---------------------------------------------------------------------------
// Cells file

inline const std::vector<std::string>& cells_header() {
  static const std::vector<std::string> h{"problem",    "algorithm", "seed",         "dims",        "objectives",
                                          "population", "budget",    "best_fitness", "wall_clock_s", "evaluations"};
  return h;
}

inline std::string cells_header_line() {
  std::string s;
  for (std::size_t i = 0; i < cells_header().size(); ++i) s += (i ? "," : "") + cells_header()[i];
  return s;
}

inline std::string format_cell(const ResultCell& c) {
  return c.problem + "," + c.algorithm + "," + std::to_string(c.seed) + "," + std::to_string(c.dims) + "," +
         std::to_string(c.objectives) + "," + std::to_string(c.population) + "," + std::to_string(c.budget) + "," +
         csv::join(c.best_fitness) + "," + csv::format_double(c.wall_clock_s) + "," + std::to_string(c.evaluations);
}

inline std::vector<ResultCell> read_cells(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  if (t.header.empty()) throw std::runtime_error(path.string() + ": empty cells file");
  std::vector<std::size_t> col;
  for (const auto& name : cells_header()) col.push_back(t.column(name));
  std::vector<ResultCell> out;
  std::size_t line = 1;
  for (const auto& r : t.rows) {
    ++line;
    try {
      ResultCell c;
      c.problem = r[col[0]];
      c.algorithm = r[col[1]];
      c.seed = std::stoull(r[col[2]]);
      c.dims = std::stoul(r[col[3]]);
      c.objectives = std::stoul(r[col[4]]);
      c.population = std::stoul(r[col[5]]);
      c.budget = std::stoul(r[col[6]]);
      c.best_fitness = csv::split_doubles(r[col[7]]);
      c.wall_clock_s = csv::parse_double(r[col[8]]);
      c.evaluations = std::stoul(r[col[9]]);
      out.push_back(std::move(c));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report files

inline std::vector<std::string> write_report(const RankTable& table, const std::vector<PerformanceProfile>& profiles,
                                             const std::filesystem::path& out_dir) {
  csv::ensure_dir(out_dir);
  std::vector<std::string> manifest;
  {
    auto out = csv::open_out(out_dir / "rank_table.csv");
    out << "algorithm,fitness_rank_sum,overall_rank,time_rank_sum,time_rank\n";
    for (const auto& r : table.rows)
      out << r.algorithm << ',' << csv::format_double(r.fitness_rank_sum) << ',' << r.overall_rank << ','
          << csv::format_double(r.time_rank_sum) << ',' << r.time_rank << '\n';
    if (!out) throw std::runtime_error("write failed: " + (out_dir / "rank_table.csv").string());
    manifest.push_back("rank_table.csv");
  }
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& prof : profiles) {
    const std::string stem = std::string("profile_") + to_string(prof.metric);
    auto out = csv::open_out(out_dir / (stem + ".csv"));
    out << "algorithm,tau,rho\n";
    double tau_max = 1.0;
    for (const auto& c : prof.curves)
      for (const auto& [tau, rho] : c.steps) {
        out << c.algorithm << ',' << csv::format_double(tau) << ',' << csv::format_double(rho) << '\n';
        tau_max = std::max(tau_max, tau);
      }
    if (!out) throw std::runtime_error("write failed: " + (out_dir / (stem + ".csv")).string());
    manifest.push_back(stem + ".csv");

    static const char* palette[] = {"#440154", "#3b528b", "#21918c", "#5ec962", "#e6a117", "#d1495b", "#444444"};
    svg::Chart chart(std::string("Performance profile (") + to_string(prof.metric) + ")", "tau", "rho");
    std::size_t ci = 0;
    for (const auto& c : prof.curves) {
      std::vector<double> xs, ys;
      for (const auto& [tau, rho] : c.steps) {
        xs.push_back(tau);
        ys.push_back(rho);
      }
      xs.push_back(tau_max);
      ys.push_back(ys.empty() ? 0.0 : ys.back());
      chart.line(xs, ys, palette[ci++ % 7], true, c.algorithm);
    }
    auto svg_out = csv::open_out(out_dir / (stem + ".svg"));
    svg_out << chart.str();
    manifest.push_back(stem + ".svg");
    metrics.push_back(to_string(prof.metric));
  }

  nlohmann::json algos = nlohmann::json::array();
  for (const auto& r : table.rows)
    algos.push_back({{"id", r.algorithm},
                     {"fitness_rank_sum", r.fitness_rank_sum},
                     {"overall_rank", r.overall_rank},
                     {"time_rank_sum", r.time_rank_sum},
                     {"time_rank", r.time_rank}});
  nlohmann::json summary{
      {"metric_config",
       {{"aggregation", to_string(table.aggregation)},
        {"tie_rule", "competition ranking, ties share the lowest rank"},
        {"multi_objective_ranking", "rank per objective, summed"},
        {"profiles", metrics}}},
      {"problems", table.problems},
      {"algorithms", algos}};
  auto out = csv::open_out(out_dir / "summary.json");
  out << summary.dump(2) << '\n';
  manifest.push_back("summary.json");
  return manifest;
}

}  // namespace spinex
