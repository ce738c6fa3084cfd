#include "spinex/analysis.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

using namespace spinex;

namespace {

ResultCell cell(const std::string& problem, const std::string& algo, double fitness, double time = 1.0,
                std::uint64_t seed = 0) {
  ResultCell c;
  c.problem = problem;
  c.algorithm = algo;
  c.seed = seed;
  c.dims = 2;
  c.best_fitness = {fitness};
  c.wall_clock_s = time;
  c.evaluations = 10;
  c.budget = 10;
  return c;
}

double sum_for(const RankTable& t, const std::string& algo) {
  for (const auto& r : t.rows)
    if (r.algorithm == algo) return r.fitness_rank_sum;
  return -1;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("spinex_analysis_" + name);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST(CompetitionRank, Ties) {
  EXPECT_EQ(competition_rank({3.0, 1.0, 2.0}), (std::vector<std::size_t>{3, 1, 2}));
  EXPECT_EQ(competition_rank({1.0, 1.0, 2.0}), (std::vector<std::size_t>{1, 1, 3}));
  EXPECT_EQ(competition_rank({std::nan(""), 5.0}), (std::vector<std::size_t>{2, 1}));
}

TEST(Aggregate, Modes) {
  EXPECT_EQ(aggregate({3, 1, 2}, Aggregation::median), 2.0);
  EXPECT_EQ(aggregate({4, 1, 2, 3}, Aggregation::median), 2.5);
  EXPECT_EQ(aggregate({4, 1, 2, 3}, Aggregation::mean), 2.5);
  EXPECT_EQ(aggregate({4, 1, 2, 3}, Aggregation::best), 1.0);
  EXPECT_EQ(aggregation_from_string("mean"), Aggregation::mean);
  EXPECT_THROW(aggregation_from_string("mode"), std::invalid_argument);
}

TEST(RankCells, DominantAlgorithm) {
  std::vector<ResultCell> cells;
  for (const char* p : {"p1", "p2", "p3"}) {
    cells.push_back(cell(p, "A", 1.0));
    cells.push_back(cell(p, "B", 2.0));
  }
  auto t = rank_cells(cells);
  EXPECT_EQ(sum_for(t, "A"), 3.0);
  EXPECT_EQ(sum_for(t, "B"), 6.0);
  EXPECT_EQ(t.rows.front().algorithm, "A");
  EXPECT_EQ(t.rows.front().overall_rank, 1u);
  EXPECT_EQ(t.rows.back().overall_rank, 2u);
}

TEST(RankCells, TiesShareRankOne) {
  auto t = rank_cells({cell("p", "A", 0.0), cell("p", "B", 0.0), cell("p", "C", 1.0)});
  EXPECT_EQ(sum_for(t, "A"), 1.0);
  EXPECT_EQ(sum_for(t, "B"), 1.0);
  EXPECT_EQ(sum_for(t, "C"), 3.0);
}

TEST(RankCells, SingleAlgorithm) {
  auto t = rank_cells({cell("p1", "A", 5), cell("p2", "A", 7), cell("p3", "A", 1), cell("p4", "A", 1)});
  EXPECT_EQ(sum_for(t, "A"), 4.0);
}

TEST(RankCells, MedianOverSeeds) {
  // A: 1, 100, 2 -> median 2; B: 3, 3, 3 -> median 3
  std::vector<ResultCell> cells{cell("p", "A", 1, 1, 0), cell("p", "A", 100, 1, 1), cell("p", "A", 2, 1, 2),
                                cell("p", "B", 3, 1, 0), cell("p", "B", 3, 1, 1),   cell("p", "B", 3, 1, 2)};
  EXPECT_EQ(rank_cells(cells).rows.front().algorithm, "A");
  EXPECT_EQ(rank_cells(cells, Aggregation::mean).rows.front().algorithm, "B");
}

TEST(RankCells, MultiObjectiveSumsPerObjectiveRanks) {
  auto a = cell("mo", "A", 0);
  a.objectives = 2;
  a.best_fitness = {1, 5};
  auto b = cell("mo", "B", 0);
  b.objectives = 2;
  b.best_fitness = {2, 4};
  auto t = rank_cells({a, b});
  EXPECT_EQ(sum_for(t, "A"), 3.0);
  EXPECT_EQ(sum_for(t, "B"), 3.0);
}

TEST(RankCells, IncompleteGridNamesHole) {
  std::vector<ResultCell> cells{cell("p1", "A", 1), cell("p1", "B", 2), cell("p2", "A", 1)};
  try {
    rank_cells(cells);
    FAIL() << "expected incomplete_grid";
  } catch (const incomplete_grid& e) {
    EXPECT_NE(std::string(e.what()).find("p2/d2/m1/p0 x B x seed 0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(rank_cells({}), incomplete_grid);
}

TEST(RankCells, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 10);
  for (int t = 0; t < 50; ++t) {
    std::vector<ResultCell> cells, transformed;
    for (int p = 0; p < 6; ++p)
      for (const char* a : {"A", "B", "C", "D"}) {
        const double v = (t % 3 == 0) ? std::round(u(rng)) : u(rng);
        cells.push_back(cell("p" + std::to_string(p), a, v));
        transformed.push_back(cell("p" + std::to_string(p), a, std::exp(3 * v) - 7));
      }
    auto x = rank_cells(cells), y = rank_cells(transformed);
    for (const char* a : {"A", "B", "C", "D"}) EXPECT_EQ(sum_for(x, a), sum_for(y, a));
  }
}

TEST(RankCells, SumsEqualPerProblemRanks) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> u(0, 4);
  std::vector<ResultCell> cells;
  for (int p = 0; p < 10; ++p)
    for (const char* a : {"A", "B", "C"}) cells.push_back(cell("p" + std::to_string(p), a, u(rng), u(rng)));
  auto t = rank_cells(cells);
  for (std::size_t a = 0; a < t.algorithms.size(); ++a) {
    double s = 0, ts = 0;
    for (std::size_t p = 0; p < t.problems.size(); ++p) {
      s += t.fitness_ranks[p][a];
      ts += t.time_ranks[p][a];
    }
    for (const auto& r : t.rows)
      if (r.algorithm == t.algorithms[a]) {
        EXPECT_EQ(r.fitness_rank_sum, s);
        EXPECT_EQ(r.time_rank_sum, ts);
      }
  }
}

TEST(Profile, WorkedExample) {
  auto curves = profile_from_values({"a1", "a2"}, {{1, 2}, {2, 2}});
  EXPECT_EQ(curves[0].ratios, (std::vector<double>{1, 1}));
  EXPECT_EQ(curves[1].ratios, (std::vector<double>{2, 1}));
  EXPECT_EQ(curves[0].rho(1), 1.0);
  EXPECT_EQ(curves[1].rho(1), 0.5);
  EXPECT_EQ(curves[1].rho(1.999), 0.5);
  EXPECT_EQ(curves[1].rho(2), 1.0);
  EXPECT_EQ(profile_from_values({"solo"}, {{3, 9, 0.1}})[0].rho(1), 1.0);
}

TEST(Profile, Properties) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.001, 100);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::vector<double>> v(4, std::vector<double>(7));
    for (auto& row : v)
      for (double& x : row) x = u(rng);
    auto curves = profile_from_values({"a", "b", "c", "d"}, v);
    for (std::size_t p = 0; p < 7; ++p) {
      double best = 1e300;
      for (auto& row : v) best = std::min(best, row[p]);
      for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(curves[a].ratios[p] == 1.0, v[a][p] == best);
    }
    for (const auto& c : curves) {
      double prev = 0;
      for (double tau = 1; tau < 200; tau *= 1.3) {
        EXPECT_GE(c.rho(tau), prev);
        prev = c.rho(tau);
      }
      EXPECT_EQ(c.rho(*std::max_element(c.ratios.begin(), c.ratios.end())), 1.0);
      EXPECT_EQ(c.steps.back().second, 1.0);
    }
  }
}

TEST(Profile, FitnessGapUsesKnownOptimum) {
  auto a = cell("p", "A", 1.0), b = cell("p", "B", 3.0);
  a.known_optimum = b.known_optimum = 0.0;
  auto prof = performance_profile({a, b}, ProfileMetric::fitness_gap);
  EXPECT_DOUBLE_EQ(prof.curves[1].ratios[0], 3.0);
  // exact hits are floored so the ratio stays finite
  auto c = cell("q", "A", 0.0), d = cell("q", "B", 1e-6);
  c.known_optimum = d.known_optimum = 0.0;
  auto p2 = performance_profile({c, d}, ProfileMetric::fitness_gap);
  EXPECT_NEAR(p2.curves[1].ratios[0], 1e6, 1e-3);
  auto t = performance_profile({cell("p", "A", 0, 2.0), cell("p", "B", 0, 5.0)}, ProfileMetric::time);
  EXPECT_DOUBLE_EQ(t.curves[1].ratios[0], 2.5);
}

TEST(CellsFile, RoundTrip) {
  auto dir = temp_dir("cells");
  std::filesystem::create_directories(dir);
  auto c = cell("mo_sphere", "nsga2", 0.0, 0.123456789012345, 42);
  c.best_fitness = {0.1, 1.0 / 3.0, -2.5e-300};
  c.objectives = 3;
  {
    std::ofstream out(dir / "cells.csv");
    out << cells_header_line() << '\n' << format_cell(c) << '\n';
  }
  auto back = read_cells(dir / "cells.csv");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].best_fitness, c.best_fitness);
  EXPECT_EQ(back[0].wall_clock_s, c.wall_clock_s);
  EXPECT_EQ(back[0].seed, 42u);
  EXPECT_EQ(back[0].objectives, 3u);
}

TEST(Report, FilesAndRoundTrip) {
  std::vector<ResultCell> cells;
  for (int p = 0; p < 4; ++p)
    for (const char* a : {"A", "B", "C"}) cells.push_back(cell("p" + std::to_string(p), a, p + (a[0] - 'A') * 0.7, 1 + a[0] - 'A'));
  auto table = rank_cells(cells);
  auto prof = performance_profile(cells, ProfileMetric::fitness_gap);
  auto dir = temp_dir("report");
  auto files = write_report(table, {prof}, dir);
  for (const char* f : {"rank_table.csv", "profile_fitness_gap.csv", "profile_fitness_gap.svg", "summary.json"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  EXPECT_EQ(files.size(), 4u);

  auto rt = csv::read(dir / "rank_table.csv");
  ASSERT_EQ(rt.rows.size(), 3u);
  auto pt = csv::read(dir / "profile_fitness_gap.csv");
  std::size_t row = 0;
  for (const auto& c : prof.curves)
    for (const auto& [tau, rho] : c.steps) {
      ASSERT_LT(row, pt.rows.size());
      EXPECT_EQ(pt.rows[row][0], c.algorithm);
      EXPECT_EQ(csv::parse_double(pt.rows[row][1]), tau);
      EXPECT_EQ(csv::parse_double(pt.rows[row][2]), rho);
      ++row;
    }
  EXPECT_EQ(row, pt.rows.size());

  std::ifstream in(dir / "summary.json");
  auto j = nlohmann::json::parse(in);
  ASSERT_EQ(j["algorithms"].size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(j["algorithms"][i]["id"].get<std::string>(), rt.rows[i][0]);
  EXPECT_EQ(j["metric_config"]["aggregation"], "median");
}
