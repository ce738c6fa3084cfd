// spinex command-line front end: run, report, explain, list.

#include "spinex/spinex.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kPartial = 2;

struct ExperimentSpec {
  std::vector<std::string> problems;
  std::vector<std::string> algorithms;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> dims{2};
  std::vector<std::size_t> objectives{2};
  std::vector<std::size_t> populations{100};
  std::size_t budget = 10000;
  std::uint64_t master_seed = 0;
  std::size_t jobs = 1;
  bool explain = false;
  std::string out;
};

struct Cell {
  std::string problem;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t dims = 0;
  std::size_t objectives = 1;
  std::size_t population = 0;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Independent of scheduling, so --jobs never changes results.
std::uint64_t derive_seed(std::uint64_t master, const std::string& problem, const std::string& algorithm,
                          std::uint64_t seed) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ fnv1a(problem));
  h = splitmix64(h ^ fnv1a(algorithm));
  return splitmix64(h ^ seed);
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size())), '\n')) + 1;
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 0 : line_of(text, pos);
}

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
std::vector<T> as_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

void load_spec_file(const std::string& path, ExperimentSpec& spec) {
  std::ifstream in(path);
  if (!in) throw SpecError(path + ": cannot open spec file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(path + ":" + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)) + ": " + e.what());
  }
  if (!j.is_object()) throw SpecError(path + ":1: spec must be a JSON object");
  static const std::set<std::string> known{"problems", "algorithms", "seeds",  "dims", "objectives", "populations",
                                           "budget",   "master_seed", "jobs", "explain", "out"};
  for (const auto& [key, value] : j.items()) {
    const std::string where = path + ":" + std::to_string(line_of_key(text, key)) + ": ";
    if (!known.count(key)) throw SpecError(where + "unknown field '" + key + "'");
    try {
      if (key == "problems") spec.problems = as_list<std::string>(value);
      if (key == "algorithms") spec.algorithms = as_list<std::string>(value);
      if (key == "seeds") spec.seeds = as_list<std::uint64_t>(value);
      if (key == "dims") spec.dims = as_list<std::size_t>(value);
      if (key == "objectives") spec.objectives = as_list<std::size_t>(value);
      if (key == "populations") spec.populations = as_list<std::size_t>(value);
      if (key == "budget") spec.budget = value.get<std::size_t>();
      if (key == "master_seed") spec.master_seed = value.get<std::uint64_t>();
      if (key == "jobs") spec.jobs = value.get<std::size_t>();
      if (key == "explain") spec.explain = value.get<bool>();
      if (key == "out") spec.out = value.get<std::string>();
    } catch (const json::exception& e) {
      throw SpecError(where + "bad value for '" + key + "': " + e.what());
    }
  }
}

std::vector<std::string> expand_problems(const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  for (const auto& p : requested) {
    if (p == "all-single") {
      for (const auto& id : spinex::single_objective_ids()) out.push_back(id);
    } else if (p == "all-multi") {
      for (const auto& id : spinex::multi_objective_base_ids()) out.push_back("mo_" + id);
    } else if (p == "all-scenarios") {
      for (const auto& d : spinex::scenario_catalog()) out.push_back(spinex::scenario_problem_id(d.id, d.variant));
    } else {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Cell> build_grid(const ExperimentSpec& spec) {
  if (spec.problems.empty()) throw SpecError("no problems given");
  if (spec.algorithms.empty()) throw SpecError("no algorithms given");
  if (spec.seeds.empty()) throw SpecError("no seeds given");
  if (spec.budget == 0) throw SpecError("budget must be positive");
  if (spec.jobs == 0) throw SpecError("jobs must be positive");
  for (const auto& a : spec.algorithms)
    if (!spinex::default_registry().find(a)) throw SpecError("unknown algorithm '" + a + "'");

  std::vector<Cell> cells;
  std::set<std::string> seen;
  for (const auto& pid : expand_problems(spec.problems)) {
    for (std::size_t dims : spec.dims)
      for (std::size_t m : spec.objectives) {
        spinex::Problem p;
        try {
          p = spinex::make_problem(pid, dims, m);
        } catch (const std::exception& e) {
          throw SpecError("problem '" + pid + "': " + e.what());
        }
        for (std::size_t pop : spec.populations)
          for (const auto& algo : spec.algorithms) {
            const auto& entry = spinex::default_registry().at(algo);
            const bool multi = p.n_objectives > 1;
            if ((multi && !entry.multi_objective) || (!multi && !entry.single_objective)) continue;
            for (auto seed : spec.seeds) {
              Cell c{pid, algo, seed, p.n_variables, p.n_objectives, pop};
              const std::string key = c.problem + "|" + c.algorithm + "|" + std::to_string(seed) + "|" +
                                      std::to_string(c.dims) + "|" + std::to_string(c.objectives) + "|" +
                                      std::to_string(pop);
              if (seen.insert(key).second) cells.push_back(c);
            }
          }
      }
  }
  if (cells.empty()) throw SpecError("grid is empty (no algorithm supports the requested problems)");
  return cells;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("SPINEX_OUT"); env && *env) return env;
  return "spinex_out";
}

std::string record_name(const Cell& c) {
  return c.problem + "_" + c.algorithm + "_s" + std::to_string(c.seed) + "_d" + std::to_string(c.dims) + "_m" +
         std::to_string(c.objectives) + "_p" + std::to_string(c.population) + ".json";
}

int cmd_run(ExperimentSpec spec) {
  std::vector<Cell> grid;
  try {
    grid = build_grid(spec);
  } catch (const SpecError& e) {
    std::cerr << "invalid spec: " << e.what() << '\n';
    return kUsage;
  }
  const fs::path out = spec.out.empty() ? fs::path(default_out_dir()) : fs::path(spec.out);
  try {
    spinex::csv::ensure_dir(out);
    if (spec.explain) spinex::csv::ensure_dir(out / "records");
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  }
  std::ofstream csv(out / "cells.csv", std::ios::binary | std::ios::trunc);
  if (!csv) {
    std::cerr << "cannot write " << (out / "cells.csv").string() << '\n';
    return kUsage;
  }
  csv << spinex::cells_header_line() << '\n' << std::flush;

  std::mutex io;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failures{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      const Cell& c = grid[i];
      try {
        const spinex::Problem p = spinex::make_problem(c.problem, c.dims, c.objectives);
        spinex::RunSettings s;
        s.seed = derive_seed(spec.master_seed, c.problem, c.algorithm, c.seed);
        s.budget = spec.budget;
        s.population = c.population;
        s.verbose_explainability = spec.explain;
        const auto t0 = std::chrono::steady_clock::now();
        auto r = spinex::run_algorithm(c.algorithm, p, s);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        spinex::ResultCell rc;
        rc.problem = c.problem;
        rc.algorithm = c.algorithm;
        rc.seed = c.seed;
        rc.dims = c.dims;
        rc.objectives = c.objectives;
        rc.population = c.population;
        rc.budget = spec.budget;
        rc.best_fitness = r.best_fitness;
        rc.wall_clock_s = wall;
        rc.evaluations = r.record.evaluations;
        if (spec.explain) spinex::save_record(r.record, out / "records" / record_name(c));
        std::lock_guard<std::mutex> lock(io);
        csv << spinex::format_cell(rc) << '\n' << std::flush;
      } catch (const std::exception& e) {
        ++failures;
        std::lock_guard<std::mutex> lock(io);
        std::cerr << "cell failed: " << c.problem << " x " << c.algorithm << " x seed " << c.seed << ": " << e.what()
                  << '\n';
      }
    }
  };
  const std::size_t n_threads = std::min(spec.jobs, grid.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::cout << "wrote " << (grid.size() - failures) << " of " << grid.size() << " cells to "
            << (out / "cells.csv").string() << '\n';
  return failures ? kPartial : kOk;
}

int cmd_report(const std::string& cells_path, const std::string& out_arg, const std::vector<std::string>& metrics,
               const std::string& aggregation) {
  try {
    auto cells = spinex::read_cells(cells_path);
    if (cells.empty()) {
      std::cerr << cells_path << ": no result cells\n";
      return kUsage;
    }
    for (auto& c : cells) {
      try {
        const auto p = spinex::make_problem(c.problem, c.dims, c.objectives);
        if (p.known_optimum && p.n_objectives == 1) c.known_optimum = p.known_optimum->front();
      } catch (const std::exception&) {
        // problems outside the catalog rank fine; fitness gaps then use the group minimum
      }
    }
    const auto how = spinex::aggregation_from_string(aggregation);
    const auto table = spinex::rank_cells(cells, how);
    std::vector<spinex::PerformanceProfile> profiles;
    for (const auto& m : metrics)
      profiles.push_back(spinex::performance_profile(cells, spinex::profile_metric_from_string(m), how));
    const fs::path out = out_arg.empty() ? fs::path(default_out_dir()) / "report" : fs::path(out_arg);
    const auto files = spinex::write_report(table, profiles, out);
    for (const auto& r : table.rows)
      std::cout << r.overall_rank << "  " << r.algorithm << "  fitness rank sum " << r.fitness_rank_sum
                << "  time rank sum " << r.time_rank_sum << '\n';
    std::cout << "wrote " << files.size() << " files to " << out.string() << '\n';
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "report failed: " << e.what() << '\n';
    return kUsage;
  }
}

int cmd_explain(const std::string& record_path, const std::string& out_arg, const std::string& format) {
  if (format != "svg+csv" && format != "csv-only") {
    std::cerr << "unknown --format '" << format << "' (svg+csv or csv-only)\n";
    return kUsage;
  }
  spinex::RunRecord rec;
  try {
    rec = spinex::load_record(record_path);
  } catch (const std::exception& e) {
    std::cerr << "cannot read run record: " << e.what() << '\n';
    return kUsage;
  }
  const fs::path out = out_arg.empty() ? fs::path(default_out_dir()) / "explain" : fs::path(out_arg);
  try {
    spinex::ExportOptions opt;
    opt.csv_only = format == "csv-only";
    const auto m = spinex::export_visualizations(rec, out, opt);
    for (const auto& n : m.notes) std::cout << "note: " << n << '\n';
    std::cout << "wrote " << m.artifacts.size() << " files and manifest.json to " << out.string() << '\n';
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "export failed: " << e.what() << '\n';
    return kUsage;
  }
}

int cmd_list(bool as_json) {
  const json manifest = spinex::suite_manifest();
  json algos = json::array();
  for (const auto& e : spinex::default_registry().entries())
    algos.push_back({{"id", e.id},
                     {"single_objective", e.single_objective},
                     {"multi_objective", e.multi_objective},
                     {"description", e.description}});
  if (as_json) {
    json j = manifest;
    j["algorithms"] = algos;
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
  std::cout << "problems:\n";
  for (const auto& p : manifest["problems"]) {
    std::cout << "  " << p["id"].get<std::string>() << "  " << p["kind"].get<std::string>() << "  vars "
              << p["n_variables"].get<std::size_t>() << "  objectives " << p["n_objectives"].get<std::size_t>() << '\n';
  }
  std::cout << "algorithms:\n";
  for (const auto& a : algos)
    std::cout << "  " << a["id"].get<std::string>() << "  " << a["description"].get<std::string>() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinex: similarity-driven optimization experiments"};
  app.require_subcommand(1);

  ExperimentSpec flags;
  std::string spec_file;
  auto* run = app.add_subcommand("run", "run a problem x algorithm x seed grid");
  run->add_option("--spec", spec_file, "JSON experiment spec (flags override its fields)");
  auto* o_problem = run->add_option("--problem", flags.problems, "problem id, all-single, all-multi or all-scenarios");
  auto* o_algo = run->add_option("--algo", flags.algorithms, "algorithm id");
  auto* o_seed = run->add_option("--seed", flags.seeds, "seed (repeatable)");
  auto* o_budget = run->add_option("--budget", flags.budget, "evaluation budget per cell");
  auto* o_dims = run->add_option("--dims", flags.dims, "dimensions (repeatable)");
  auto* o_obj = run->add_option("--objectives", flags.objectives, "objective counts for mo_ problems (repeatable)");
  auto* o_pop = run->add_option("--population", flags.populations, "population sizes (repeatable)");
  auto* o_master = run->add_option("--master-seed", flags.master_seed, "master seed mixed into every cell seed");
  auto* o_jobs = run->add_option("--jobs", flags.jobs, "parallel cells");
  auto* o_out = run->add_option("--out", flags.out, "output directory (default $SPINEX_OUT or ./spinex_out)");
  auto* o_explain = run->add_flag("--explain", flags.explain, "save run records with explainability snapshots");

  std::string cells_path, report_out, aggregation = "median";
  std::vector<std::string> metrics{"fitness_gap"};
  auto* report = app.add_subcommand("report", "rank tables and performance profiles from cells.csv");
  report->add_option("cells", cells_path, "cells.csv")->required();
  report->add_option("--out", report_out, "output directory");
  report->add_option("--profile-metric", metrics, "fitness_gap and/or time");
  report->add_option("--aggregation", aggregation, "median, mean or best over seeds");

  std::string record_path, explain_out, format = "svg+csv";
  auto* explain = app.add_subcommand("explain", "export explainability plots from a run record");
  explain->add_option("record", record_path, "run record JSON")->required();
  explain->add_option("--out", explain_out, "output directory");
  explain->add_option("--format", format, "svg+csv or csv-only");

  bool list_json = false;
  auto* list = app.add_subcommand("list", "print the problem and algorithm catalogs");
  list->add_flag("--json", list_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (run->parsed()) {
    ExperimentSpec spec;
    if (!spec_file.empty()) {
      try {
        load_spec_file(spec_file, spec);
      } catch (const SpecError& e) {
        std::cerr << "invalid spec: " << e.what() << '\n';
        return kUsage;
      }
    }
    if (o_problem->count()) spec.problems = flags.problems;
    if (o_algo->count()) spec.algorithms = flags.algorithms;
    if (o_seed->count()) spec.seeds = flags.seeds;
    if (o_budget->count()) spec.budget = flags.budget;
    if (o_dims->count()) spec.dims = flags.dims;
    if (o_obj->count()) spec.objectives = flags.objectives;
    if (o_pop->count()) spec.populations = flags.populations;
    if (o_master->count()) spec.master_seed = flags.master_seed;
    if (o_jobs->count()) spec.jobs = flags.jobs;
    if (o_out->count()) spec.out = flags.out;
    if (o_explain->count()) spec.explain = true;
    return cmd_run(spec);
  }
  if (report->parsed()) return cmd_report(cells_path, report_out, metrics, aggregation);
  if (explain->parsed()) return cmd_explain(record_path, explain_out, format);
  if (list->parsed()) return cmd_list(list_json);
  return kUsage;
}
