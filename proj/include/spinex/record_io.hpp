#pragma once

// RunRecord <-> JSON. Non-finite numbers are stored as the strings "inf",
// "-inf" and "nan"; finite doubles round-trip exactly.

#include "spinex/core.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>

namespace spinex {

namespace detail {

inline nlohmann::json enc(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double dec(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::runtime_error("expected a number, got " + j.dump());
}

inline nlohmann::json enc(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(enc(x));
  return a;
}

inline std::vector<double> dec_vec(const nlohmann::json& j) {
  if (!j.is_array()) throw std::runtime_error("expected an array, got " + j.dump().substr(0, 40));
  std::vector<double> v;
  for (const auto& x : j) v.push_back(dec(x));
  return v;
}

inline nlohmann::json enc(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(enc(v(i)));
  return a;
}

inline nlohmann::json enc(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(enc(row_vector(m, i)));
  return rows;
}

inline Matrix dec_matrix(const nlohmann::json& j) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) rows.push_back(dec_vec(r));
  return from_rows(rows);
}

inline nlohmann::json enc_rows(const std::vector<std::vector<double>>& rows) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rows) a.push_back(enc(r));
  return a;
}

inline std::vector<std::vector<double>> dec_rows(const nlohmann::json& j) {
  std::vector<std::vector<double>> out;
  for (const auto& r : j) out.push_back(dec_vec(r));
  return out;
}

}  // namespace detail

inline nlohmann::json config_to_json(const OptimizerConfig& c) {
  nlohmann::json methods = nlohmann::json::array();
  for (auto m : c.similarity_methods) methods.push_back(to_string(m));
  return {{"population_size", c.population_size},
          {"max_iterations", c.max_iterations},
          {"similarity_methods", methods},
          {"allow_population_growth", c.allow_population_growth},
          {"is_multi_objective", c.is_multi_objective},
          {"verbose_explainability", c.verbose_explainability},
          {"tolerance", c.tolerance},
          {"tolerance_target", c.tolerance_target},
          {"diversity_threshold", c.diversity_threshold},
          {"step_size_init", c.step_size_init},
          {"step_size_min", c.step_size_min},
          {"step_size_max", c.step_size_max},
          {"seed", c.seed},
          {"transformation", c.transformation == TransformationStrategy::diagonal ? "diagonal" : "cross_similarity"},
          {"adaptive_weights", c.adaptive_weights},
          {"consistent_shapes", c.consistent_shapes},
          {"snapshot_interval", c.snapshot_interval},
          {"local_search_iterations", c.local_search_iterations},
          {"max_evaluations", c.max_evaluations},
          {"archive_cap", c.archive_cap}};
}

inline OptimizerConfig config_from_json(const nlohmann::json& j) {
  OptimizerConfig c;
  c.population_size = j.value("population_size", c.population_size);
  c.max_iterations = j.value("max_iterations", c.max_iterations);
  if (j.contains("similarity_methods")) {
    c.similarity_methods.clear();
    for (const auto& m : j["similarity_methods"]) c.similarity_methods.push_back(similarity_method_from_string(m));
  }
  c.allow_population_growth = j.value("allow_population_growth", c.allow_population_growth);
  c.is_multi_objective = j.value("is_multi_objective", c.is_multi_objective);
  c.verbose_explainability = j.value("verbose_explainability", c.verbose_explainability);
  c.tolerance = j.value("tolerance", c.tolerance);
  c.tolerance_target = j.value("tolerance_target", c.tolerance_target);
  c.diversity_threshold = j.value("diversity_threshold", c.diversity_threshold);
  c.step_size_init = j.value("step_size_init", c.step_size_init);
  c.step_size_min = j.value("step_size_min", c.step_size_min);
  c.step_size_max = j.value("step_size_max", c.step_size_max);
  c.seed = j.value("seed", c.seed);
  c.transformation = j.value("transformation", std::string("diagonal")) == "cross_similarity"
                         ? TransformationStrategy::cross_similarity
                         : TransformationStrategy::diagonal;
  c.adaptive_weights = j.value("adaptive_weights", c.adaptive_weights);
  c.consistent_shapes = j.value("consistent_shapes", c.consistent_shapes);
  c.snapshot_interval = j.value("snapshot_interval", c.snapshot_interval);
  c.local_search_iterations = j.value("local_search_iterations", c.local_search_iterations);
  c.max_evaluations = j.value("max_evaluations", c.max_evaluations);
  c.archive_cap = j.value("archive_cap", c.archive_cap);
  return c;
}

inline nlohmann::json record_to_json(const RunRecord& r) {
  using detail::enc;
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& t : r.trajectory) {
    nlohmann::json e{{"iteration", t.iteration}, {"solution", enc(t.solution)}, {"fitness", enc(t.fitness)}};
    if (t.shift_vector) e["shift_vector"] = enc(*t.shift_vector);
    traj.push_back(std::move(e));
  }
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& s : r.snapshots)
    snaps.push_back({{"iteration", s.iteration},
                     {"influence", enc(s.influence)},
                     {"diversity", enc(s.diversity)},
                     {"fitness_values", enc(s.fitness_values)},
                     {"similarities", enc(s.similarities)},
                     {"solution_space", enc(s.solution_space)}});
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& h : r.history)
    hist.push_back({{"iteration", h.iteration},
                    {"best_fitness", enc(h.best_fitness)},
                    {"archive_size", h.archive_size},
                    {"ideal_point", enc(h.ideal_point)},
                    {"step_size", enc(h.step_size)}});
  nlohmann::json stats = nlohmann::json::object();
  for (const auto& [k, v] : r.stats) stats[k] = enc(v);
  return {{"format", "spinex-run-record"},
          {"version", 1},
          {"problem_name", r.problem_name},
          {"algorithm", r.algorithm},
          {"config", config_to_json(r.config)},
          {"multi_objective", r.multi_objective},
          {"trajectory", traj},
          {"snapshots", snaps},
          {"history", hist},
          {"pareto_solutions", detail::enc_rows(r.pareto_solutions)},
          {"pareto_fitness", detail::enc_rows(r.pareto_fitness)},
          {"wall_clock_seconds", enc(r.wall_clock_seconds)},
          {"evaluations", r.evaluations},
          {"iterations_run", r.iterations_run},
          {"termination", r.termination},
          {"stats", stats}};
}

inline Vector to_eigen(const std::vector<double>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

inline RunRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "spinex-run-record")
    throw std::runtime_error("not a run record");
  RunRecord r;
  r.problem_name = j.at("problem_name").get<std::string>();
  r.algorithm = j.at("algorithm").get<std::string>();
  r.config = config_from_json(j.at("config"));
  r.multi_objective = j.at("multi_objective").get<bool>();
  for (const auto& e : j.at("trajectory")) {
    TrajectoryEntry t;
    t.iteration = e.at("iteration").get<std::size_t>();
    t.solution = detail::dec_vec(e.at("solution"));
    t.fitness = detail::dec_vec(e.at("fitness"));
    if (e.contains("shift_vector")) t.shift_vector = detail::dec_vec(e["shift_vector"]);
    r.trajectory.push_back(std::move(t));
  }
  for (const auto& e : j.at("snapshots")) {
    ExplainabilitySnapshot s;
    s.iteration = e.at("iteration").get<std::size_t>();
    s.influence = to_eigen(detail::dec_vec(e.at("influence")));
    s.diversity = to_eigen(detail::dec_vec(e.at("diversity")));
    s.fitness_values = detail::dec_matrix(e.at("fitness_values"));
    s.similarities = detail::dec_matrix(e.at("similarities"));
    s.solution_space = detail::dec_matrix(e.at("solution_space"));
    r.snapshots.push_back(std::move(s));
  }
  for (const auto& e : j.at("history")) {
    IterationStat h;
    h.iteration = e.at("iteration").get<std::size_t>();
    h.best_fitness = detail::dec(e.at("best_fitness"));
    h.archive_size = e.at("archive_size").get<std::size_t>();
    h.ideal_point = detail::dec_vec(e.at("ideal_point"));
    h.step_size = detail::dec(e.at("step_size"));
    r.history.push_back(std::move(h));
  }
  r.pareto_solutions = detail::dec_rows(j.at("pareto_solutions"));
  r.pareto_fitness = detail::dec_rows(j.at("pareto_fitness"));
  r.wall_clock_seconds = detail::dec(j.at("wall_clock_seconds"));
  r.evaluations = j.at("evaluations").get<std::size_t>();
  r.iterations_run = j.at("iterations_run").get<std::size_t>();
  r.termination = j.at("termination").get<std::string>();
  for (const auto& [k, v] : j.at("stats").items()) r.stats[k] = detail::dec(v);
  return r;
}

inline void save_record(const RunRecord& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << record_to_json(r).dump() << '\n';
}

// Throws std::runtime_error (with the path) on unreadable or malformed files.
inline RunRecord load_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return record_from_json(nlohmann::json::parse(in));
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace spinex
