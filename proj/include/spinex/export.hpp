#pragma once

// SVG + CSV export of a run's explainability data: neighbor influence vs
// diversity, similarity heatmap, convergence curve and (multi-objective)
// the Pareto scatter. A manifest.json lists every emitted file.

#include "spinex/core.hpp"
#include "spinex/csv.hpp"
#include "spinex/pareto.hpp"
#include "spinex/svg.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>

namespace spinex {

struct ExportOptions {
  bool csv_only = false;
};

struct ExportArtifact {
  std::string file;
  std::string plot;
  std::string format;  // "svg" | "csv"
  std::optional<std::size_t> snapshot_iteration;
};

struct ExportManifest {
  std::vector<ExportArtifact> artifacts;
  std::vector<std::string> notes;

  std::size_t count(const std::string& format) const {
    return static_cast<std::size_t>(
        std::count_if(artifacts.begin(), artifacts.end(), [&](const auto& a) { return a.format == format; }));
  }
};

// First two principal-axis coordinates of the rows (second is 0 for 1-D data).
inline Matrix principal_projection(const Matrix& space) {
  Matrix out = Matrix::Zero(space.rows(), 2);
  if (space.rows() < 2 || space.cols() == 0) return out;
  Eigen::MatrixXd centered = space.rowwise() - space.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(space.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) return out;
  const Eigen::Index d = cov.rows();
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(2, d); ++k) {
    Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - k);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    out.col(k) = centered * v;
  }
  return out;
}

namespace detail {

inline double row_mean(const Matrix& m, Eigen::Index i) { return m.cols() ? m.row(i).mean() : 0.0; }

// Indices to highlight: top-5 lowest fitness (single) or non-dominated rows (multi).
inline std::vector<char> highlighted(const Matrix& fitness) {
  std::vector<char> mark(static_cast<std::size_t>(fitness.rows()), 0);
  if (fitness.cols() == 1) {
    std::vector<std::size_t> order(mark.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return fitness(static_cast<Eigen::Index>(a), 0) < fitness(static_cast<Eigen::Index>(b), 0);
    });
    for (std::size_t k = 0; k < std::min<std::size_t>(5, order.size()); ++k) mark[order[k]] = 1;
  } else {
    std::vector<std::vector<double>> f;
    for (Eigen::Index i = 0; i < fitness.rows(); ++i) f.push_back(row_vector(fitness, i));
    for (std::size_t i : pareto_indices(f)) mark[i] = 1;
  }
  return mark;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = csv::open_out(path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace detail

inline ExportManifest export_visualizations(const RunRecord& record, const std::filesystem::path& out_dir,
                                            const ExportOptions& opt = {}) {
  using csv::format_double;
  csv::ensure_dir(out_dir);
  ExportManifest manifest;
  auto emit = [&](const std::string& file, const std::string& plot, const std::string& text,
                  std::optional<std::size_t> snap) {
    const std::string format = file.substr(file.rfind('.') + 1);
    if (format == "svg" && opt.csv_only) return;
    detail::write_text(out_dir / file, text);
    manifest.artifacts.push_back({file, plot, format, snap});
  };

  if (record.snapshots.empty()) {
    manifest.notes.push_back("no snapshots: influence_diversity and similarity_heatmap skipped");
  } else {
    const auto& s = record.snapshots.back();
    const Eigen::Index n = s.influence.size();

    // (a) influence vs diversity, with landscape projection columns
    const auto mark = detail::highlighted(s.fitness_values);
    const Matrix proj = principal_projection(s.solution_space);
    std::string table = "index,influence,diversity,fitness,highlighted,pc1,pc2\n";
    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin, dmean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f = detail::row_mean(s.fitness_values, i);
      if (std::isfinite(f)) {
        fmin = std::min(fmin, f);
        fmax = std::max(fmax, f);
      }
      dmean += s.diversity(i) / static_cast<double>(n);
    }
    svg::Chart scatter("Neighbor influence vs diversity (iteration " + std::to_string(s.iteration) + ")",
                       "neighbor influence", "neighbor diversity");
    scatter.vline(0.0);
    scatter.hline(dmean);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f = detail::row_mean(s.fitness_values, i);
      const bool hl = mark[static_cast<std::size_t>(i)] != 0;
      table += std::to_string(i) + "," + format_double(s.influence(i)) + "," + format_double(s.diversity(i)) + "," +
               format_double(f) + "," + (hl ? "1" : "0") + "," + format_double(proj(i, 0)) + "," +
               format_double(proj(i, 1)) + "\n";
      const double t = fmax > fmin ? (f - fmin) / (fmax - fmin) : 0.5;
      scatter.point(s.influence(i), s.diversity(i), svg::color(t), 3.0);
      if (hl) scatter.point(s.influence(i), s.diversity(i), "#d1495b", 1.5);
    }
    scatter.note(record.multi_objective ? "red dot: non-dominated" : "red dot: top 5 fitness");
    emit("influence_diversity.csv", "influence_diversity", table, s.iteration);
    emit("influence_diversity.svg", "influence_diversity", scatter.str(), s.iteration);

    // (b) similarity heatmap
    std::string heat = "row,col,similarity\n";
    std::vector<double> vals;
    for (Eigen::Index i = 0; i < s.similarities.rows(); ++i)
      for (Eigen::Index j = 0; j < s.similarities.cols(); ++j) {
        heat += std::to_string(i) + "," + std::to_string(j) + "," + format_double(s.similarities(i, j)) + "\n";
        vals.push_back(s.similarities(i, j));
      }
    emit("similarity_heatmap.csv", "similarity_heatmap", heat, s.iteration);
    emit("similarity_heatmap.svg", "similarity_heatmap",
         svg::heatmap("Solution similarity matrix (iteration " + std::to_string(s.iteration) + ")",
                      static_cast<std::size_t>(s.similarities.rows()), static_cast<std::size_t>(s.similarities.cols()),
                      vals, -1.0, 1.0),
         s.iteration);
  }

  // (c) convergence, one row per trajectory entry
  {
    std::string table = "iteration,best_fitness\n";
    std::vector<double> xs, ys;
    for (const auto& t : record.trajectory) {
      table += std::to_string(t.iteration) + "," + csv::join(t.fitness) + "\n";
      xs.push_back(static_cast<double>(t.iteration));
      double y = 0.0;
      for (double v : t.fitness) y += v / static_cast<double>(t.fitness.size());
      ys.push_back(y);
    }
    const bool positive = std::all_of(ys.begin(), ys.end(), [](double v) { return v > 0.0; });
    std::string ylabel = record.multi_objective ? "mean objective of latest archive member" : "best fitness";
    if (!positive && !ys.empty()) {
      const double floor = *std::min_element(ys.begin(), ys.end());
      for (double& v : ys) v = v - floor + 1e-12;
      ylabel += " minus final best";
    }
    svg::Chart chart("Convergence", "iteration", ylabel, true);
    chart.line(xs, ys, "#3b528b", true);
    for (std::size_t i = 0; i < xs.size(); ++i) chart.point(xs[i], ys[i], "#3b528b", 2.0);
    emit("convergence.csv", "convergence", table, std::nullopt);
    emit("convergence.svg", "convergence", chart.str(), std::nullopt);
  }

  // (d) Pareto scatter of the first two objectives
  if (record.multi_objective) {
    std::string table = "index,f1,f2\n";
    svg::Chart chart("Pareto front", "objective 1", "objective 2");
    for (std::size_t i = 0; i < record.pareto_fitness.size(); ++i) {
      const auto& f = record.pareto_fitness[i];
      const double f2 = f.size() > 1 ? f[1] : 0.0;
      table += std::to_string(i) + "," + format_double(f[0]) + "," + format_double(f2) + "\n";
      chart.point(f[0], f2, "#21918c", 3.0);
    }
    emit("pareto_front.csv", "pareto_front", table, std::nullopt);
    emit("pareto_front.svg", "pareto_front", chart.str(), std::nullopt);
  }

  nlohmann::json arts = nlohmann::json::array();
  for (const auto& a : manifest.artifacts) {
    nlohmann::json e{{"file", a.file}, {"plot", a.plot}, {"format", a.format}};
    e["snapshot_iteration"] = a.snapshot_iteration ? nlohmann::json(*a.snapshot_iteration) : nlohmann::json();
    arts.push_back(std::move(e));
  }
  detail::write_text(out_dir / "manifest.json",
                     nlohmann::json{{"problem", record.problem_name},
                                    {"algorithm", record.algorithm},
                                    {"artifacts", arts},
                                    {"notes", manifest.notes}}
                             .dump(2) +
                         "\n");
  return manifest;
}

}  // namespace spinex
