#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "driftbench/experiment.hpp"
#include "driftbench/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace db = driftbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

int default_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int cmd_gen(const std::string& dataset, const std::string& kind, long long size, uint64_t seed,
            const std::string& out_path, const std::string& config_path) {
  const auto ds = db::parse_dataset(dataset);
  if (!ds) {
    std::cerr << "config error: unknown dataset '" << dataset << "'\n";
    return kExitConfig;
  }
  const auto dk = db::parse_drift_kind(kind);
  if (!dk) {
    std::cerr << "config error: unknown drift kind '" << kind << "'\n";
    return kExitConfig;
  }
  db::GeneratorDefaults gen;
  if (!config_path.empty()) gen = db::parse_config_file(config_path).gen;
  const db::DriftPlan plan = db::build_plan(*ds, *dk, size, seed, gen);
  auto source = db::compose(plan, seed);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return kExitConfig;
  }
  db::write_stream_csv(*source, size, out);
  if (!out.good()) {
    std::cerr << "failed while writing " << out_path << "\n";
    return kExitConfig;
  }
  std::cout << "wrote " << size << " instances to " << out_path << "\n";
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int workers,
            long long seed_override, bool large) {
  db::ExperimentConfig cfg = db::parse_config_file(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed_override >= 0) cfg.base_seed = uint64_t(seed_override);
  if (large) cfg.size_cap = 1LL << 62;
  const auto outcome = db::run_grid(cfg, workers, &std::cerr);
  std::cout << outcome.records.size() << " rows in " << cfg.out_dir << "/results.csv";
  if (outcome.skipped > 0) std::cout << " (" << outcome.skipped << " resumed)";
  std::cout << "\n";
  if (!outcome.failures.empty()) {
    std::cout << outcome.failures.size() << " failed rows in " << cfg.out_dir
              << "/failures.csv\n";
    return kExitPartial;
  }
  return kExitOk;
}

std::string method_name(const db::RunIds& ids) {
  std::string name = ids.learner;
  if (ids.learner == "knn")
    name += "_k" + std::to_string(ids.k) + "_w" + std::to_string(ids.w);
  if (ids.detector != "none") name += "+" + ids.detector;
  return name;
}

int cmd_stats(const std::string& results_path, const std::string& out_dir,
              const std::string& detector_filter, const std::string& metric, double alpha,
              bool lower_better) {
  const auto records = db::read_results_csv(results_path);

  // Pivot: rows are datasets, columns are methods, cells average over seeds.
  std::map<std::string, std::map<std::string, std::pair<double, int>>> cells;
  std::set<std::string> row_set, col_set;
  for (const auto& r : records) {
    if (detector_filter != "any" && r.ids.detector != detector_filter) continue;
    const std::string row = r.ids.generator + "-" + r.ids.drift + "-" + std::to_string(r.ids.size);
    const std::string col = method_name(r.ids);
    const double v = metric == "wall_time" ? r.wall_time_s : r.mean_acc;
    auto& cell = cells[row][col];
    cell.first += v;
    cell.second += 1;
    row_set.insert(row);
    col_set.insert(col);
  }

  db::ResultMatrix m;
  m.row_names.assign(row_set.begin(), row_set.end());
  m.col_names.assign(col_set.begin(), col_set.end());
  if (m.rows() < 2 || int(m.col_names.size()) < 2) {
    std::cerr << "config error: need at least 2 datasets and 2 methods (K >= 2 required), got "
              << m.rows() << " x " << m.col_names.size() << "\n";
    return kExitConfig;
  }
  m.cells.assign(size_t(m.rows()) * m.cols(), 0.0);
  std::vector<std::string> missing;
  for (int r = 0; r < m.rows(); ++r) {
    const auto& row_cells = cells[m.row_names[r]];
    for (int c = 0; c < m.cols(); ++c) {
      const auto cell_it = row_cells.find(m.col_names[c]);
      if (cell_it == row_cells.end()) {
        missing.push_back(m.row_names[r] + " x " + m.col_names[c]);
        continue;
      }
      m.at(r, c) = cell_it->second.first / cell_it->second.second;
    }
  }
  if (!missing.empty()) {
    std::cerr << "config error: incomplete result matrix, missing cells:\n";
    for (const auto& cell : missing) std::cerr << "  " << cell << "\n";
    return kExitConfig;
  }

  const bool higher_better = metric == "wall_time" ? false : !lower_better;
  const auto friedman = db::friedman_ff(m, higher_better, alpha);
  const auto summary = db::rank_summary(m, alpha, higher_better);

  std::filesystem::create_directories(out_dir);
  const std::string ranks_path = out_dir + "/ranks.csv";
  std::ofstream ranks(ranks_path);
  if (!ranks) {
    std::cerr << "cannot write " << ranks_path << "\n";
    return kExitConfig;
  }
  ranks << "method,avg_rank\n";
  for (size_t i = 0; i < summary.methods.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", summary.avg_ranks[i]);
    ranks << summary.methods[i] << ',' << buf << '\n';
  }
  const std::string svg_path = out_dir + "/cd.svg";
  db::cd_diagram(summary, svg_path);

  std::cout << "N=" << m.rows() << " datasets, K=" << m.cols() << " methods\n";
  if (friedman.saturated) {
    std::cout << "chi2_F=" << friedman.chi2 << " (saturated: identical rankings in every row)\n";
  } else {
    std::cout << "chi2_F=" << friedman.chi2 << " F_F=" << friedman.ff
              << " critical=" << friedman.critical << " -> "
              << (friedman.reject ? "reject" : "keep") << " the null at alpha=" << alpha << "\n";
  }
  std::cout << "CD=" << summary.cd << "\n";
  std::cout << "wrote " << ranks_path << " and " << svg_path << "\n";
  return kExitOk;
}

int cmd_plot(const std::string& curve_path, const std::string& out_path,
             const std::string& title) {
  std::ifstream in(curve_path);
  if (!in) {
    std::cerr << "cannot read " << curve_path << "\n";
    return kExitConfig;
  }
  std::vector<std::pair<double, double>> points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("t,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    points.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  if (points.size() < 2) {
    std::cerr << "config error: curve needs at least two points\n";
    return kExitConfig;
  }
  double x_max = 0, y_min = 100, y_max = 0;
  for (const auto& [x, y] : points) {
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  y_min = std::max(0.0, y_min - 5.0);
  y_max = std::min(100.0, y_max + 5.0);
  const double w = 720, h = 360, ml = 50, mb = 30, mt = 24, mr = 10;
  auto px = [&](double x) { return ml + x / x_max * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - y_min) / (y_max - y_min) * (h - mb - mt); };

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return kExitConfig;
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"" << ml << "\" y=\"14\">" << (title.empty() ? curve_path : title)
      << "</text>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << py(y_min) << "\" x2=\"" << w - mr << "\" y2=\""
      << py(y_min) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << py(y_min) << "\" x2=\"" << ml << "\" y2=\""
      << py(y_max) << "\" stroke=\"black\"/>\n";
  for (double y = std::ceil(y_min / 10) * 10; y <= y_max; y += 10) {
    out << "<text x=\"8\" y=\"" << py(y) + 4 << "\">" << y << "</text>\n";
    out << "<line x1=\"" << ml - 3 << "\" y1=\"" << py(y) << "\" x2=\"" << ml << "\" y2=\"" << py(y)
        << "\" stroke=\"black\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : points) out << px(x) << ',' << py(y) << ' ';
  out << "\"/>\n</svg>\n";
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftbench: drifting-stream classifier benchmarks"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "dump a composed stream to CSV");
  std::string gen_dataset = "mixed", gen_kind = "abrupt", gen_out = "stream.csv",
              gen_config = "";
  long long gen_size = 10000;
  uint64_t gen_seed = 1;
  gen->add_option("--dataset", gen_dataset, "agraw1|agraw2|led|mixed|randrbf|sine|wavef");
  gen->add_option("--kind", gen_kind, "abrupt|gradual");
  gen->add_option("--size", gen_size, "instance count");
  gen->add_option("--seed", gen_seed, "stream seed");
  gen->add_option("--out", gen_out, "output CSV path");
  gen->add_option("--config", gen_config, "config file for generator overrides");

  auto* run = app.add_subcommand("run", "execute an experiment grid");
  std::string run_config, run_out = "";
  int run_workers = default_workers();
  long long run_seed = -1;
  bool run_large = false;
  run->add_option("--config", run_config, "experiment config file")->required();
  run->add_option("--out", run_out, "output directory (overrides config)");
  run->add_option("--workers", run_workers, "parallel workers");
  run->add_option("--seed", run_seed, "base seed override");
  run->add_flag("--large", run_large, "allow sizes beyond the 100K desk-scale cap");

  auto* stats = app.add_subcommand("stats", "rank methods and emit a CD diagram");
  std::string stats_results, stats_out = "stats", stats_detector = "any",
              stats_metric = "mean_acc";
  double stats_alpha = 0.05;
  bool stats_lower = false;
  stats->add_option("--results", stats_results, "results.csv from `run`")->required();
  stats->add_option("--out", stats_out, "output directory");
  stats->add_option("--detector", stats_detector, "filter: none|ddm|rddm|any");
  stats->add_option("--metric", stats_metric, "mean_acc|wall_time");
  stats->add_option("--alpha", stats_alpha, "0.05 or 0.10");
  stats->add_flag("--lower-better", stats_lower, "rank 1 = smallest value");

  auto* plot = app.add_subcommand("plot", "render an accuracy curve CSV as SVG");
  std::string plot_curve, plot_out = "curve.svg", plot_title = "";
  plot->add_option("--curve", plot_curve, "curve CSV (t,acc)")->required();
  plot->add_option("--out", plot_out, "output SVG path");
  plot->add_option("--title", plot_title, "plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_gen(gen_dataset, gen_kind, gen_size, gen_seed, gen_out, gen_config);
    if (run->parsed()) return cmd_run(run_config, run_out, run_workers, run_seed, run_large);
    if (stats->parsed())
      return cmd_stats(stats_results, stats_out, stats_detector, stats_metric, stats_alpha,
                       stats_lower);
    if (plot->parsed()) return cmd_plot(plot_curve, plot_out, plot_title);
  } catch (const db::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitUsage;
}
