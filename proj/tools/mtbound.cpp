// mtbound: instance generation, lower-bound runs, feasible-solution runs,
// batch comparisons, and SVG tour plots.
//
// Exit codes: 0 success, 1 I/O or file-content error, 2 unsupported
// configuration, 3 no solution found.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtbound/mtbound.hpp"

namespace fs = std::filesystem;
using namespace mtbound;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUnsupported = 2;
constexpr int kExitNoSolution = 3;

struct Exit {
  int code;
  std::string message;
};

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw Exit{kExitIo, "cannot open for writing: " + path};
  f << content;
}

void append_report_row(const std::string& dir, const RunReport& row) {
  fs::create_directories(dir);
  std::string path = (fs::path(dir) / "report.csv").string();
  bool fresh = !fs::exists(path);
  std::ofstream f(path, std::ios::app);
  if (!f) throw Exit{kExitIo, "cannot open for writing: " + path};
  if (fresh) f << csv_schema_line() << "\n" << csv_header() << "\n";
  f << csv_row(row) << "\n";
}

Instance load_or_exit(const std::string& path) {
  try {
    return load(path);
  } catch (const ParseError& e) {
    throw Exit{kExitIo, e.what()};
  } catch (const ValidationError& e) {
    throw Exit{kExitIo, e.what()};
  } catch (const std::runtime_error& e) {
    throw Exit{kExitIo, e.what()};
  }
}

struct BoundOutcome {
  RunReport report;
  std::optional<GtspSolution> solution;
  ClusteredGraph graph;
};

BoundOutcome run_bound(const Instance& inst, const std::string& instance_id, Variant variant,
                       int level, double delta, SamplingParams params) {
  auto t0 = std::chrono::steady_clock::now();
  BoundOutcome out;
  out.graph = build(inst, delta, variant, params);
  out.solution = solve_exact(out.graph);
  out.report.instance_id = instance_id;
  out.report.variant = to_string(variant);
  out.report.level = level;
  out.report.delta = delta;
  out.report.graph_gen_seconds = out.graph.build_seconds;
  out.report.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.solution) {
    out.report.lower_bound = out.solution->cost;
    out.report.lb_exact = out.solution->exact;
  }
  return out;
}

int cmd_generate(int n, std::string kind_str, std::uint64_t seed, int count,
                 std::string out_dir) {
  if (n < 1) throw Exit{kExitUnsupported, "--n must be >= 1"};
  if (count < 1) throw Exit{kExitUnsupported, "--count must be >= 1"};
  InstanceKind kind = instance_kind_from_string(kind_str);
  fs::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    GeneratorConfig cfg = GeneratorConfig::defaults(n, kind, s);
    Instance inst;
    try {
      inst = generate(cfg);
    } catch (const GenerationFailed& e) {
      throw Exit{kExitNoSolution, std::string(e.what()) + " (instance " + std::to_string(i) + ")"};
    }
    std::string name = kind_str + "_n" + std::to_string(n) + "_s" + std::to_string(s) + ".json";
    save(inst, (fs::path(out_dir) / name).string());
    std::cout << "wrote " << (fs::path(out_dir) / name).string() << "\n";
  }
  return kExitOk;
}

int cmd_bound(std::string instance_path, std::string variant_str, int level, double delta,
              int k, double eps, std::string out_dir, bool dump_graph) {
  Instance inst = load_or_exit(instance_path);
  Variant variant = variant_from_string(variant_str);
  if (variant == Variant::points)
    throw Exit{kExitUnsupported, "variant must be lite|geometric|sampling|linear"};
  if (delta <= 0) delta = delta_for_level(level);
  BoundOutcome out;
  try {
    out = run_bound(inst, stem_of(instance_path), variant, level, delta, {k, eps});
  } catch (const VariantUnsupported& e) {
    throw Exit{kExitUnsupported, e.what()};
  } catch (const TooManyClusters& e) {
    throw Exit{kExitUnsupported, e.what()};
  }
  fs::create_directories(out_dir);
  if (dump_graph) {
    dump(out.graph,
         (fs::path(out_dir) / (stem_of(instance_path) + "." + variant_str + ".graph.json"))
             .string());
  }
  if (!out.solution) throw Exit{kExitNoSolution, "no cluster-respecting tour with finite edges"};
  std::string sol_path =
      (fs::path(out_dir) / (stem_of(instance_path) + "." + variant_str + ".lvl" +
                            std::to_string(level) + ".solution.json"))
          .string();
  write_text(sol_path, solution_to_json(*out.solution, out.graph).dump(2) + "\n");
  append_report_row(out_dir, out.report);
  std::cout << "lower bound " << format_double(out.solution->cost, "%.6f") << " (graph "
            << format_double(out.graph.build_seconds, "%.2f") << " s, "
            << out.graph.n_nodes() << " nodes";
  if (out.graph.degenerate_shrink > 0)
    std::cout << ", " << out.graph.degenerate_shrink << " degenerate shrinks";
  std::cout << ")\n" << "wrote " << sol_path << "\n";
  return kExitOk;
}

int cmd_feasible(std::string instance_path, int samples, std::string effort_str,
                 std::string out_dir) {
  Instance inst = load_or_exit(instance_path);
  Effort effort = effort_str == "thorough" ? Effort::thorough : Effort::standard;
  auto t0 = std::chrono::steady_clock::now();
  auto tour = find_feasible(inst, samples, effort);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!tour)
    throw Exit{kExitNoSolution,
               "no feasible tour found at " + std::to_string(samples) +
                   " samples per target; try more samples"};
  fs::create_directories(out_dir);
  std::string path =
      (fs::path(out_dir) / (stem_of(instance_path) + ".tour.json")).string();
  write_text(path, tour_to_json(*tour).dump(2) + "\n");
  RunReport row;
  row.instance_id = stem_of(instance_path);
  row.variant = "feasible";
  row.feasible_cost = tour->completion_time;
  row.ub_found = true;
  row.total_seconds = secs;
  append_report_row(out_dir, row);
  std::cout << "feasible cost " << format_double(tour->completion_time, "%.6f") << "\n"
            << "wrote " << path << "\n";
  return kExitOk;
}

int cmd_compare(std::string dir, std::string variants_str, std::string levels_str, int samples,
                int k, double eps, std::string out_dir) {
  std::vector<std::string> files;
  if (!fs::is_directory(dir)) throw Exit{kExitUnsupported, "not a directory: " + dir};
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Exit{kExitUnsupported, "no instance files in " + dir};

  std::vector<Variant> variants;
  for (const auto& v : CLI::detail::split(variants_str, ','))
    variants.push_back(variant_from_string(v));
  std::vector<int> levels;
  for (const auto& l : CLI::detail::split(levels_str, ',')) levels.push_back(std::stoi(l));

  struct Task {
    std::size_t file_idx;
    Variant variant;
    int level;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < files.size(); ++i)
    for (Variant v : variants)
      for (int l : levels) tasks.push_back({i, v, l});

  std::vector<Instance> instances(files.size());
  std::vector<std::optional<double>> ub(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    instances[i] = load_or_exit(files[i]);
    auto tour = find_feasible(instances[i], samples, Effort::thorough);
    if (tour) ub[i] = tour->completion_time;
  }

  std::vector<RunReport> rows(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t idx) {
    const Task& task = tasks[idx];
    RunReport& row = rows[idx];
    row.instance_id = stem_of(files[task.file_idx]);
    row.variant = to_string(task.variant);
    row.level = task.level;
    row.delta = delta_for_level(task.level);
    row.feasible_cost = ub[task.file_idx];
    row.ub_found = ub[task.file_idx].has_value();
    try {
      BoundOutcome out = run_bound(instances[task.file_idx], row.instance_id, task.variant,
                                   task.level, row.delta, {k, eps});
      row.graph_gen_seconds = out.report.graph_gen_seconds;
      row.total_seconds = out.report.total_seconds;
      row.lower_bound = out.report.lower_bound;
      row.lb_exact = out.report.lb_exact;
      if (!out.solution) row.outlier = true;
    } catch (const std::exception&) {
      row.outlier = true;  // keep the batch going; flagged in the row
    }
  });

  fs::create_directories(out_dir);
  std::string rows_path = (fs::path(out_dir) / "rows.csv").string();
  {
    std::ofstream f(rows_path);
    if (!f) throw Exit{kExitIo, "cannot open for writing: " + rows_path};
    f << csv_schema_line() << "\n" << csv_header() << "\n";
    for (const auto& row : rows) f << csv_row(row) << "\n";
  }

  // Aggregate per (variant, n_targets, level) over clean rows.
  std::map<std::tuple<std::string, int, int>, SummaryRow> summary;
  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    const RunReport& row = rows[idx];
    if (row.outlier || !row.percent_deviation()) continue;
    int n = static_cast<int>(instances[tasks[idx].file_idx].targets.size());
    auto key = std::make_tuple(row.variant, n, row.level);
    SummaryRow& s = summary[key];
    s.variant = row.variant;
    s.n_targets = n;
    s.level = row.level;
    ++s.instances;
    s.avg_percent_deviation += *row.percent_deviation();
    s.avg_graph_gen_seconds += row.graph_gen_seconds;
    s.avg_total_seconds += row.total_seconds;
  }
  std::string summary_path = (fs::path(out_dir) / "summary.csv").string();
  {
    std::ofstream f(summary_path);
    if (!f) throw Exit{kExitIo, "cannot open for writing: " + summary_path};
    f << csv_schema_line() << "\n" << summary_csv_header() << "\n";
    for (auto& [key, s] : summary) {
      s.avg_percent_deviation /= s.instances;
      s.avg_graph_gen_seconds /= s.instances;
      s.avg_total_seconds /= s.instances;
      f << summary_csv_row(s) << "\n";
    }
  }
  std::cout << "wrote " << rows_path << " and " << summary_path << "\n";
  return kExitOk;
}

int cmd_plot(std::string instance_path, std::string solution_path, std::string out_path) {
  Instance inst = load_or_exit(instance_path);
  nlohmann::json j;
  {
    std::ifstream f(solution_path);
    if (!f) throw Exit{kExitIo, "cannot open: " + solution_path};
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Exit{kExitIo, std::string("parse error in ") + solution_path + ": " + e.what()};
    }
  }
  std::string svg;
  if (j.contains("order")) {
    FeasibleTour tour = tour_from_json(j);
    svg = render_svg(inst, &tour, nullptr);
  } else if (j.contains("sequence") && j.contains("nodes")) {
    GtspSolution sol;
    sol.cost = j.at("cost").get<double>();
    for (const auto& nj : j.at("nodes")) {
      IntervalNode n;
      std::string kind = nj.at("kind").get<std::string>();
      n.role = kind == "target" ? NodeRole::target
               : kind == "depot_out" ? NodeRole::depot_out
                                     : NodeRole::depot_in;
      if (n.role == NodeRole::target) n.target_id = nj.at("target").get<int>();
      n.t_lo = nj.at("t_lo").get<double>();
      n.t_hi = nj.at("t_hi").get<double>();
      sol.visited.push_back(n);
    }
    svg = render_svg(inst, nullptr, &sol);
  } else {
    throw Exit{kExitIo, "parse error: " + solution_path + " is neither a tour nor a solution"};
  }
  write_text(out_path, svg);
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower and upper bounds for the moving-target TSP with time windows"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Generate random instances");
  int gen_n = 5;
  std::string gen_kind = "complex";
  std::uint64_t gen_seed = 1;
  int gen_count = 1;
  std::string gen_out = ".";
  gen->add_option("--n", gen_n, "Number of targets");
  gen->add_option("--kind", gen_kind, "simple|complex|generic");
  gen->add_option("--seed", gen_seed, "Base RNG seed");
  gen->add_option("--count", gen_count, "Instances to generate (seeds seed..seed+count-1)");
  gen->add_option("--out", gen_out, "Output directory");

  auto* bound = app.add_subcommand("bound", "Compute a certified lower bound");
  std::string bound_instance, bound_variant = "linear", bound_out = ".";
  int bound_level = 4, bound_k = 10;
  double bound_delta = 0, bound_eps = 0.05;
  bool bound_dump_graph = false;
  bound->add_option("--instance", bound_instance, "Instance JSON")->required();
  bound->add_option("--variant", bound_variant, "lite|geometric|sampling|linear");
  bound->add_option("--level", bound_level, "Discretization level 1-4");
  bound->add_option("--delta", bound_delta, "Custom interval width (overrides --level)");
  bound->add_option("--k", bound_k, "Sampling sub-intervals");
  bound->add_option("--eps", bound_eps, "Sampling gap tolerance");
  bound->add_option("--out", bound_out, "Output directory");
  bound->add_flag("--dump-graph", bound_dump_graph, "Also write the clustered graph");

  auto* feas = app.add_subcommand("feasible", "Find a feasible tour (upper bound)");
  std::string feas_instance, feas_effort = "thorough", feas_out = ".";
  int feas_samples = 32;
  feas->add_option("--instance", feas_instance, "Instance JSON")->required();
  feas->add_option("--samples", feas_samples, "Samples per target");
  feas->add_option("--effort", feas_effort, "standard|thorough");
  feas->add_option("--out", feas_out, "Output directory");

  auto* cmp = app.add_subcommand("compare", "Batch-run variants x levels over a directory");
  std::string cmp_dir, cmp_variants = "lite,geometric,sampling,linear";
  std::string cmp_levels = "1,2,3,4", cmp_out = ".";
  int cmp_samples = 32, cmp_k = 10;
  double cmp_eps = 0.05;
  cmp->add_option("--dir", cmp_dir, "Instance directory")->required();
  cmp->add_option("--variants", cmp_variants, "Comma-separated variants");
  cmp->add_option("--levels", cmp_levels, "Comma-separated levels");
  cmp->add_option("--samples", cmp_samples, "Samples per target for the upper bound");
  cmp->add_option("--k", cmp_k, "Sampling sub-intervals");
  cmp->add_option("--eps", cmp_eps, "Sampling gap tolerance");
  cmp->add_option("--out", cmp_out, "Output directory");

  auto* plot = app.add_subcommand("plot", "Render an instance and a solution to SVG");
  std::string plot_instance, plot_solution, plot_out = "plot.svg";
  plot->add_option("--instance", plot_instance, "Instance JSON")->required();
  plot->add_option("--solution", plot_solution, "Tour or solution JSON")->required();
  plot->add_option("--out", plot_out, "Output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUnsupported;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_n, gen_kind, gen_seed, gen_count, gen_out);
    if (bound->parsed())
      return cmd_bound(bound_instance, bound_variant, bound_level, bound_delta, bound_k,
                       bound_eps, bound_out, bound_dump_graph);
    if (feas->parsed()) return cmd_feasible(feas_instance, feas_samples, feas_effort, feas_out);
    if (cmp->parsed())
      return cmd_compare(cmp_dir, cmp_variants, cmp_levels, cmp_samples, cmp_k, cmp_eps,
                         cmp_out);
    if (plot->parsed()) return cmd_plot(plot_instance, plot_solution, plot_out);
  } catch (const Exit& e) {
    std::cerr << "mtbound: " << e.message << "\n";
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << "mtbound: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "mtbound: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUnsupported;
}
