// bimod: weighted bipartite community detection with a tunable density
// exponent, plus the matching benchmark generators and phase-boundary tools.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bimod/generators.hpp"
#include "bimod/io.hpp"
#include "bimod/optimizer.hpp"
#include "bimod/sweep.hpp"

namespace {

using namespace bimod;

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buffer;
}

DensityMode resolve_mode(const std::string& name, const BipartiteGraph& graph) {
  if (name == "weighted") return DensityMode::weighted;
  if (name == "unweighted") return DensityMode::unweighted;
  return graph.has_non_unit_weight() ? DensityMode::weighted : DensityMode::unweighted;
}

const char* mode_name(DensityMode mode) {
  return mode == DensityMode::weighted ? "weighted" : "unweighted";
}

LabeledGraph load_graph(const std::string& path, const std::string& format) {
  if (path.empty()) throw Error("no input graph given (use --input or a config file)");
  if (format == "biadjacency") return read_biadjacency(path);
  return read_edge_list(path);
}

LabeledGraph with_generated_labels(BipartiteGraph graph) {
  LabeledGraph labeled{std::move(graph), {}, {}};
  for (int r = 0; r < labeled.graph.red_count(); ++r) {
    labeled.red_labels.push_back("r" + std::to_string(r));
  }
  for (int b = 0; b < labeled.graph.blue_count(); ++b) {
    labeled.blue_labels.push_back("b" + std::to_string(b));
  }
  return labeled;
}

// "min:max:count" axis description
std::vector<double> parse_axis(const std::string& text) {
  double lo, hi;
  int count;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1 ||
      (count > 1 && !(lo < hi))) {
    throw ParseError("bad axis '" + text + "', expected min:max:count");
  }
  std::vector<double> axis;
  for (int i = 0; i < count; ++i) {
    axis.push_back(count == 1 ? lo : lo + i * (hi - lo) / (count - 1));
  }
  return axis;
}

struct CommonOptions {
  std::string config_file;
  std::string input;
  std::string format = "edgelist";
  std::string density_mode = "auto";
  std::uint64_t seed = 1;
  int restarts = 8;
  int max_passes = 64;
  double tolerance = 1e-10;
  int exhaustive_below = 10;
  bool reproducible = false;
};

// key = value lines with '#' comments; values may contain spaces
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::map<std::string, std::string> values;
  std::string line;
  auto trim = [](std::string text) {
    auto begin = text.find_first_not_of(" \t");
    auto end = text.find_last_not_of(" \t\r");
    return begin == std::string::npos ? std::string() : text.substr(begin, end - begin + 1);
  };
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    values[trim(trimmed.substr(0, eq))] = trim(trimmed.substr(eq + 1));
  }
  return values;
}

// config file fills in options the command line left at their defaults
void apply_config(const CLI::App* cmd, const std::string& config_path, CommonOptions& opt) {
  if (config_path.empty()) return;
  auto values = read_config_file(config_path);
  auto wants = [&](const char* key) {
    return values.count(key) > 0 && cmd->count(std::string("--") + key) == 0;
  };
  if (wants("input")) opt.input = values["input"];
  if (wants("format")) opt.format = values["format"];
  if (wants("density-mode")) opt.density_mode = values["density-mode"];
  if (wants("seed")) opt.seed = std::stoull(values["seed"]);
  if (wants("restarts")) opt.restarts = std::stoi(values["restarts"]);
  if (wants("max-passes")) opt.max_passes = std::stoi(values["max-passes"]);
  if (wants("tolerance")) opt.tolerance = std::stod(values["tolerance"]);
  if (wants("exhaustive-below")) opt.exhaustive_below = std::stoi(values["exhaustive-below"]);
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_optimizer = true) {
  cmd->add_option("--config", opt.config_file,
                  "configuration file (key = value lines; flags take precedence)");
  cmd->add_option("--input", opt.input, "input graph file");
  cmd->add_option("--format", opt.format, "input format (edgelist or biadjacency)")
      ->check(CLI::IsMember({"edgelist", "biadjacency"}));
  cmd->add_option("--density-mode", opt.density_mode,
                  "density convention (auto, unweighted, weighted)")
      ->check(CLI::IsMember({"auto", "unweighted", "weighted"}));
  if (with_optimizer) {
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--restarts", opt.restarts, "independent restarts")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-passes", opt.max_passes, "move sweeps per level");
    cmd->add_option("--tolerance", opt.tolerance, "minimum accepted improvement");
    cmd->add_option("--exhaustive-below", opt.exhaustive_below,
                    "exact enumeration for graphs up to this many nodes");
  }
  cmd->add_flag("--reproducible", opt.reproducible,
                "omit timestamp and timing from outputs");
}

OptimizerConfig optimizer_config(const CommonOptions& opt) {
  OptimizerConfig cfg;
  cfg.seed = opt.seed;
  cfg.restarts = opt.restarts;
  cfg.max_passes = opt.max_passes;
  cfg.tolerance = opt.tolerance;
  cfg.allow_exhaustive_below = opt.exhaustive_below;
  return cfg;
}

RunEntry entry_from_result(const DetectionResult& result) {
  RunEntry entry;
  entry.chi = result.chi;
  entry.objective = result.objective.total;
  entry.communities = result.partition.num_communities();
  entry.restarts = result.restarts_used;
  entry.passes = result.passes_used;
  entry.exact = result.exact;
  entry.red_assignment = result.partition.red_assignment();
  entry.blue_assignment = result.partition.blue_assignment();
  return entry;
}

int run_detect(const CommonOptions& opt, double chi, const std::string& output,
               const std::string& partition_csv, const std::string& dot) {
  auto input = load_graph(opt.input, opt.format);
  DensityMode mode = resolve_mode(opt.density_mode, input.graph);
  auto start = std::chrono::steady_clock::now();
  auto result = detect(input.graph, {chi, mode}, optimizer_config(opt));
  auto end = std::chrono::steady_clock::now();

  std::printf("communities=%d objective=%.12g chi=%g density_mode=%s%s\n",
              result.partition.num_communities(), result.objective.total, chi,
              mode_name(mode), result.exact ? " exact" : "");
  if (!output.empty()) {
    RunRecord record;
    record.kind = "detect";
    record.input = "file:" + file_hash_hex(opt.input);
    record.density_mode = mode_name(mode);
    record.seed = opt.seed;
    record.restarts = opt.restarts;
    if (!opt.reproducible) {
      record.timestamp = iso_timestamp();
      record.elapsed_ms = std::chrono::duration<double, std::milli>(end - start).count();
    }
    record.entries.push_back(entry_from_result(result));
    write_run_record(record, output);
  }
  if (!partition_csv.empty()) write_partition_csv(input, result.partition, partition_csv);
  if (!dot.empty()) write_partition_dot(input, result.partition, dot);
  return 0;
}

int run_sweep(const CommonOptions& opt, double chi_min, double chi_max, int steps,
              bool no_warm_start, bool no_refine, double transition_resolution,
              const std::string& output, const std::string& counts_csv) {
  auto input = load_graph(opt.input, opt.format);
  DensityMode mode = resolve_mode(opt.density_mode, input.graph);
  SweepConfig cfg;
  cfg.optimizer = optimizer_config(opt);
  cfg.density_mode = mode;
  cfg.warm_start = !no_warm_start;
  cfg.refine_transitions = !no_refine;
  cfg.transition_resolution = transition_resolution;

  auto start = std::chrono::steady_clock::now();
  auto profile = sweep_chi(input.graph, chi_min, chi_max, steps, cfg);
  auto end = std::chrono::steady_clock::now();

  for (const auto& point : profile.points) {
    if (point.result) {
      std::printf("chi=%g communities=%d objective=%.12g\n", point.chi,
                  point.result->partition.num_communities(),
                  point.result->objective.total);
    } else {
      std::printf("chi=%g error=%s\n", point.chi, point.error.c_str());
    }
  }
  for (const auto& tr : profile.transitions) {
    std::printf("transition %d -> %d communities in chi interval [%g, %g]\n",
                tr.communities_lo, tr.communities_hi, tr.chi_lo, tr.chi_hi);
  }

  if (!output.empty()) {
    RunRecord record;
    record.kind = "sweep";
    record.input = "file:" + file_hash_hex(opt.input);
    record.density_mode = mode_name(mode);
    record.seed = opt.seed;
    record.restarts = opt.restarts;
    if (!opt.reproducible) {
      record.timestamp = iso_timestamp();
      record.elapsed_ms = std::chrono::duration<double, std::milli>(end - start).count();
    }
    for (const auto& point : profile.points) {
      if (point.result) {
        record.entries.push_back(entry_from_result(*point.result));
      } else {
        RunEntry entry;
        entry.chi = point.chi;
        entry.error = point.error;
        record.entries.push_back(std::move(entry));
      }
    }
    record.plateaus = profile.plateaus;
    record.transitions = profile.transitions;
    write_run_record(record, output);
  }
  if (!counts_csv.empty()) write_community_counts_csv(profile, counts_csv);
  return 0;
}

int run_eval(const CommonOptions& opt, const std::string& partition_path,
             std::optional<double> chi, std::optional<double> chi_min,
             std::optional<double> chi_max, int steps, const std::string& output) {
  auto input = load_graph(opt.input, opt.format);
  DensityMode mode = resolve_mode(opt.density_mode, input.graph);
  auto partition = read_partition_csv(partition_path, input);

  std::vector<double> grid;
  if (chi_min && chi_max) {
    if (steps < 2) throw Error("curve evaluation needs at least 2 steps");
    for (int i = 0; i < steps; ++i) {
      grid.push_back(*chi_min + i * (*chi_max - *chi_min) / (steps - 1));
    }
  } else {
    grid.push_back(chi.value_or(0.0));
  }
  auto curve = evaluate_curve(input.graph, partition, grid, mode);
  for (std::size_t i = 0; i < curve.chi_grid.size(); ++i) {
    std::printf("chi=%g objective=%.12g\n", curve.chi_grid[i], curve.values[i]);
  }
  if (!output.empty()) write_curve_csv(curve, output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bipartite community detection via density-weighted modularity"};
  app.require_subcommand(1);

  // ---- detect ----
  CommonOptions detect_opt;
  double detect_chi = 1.0;
  std::string detect_output, detect_partition, detect_dot;
  auto* cmd_detect = app.add_subcommand("detect", "detect communities at one resolution");
  add_common(cmd_detect, detect_opt);
  cmd_detect->add_option("--chi", detect_chi, "resolution exponent");
  cmd_detect->add_option("--output", detect_output, "run record JSON path");
  cmd_detect->add_option("--partition-csv", detect_partition, "partition CSV path");
  cmd_detect->add_option("--dot", detect_dot, "DOT export path");

  // ---- sweep ----
  CommonOptions sweep_opt;
  double chi_min = 0.0, chi_max = 1.0, transition_resolution = 1e-3;
  int steps = 11;
  bool no_warm = false, no_refine = false;
  std::string sweep_output, counts_csv;
  auto* cmd_sweep = app.add_subcommand("sweep", "detect across a chi grid");
  add_common(cmd_sweep, sweep_opt);
  cmd_sweep->add_option("--chi-min", chi_min, "grid start")->required();
  cmd_sweep->add_option("--chi-max", chi_max, "grid end")->required();
  cmd_sweep->add_option("--steps", steps, "grid point count")->check(CLI::Range(2, 1 << 20));
  cmd_sweep->add_flag("--no-warm-start", no_warm, "disable warm starts between grid points");
  cmd_sweep->add_flag("--no-refine", no_refine, "skip transition bisection");
  cmd_sweep->add_option("--transition-resolution", transition_resolution,
                        "chi bracket width for bisected transitions");
  cmd_sweep->add_option("--output", sweep_output, "run record JSON path");
  cmd_sweep->add_option("--counts-csv", counts_csv, "chi,communities CSV path");

  // ---- eval ----
  CommonOptions eval_opt;
  std::string eval_partition, eval_output;
  double eval_chi = 0.0, eval_chi_min = 0.0, eval_chi_max = 0.0;
  int eval_steps = 2;
  auto* cmd_eval = app.add_subcommand("eval", "score a stored partition");
  add_common(cmd_eval, eval_opt, false);
  cmd_eval->add_option("--partition", eval_partition, "label,community CSV")->required();
  auto* opt_chi = cmd_eval->add_option("--chi", eval_chi, "single resolution exponent");
  auto* opt_chi_min = cmd_eval->add_option("--chi-min", eval_chi_min, "curve grid start");
  auto* opt_chi_max = cmd_eval->add_option("--chi-max", eval_chi_max, "curve grid end");
  cmd_eval->add_option("--steps", eval_steps, "curve grid point count");
  cmd_eval->add_option("--output", eval_output, "curve CSV path");

  // ---- gen ----
  auto* cmd_gen = app.add_subcommand("gen", "emit benchmark graphs with planted partitions");
  cmd_gen->require_subcommand(1);

  int ring_n = 4, ring_k = 2;
  std::string gen_output, gen_split, gen_merged;
  auto* cmd_ring = cmd_gen->add_subcommand("ring", "ring of bipartite cliques");
  cmd_ring->add_option("--n", ring_n, "clique count")->required();
  cmd_ring->add_option("--k", ring_k, "clique side size")->required();
  cmd_ring->add_option("--output", gen_output, "edge list path")->required();
  cmd_ring->add_option("--split-out", gen_split, "split partition CSV");
  cmd_ring->add_option("--merged-out", gen_merged, "merged-pairs partition CSV");

  BenchmarkSpec bench;
  std::uint64_t bench_seed = 1;
  std::string bench_output, bench_split, bench_merged;
  auto* cmd_bench = cmd_gen->add_subcommand("benchmark", "two cliques plus external component");
  cmd_bench->add_option("--nr1", bench.red1, "clique 1 red side")->required();
  cmd_bench->add_option("--nb1", bench.blue1, "clique 1 blue side")->required();
  cmd_bench->add_option("--nr2", bench.red2, "clique 2 red side")->required();
  cmd_bench->add_option("--nb2", bench.blue2, "clique 2 blue side")->required();
  cmd_bench->add_option("--m12", bench.inter_weight, "inter-clique weight total");
  cmd_bench->add_option("--m1a", bench.clique1_external, "clique 1 external total");
  cmd_bench->add_option("--m2a", bench.clique2_external, "clique 2 external total");
  cmd_bench->add_option("--ma", bench.external_weight, "external internal weight");
  cmd_bench->add_option("--na", bench.external_nodes, "external node count (-1 = minimal)");
  cmd_bench->add_option("--coupling-cap", bench.weak_coupling_cap,
                        "max external coupling fraction");
  cmd_bench->add_option("--seed", bench_seed, "random seed");
  cmd_bench->add_option("--output", bench_output, "edge list path")->required();
  cmd_bench->add_option("--split-out", bench_split, "split partition CSV");
  cmd_bench->add_option("--merged-out", bench_merged, "merged partition CSV");

  HierarchySpec hier;
  std::string hier_output, hier_prefix;
  std::vector<double> hier_alpha;
  auto* cmd_hier = cmd_gen->add_subcommand("hierarchy", "nested clique hierarchy");
  cmd_hier->add_option("--levels", hier.levels, "depth")->required();
  cmd_hier->add_option("--base-red", hier.base_red, "level-1 red side");
  cmd_hier->add_option("--base-blue", hier.base_blue, "level-1 blue side");
  cmd_hier->add_option("--branching", hier.branching, "blocks per super-block");
  cmd_hier->add_option("--alpha", hier_alpha, "per-level weights, decreasing")
      ->required()
      ->delimiter(',');
  cmd_hier->add_option("--output", hier_output, "edge list path")->required();
  cmd_hier->add_option("--partition-prefix", hier_prefix,
                       "write planted partitions to <prefix>_level<j>.csv");

  // ---- phase ----
  auto* cmd_phase = app.add_subcommand("phase", "merge/split phase grids");
  cmd_phase->require_subcommand(1);
  double phase_chi = 1.0, phase_t = 0.0;
  std::string p_axis = "0.1:1:10", d_axis = "0.05:1:20", phase_output;
  auto* cmd_phase_qb = cmd_phase->add_subcommand("qb", "plain bipartite modularity");
  auto* cmd_phase_qbg = cmd_phase->add_subcommand("qbg", "density-weighted modularity");
  for (CLI::App* sub : {cmd_phase_qb, cmd_phase_qbg}) {
    sub->add_option("--t", phase_t, "external influence")->required();
    sub->add_option("--p-axis", p_axis, "p axis as min:max:count");
    sub->add_option("--d-axis", d_axis, "d axis as min:max:count");
    sub->add_option("--output", phase_output, "grid CSV path")->required();
  }
  cmd_phase_qbg->add_option("--chi", phase_chi, "resolution exponent");

  // ---- threshold ----
  auto* cmd_threshold = app.add_subcommand("threshold", "critical values");
  cmd_threshold->require_subcommand(1);
  int thr_n = 4, thr_k = 0;
  auto* cmd_thr_ring = cmd_threshold->add_subcommand("ring", "clique-ring threshold");
  cmd_thr_ring->add_option("--n", thr_n, "clique count")->required();
  cmd_thr_ring->add_option("--k", thr_k, "clique side size (optional)");
  double thr_p = 1.0, thr_t = 0.0, thr_chi = 1.0, thr_delta_exp = -1.0;
  auto* cmd_thr_bench =
      cmd_threshold->add_subcommand("benchmark", "two-clique critical density");
  cmd_thr_bench->add_option("--p", thr_p, "size ratio in (0, 1]")->required();
  cmd_thr_bench->add_option("--t", thr_t, "external influence")->required();
  cmd_thr_bench->add_option("--chi", thr_chi, "resolution exponent");
  cmd_thr_bench->add_option("--delta-exp", thr_delta_exp,
                            "expected critical density to compare against");

  try {
    app.parse(argc, argv);

    if (cmd_detect->parsed()) {
      apply_config(cmd_detect, detect_opt.config_file, detect_opt);
      return run_detect(detect_opt, detect_chi, detect_output, detect_partition, detect_dot);
    }
    if (cmd_sweep->parsed()) {
      apply_config(cmd_sweep, sweep_opt.config_file, sweep_opt);
      return run_sweep(sweep_opt, chi_min, chi_max, steps, no_warm, no_refine,
                       transition_resolution, sweep_output, counts_csv);
    }
    if (cmd_eval->parsed()) {
      apply_config(cmd_eval, eval_opt.config_file, eval_opt);
      std::optional<double> single, lo, hi;
      if (opt_chi->count() > 0) single = eval_chi;
      if (opt_chi_min->count() > 0) lo = eval_chi_min;
      if (opt_chi_max->count() > 0) hi = eval_chi_max;
      return run_eval(eval_opt, eval_partition, single, lo, hi, eval_steps, eval_output);
    }
    if (cmd_ring->parsed()) {
      auto net = gen_ring({ring_n, ring_k});
      auto labeled = with_generated_labels(net.graph);
      write_edge_list(labeled, gen_output);
      if (!gen_split.empty()) write_partition_csv(labeled, net.split, gen_split);
      if (!gen_merged.empty()) write_partition_csv(labeled, net.merged_partition(), gen_merged);
      std::printf("ring n=%d k=%d: %d+%d nodes, %zu edges, F=%g\n", ring_n, ring_k,
                  labeled.graph.red_count(), labeled.graph.blue_count(),
                  labeled.graph.edges().size(), labeled.graph.total_weight());
      return 0;
    }
    if (cmd_bench->parsed()) {
      auto net = gen_benchmark(bench, bench_seed);
      auto labeled = with_generated_labels(net.graph);
      write_edge_list(labeled, bench_output);
      if (!bench_split.empty()) write_partition_csv(labeled, net.split, bench_split);
      if (!bench_merged.empty()) write_partition_csv(labeled, net.merged, bench_merged);
      auto coords = nondim_coordinates(bench);
      std::printf("benchmark: %d+%d nodes, %zu edges, d=%g t=%g p=%g r=%g\n",
                  labeled.graph.red_count(), labeled.graph.blue_count(),
                  labeled.graph.edges().size(), coords.inter_density,
                  coords.external_influence, coords.size_ratio, coords.r);
      return 0;
    }
    if (cmd_hier->parsed()) {
      hier.level_weights = hier_alpha;
      auto net = gen_hierarchy(hier);
      auto labeled = with_generated_labels(net.graph);
      write_edge_list(labeled, hier_output);
      if (!hier_prefix.empty()) {
        for (std::size_t j = 0; j < net.level_partitions.size(); ++j) {
          write_partition_csv(labeled, net.level_partitions[j],
                              hier_prefix + "_level" + std::to_string(j + 1) + ".csv");
        }
      }
      std::printf("hierarchy: %d+%d nodes, %zu edges\n", labeled.graph.red_count(),
                  labeled.graph.blue_count(), labeled.graph.edges().size());
      return 0;
    }
    if (cmd_phase_qb->parsed() || cmd_phase_qbg->parsed()) {
      ObjectiveKind kind = cmd_phase_qb->parsed() ? ObjectiveKind::qb : ObjectiveKind::qbg;
      auto grid = phase_grid(kind, phase_chi, phase_t, parse_axis(p_axis), parse_axis(d_axis));
      write_phase_grid_csv(grid, phase_output);
      int merged_cells = 0;
      for (char label : grid.labels) merged_cells += label == 'M' ? 1 : 0;
      std::printf("phase grid %zux%zu: %d merged, %zu split\n", grid.p_axis.size(),
                  grid.d_axis.size(), merged_cells, grid.labels.size() - merged_cells);
      return 0;
    }
    if (cmd_thr_ring->parsed()) {
      double threshold = ring_threshold(thr_n);
      std::printf("ring n=%d: resolution-limit-free for k > %.9g\n", thr_n, threshold);
      if (thr_k > 0) {
        std::printf("k=%d: %s\n", thr_k,
                    ring_is_resolution_free(thr_n, thr_k)
                        ? "resolution-limit-free"
                        : "subject to the resolution limit");
      }
      return 0;
    }
    if (cmd_thr_bench->parsed()) {
      auto numeric = critical_density_qbg(thr_p, thr_t, thr_chi);
      std::printf("critical density (numeric): %.9g\n", numeric.delta);
      if (thr_chi >= 0.0) {
        std::printf("critical density (large-t limit): %.9g\n",
                    critical_density_qbg_asymptotic(thr_p, thr_chi).delta);
      }
      std::printf("plain modularity boundary 2/t: %.9g\n", critical_density_qb(thr_t).delta);
      if (thr_delta_exp >= 0.0) {
        std::printf("expected delta %.9g: %s\n", thr_delta_exp,
                    numeric.delta >= thr_delta_exp
                        ? "resolution-limit-free at this resolution"
                        : "below the expected critical density");
      }
      return 0;
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InfeasibleSpecError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
