#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "bimod/generators.hpp"
#include "bimod/io.hpp"
#include "bimod/optimizer.hpp"

using namespace bimod;
namespace fs = std::filesystem;

namespace {

fs::path data_dir() {
  if (const char* env = std::getenv("BIMOD_DATA_DIR")) return env;
  return "data";
}

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path, std::ios::trunc);
  out << text;
  return path;
}

// equality up to label order normalization: edges keyed by label pairs
bool same_labeled_graph(const LabeledGraph& a, const LabeledGraph& b) {
  if (a.graph.red_count() != b.graph.red_count() ||
      a.graph.blue_count() != b.graph.blue_count()) {
    return false;
  }
  if (a.graph.edges().size() != b.graph.edges().size()) return false;
  auto edge_keys = [](const LabeledGraph& g) {
    std::vector<std::tuple<std::string, std::string, double>> keys;
    for (const Edge& e : g.graph.edges()) {
      keys.emplace_back(g.red_labels[e.red], g.blue_labels[e.blue], e.weight);
    }
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  auto sorted = [](std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    return labels;
  };
  return edge_keys(a) == edge_keys(b) && sorted(a.red_labels) == sorted(b.red_labels) &&
         sorted(a.blue_labels) == sorted(b.blue_labels);
}

}  // namespace

TEST_CASE("edge list parsing") {
  auto two = write_temp("bimod_two.tsv", "a\tx\t1\na\ty\t1\n");
  auto g = read_edge_list(two);
  CHECK(g.graph.red_count() == 1);
  CHECK(g.graph.blue_count() == 2);
  CHECK(g.graph.total_weight() == 2.0);
  CHECK(g.red_labels[0] == "a");

  auto weighted = write_temp("bimod_w.csv", "a,x,2.5\n");
  CHECK(read_edge_list(weighted).graph.max_weight() == 2.5);

  // missing weight column means weight 1; header row is skipped by detection
  auto bare = write_temp("bimod_bare.txt", "red blue weight\na x 1\nb x 3\n");
  auto parsed = read_edge_list(bare);
  CHECK(parsed.graph.red_count() == 2);
  CHECK(parsed.graph.total_weight() == 4.0);

  auto unweighted = write_temp("bimod_nw.tsv", "a\tx\nb\tx\n");
  CHECK(read_edge_list(unweighted).graph.total_weight() == 2.0);
}

TEST_CASE("edge list errors carry line numbers") {
  auto dup = write_temp("bimod_dup.tsv", "a\tx\t1\na\tx\t2\n");
  CHECK_THROWS_WITH_AS(read_edge_list(dup), doctest::Contains(":2"), DuplicateEdgeError);

  auto nonpos = write_temp("bimod_np.tsv", "a\tx\t0\n");
  CHECK_THROWS_AS(read_edge_list(nonpos), NonPositiveWeightError);

  auto bad = write_temp("bimod_bad.tsv", "a\tx\t1\nb\ty\tnope\n");
  CHECK_THROWS_WITH_AS(read_edge_list(bad), doctest::Contains(":2"), ParseError);

  auto wide = write_temp("bimod_wide.tsv", "a\tx\t1\t9\n");
  CHECK_THROWS_AS(read_edge_list(wide), ParseError);

  CHECK_THROWS_AS(read_edge_list("no_such_file.tsv"), IoError);
}

TEST_CASE("biadjacency parsing") {
  auto ones = write_temp("bimod_m1.csv", "id,x,y\na,1,1\nb,1,1\n");
  auto g = read_biadjacency(ones);
  CHECK(g.graph.red_count() == 2);
  CHECK(g.graph.blue_count() == 2);
  CHECK(g.graph.edges().size() == 4);

  // zero row keeps the isolated red node
  auto zero_row = write_temp("bimod_m2.csv", "id,x,y\na,0,0\nb,1,2\n");
  auto z = read_biadjacency(zero_row);
  CHECK(z.graph.red_count() == 2);
  CHECK(z.graph.edges().size() == 2);
  CHECK(z.graph.max_weight() == 2.0);

  auto ragged = write_temp("bimod_m3.csv", "id,x,y\na,1\n");
  CHECK_THROWS_AS(read_biadjacency(ragged), RaggedMatrixError);
  auto negative = write_temp("bimod_m4.csv", "id,x,y\na,1,-2\n");
  CHECK_THROWS_AS(read_biadjacency(negative), NegativeEntryError);
}

TEST_CASE("southern women fixtures agree across formats") {
  auto from_edges = read_edge_list(data_dir() / "southern_women.tsv");
  CHECK(from_edges.graph.red_count() == 18);
  CHECK(from_edges.graph.blue_count() == 14);
  CHECK(from_edges.graph.total_weight() == 89.0);

  auto from_matrix = read_biadjacency(data_dir() / "southern_women_matrix.csv");
  CHECK(same_labeled_graph(from_edges, from_matrix));
  CHECK(from_edges.red_labels == from_matrix.red_labels);
}

TEST_CASE("partition csv round-trip") {
  auto input = read_edge_list(data_dir() / "southern_women.tsv");
  OptimizerConfig cfg;
  cfg.restarts = 4;
  auto result = detect(input.graph, Resolution::for_graph(input.graph, 1.0), cfg);

  fs::path path = fs::temp_directory_path() / "bimod_part.csv";
  write_partition_csv(input, result.partition, path);
  auto loaded = read_partition_csv(path, input);
  CHECK(loaded == result.partition);

  // unknown labels and partial coverage are rejected
  auto stray = write_temp("bimod_part_bad.csv", "label,community\nNOBODY,0\n");
  CHECK_THROWS_AS(read_partition_csv(stray, input), ParseError);
  auto partial = write_temp("bimod_part_partial.csv", "label,community\nEVELYN,0\n");
  CHECK_THROWS_AS(read_partition_csv(partial, input), PartitionMismatchError);
}

TEST_CASE("dot export colors communities and shapes classes") {
  auto two = write_temp("bimod_dot_in.tsv", "a\tx\t1\nb\ty\t2.5\n");
  auto input = read_edge_list(two);
  Partition p({0, 1}, {0, 1});
  fs::path path = fs::temp_directory_path() / "bimod_out.dot";
  write_partition_dot(input, p, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("graph communities {") != std::string::npos);
  CHECK(text.find("shape=circle") != std::string::npos);
  CHECK(text.find("shape=box") != std::string::npos);
  CHECK(text.find("\"r:a\" -- \"b:x\"") != std::string::npos);
  CHECK(text.find("label=\"2.5\"") != std::string::npos);  // non-unit weight annotated
}

TEST_CASE("run record round-trip and validation") {
  auto ring = gen_ring({6, 2});
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.allow_exhaustive_below = 0;
  auto result = detect(ring.graph, {0.0, DensityMode::unweighted}, cfg);

  RunRecord record;
  record.kind = "detect";
  record.input = "gen:ring";
  record.density_mode = "unweighted";
  record.seed = cfg.seed;
  record.restarts = cfg.restarts;
  RunEntry entry;
  entry.chi = 0.0;
  entry.objective = result.objective.total;
  entry.communities = result.partition.num_communities();
  entry.red_assignment = result.partition.red_assignment();
  entry.blue_assignment = result.partition.blue_assignment();
  record.entries.push_back(entry);
  record.plateaus.push_back({0, 0});
  record.transitions.push_back({0.1, 0.2, 6, 12});

  fs::path path = fs::temp_directory_path() / "bimod_record.json";
  write_run_record(record, path);
  auto loaded = read_run_record(path);
  CHECK(loaded.schema_version == "1");
  CHECK(loaded.kind == record.kind);
  CHECK(loaded.input == record.input);
  CHECK(loaded.seed == record.seed);
  REQUIRE(loaded.entries.size() == 1);
  CHECK(loaded.entries[0].objective == entry.objective);
  CHECK(loaded.entries[0].red_assignment == entry.red_assignment);
  CHECK(loaded.entries[0].blue_assignment == entry.blue_assignment);
  REQUIRE(loaded.transitions.size() == 1);
  CHECK(loaded.transitions[0].communities_hi == 12);

  CHECK_NOTHROW(validate_run_record(loaded, ring.graph));
  loaded.entries[0].objective += 1e-6;
  CHECK_THROWS_AS(validate_run_record(loaded, ring.graph), Error);

  // timestamp suppressed: identical records serialize byte-identically
  fs::path again = fs::temp_directory_path() / "bimod_record2.json";
  write_run_record(record, again);
  std::ifstream a(path), b(again);
  std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
}

TEST_CASE("phase grid csv round-trip") {
  auto grid = phase_grid(ObjectiveKind::qbg, 0.7, 12.0, {0.25, 0.5, 1.0},
                         {0.1, 0.2, 0.3, 0.9});
  fs::path path = fs::temp_directory_path() / "bimod_grid.csv";
  write_phase_grid_csv(grid, path);

  // header plus one row per cell
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.rfind("p,d,phase", 0) == 0) saw_header = true;
    else if (!line.empty() && line[0] != '#') ++rows;
  }
  CHECK(saw_header);
  CHECK(rows == 12);

  auto loaded = read_phase_grid_csv(path);
  CHECK(loaded == grid);
}

TEST_CASE("empty sweep records serialize as valid documents") {
  RunRecord record;
  record.kind = "sweep";
  record.input = "file:0";
  record.density_mode = "unweighted";
  fs::path path = fs::temp_directory_path() / "bimod_empty.json";
  write_run_record(record, path);
  auto loaded = read_run_record(path);
  CHECK(loaded.schema_version == "1");
  CHECK(loaded.entries.empty());
}

TEST_CASE("cli config file precedence") {
  const char* cli = std::getenv("BIMOD_CLI");
  if (cli == nullptr || !fs::exists(cli)) return;  // set by the ctest harness
  auto data = data_dir() / "southern_women.tsv";
  auto cfg = write_temp("bimod_cfg.ini", "seed = 5\nrestarts = 2\n");
  fs::path flag_out = fs::temp_directory_path() / "bimod_cfg1.json";
  fs::path file_out = fs::temp_directory_path() / "bimod_cfg2.json";
  std::string base = std::string(cli) + " detect --input " + data.string() +
                     " --chi 0.3 --config " + cfg.string() + " --reproducible --output ";
  REQUIRE(std::system((base + flag_out.string() + " --seed 9 > /dev/null").c_str()) == 0);
  REQUIRE(std::system((base + file_out.string() + " > /dev/null").c_str()) == 0);
  CHECK(read_run_record(flag_out).seed == 9);  // flag beats config file
  CHECK(read_run_record(file_out).seed == 5);  // config file beats default
  CHECK(read_run_record(file_out).restarts == 2);
}

TEST_CASE("run records preserve failed sweep points") {
  RunRecord record;
  record.kind = "sweep";
  record.input = "file:abc";
  record.density_mode = "unweighted";
  RunEntry ok;
  ok.chi = 0.5;
  ok.objective = 0.25;
  ok.communities = 2;
  ok.red_assignment = {0};
  ok.blue_assignment = {0};
  RunEntry failed;
  failed.chi = -0.5;
  failed.error = "zero internal density";
  record.entries = {failed, ok};

  fs::path path = fs::temp_directory_path() / "bimod_record3.json";
  write_run_record(record, path);
  auto loaded = read_run_record(path);
  REQUIRE(loaded.entries.size() == 2);
  CHECK(loaded.entries[0].error == "zero internal density");
  CHECK(loaded.entries[1].error.empty());
}
