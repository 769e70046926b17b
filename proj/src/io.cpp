#include "bimod/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "bimod/objective.hpp"

namespace bimod {

namespace {

using nlohmann::json;

std::string format_double(double value) {
  std::array<char, 32> buffer;
  std::snprintf(buffer.data(), buffer.size(), "%.17g", value);
  return buffer.data();
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

char detect_delimiter(const std::string& line) {
  if (line.find('\t') != std::string::npos) return '\t';
  if (line.find(',') != std::string::npos) return ',';
  return ' ';
}

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  if (delimiter == ' ') {  // whitespace mode: split on runs of blanks
    std::istringstream stream(line);
    std::string field;
    while (stream >> field) fields.push_back(field);
    return fields;
  }
  std::string field;
  for (char c : line) {
    if (c == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

struct LabelIndex {
  std::unordered_map<std::string, int> index;
  std::vector<std::string> labels;

  int intern(const std::string& label) {
    auto [it, inserted] = index.try_emplace(label, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  }
};

}  // namespace

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

LabeledGraph read_edge_list(const std::filesystem::path& path,
                            const EdgeListOptions& options) {
  auto lines = read_lines(path);
  char delimiter = options.delimiter;
  LabelIndex reds, blues;
  std::vector<std::pair<std::pair<int, int>, double>> rows;
  std::unordered_map<std::uint64_t, int> seen;  // (red, blue) -> first line
  bool first_data_row = true;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    int line_no = static_cast<int>(i) + 1;
    if (line.empty() || line[0] == '#') continue;
    if (delimiter == '\0') delimiter = detect_delimiter(line);
    auto fields = split_fields(line, delimiter);
    if (first_data_row) {
      first_data_row = false;
      bool skip = options.header == 1;
      if (options.header == -1 && fields.size() >= 3) {
        double ignored;
        skip = !parse_double(fields[2], ignored);  // non-numeric third column
      }
      if (skip) continue;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected 2 or 3 columns, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": empty label");
    }
    double weight = 1.0;
    if (fields.size() == 3 && !parse_double(fields[2], weight)) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": bad weight '" + fields[2] + "'");
    }
    if (!(weight > 0.0)) {
      throw NonPositiveWeightError(path.string() + ":" + std::to_string(line_no) +
                                   ": weight must be positive");
    }
    int red = reds.intern(fields[0]);
    int blue = blues.intern(fields[1]);
    std::uint64_t key = (static_cast<std::uint64_t>(red) << 32) | static_cast<std::uint32_t>(blue);
    auto [it, inserted] = seen.try_emplace(key, line_no);
    if (!inserted) {
      throw DuplicateEdgeError(path.string() + ":" + std::to_string(line_no) +
                               ": duplicate edge also on line " + std::to_string(it->second));
    }
    rows.push_back({{red, blue}, weight});
  }

  std::vector<Edge> edges;
  edges.reserve(rows.size());
  for (const auto& [pair, weight] : rows) edges.push_back({pair.first, pair.second, weight});
  return {build_graph(static_cast<int>(reds.labels.size()),
                      static_cast<int>(blues.labels.size()), std::move(edges)),
          std::move(reds.labels), std::move(blues.labels)};
}

LabeledGraph read_biadjacency(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  std::size_t first = 0;
  while (first < lines.size() && (lines[first].empty() || lines[first][0] == '#')) ++first;
  if (first == lines.size()) throw ParseError(path.string() + ": empty matrix");

  char delimiter = detect_delimiter(lines[first]);
  auto header = split_fields(lines[first], delimiter);
  if (header.size() < 2) {
    throw ParseError(path.string() + ":" + std::to_string(first + 1) +
                     ": matrix needs at least one value column");
  }
  std::vector<std::string> blue_labels(header.begin() + 1, header.end());
  std::vector<std::string> red_labels;
  std::vector<Edge> edges;

  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    int line_no = static_cast<int>(i) + 1;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_fields(line, delimiter);
    if (fields.size() != header.size()) {
      throw RaggedMatrixError(path.string() + ":" + std::to_string(line_no) + ": row has " +
                              std::to_string(fields.size()) + " columns, header has " +
                              std::to_string(header.size()));
    }
    int red = static_cast<int>(red_labels.size());
    red_labels.push_back(fields[0]);
    for (std::size_t b = 1; b < fields.size(); ++b) {
      double value;
      if (!parse_double(fields[b], value)) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad entry '" +
                         fields[b] + "'");
      }
      if (value < 0.0) {
        throw NegativeEntryError(path.string() + ":" + std::to_string(line_no) +
                                 ": negative entry " + fields[b]);
      }
      if (value > 0.0) edges.push_back({red, static_cast<int>(b) - 1, value});
    }
  }
  return {build_graph(static_cast<int>(red_labels.size()),
                      static_cast<int>(blue_labels.size()), std::move(edges)),
          std::move(red_labels), std::move(blue_labels)};
}

Partition read_partition_csv(const std::filesystem::path& path, const LabeledGraph& input) {
  auto lines = read_lines(path);
  std::unordered_map<std::string, int> red_index, blue_index;
  for (std::size_t r = 0; r < input.red_labels.size(); ++r) red_index[input.red_labels[r]] = static_cast<int>(r);
  for (std::size_t b = 0; b < input.blue_labels.size(); ++b) blue_index[input.blue_labels[b]] = static_cast<int>(b);

  std::vector<int> red(input.red_labels.size(), -1), blue(input.blue_labels.size(), -1);
  bool first_data_row = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    int line_no = static_cast<int>(i) + 1;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_fields(line, ',');
    if (first_data_row) {
      first_data_row = false;
      double ignored;
      if (fields.size() == 2 && !parse_double(fields[1], ignored)) continue;  // header
    }
    if (fields.size() != 2) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected label,community");
    }
    double community_value;
    if (!parse_double(fields[1], community_value) || community_value < 0 ||
        community_value != static_cast<int>(community_value)) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": bad community id '" + fields[1] + "'");
    }
    int community = static_cast<int>(community_value);
    bool known = false;
    if (auto it = red_index.find(fields[0]); it != red_index.end()) {
      known = true;
      if (red[it->second] >= 0 && red[it->second] != community) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": conflicting assignment for '" + fields[0] + "'");
      }
      red[it->second] = community;
    }
    if (auto it = blue_index.find(fields[0]); it != blue_index.end()) {
      known = true;
      if (blue[it->second] >= 0 && blue[it->second] != community) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": conflicting assignment for '" + fields[0] + "'");
      }
      blue[it->second] = community;
    }
    if (!known) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": unknown label '" +
                       fields[0] + "'");
    }
  }
  for (int c : red) {
    if (c < 0) throw PartitionMismatchError(path.string() + ": not every node is assigned");
  }
  for (int c : blue) {
    if (c < 0) throw PartitionMismatchError(path.string() + ": not every node is assigned");
  }
  return Partition(std::move(red), std::move(blue));
}

void write_edge_list(const LabeledGraph& input, const std::filesystem::path& path) {
  std::string text = "red\tblue\tweight\n";
  for (const Edge& e : input.graph.edges()) {
    text += input.red_labels[e.red];
    text += '\t';
    text += input.blue_labels[e.blue];
    text += '\t';
    text += format_double(e.weight);
    text += '\n';
  }
  write_text_atomic(path, text);
}

void write_partition_csv(const LabeledGraph& input, const Partition& partition,
                         const std::filesystem::path& path) {
  if (partition.red_count() != input.graph.red_count() ||
      partition.blue_count() != input.graph.blue_count()) {
    throw PartitionMismatchError("partition does not cover the labeled graph");
  }
  std::string text = "label,community\n";
  for (int r = 0; r < partition.red_count(); ++r) {
    text += input.red_labels[r] + "," + std::to_string(partition.red_community(r)) + "\n";
  }
  for (int b = 0; b < partition.blue_count(); ++b) {
    text += input.blue_labels[b] + "," + std::to_string(partition.blue_community(b)) + "\n";
  }
  write_text_atomic(path, text);
}

void write_partition_dot(const LabeledGraph& input, const Partition& partition,
                         const std::filesystem::path& path) {
  static const char* palette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
                                  "#ff7f00", "#ffff33", "#a65628", "#f781bf",
                                  "#999999", "#66c2a5", "#fc8d62", "#8da0cb"};
  constexpr int palette_size = 12;
  std::string text = "graph communities {\n  node [style=filled];\n";
  for (int r = 0; r < partition.red_count(); ++r) {
    int c = partition.red_community(r);
    text += "  \"r:" + input.red_labels[r] + "\" [label=\"" + input.red_labels[r] +
            "\", shape=circle, fillcolor=\"" + palette[c % palette_size] + "\"];\n";
  }
  for (int b = 0; b < partition.blue_count(); ++b) {
    int c = partition.blue_community(b);
    text += "  \"b:" + input.blue_labels[b] + "\" [label=\"" + input.blue_labels[b] +
            "\", shape=box, fillcolor=\"" + palette[c % palette_size] + "\"];\n";
  }
  for (const Edge& e : input.graph.edges()) {
    text += "  \"r:" + input.red_labels[e.red] + "\" -- \"b:" + input.blue_labels[e.blue] + "\"";
    if (e.weight != 1.0) text += " [label=\"" + format_double(e.weight) + "\"]";
    text += ";\n";
  }
  text += "}\n";
  write_text_atomic(path, text);
}

// ---------------------------------------------------------------------------
// Run records
// ---------------------------------------------------------------------------

void write_run_record(const RunRecord& record, const std::filesystem::path& path) {
  json doc;
  doc["schema_version"] = record.schema_version;
  doc["kind"] = record.kind;
  doc["input"] = record.input;
  doc["density_mode"] = record.density_mode;
  doc["seed"] = record.seed;
  doc["restarts"] = record.restarts;
  if (!record.timestamp.empty()) doc["timestamp"] = record.timestamp;
  if (record.elapsed_ms >= 0.0) doc["elapsed_ms"] = record.elapsed_ms;
  doc["results"] = json::array();
  for (const RunEntry& entry : record.entries) {
    json e;
    e["chi"] = entry.chi;
    if (entry.error.empty()) {
      e["objective"] = entry.objective;
      e["communities"] = entry.communities;
      e["restarts"] = entry.restarts;
      e["passes"] = entry.passes;
      e["exact"] = entry.exact;
      e["partition"] = {{"red", entry.red_assignment}, {"blue", entry.blue_assignment}};
    } else {
      e["error"] = entry.error;
    }
    doc["results"].push_back(std::move(e));
  }
  if (!record.plateaus.empty()) {
    doc["plateaus"] = json::array();
    for (const Plateau& p : record.plateaus) {
      doc["plateaus"].push_back({{"first", p.first}, {"last", p.last}});
    }
  }
  if (!record.transitions.empty()) {
    doc["transitions"] = json::array();
    for (const Transition& t : record.transitions) {
      doc["transitions"].push_back({{"chi_lo", t.chi_lo},
                                    {"chi_hi", t.chi_hi},
                                    {"communities_lo", t.communities_lo},
                                    {"communities_hi", t.communities_hi}});
    }
  }
  write_text_atomic(path, doc.dump(2) + "\n");
}

RunRecord read_run_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    RunRecord record;
    record.schema_version = doc.at("schema_version").get<std::string>();
    if (record.schema_version != "1") {
      throw ParseError(path.string() + ": unsupported schema_version " + record.schema_version);
    }
    record.kind = doc.at("kind").get<std::string>();
    record.input = doc.at("input").get<std::string>();
    record.density_mode = doc.at("density_mode").get<std::string>();
    record.seed = doc.at("seed").get<std::uint64_t>();
    record.restarts = doc.at("restarts").get<int>();
    record.timestamp = doc.value("timestamp", "");
    record.elapsed_ms = doc.value("elapsed_ms", -1.0);
    for (const json& e : doc.at("results")) {
      RunEntry entry;
      entry.chi = e.at("chi").get<double>();
      if (e.contains("error")) {
        entry.error = e.at("error").get<std::string>();
      } else {
        entry.objective = e.at("objective").get<double>();
        entry.communities = e.at("communities").get<int>();
        entry.restarts = e.value("restarts", 0);
        entry.passes = e.value("passes", 0);
        entry.exact = e.value("exact", false);
        entry.red_assignment = e.at("partition").at("red").get<std::vector<int>>();
        entry.blue_assignment = e.at("partition").at("blue").get<std::vector<int>>();
      }
      record.entries.push_back(std::move(entry));
    }
    if (doc.contains("plateaus")) {
      for (const json& p : doc.at("plateaus")) {
        record.plateaus.push_back({p.at("first").get<int>(), p.at("last").get<int>()});
      }
    }
    if (doc.contains("transitions")) {
      for (const json& t : doc.at("transitions")) {
        record.transitions.push_back({t.at("chi_lo").get<double>(), t.at("chi_hi").get<double>(),
                                      t.at("communities_lo").get<int>(),
                                      t.at("communities_hi").get<int>()});
      }
    }
    return record;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void validate_run_record(const RunRecord& record, const BipartiteGraph& graph) {
  DensityMode mode = record.density_mode == "weighted" ? DensityMode::weighted
                                                       : DensityMode::unweighted;
  for (const RunEntry& entry : record.entries) {
    if (!entry.error.empty()) continue;
    Partition partition(entry.red_assignment, entry.blue_assignment);
    double fresh = evaluate_qbg(graph, partition, Resolution{entry.chi, mode}).total;
    if (std::abs(fresh - entry.objective) > 1e-10) {
      throw Error("stored objective " + format_double(entry.objective) + " at chi " +
                  format_double(entry.chi) + " re-evaluates to " + format_double(fresh));
    }
  }
}

// ---------------------------------------------------------------------------
// CSV exports
// ---------------------------------------------------------------------------

void write_phase_grid_csv(const PhaseGrid& grid, const std::filesystem::path& path) {
  std::string text;
  text += "# kind," + std::string(grid.kind == ObjectiveKind::qb ? "qb" : "qbg") + "\n";
  text += "# chi," + format_double(grid.chi) + "\n";
  text += "# t," + format_double(grid.t) + "\n";
  text += "p,d,phase\n";
  for (std::size_t pi = 0; pi < grid.p_axis.size(); ++pi) {
    for (std::size_t di = 0; di < grid.d_axis.size(); ++di) {
      text += format_double(grid.p_axis[pi]) + "," + format_double(grid.d_axis[di]) + "," +
              grid.label(static_cast<int>(pi), static_cast<int>(di)) + "\n";
    }
  }
  write_text_atomic(path, text);
}

PhaseGrid read_phase_grid_csv(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  PhaseGrid grid;
  std::vector<std::tuple<double, double, char>> cells;
  bool saw_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    int line_no = static_cast<int>(i) + 1;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto fields = split_fields(line.substr(2), ',');
      if (fields.size() == 2) {
        if (fields[0] == "kind") {
          grid.kind = fields[1] == "qb" ? ObjectiveKind::qb : ObjectiveKind::qbg;
        } else if (fields[0] == "chi") {
          parse_double(fields[1], grid.chi);
        } else if (fields[0] == "t") {
          parse_double(fields[1], grid.t);
        }
      }
      continue;
    }
    if (!saw_header) {  // "p,d,phase"
      saw_header = true;
      continue;
    }
    auto fields = split_fields(line, ',');
    double p, d;
    if (fields.size() != 3 || !parse_double(fields[0], p) || !parse_double(fields[1], d) ||
        fields[2].size() != 1 || (fields[2][0] != 'M' && fields[2][0] != 'S')) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad grid row");
    }
    cells.emplace_back(p, d, fields[2][0]);
  }
  for (const auto& [p, d, label] : cells) {
    if (std::find(grid.p_axis.begin(), grid.p_axis.end(), p) == grid.p_axis.end()) {
      grid.p_axis.push_back(p);
    }
    if (std::find(grid.d_axis.begin(), grid.d_axis.end(), d) == grid.d_axis.end()) {
      grid.d_axis.push_back(d);
    }
  }
  if (cells.size() != grid.p_axis.size() * grid.d_axis.size()) {
    throw ParseError(path.string() + ": grid rows do not form a full p x d lattice");
  }
  grid.labels.assign(cells.size(), 'S');
  for (const auto& [p, d, label] : cells) {
    auto pi = std::find(grid.p_axis.begin(), grid.p_axis.end(), p) - grid.p_axis.begin();
    auto di = std::find(grid.d_axis.begin(), grid.d_axis.end(), d) - grid.d_axis.begin();
    grid.labels[static_cast<std::size_t>(pi) * grid.d_axis.size() + di] = label;
  }
  return grid;
}

void write_community_counts_csv(const ResolutionProfile& profile,
                                const std::filesystem::path& path) {
  std::string text = "chi,communities\n";
  for (const SweepPoint& point : profile.points) {
    if (!point.result) continue;
    text += format_double(point.chi) + "," +
            std::to_string(point.result->partition.num_communities()) + "\n";
  }
  write_text_atomic(path, text);
}

void write_curve_csv(const PartitionCurve& curve, const std::filesystem::path& path) {
  std::string text = "chi,objective\n";
  for (std::size_t i = 0; i < curve.chi_grid.size(); ++i) {
    text += format_double(curve.chi_grid[i]) + "," + format_double(curve.values[i]) + "\n";
  }
  write_text_atomic(path, text);
}

std::string file_hash_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t hash = 14695981039346656037ULL;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  std::array<char, 17> buffer;
  std::snprintf(buffer.data(), buffer.size(), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer.data();
}

}  // namespace bimod
