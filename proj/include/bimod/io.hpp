#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bimod/analytic.hpp"
#include "bimod/graph.hpp"
#include "bimod/sweep.hpp"

namespace bimod {

/// Graph plus the external string labels of its nodes, in dense-index order.
struct LabeledGraph {
  BipartiteGraph graph;
  std::vector<std::string> red_labels;
  std::vector<std::string> blue_labels;
};

struct EdgeListOptions {
  char delimiter = '\0';  // '\0': auto-detect tab, comma, or whitespace
  int header = -1;        // -1 auto-detect, 0 no header, 1 skip first row
};

/// TSV/CSV edge list: red label, blue label, optional positive weight
/// (missing weight column means 1). Labels get dense indices in first
/// occurrence order. Parse failures report the line number.
LabeledGraph read_edge_list(const std::filesystem::path& path,
                            const EdgeListOptions& options = {});

/// Rectangular matrix with blue labels in the first row and red labels in
/// the first column; nonzero entries become edges. Zero rows/columns are
/// retained as isolated nodes.
LabeledGraph read_biadjacency(const std::filesystem::path& path);

/// Two-column label,community file covering every node of the input graph.
Partition read_partition_csv(const std::filesystem::path& path, const LabeledGraph& input);

void write_edge_list(const LabeledGraph& input, const std::filesystem::path& path);
void write_partition_csv(const LabeledGraph& input, const Partition& partition,
                         const std::filesystem::path& path);
/// DOT export with community-colored nodes; red nodes are circles, blue
/// nodes are boxes.
void write_partition_dot(const LabeledGraph& input, const Partition& partition,
                         const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Run records: schema-versioned JSON documents for detect/sweep/eval output
// ---------------------------------------------------------------------------

struct RunEntry {
  double chi = 0.0;
  double objective = 0.0;
  int communities = 0;
  int restarts = 0;
  int passes = 0;
  bool exact = false;
  std::string error;  // nonempty for failed sweep points
  std::vector<int> red_assignment;
  std::vector<int> blue_assignment;
};

struct RunRecord {
  std::string schema_version = "1";
  std::string kind;          // detect | sweep | eval
  std::string input;         // content hash or generator description
  std::string density_mode;  // unweighted | weighted
  std::uint64_t seed = 0;
  int restarts = 0;
  std::string timestamp;    // empty when suppressed for reproducible output
  double elapsed_ms = -1.0;  // negative when suppressed
  std::vector<RunEntry> entries;
  std::vector<Plateau> plateaus;
  std::vector<Transition> transitions;
};

void write_run_record(const RunRecord& record, const std::filesystem::path& path);
RunRecord read_run_record(const std::filesystem::path& path);

/// Re-evaluates every stored objective against its stored partition; throws
/// when any disagrees beyond 1e-10.
void validate_run_record(const RunRecord& record, const BipartiteGraph& graph);

// ---------------------------------------------------------------------------
// Plot-ready CSV exports
// ---------------------------------------------------------------------------

void write_phase_grid_csv(const PhaseGrid& grid, const std::filesystem::path& path);
PhaseGrid read_phase_grid_csv(const std::filesystem::path& path);

/// chi,communities table over the successful points of a sweep.
void write_community_counts_csv(const ResolutionProfile& profile,
                                const std::filesystem::path& path);

/// chi,objective table for a fixed partition.
void write_curve_csv(const PartitionCurve& curve, const std::filesystem::path& path);

/// FNV-1a content hash used in run-record input descriptors.
std::string file_hash_hex(const std::filesystem::path& path);

/// Writes via a temporary file plus rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace bimod
