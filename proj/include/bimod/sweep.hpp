#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bimod/optimizer.hpp"

namespace bimod {

struct SweepConfig {
  OptimizerConfig optimizer;
  DensityMode density_mode = DensityMode::unweighted;
  bool warm_start = true;  // feed each grid point the previous partition as an extra restart
  bool refine_transitions = true;
  double transition_resolution = 1e-3;  // chi bracket width after bisection
};

struct SweepPoint {
  double chi = 0.0;
  std::optional<DetectionResult> result;
  std::string error;  // set when this grid point failed; never aborts the sweep
};

/// Maximal run of grid points whose partitions are identical up to relabeling.
struct Plateau {
  int first = 0;
  int last = 0;  // inclusive grid indices
};

/// Bracketed chi interval where the detected partition changes.
struct Transition {
  double chi_lo = 0.0;
  double chi_hi = 0.0;
  int communities_lo = 0;
  int communities_hi = 0;
};

struct ResolutionProfile {
  std::vector<double> chi_grid;  // strictly increasing
  std::vector<SweepPoint> points;
  std::vector<Plateau> plateaus;
  std::vector<Transition> transitions;
};

struct PartitionCurve {
  Partition reference;
  std::vector<double> chi_grid;
  std::vector<double> values;  // objective of the fixed partition at each grid chi
};

/// True iff the two partitions are identical up to relabeling of community
/// ids. Throws UniverseMismatchError for different node universes.
bool partition_equal(const Partition& a, const Partition& b);

/// Runs detection over an evenly spaced chi grid, records plateaus, and
/// brackets the partition transitions (bisected to transition_resolution when
/// refinement is enabled). Per-point failures are recorded, not thrown.
ResolutionProfile sweep_chi(const BipartiteGraph& graph, double chi_min, double chi_max,
                            int steps, const SweepConfig& config);

/// Objective of one fixed partition across a chi grid.
PartitionCurve evaluate_curve(const BipartiteGraph& graph, const Partition& reference,
                              std::vector<double> chi_grid, DensityMode density_mode);

}  // namespace bimod
