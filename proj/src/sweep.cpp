#include "bimod/sweep.hpp"

#include <string>
#include <utility>

namespace bimod {

bool partition_equal(const Partition& a, const Partition& b) {
  if (a.red_count() != b.red_count() || a.blue_count() != b.blue_count()) {
    throw UniverseMismatchError("partitions cover different node universes");
  }
  // assignments are normalized to first-occurrence order at construction, so
  // relabeling-invariant equality is direct comparison
  return a.red_assignment() == b.red_assignment() &&
         a.blue_assignment() == b.blue_assignment();
}

ResolutionProfile sweep_chi(const BipartiteGraph& graph, double chi_min, double chi_max,
                            int steps, const SweepConfig& config) {
  if (steps < 2) throw Error("sweep needs at least 2 grid points");
  if (!(chi_min < chi_max)) throw Error("sweep needs chi_min < chi_max");

  ResolutionProfile profile;
  profile.chi_grid.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    profile.chi_grid.push_back(chi_min + i * (chi_max - chi_min) / (steps - 1));
  }

  std::vector<Partition> previous;
  for (double chi : profile.chi_grid) {
    SweepPoint point;
    point.chi = chi;
    try {
      Resolution resolution{chi, config.density_mode};
      point.result = detect(graph, resolution, config.optimizer,
                            config.warm_start ? std::span<const Partition>(previous)
                                              : std::span<const Partition>());
    } catch (const Error& e) {
      point.error = e.what();
    }
    profile.points.push_back(std::move(point));
    if (profile.points.back().result) {
      previous.assign(1, profile.points.back().result->partition);
    }
  }

  // plateaus: maximal runs of successful points with equal partitions
  int i = 0;
  int n = static_cast<int>(profile.points.size());
  while (i < n) {
    if (!profile.points[i].result) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && profile.points[j + 1].result &&
           partition_equal(profile.points[j].result->partition,
                           profile.points[j + 1].result->partition)) {
      ++j;
    }
    profile.plateaus.push_back({i, j});
    i = j + 1;
  }

  // transitions between adjacent successful points with differing partitions
  for (int k = 0; k + 1 < n; ++k) {
    const auto& left = profile.points[k];
    const auto& right = profile.points[k + 1];
    if (!left.result || !right.result) continue;
    if (partition_equal(left.result->partition, right.result->partition)) continue;

    Transition tr;
    tr.chi_lo = left.chi;
    tr.chi_hi = right.chi;
    tr.communities_lo = left.result->partition.num_communities();
    tr.communities_hi = right.result->partition.num_communities();
    if (config.refine_transitions) {
      // probes warm-start from both bracket partitions so the bisection
      // tracks where the optimum switches, not where cold search loses it
      std::vector<Partition> bracket{left.result->partition, right.result->partition};
      while (tr.chi_hi - tr.chi_lo > config.transition_resolution) {
        double mid = 0.5 * (tr.chi_lo + tr.chi_hi);
        DetectionResult probe;
        try {
          probe = detect(graph, Resolution{mid, config.density_mode}, config.optimizer,
                         bracket);
        } catch (const Error&) {
          break;  // keep the bracket reached so far
        }
        if (partition_equal(probe.partition, bracket[0])) {
          tr.chi_lo = mid;
        } else {
          tr.chi_hi = mid;
          bracket[1] = probe.partition;
        }
      }
      tr.communities_hi = bracket[1].num_communities();
    }
    profile.transitions.push_back(std::move(tr));
  }
  return profile;
}

PartitionCurve evaluate_curve(const BipartiteGraph& graph, const Partition& reference,
                              std::vector<double> chi_grid, DensityMode density_mode) {
  PartitionCurve curve;
  curve.reference = reference;
  curve.chi_grid = std::move(chi_grid);
  curve.values.reserve(curve.chi_grid.size());
  for (double chi : curve.chi_grid) {
    try {
      curve.values.push_back(
          evaluate_qbg(graph, reference, Resolution{chi, density_mode}).total);
    } catch (const DegenerateDensityError& e) {
      throw DegenerateDensityError("chi = " + std::to_string(chi) + ": " + e.what());
    }
  }
  return curve;
}

}  // namespace bimod
