#pragma once

#include <vector>

#include "bimod/errors.hpp"

namespace bimod {

// Nondimensional coordinates of the two-clique benchmark: size ratio p in
// (0, 1], inter-clique density d in [0, 1], external influence t >= 0, and
// the derived clique size parameter r = p + 1/p.
struct NondimParams {
  double size_ratio = 1.0;          // p
  double inter_density = 0.0;       // d
  double external_influence = 0.0;  // t
  double r = 2.0;                   // p + 1/p
};

NondimParams make_nondim(double p, double d, double t);

/// Merge-minus-split indicator for the density-weighted objective. The two
/// cliques merge when the value is positive and split when it is negative.
double delta_qbg_formula(const NondimParams& params, double chi);

/// Merge-minus-split indicator for plain bipartite modularity
/// (the chi = 0 specialization of delta_qbg_formula).
double delta_qb_formula(const NondimParams& params);

struct CriticalDensity {
  enum class Kind { qbg_numeric, qbg_asymptotic, qb_closed, expected };
  double delta = 0.0;
  Kind kind = Kind::qbg_numeric;
};

/// Critical inter-clique density where the merge/split transition occurs,
/// found by bisecting delta_qbg_formula in d over [0, 1] to 1e-9. Returns
/// delta = 1 when the split phase fills the interval and delta = 0 when the
/// merged phase persists down to d -> 0+.
CriticalDensity critical_density_qbg(double p, double t, double chi);

/// Large-t limit of the critical density: r * ((1 + 2/r)^(chi/(chi+1)) - 1).
/// Requires chi >= 0.
CriticalDensity critical_density_qbg_asymptotic(double p, double chi);

/// Closed-form critical density 2/t for plain bipartite modularity, clamped
/// to 1 when the transition lies outside the unit interval.
CriticalDensity critical_density_qb(double t);

/// Clique ring threshold: a ring of n bipartite k-cliques is resolution-limit
/// free exactly when k exceeds sqrt((n - 2) / 2).
double ring_threshold(int n);
bool ring_is_resolution_free(int n, int k);

enum class ObjectiveKind { qb, qbg };

/// Merged/Split phase labels over a (p, d) grid at fixed (chi, t).
struct PhaseGrid {
  ObjectiveKind kind = ObjectiveKind::qbg;
  double chi = 0.0;
  double t = 0.0;
  std::vector<double> p_axis;
  std::vector<double> d_axis;
  std::vector<char> labels;  // row-major over p_axis x d_axis, 'M' or 'S'

  char label(int p_index, int d_index) const {
    return labels[static_cast<std::size_t>(p_index) * d_axis.size() + d_index];
  }
  bool operator==(const PhaseGrid&) const = default;
};

/// Labels each cell M when the corresponding merge/split indicator is
/// positive, S otherwise. chi is ignored for ObjectiveKind::qb.
PhaseGrid phase_grid(ObjectiveKind kind, double chi, double t,
                     std::vector<double> p_axis, std::vector<double> d_axis);

}  // namespace bimod
