#include "bimod/analytic.hpp"

#include <cmath>
#include <string>

namespace bimod {

namespace {

void check_p(double p) {
  if (!(p > 0.0) || p > 1.0) {
    throw Error("size ratio p must lie in (0, 1], got " + std::to_string(p));
  }
}

}  // namespace

NondimParams make_nondim(double p, double d, double t) {
  check_p(p);
  if (d < 0.0 || t < 0.0) {
    throw Error("inter-clique density and external influence must be nonnegative");
  }
  return {p, d, t, p + 1.0 / p};
}

double delta_qbg_formula(const NondimParams& params, double chi) {
  double d = params.inter_density;
  double t = params.external_influence;
  double r = params.r;
  double denom = r + t + d;
  double merged = std::pow((d + r) / (r + 2.0), chi) * (d + r - (d + r) * (d + r) / denom);
  double split = r - (r * d + r * r - 2.0) / denom;
  return merged - split;
}

double delta_qb_formula(const NondimParams& params) {
  double d = params.inter_density;
  double t = params.external_influence;
  double r = params.r;
  return d - (2.0 + r * d + d * d) / (r + d + t);
}

CriticalDensity critical_density_qbg(double p, double t, double chi) {
  check_p(p);
  if (t < 0.0) throw Error("external influence t must be nonnegative");
  auto f = [&](double d) { return delta_qbg_formula(make_nondim(p, d, t), chi); };

  double lo = 1e-12, hi = 1.0;
  double flo = f(lo), fhi = f(hi);
  if (flo > 0.0 && fhi > 0.0) return {0.0, CriticalDensity::Kind::qbg_numeric};
  if (flo <= 0.0 && fhi <= 0.0) return {1.0, CriticalDensity::Kind::qbg_numeric};
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0.0) == (flo > 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), CriticalDensity::Kind::qbg_numeric};
}

CriticalDensity critical_density_qbg_asymptotic(double p, double chi) {
  check_p(p);
  if (chi < 0.0) {
    throw Error("asymptotic critical density requires chi >= 0");
  }
  double r = p + 1.0 / p;
  double delta = r * (std::pow(1.0 + 2.0 / r, chi / (chi + 1.0)) - 1.0);
  // the transition leaves the unit interval once the raw form exceeds 1;
  // beyond that point the split phase covers all of d in [0, 1]
  return {std::min(delta, 1.0), CriticalDensity::Kind::qbg_asymptotic};
}

CriticalDensity critical_density_qb(double t) {
  if (t < 0.0) throw Error("external influence t must be nonnegative");
  double delta = t > 2.0 ? 2.0 / t : 1.0;
  return {delta, CriticalDensity::Kind::qb_closed};
}

double ring_threshold(int n) {
  if (n < 3) throw Error("clique ring needs at least 3 cliques");
  return std::sqrt((n - 2) / 2.0);
}

bool ring_is_resolution_free(int n, int k) {
  if (n < 3) throw Error("clique ring needs at least 3 cliques");
  if (k < 1) throw Error("clique size must be positive");
  // integer form of k > sqrt((n - 2) / 2), exact at the boundary
  return 2 * k * k > n - 2;
}

PhaseGrid phase_grid(ObjectiveKind kind, double chi, double t,
                     std::vector<double> p_axis, std::vector<double> d_axis) {
  if (p_axis.empty() || d_axis.empty()) throw Error("phase grid axes must be nonempty");
  PhaseGrid grid;
  grid.kind = kind;
  grid.chi = kind == ObjectiveKind::qb ? 0.0 : chi;
  grid.t = t;
  grid.p_axis = std::move(p_axis);
  grid.d_axis = std::move(d_axis);
  grid.labels.reserve(grid.p_axis.size() * grid.d_axis.size());
  for (double p : grid.p_axis) {
    for (double d : grid.d_axis) {
      NondimParams params = make_nondim(p, d, t);
      double delta = kind == ObjectiveKind::qb ? delta_qb_formula(params)
                                               : delta_qbg_formula(params, chi);
      grid.labels.push_back(delta > 0.0 ? 'M' : 'S');
    }
  }
  return grid;
}

}  // namespace bimod
