#include <doctest.h>

#include <cmath>

#include "bimod/analytic.hpp"
#include "bimod/rng.hpp"

using namespace bimod;

TEST_CASE("make_nondim derives r and validates") {
  auto params = make_nondim(0.25, 0.5, 10.0);
  CHECK(params.r == doctest::Approx(4.25).epsilon(1e-13));
  CHECK_THROWS_AS(make_nondim(0.0, 0.5, 1.0), Error);
  CHECK_THROWS_AS(make_nondim(1.5, 0.5, 1.0), Error);
  CHECK_THROWS_AS(make_nondim(0.5, -0.1, 1.0), Error);
}

TEST_CASE("delta_qbg at chi = 0 collapses to delta_qb") {
  SplitMix64 rng(100);
  for (int i = 0; i < 100; ++i) {
    double p = 0.05 + 0.95 * rng.unit();
    double d = rng.unit();
    double t = 1000.0 * rng.unit();
    auto params = make_nondim(p, d, t);
    CHECK(std::abs(delta_qbg_formula(params, 0.0) - delta_qb_formula(params)) <= 1e-12);
  }
}

TEST_CASE("two touching cliques with no exterior always split") {
  // at t = 0 the merged term vanishes, so the gap is negative for any chi
  for (double chi : {0.0, 0.5, 1.0, 4.0}) {
    for (double d : {0.1, 0.5, 1.0}) {
      CHECK(delta_qbg_formula(make_nondim(1.0, d, 0.0), chi) < 0.0);
    }
  }
}

TEST_CASE("delta_qbg sign change near the asymptotic root") {
  auto params_lo = make_nondim(1.0, 0.82, 1e6);
  auto params_hi = make_nondim(1.0, 0.84, 1e6);
  CHECK(delta_qbg_formula(params_lo, 1.0) < 0.0);
  CHECK(delta_qbg_formula(params_hi, 1.0) > 0.0);

  // benchmark coordinates on the two sides of the large-t threshold: merged
  // at d = 0.9, split at d = 0.5
  CHECK(delta_qbg_formula(make_nondim(1.0, 0.9, 1e6), 1.0) > 0.0);
  CHECK(delta_qbg_formula(make_nondim(1.0, 0.5, 1e6), 1.0) < 0.0);
}

TEST_CASE("critical density conventions and values") {
  // no exterior: split fills the whole interval
  CHECK(critical_density_qbg(1.0, 0.0, 1.0).delta == 1.0);
  CHECK(critical_density_qbg(0.3, 0.0, 0.5).delta == 1.0);
  // chi = 0 at huge exterior: merged essentially everywhere
  CHECK(critical_density_qbg(1.0, 1e6, 0.0).delta <= 1e-5);
  // chi = 1: root close to the closed-form limit
  CHECK(critical_density_qbg(1.0, 1e6, 1.0).delta ==
        doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-3));
}

TEST_CASE("asymptotic critical density") {
  CHECK(critical_density_qbg_asymptotic(1.0, 0.0).delta == 0.0);
  CHECK(critical_density_qbg_asymptotic(1.0, 1.0).delta ==
        doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
  for (double p : {0.25, 0.5, 1.0}) {
    CHECK(std::abs(critical_density_qbg_asymptotic(p, 1e6).delta - 1.0) < 1e-5);
  }
  CHECK_THROWS_AS(critical_density_qbg_asymptotic(1.0, -0.5), Error);
}

TEST_CASE("asymptote convergence improves with t") {
  for (double p : {0.25, 0.5, 1.0}) {
    for (double chi : {0.2, 0.5, 1.0}) {
      double limit = critical_density_qbg_asymptotic(p, chi).delta;
      double gap_small = std::abs(critical_density_qbg(p, 1e3, chi).delta - limit);
      double gap_large = std::abs(critical_density_qbg(p, 1e6, chi).delta - limit);
      CHECK(gap_large < gap_small);
      CHECK(gap_large < 1e-3);
    }
  }
}

TEST_CASE("critical density is monotone in chi and t") {
  for (double p : {0.25, 1.0}) {
    double previous = -1.0;
    for (double chi : {0.0, 0.3, 0.7, 1.5, 3.0}) {
      double delta = critical_density_qbg(p, 100.0, chi).delta;
      CHECK(delta >= previous - 1e-12);
      previous = delta;
    }
    previous = 2.0;
    for (double t : {2.0, 10.0, 100.0, 1e4, 1e6}) {
      double delta = critical_density_qbg(p, t, 1.0).delta;
      CHECK(delta <= previous + 1e-12);
      previous = delta;
    }
  }
}

TEST_CASE("plain modularity boundary sits exactly at d = 2/t") {
  SplitMix64 rng(200);
  for (int i = 0; i < 50; ++i) {
    double p = 0.05 + 0.95 * rng.unit();
    double t = 2.5 + 100.0 * rng.unit();
    CHECK(std::abs(delta_qb_formula(make_nondim(p, 2.0 / t, t))) <= 1e-14);
  }
  // d = 0 favors the split for any exterior
  CHECK(delta_qb_formula(make_nondim(0.5, 0.0, 5.0)) < 0.0);
  CHECK(critical_density_qb(50.0).delta == doctest::Approx(0.04).epsilon(1e-13));
  CHECK(critical_density_qb(0.0).delta == 1.0);
  CHECK(critical_density_qb(1.0).delta == 1.0);
}

TEST_CASE("ring threshold law") {
  CHECK(ring_threshold(4) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ring_threshold(12) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-13));
  CHECK(ring_threshold(3) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  CHECK(ring_is_resolution_free(4, 2));
  CHECK(!ring_is_resolution_free(12, 2));
  CHECK(ring_is_resolution_free(3, 1));
  // boundary cells are not resolution-limit-free
  CHECK(!ring_is_resolution_free(4, 1));
  CHECK(!ring_is_resolution_free(10, 2));
  CHECK_THROWS_AS(ring_threshold(2), Error);
}

TEST_CASE("phase grids reproduce the limiting regimes") {
  // d grid offset so no cell sits exactly on the t = 10 boundary at d = 0.2
  std::vector<double> p_axis, d_axis;
  for (int i = 1; i <= 10; ++i) p_axis.push_back(0.1 * i);
  for (int i = 0; i < 20; ++i) d_axis.push_back(0.025 + 0.05 * i);

  auto merged = phase_grid(ObjectiveKind::qbg, 0.0, 1e6, p_axis, d_axis);
  for (char label : merged.labels) CHECK(label == 'M');

  auto split = phase_grid(ObjectiveKind::qbg, 1.0, 0.0, p_axis, d_axis);
  for (char label : split.labels) CHECK(label == 'S');

  // plain modularity at t = 10: boundary at d = 0.2 for every p
  auto qb = phase_grid(ObjectiveKind::qb, 0.0, 10.0, p_axis, d_axis);
  for (std::size_t pi = 0; pi < p_axis.size(); ++pi) {
    for (std::size_t di = 0; di < d_axis.size(); ++di) {
      char expected = d_axis[di] > 0.2 ? 'M' : 'S';
      CHECK(qb.label(static_cast<int>(pi), static_cast<int>(di)) == expected);
    }
  }
}
