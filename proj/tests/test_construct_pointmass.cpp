#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "widomlab/construct_pointmass.hpp"
#include "widomlab/reflectionless.hpp"

using namespace widomlab;

TEST_CASE("find_b hits the omega window and omega is monotone along the search") {
  const BandSet E = make_bandset({{0.5, 1.0}});
  const SlitSearch s = find_b(E, 0.25);
  CHECK(s.b > 0.0);
  CHECK(s.b < 0.25);
  CHECK(s.omega >= 0.5);
  CHECK(s.omega <= 0.501);
  const BandSet F = merge(E, make_bandset({{s.b, 0.25}}));
  CHECK(harmonic_measure(F, 0.0, single_band(F, 0)).value == doctest::Approx(s.omega).epsilon(1e-12));
  auto path = s.path;
  std::sort(path.begin(), path.end(), [](auto x, auto y) { return x.first > y.first; });
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i].first < path[i - 1].first) CHECK(path[i].second >= path[i - 1].second);
  }
  CHECK_THROWS_AS(find_b(E, 0.25, 0.0, 1.0), ConstructionError);
  CHECK_THROWS_AS(find_b(E, 0.75), DomainError);
}

TEST_CASE("find_b is translation and scale invariant") {
  const BandSet E = make_bandset({{0.5, 1.0}});
  const double b = find_b(E, 0.25).b;
  const BandSet shifted = make_bandset({{10.5, 11.0}});
  CHECK(find_b(shifted, 10.25, 10.0).b == doctest::Approx(b + 10.0).epsilon(1e-9));
  const BandSet scaled = make_bandset({{5.0, 10.0}});
  CHECK(find_b(scaled, 2.5).b == doctest::Approx(10.0 * b).epsilon(1e-9));
}

TEST_CASE("find_a ratio floors") {
  PointmassConfig cfg;
  const BandSet E = make_bandset({{0.5, 1.0}});
  const SlitChoice any = find_a(E, 0.5, 0.0, cfg);
  CHECK(any.halvings == 1);
  CHECK(any.a == 0.25);
  CHECK_THROWS_AS(find_a(E, 0.5, 1.0, cfg), NumericalError);
  cfg.max_halvings = 2;
  CHECK_THROWS_AS(find_a(E, 0.5, 0.999, cfg), NumericalError);
}

TEST_CASE("depth-2 construction keeps its invariants") {
  PointmassConfig cfg;
  cfg.depth = 2;
  const auto tr = run_pointmass(cfg);
  REQUIRE(tr.steps.size() == 2);
  double prev_a = cfg.b1;
  for (const auto& s : tr.steps) {
    CHECK(s.omega >= 0.5);
    CHECK(s.omega <= 0.501);
    CHECK(s.ratio > 1.0 - std::ldexp(1.0, -s.n));
    CHECK(s.ratio < 1.0);
    CHECK(s.b / s.a == doctest::Approx(s.ratio).epsilon(1e-12));
    CHECK(s.a < prev_a);
    prev_a = s.b;
  }
  CHECK(tr.steps[1].ratio > 0.75);
  const auto g = tr.green_chain();
  CHECK(g[1] < g[0]);
  CHECK(g[2] < g[1]);
  // Widom chain: G_deep(c_n) <= G_n(c_n) <= G_n(0).
  for (std::size_t n = 0; n < tr.widom_terms.size(); ++n) CHECK(tr.widom_terms[n] <= g[n]);
  // Atom estimate from the ratio chain equals the closed form on the truncation.
  const auto f = make_reflectionless(tr.final_set, right_end_divisor(tr.final_set), 0.0);
  CHECK(tr.steps.back().atom_estimate == doctest::Approx(atom_mass_closed_form(f)).epsilon(1e-12));
  CHECK(tr.steps.back().series_partial ==
        doctest::Approx(pointmass_series({{tr.steps[0].a, tr.steps[0].b}, {tr.steps[1].a, tr.steps[1].b}}, 0.0)
                            .partial_sums.back())
            .epsilon(1e-9));
}

TEST_CASE("configuration is validated") {
  PointmassConfig cfg;
  cfg.depth = 1;
  CHECK_THROWS_AS(run_pointmass(cfg), ValidationError);
  cfg.depth = kPointmassDepthCap + 1;
  CHECK_THROWS_AS(run_pointmass(cfg), ValidationError);
  cfg.depth = 3;
  cfg.b1 = 1.5;
  CHECK_THROWS_AS(run_pointmass(cfg), ValidationError);
}

TEST_CASE("slit ratios approach one as the slit moves to the pole") {
  const BandSet E = make_bandset({{1.0, 2.0}});
  const std::vector<double> as{0.5, 0.25, 0.1, 0.01};
  const auto rows = verify_lemma_harmonic(E, as);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].ratio > rows[i - 1].ratio);
  const BandSet big = make_bandset({{10.0, 20.0}});
  std::vector<double> as10;
  for (double a : as) as10.push_back(10 * a);
  const auto rows10 = verify_lemma_harmonic(big, as10);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows10[i].ratio == doctest::Approx(rows[i].ratio).epsilon(1e-9));
  CHECK_THROWS_AS(verify_lemma_harmonic(E, {1.5}), DomainError);
}
