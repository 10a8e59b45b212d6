#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "widomlab/potential.hpp"
#include "widomlab/reflectionless.hpp"

using namespace widomlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Random band set with n bands inside [-1, 1] and a random divisor.
ReflectionlessFn random_fn(std::mt19937_64& rng, int n, bool anchored) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cuts;
  for (int i = 0; i < 2 * n; ++i) cuts.push_back(-1.0 + 2.0 * u(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Interval> bands;
  for (int i = 0; i < n; ++i) bands.push_back({cuts[2 * i], cuts[2 * i + 1]});
  BandSet E = make_bandset(bands);
  Divisor d;
  for (const auto& g : E.gaps()) d.points.push_back(g.lo + u(rng) * g.length());
  std::optional<double> anchor;
  if (anchored) anchor = E.lo() - 0.1 - u(rng);
  return make_reflectionless(E, d, anchor);
}

}  // namespace

TEST_CASE("single band closed forms") {
  const auto f = make_reflectionless(make_bandset({{-1.0, 1.0}}), {});
  const cplx r = eval_R(f, {0.0, 2.0});
  CHECK(r.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.imag() == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));
  for (double x : {1.5, 4.0, -3.0}) {
    const double expect = (x > 0 ? -1.0 : 1.0) / std::sqrt(x * x - 1.0);
    CHECK(eval_R_real(f, x) == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(boundary_density(f, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(boundary_density(f, 0.6) == doctest::Approx(1.0 / (kPi * 0.8)).epsilon(1e-14));
  CHECK(measure_mass(f, whole_set(f.E)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(measure_mass(f, arc_in(f.E, 0.0, 1.0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(eval_R(f, {0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(boundary_density(f, 1.5), DomainError);
  CHECK(exp_representation(g_function(f), -1.0, {2.0, 0.0}).real() == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(exp_representation(g_function(f), -1.0, {-1.0, 0.0}), DomainError);
}

TEST_CASE("boundary density is the limit of Im R / pi") {
  const auto f = make_reflectionless(make_bandset({{-1.0, 0.0}, {0.5, 1.0}}), {{0.25}});
  for (double x : {-0.7, 0.6, 0.93}) {
    const double lim = eval_R(f, {x, 1e-9}).imag() / kPi;
    CHECK(boundary_density(f, x) == doctest::Approx(lim).epsilon(1e-7));
  }
  const cplx z{1.0, 1.0};
  const cplx a = eval_R(f, z), b = exp_representation(g_function(f), f.b0(), z);
  CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
}

TEST_CASE("equilibrium divisor reproduces the equilibrium density") {
  const double r = 0.3;
  const BandSet E = make_bandset({{-1.0, -r}, {r, 1.0}});
  const auto f = make_reflectionless(E, {{0.0}});
  const auto eq = equilibrium(E);
  CHECK(boundary_density(f, 0.75) == doctest::Approx(equilibrium_density(eq, 0.75)).epsilon(1e-12));
}

TEST_CASE("product and exponential forms agree on a random family") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = random_fn(rng, 1 + trial % 10, trial % 3 == 0);
    const GFunction g = g_function(f);
    for (int k = 0; k < 50; ++k) {
      const cplx z{u(rng), std::abs(u(rng)) + 1e-3};
      const cplx a = eval_R(f, z), b = exp_representation(g, f.b0(), z);
      REQUIRE(std::abs(a - b) < 1e-10 * std::abs(a));
    }
    // Normalization at infinity along the imaginary axis.
    const cplx big{0.0, 1e9};
    CHECK(std::abs(-big * eval_R(f, big) - 1.0) < 1e-8);
  }
}

TEST_CASE("total mass, sign pattern and positivity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_fn(rng, 2 + trial % 6, trial % 2 == 1);
    const double atom = f.anchor ? atom_mass_closed_form(f) : 0.0;
    CHECK(measure_mass(f, whole_set(f.E)) + atom == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t j = 0; j < f.E.gap_count(); ++j) {
      const Interval g = f.E.gap(j);
      const double x = f.divisor.points[j];
      for (int k = 1; k <= 10; ++k) {
        const double t = g.lo + g.length() * k / 11.0;
        if (t == x) continue;
        // R increases across a gap (it is Herglotz), vanishing at the divisor point.
        CHECK((t < x ? eval_R_real(f, t) < 0 : eval_R_real(f, t) > 0));
      }
    }
    std::vector<cplx> grid;
    for (int k = 0; k < 100; ++k) grid.push_back({-2.0 + 4.0 * u(rng), std::pow(10.0, -8.0 + 9.0 * u(rng))});
    CHECK(nevanlinna_check(f, grid).holds());
  }
  const auto f = make_reflectionless(make_bandset({{-1.0, 1.0}}), {});
  CHECK_THROWS_AS(nevanlinna_check(f, {{0.3, 0.0}}), DomainError);
  const double dens = eval_R(f, {0.2, 1e-8}).imag() / kPi;
  CHECK(dens == doctest::Approx(boundary_density(f, 0.2)).epsilon(1e-6));
}

TEST_CASE("atom at the anchor") {
  const auto f = make_reflectionless(make_bandset({{0.5, 1.0}}), {}, 0.0);
  CHECK(atom_mass_closed_form(f) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  // -(x - b0) R(x) approaches the atom linearly in x; Richardson removes that.
  auto limit = [](const ReflectionlessFn& g) {
    double prev = 0.0, best = 0.0;
    for (int k = 10; k <= 20; ++k) {
      const double x = -std::ldexp(g.E.diameter(), -k);
      const double v = -x * eval_R_real(g, x);
      if (k > 10) best = 2 * v - prev;
      prev = v;
    }
    return best;
  };
  CHECK(limit(f) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  // Geometric family: slits [4^-j (1 - 2^-j), 4^-j], divisor at right ends.
  std::vector<Interval> bands;
  double product = 1.0;
  for (int j = 1; j <= 8; ++j) {
    const double c = std::pow(4.0, -j) * (1 - std::ldexp(1.0, -j)), d = std::pow(4.0, -j);
    bands.push_back({c, d});
    product *= std::sqrt(c / d);
  }
  const BandSet G = make_bandset(bands);
  const auto fg = make_reflectionless(G, right_end_divisor(G), 0.0);
  CHECK(atom_mass_closed_form(fg) == doctest::Approx(product).epsilon(1e-13));
  CHECK(limit(fg) == doctest::Approx(product).epsilon(1e-6));
  CHECK(measure_mass(fg, whole_set(G)) + product == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(atom_mass_closed_form(make_reflectionless(G, right_end_divisor(G))), DomainError);
  CHECK_THROWS_AS(make_reflectionless(G, right_end_divisor(G), 0.5), DomainError);
}

TEST_CASE("point-mass series") {
  std::vector<std::pair<double, double>> conv, div;
  for (int j = 1; j <= 12; ++j) {
    const double a = std::pow(4.0, -j);
    conv.push_back({a, a * (1 - std::ldexp(1.0, -j))});
    div.push_back({a, a / 2});
  }
  const auto c = pointmass_series(conv, 0.0);
  for (int j = 1; j <= 12; ++j) {
    const double t = std::ldexp(1.0, -j);
    CHECK(c.terms[j - 1] == doctest::Approx(t / (1 - t)).epsilon(1e-12));
  }
  CHECK(c.converged_heuristic);
  const auto d = pointmass_series(div, 0.0);
  CHECK(d.partial_sums.back() == doctest::Approx(12.0));
  CHECK_FALSE(d.converged_heuristic);
  CHECK_THROWS_AS(pointmass_series({{1.0, 0.5}, {2.0, 0.25}}, 0.0), ValidationError);
}

TEST_CASE("weak reflectionless classification") {
  const BandSet E = make_bandset({{-1.0, -0.4}, {0.1, 0.5}, {0.8, 1.0}});
  const auto eq = equilibrium(E);
  MeasureOnBands m{[&](const IntervalPoint& p) { return eq.density.density(p); }, {}};
  CHECK(classify_reflectionless(m, E, 20).verdict);

  const BandSet I = make_bandset({{-1.0, 1.0}});
  MeasureOnBands flat{[](const IntervalPoint&) { return 0.5; }, {}};
  const auto rep = classify_reflectionless(flat, I, 11);
  CHECK_FALSE(rep.verdict);
  const double x = rep.worst_x;
  CHECK(rep.max_abs_re == doctest::Approx(std::abs(0.5 * std::log((1 - x) / (1 + x)))).epsilon(1e-10));

  const auto f = make_reflectionless(make_bandset({{0.5, 1.0}, {1.5, 2.0}}), {{1.2}}, 0.0);
  CHECK(classify_reflectionless(reflectionless_measure(f), f.E, 15).verdict);
  CHECK_THROWS_AS(classify_reflectionless(flat, I, 0), ValidationError);
}
