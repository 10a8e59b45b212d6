#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "widomlab/potential.hpp"

using namespace widomlab;

namespace {

// Roots of p(x) = v on [a, b] by bisection, assuming a sign change.
template <class F>
double bisect(F p, double v, double a, double b) {
  double fa = p(a) - v;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = p(m) - v;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// E = P^{-1}([-1, 1]) for the cubic P(x) = x^3 - 3x + s. For |s| < 1 both
// critical values exceed 1 in modulus, so E has three bands, each carrying
// equilibrium mass 1/3, and G_E(x) = acosh|P(x)| / 3 off E.
struct CubicPreimage {
  double s;
  double P(double x) const { return x * x * x - 3.0 * x + s; }
  BandSet bands() const {
    auto p = [this](double x) { return P(x); };
    const double r = 3.0;
    std::vector<Interval> b;
    b.push_back({bisect(p, -1.0, -r, -1.0), bisect(p, 1.0, -r, -1.0)});
    b.push_back({bisect(p, 1.0, -1.0, 1.0), bisect(p, -1.0, -1.0, 1.0)});
    b.push_back({bisect(p, -1.0, 1.0, r), bisect(p, 1.0, 1.0, r)});
    return make_bandset(b);
  }
  double green(double x) const { return std::acosh(std::abs(P(x))) / 3.0; }
};

}  // namespace

TEST_CASE("single band equilibrium matches the arcsine law") {
  const BandSet E = make_bandset({{-1.0, 1.0}});
  const auto eq = equilibrium(E);
  CHECK(eq.roots.empty());
  for (double t : {-0.9, 0.0, 0.3, 0.999}) {
    CHECK(equilibrium_density(eq, t) == doctest::Approx(1.0 / (std::numbers::pi * std::sqrt(1 - t * t))).epsilon(1e-12));
  }
  CHECK(equilibrium_mass(eq, arc_in(E, 0.0, 0.5)) == doctest::Approx(std::asin(0.5) / std::numbers::pi).epsilon(1e-12));
  for (double x : {1.5, 3.0, -1.0001, -40.0}) {
    const double expect = std::acosh(std::abs(x));
    CHECK(green_value(eq, x) == doctest::Approx(expect).epsilon(1e-11));
  }
  CHECK(green_value(eq, 1.0) == 0.0);
  CHECK_THROWS_AS(green_value(eq, 0.5), DomainError);
}

TEST_CASE("symmetric two bands reduce to one band under t -> t^2") {
  for (double r : {0.5, 0.1, 1e-3}) {
    const BandSet E = make_bandset({{-1.0, -r}, {r, 1.0}});
    const auto eq = equilibrium(E);
    REQUIRE(eq.roots.size() == 1);
    CHECK(std::abs(eq.roots[0]) < 1e-12);
    const double y = (1.0 + r * r) / (1.0 - r * r);
    CHECK(green_value(eq, 0.0) == doctest::Approx(0.5 * std::acosh(y)).epsilon(1e-11));
    CHECK(equilibrium_mass(eq, single_band(E, 0)) == doctest::Approx(0.5).epsilon(1e-12));
    const auto ws = widom_sum(eq);
    CHECK(ws.sum == doctest::Approx(0.5 * std::acosh(y)).epsilon(1e-11));
  }
}

TEST_CASE("cubic preimage: critical points, band masses, Green values") {
  for (double s : {0.0, 0.5, -0.8}) {
    const CubicPreimage cp{s};
    const BandSet E = cp.bands();
    const auto eq = equilibrium(E);
    REQUIRE(eq.roots.size() == 2);
    CHECK(eq.roots[0] == doctest::Approx(-1.0).epsilon(1e-11));
    CHECK(eq.roots[1] == doctest::Approx(1.0).epsilon(1e-11));
    REQUIRE(eq.poly_coeffs.size() == 3);
    CHECK(eq.poly_coeffs[2] == 1.0);
    CHECK(eq.poly_coeffs[0] == doctest::Approx(-1.0).epsilon(1e-11));
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(equilibrium_mass(eq, single_band(E, k)) == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    }
    for (double x : {-1.0, 1.0, -0.2 + E.gap(0).lo * 0.0 - 0.9, 2.5, -2.7}) {
      if (E.band_containing(x)) continue;
      CHECK(green_value(eq, x) == doctest::Approx(cp.green(x)).epsilon(1e-10));
    }
    CHECK(widom_sum(eq).sum == doctest::Approx(cp.green(-1.0) + cp.green(1.0)).epsilon(1e-10));
  }
}

TEST_CASE("harmonic measure with a pole outside the hull") {
  const BandSet E = make_bandset({{1.0, 2.0}});
  const auto hm = harmonic_measure(E, 0.0, arc_in(E, 1.0, 1.5));
  // t -> 1/t sends the problem to the arcsine law on [1/2, 1], arc [2/3, 1].
  const double expect = std::acos((2.0 / 3.0 - 0.75) / 0.25) / std::numbers::pi;
  CHECK(hm.value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(harmonic_measure(E, 0.0, whole_set(E)).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(harmonic_measure(E, std::nullopt, arc_in(E, 1.0, 1.5)).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("harmonic measure with a pole in a bounded gap") {
  const BandSet E = make_bandset({{-2.0, -1.0}, {1.0, 2.0}});
  CHECK(harmonic_measure(E, 0.0, single_band(E, 1)).value == doctest::Approx(0.5).epsilon(1e-12));
  // Under t -> 1/t the pole at 0 goes to infinity and E to [-1,-1/2] ∪ [1/2,1];
  // the arc [1, 1.5] maps to [2/3, 1], whose equilibrium mass on the
  // symmetric image follows from s -> s^2 and the arcsine law on [1/4, 1].
  const double lo = 4.0 / 9.0, m = 0.625, rad = 0.375;
  const double expect = 0.5 * std::acos((lo - m) / rad) / std::numbers::pi;
  CHECK(harmonic_measure(E, 0.0, arc_in(E, 1.0, 1.5)).value == doctest::Approx(expect).epsilon(1e-11));
  const BandSet F = make_bandset({{-3.0, -1.0}, {0.5, 2.0}, {3.0, 3.5}});
  for (double pole : {0.0, -0.9, 2.9, 2.1}) {
    CHECK(harmonic_measure(F, pole, whole_set(F)).value == doctest::Approx(1.0).epsilon(1e-11));
  }
  CHECK_THROWS_AS(harmonic_measure(E, 1.5, whole_set(E)), DomainError);
}

TEST_CASE("Green function decreases when the set grows") {
  const BandSet E = make_bandset({{0.0, 1.0}, {2.0, 3.0}});
  const BandSet big = make_bandset({{0.0, 1.2}, {1.9, 3.0}});
  CHECK(domain_monotonicity_check(E, big, 1.5));
  CHECK(domain_monotonicity_check(E, big, 5.0));
  CHECK_THROWS_AS(domain_monotonicity_check(big, E, 1.5), ValidationError);
  CHECK(bands_contained(E, big));
}

TEST_CASE("widely separated scales stay accurate") {
  // Symmetric pair with r = 1e-9: G(0) has the closed form above.
  const double r = 1e-9;
  const BandSet E = make_bandset({{-1.0, -r}, {r, 1.0}});
  const auto eq = equilibrium(E);
  const double y = (1.0 + r * r) / (1.0 - r * r);
  CHECK(green_value(eq, 0.0) == doctest::Approx(0.5 * std::acosh(y)).epsilon(1e-8));
  // Tiny band far from a big one: masses still sum to one.
  const BandSet T = make_bandset({{0.0, 1e-12}, {1e-3, 1e-3 + 1e-14}, {0.5, 1.0}});
  const auto eqT = equilibrium(T);
  double total = 0.0;
  for (std::size_t k = 0; k < 3; ++k) total += equilibrium_mass(eqT, single_band(T, k));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-11));
}
