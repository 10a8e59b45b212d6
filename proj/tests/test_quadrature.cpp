#include <cmath>
#include <numbers>

#include "doctest.h"
#include "widomlab/quadrature.hpp"

using namespace widomlab;

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  const auto& g = gauss_legendre(10);
  double s = 0.0;
  for (int i = 0; i < 10; ++i) s += g.weights[i] * std::pow(g.nodes[i], 18);
  CHECK(s == doctest::Approx(2.0 / 19.0).epsilon(1e-14));
}

TEST_CASE("Chebyshev rule for exp over [-1,1]") {
  // pi * I0(1), I0 from its power series.
  double i0 = 0.0, term = 1.0;
  for (int k = 0; k < 30; ++k) {
    if (k > 0) term /= 4.0 * k * k;
    i0 += term;
  }
  const double v = integrate_chebyshev([](double t) { return std::exp(t); }, {-1.0, 1.0}, 24);
  CHECK(v == doctest::Approx(std::numbers::pi * i0).epsilon(1e-14));
  CHECK_THROWS_AS(integrate_chebyshev([](double) { return 1.0; }, {-1.0, 1.0}, 2), ValidationError);
}

TEST_CASE("one-sided inverse square root weight") {
  QuadratureSpec spec;
  const double v = integrate_one_sided([](double t) { return 1.0 / (2.0 - t); }, {0.0, 1.0}, SingularEnd::lo, spec);
  CHECK(v == doctest::Approx(2.0 * std::atanh(1.0 / std::sqrt(2.0)) / std::sqrt(2.0)).epsilon(1e-12));
  const double w = integrate_one_sided([](double) { return 1.0; }, {0.0, 4.0}, SingularEnd::hi, spec);
  CHECK(w == doctest::Approx(4.0).epsilon(1e-14));
  spec.order = 2;
  CHECK_THROWS_AS(validate(spec), ValidationError);
}

TEST_CASE("arcsine integration with skipped ends") {
  const Interval I{2.0, 5.0};
  auto one = [](const IntervalPoint&) { return 1.0; };
  CHECK(integrate_arcsine(one, I).value == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  // Mass of [2, 2 + d] under dt / sqrt((t-2)(5-t)) is 2 asin(sqrt(d/3)).
  for (double d : {1e-12, 0.7, 2.9}) {
    const double skip = 3.0 - d;
    const double kept = 3.0 - skip;
    const double v = integrate_arcsine(one, I, 0.0, skip).value;
    CHECK(v == doctest::Approx(2.0 * std::asin(std::sqrt(kept / 3.0))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(integrate_arcsine(one, I, 2.0, 2.0), DomainError);
}

TEST_CASE("principal value against closed forms") {
  const BandSet E = make_bandset({{-1.0, 1.0}});
  // pv of 1/(pi sqrt(1-t^2)) / (t - x) over [-1,1] is zero inside.
  auto arcsine = [](const IntervalPoint& p) { return 1.0 / (std::numbers::pi * std::sqrt(p.from_lo * p.to_hi)); };
  for (double x : {-0.7, 0.0, 0.3}) CHECK(std::abs(pv_cauchy(arcsine, E, x)) < 1e-12);
  // pv of 1/(t - x) over [-1,1] is log((1-x)/(1+x)).
  auto flat = [](const IntervalPoint&) { return 1.0; };
  CHECK(pv_cauchy(flat, E, 0.4) == doctest::Approx(std::log(0.6 / 1.4)).epsilon(1e-12));
  // A second band contributes log((b-x)/(a-x)).
  const BandSet F = make_bandset({{-1.0, 1.0}, {2.0, 3.0}});
  CHECK(pv_cauchy(flat, F, 0.4) == doctest::Approx(std::log(0.6 / 1.4) + std::log(2.6 / 1.6)).epsilon(1e-12));
  CHECK_THROWS_AS(pv_cauchy(flat, E, 1.0 - 1e-9), NumericalError);
  CHECK_THROWS_AS(pv_cauchy(flat, E, 1.5), DomainError);
}
