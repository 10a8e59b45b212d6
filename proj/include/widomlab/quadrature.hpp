#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "widomlab/bandset.hpp"

namespace widomlab {

/// A point of an interval [lo, hi] carried together with its distances to
/// both ends. Distances are kept separately so that integrands can form
/// t - lo and hi - t without cancellation near the endpoints.
struct IntervalPoint {
  double lo = 0.0;
  double hi = 0.0;
  double from_lo = 0.0;
  double to_hi = 0.0;

  double t() const { return from_lo <= to_hi ? lo + from_lo : hi - to_hi; }
  /// t - e, anchored at whichever end of the interval is nearer to t.
  double minus(double e) const { return from_lo <= to_hi ? (lo - e) + from_lo : (hi - e) - to_hi; }

  static IntervalPoint at(const Interval& I, double t);
};

using RealFn = std::function<double(double)>;
using PointFn = std::function<double(const IntervalPoint&)>;

enum class PanelPolicy { fixed, dyadic };
enum class SingularEnd { lo, hi };

struct QuadratureSpec {
  int order = 64;
  PanelPolicy policy = PanelPolicy::dyadic;
  double refine_tol = 1e-10;
  int max_refinements = 12;
};

void validate(const QuadratureSpec& spec);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]. Cached; safe to call concurrently.
const GaussRule& gauss_legendre(int n);

/// (pi/n) * sum f(m + r cos((2k-1) pi / 2n)), the n-point Gauss-Chebyshev rule
/// for the integral of f(t) / sqrt((t - lo)(hi - t)) over I. Exact for
/// polynomials of degree up to 2n - 1.
double integrate_chebyshev(const RealFn& f, const Interval& I, int n);

/// Integral of f(t) / sqrt|t - e| over I, e the chosen endpoint, via
/// t = e +/- u^2 and Gauss-Legendre panels in u. With the dyadic policy the
/// panels are refined geometrically toward u = 0 until two successive
/// refinements agree to spec.refine_tol.
double integrate_one_sided(const RealFn& f, const Interval& I, SingularEnd end, const QuadratureSpec& spec);

struct AdaptiveOptions {
  double rel_tol = 1e-13;
  double abs_tol = 0.0;
  int max_panels = 6000;
};

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

/// Globally adaptive bisection with 20-point Gauss-Legendre panels; the
/// panel error is estimated against the 10-point rule.
AdaptiveResult integrate_adaptive(const RealFn& g, double a, double b, const AdaptiveOptions& opt = {});

/// Integral of h(p) / sqrt((t - lo)(hi - t)) over [lo + skip_lo, hi - skip_hi].
///
/// Uses t = m - r cos(theta); the lower half of I is parametrized from lo and
/// the upper half from hi so that distances to both ends stay accurate.
/// Inverse square root behavior at either end of I is integrated exactly.
AdaptiveResult integrate_arcsine(const PointFn& h, const Interval& I, double skip_lo = 0.0, double skip_hi = 0.0,
                                 const AdaptiveOptions& opt = {});

/// Integral of h(p) / sqrt|t - e| over I for e the chosen end (u = sqrt|t - e|).
AdaptiveResult integrate_sqrt_end(const PointFn& h, const Interval& I, SingularEnd end,
                                  const AdaptiveOptions& opt = {});

struct PvOptions {
  /// Minimum distance of x to the ends of its band, relative to band length.
  double delta_min_rel = 1e-6;
  AdaptiveOptions adaptive{1e-13, 0.0, 6000};
};

/// Principal value of the integral of w(t) / (t - x) over E, for x strictly
/// inside a band. The host band is handled by singularity subtraction,
///   int (w(t) - w(x)) / (t - x) dt + w(x) log((hi - x) / (x - lo)),
/// evaluated in the angle variable so that inverse square root behavior of w
/// at band ends is integrated exactly.
double pv_cauchy(const PointFn& w, const BandSet& E, double x, const PvOptions& opt = {});

}  // namespace widomlab
