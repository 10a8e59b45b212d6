#include "widomlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>

namespace widomlab {

namespace {

constexpr double kPi = std::numbers::pi;

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double check_finite(double v, double where) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand is not finite at t = " << where;
    throw NumericalError(os.str());
  }
  return v;
}

double fixed_gl(const RealFn& g, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double m = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += rule.weights[i] * g(m + r * rule.nodes[i]);
  return s * r;
}

}  // namespace

IntervalPoint IntervalPoint::at(const Interval& I, double t) {
  return {I.lo, I.hi, t - I.lo, I.hi - t};
}

void validate(const QuadratureSpec& spec) {
  if (spec.order < 4) throw ValidationError("quadrature order must be at least 4");
  if (!(spec.refine_tol > 0.0)) throw ValidationError("refinement tolerance must be positive");
  if (spec.max_refinements < 0) throw ValidationError("refinement cap must be nonnegative");
}

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw ValidationError("Gauss-Legendre order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(compute_gauss_legendre(n));
  return *slot;
}

double integrate_chebyshev(const RealFn& f, const Interval& I, int n) {
  if (n < 4) throw ValidationError("Chebyshev order must be at least 4");
  const double m = I.center(), r = 0.5 * I.length();
  double s = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double t = m + r * std::cos((2.0 * k - 1.0) * kPi / (2.0 * n));
    s += check_finite(f(t), t);
  }
  return kPi / n * s;
}

double integrate_one_sided(const RealFn& f, const Interval& I, SingularEnd end, const QuadratureSpec& spec) {
  validate(spec);
  const double U = std::sqrt(I.length());
  auto g = [&](double u) {
    const double t = end == SingularEnd::lo ? I.lo + u * u : I.hi - u * u;
    return 2.0 * check_finite(f(t), t);
  };
  // Panels [0, U/2^K], [U/2^K, U/2^(K-1)], ..., [U/2, U].
  auto composite = [&](int K) {
    double s = 0.0;
    double a = 0.0;
    for (int k = K; k >= 0; --k) {
      const double b = U / std::ldexp(1.0, k);
      s += fixed_gl(g, a, b, spec.order);
      a = b;
    }
    return s;
  };
  double prev = composite(0);
  if (spec.policy == PanelPolicy::fixed) return prev;
  for (int K = 1; K <= spec.max_refinements; ++K) {
    const double cur = composite(K);
    if (std::abs(cur - prev) <= spec.refine_tol * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

AdaptiveResult integrate_adaptive(const RealFn& g, double a, double b, const AdaptiveOptions& opt) {
  struct Panel {
    double a, b, value, error, magnitude;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  const auto& g20 = gauss_legendre(20);
  const auto& g10 = gauss_legendre(10);
  auto eval = [&](double pa, double pb) {
    const double m = 0.5 * (pa + pb), r = 0.5 * (pb - pa);
    double s20 = 0.0, s10 = 0.0, mag = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double t = m + r * g20.nodes[i];
      const double v = check_finite(g(t), t);
      s20 += g20.weights[i] * v;
      mag += g20.weights[i] * std::abs(v);
    }
    for (int i = 0; i < 10; ++i) {
      const double t = m + r * g10.nodes[i];
      s10 += g10.weights[i] * check_finite(g(t), t);
    }
    return Panel{pa, pb, s20 * r, std::abs(s20 - s10) * std::abs(r), mag * std::abs(r)};
  };

  std::priority_queue<Panel> heap;
  Panel first = eval(a, b);
  heap.push(first);
  double value = first.value, error = first.error, magnitude = first.magnitude;
  int panels = 1;
  AdaptiveResult res;
  auto resum = [&] {
    value = error = magnitude = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      magnitude += copy.top().magnitude;
      copy.pop();
    }
  };
  for (;;) {
    const double target = std::max({opt.abs_tol, opt.rel_tol * std::abs(value), 4e-16 * magnitude});
    if (error <= target || panels >= opt.max_panels) {
      resum();
      res.value = value;
      res.error = error;
      res.converged = error <= std::max({opt.abs_tol, opt.rel_tol * std::abs(value), 4e-16 * magnitude});
      if (res.converged || panels >= opt.max_panels) return res;
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) {
      heap.push(worst);
      resum();
      return {value, error, false};
    }
    const Panel left = eval(worst.a, mid), right = eval(mid, worst.b);
    heap.push(left);
    heap.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    magnitude += left.magnitude + right.magnitude - worst.magnitude;
    ++panels;
  }
}

AdaptiveResult integrate_arcsine(const PointFn& h, const Interval& I, double skip_lo, double skip_hi,
                                 const AdaptiveOptions& opt) {
  const double L = I.length();
  if (skip_lo < 0.0 || skip_hi < 0.0 || skip_lo + skip_hi > L) throw DomainError("arcsine sub-range is empty");
  const double half = 0.5 * L;
  auto angle = [L](double d) { return 2.0 * std::asin(std::sqrt(std::clamp(d / L, 0.0, 1.0))); };
  auto lower = [&](double th) {
    const double s = std::sin(0.5 * th), c = std::cos(0.5 * th);
    return h(IntervalPoint{I.lo, I.hi, L * s * s, L * c * c});
  };
  auto upper = [&](double ph) {
    const double s = std::sin(0.5 * ph), c = std::cos(0.5 * ph);
    return h(IntervalPoint{I.lo, I.hi, L * c * c, L * s * s});
  };
  const double quarter = 0.5 * std::numbers::pi;
  AdaptiveResult out{0.0, 0.0, true};
  auto add = [&](const AdaptiveResult& r) {
    out.value += r.value;
    out.error += r.error;
    out.converged = out.converged && r.converged;
  };
  if (skip_lo <= half && skip_hi <= half) {
    add(integrate_adaptive(lower, angle(skip_lo), quarter, opt));
    add(integrate_adaptive(upper, angle(skip_hi), quarter, opt));
  } else if (skip_hi > half) {
    add(integrate_adaptive(lower, angle(skip_lo), angle(L - skip_hi), opt));
  } else {
    add(integrate_adaptive(upper, angle(skip_hi), angle(L - skip_lo), opt));
  }
  return out;
}

AdaptiveResult integrate_sqrt_end(const PointFn& h, const Interval& I, SingularEnd end,
                                  const AdaptiveOptions& opt) {
  const double L = I.length();
  auto g = [&](double u) {
    const double d = u * u;
    const IntervalPoint p = end == SingularEnd::lo ? IntervalPoint{I.lo, I.hi, d, L - d}
                                                   : IntervalPoint{I.lo, I.hi, L - d, d};
    return 2.0 * h(p);
  };
  return integrate_adaptive(g, 0.0, std::sqrt(L), opt);
}

double pv_cauchy(const PointFn& w, const BandSet& E, double x, const PvOptions& opt) {
  const auto host = E.band_containing(x);
  if (!host) throw DomainError("principal value point lies outside the bands");
  const Interval& B = E.band(*host);
  const double delta = opt.delta_min_rel * B.length();
  if (x - B.lo < delta || B.hi - x < delta) {
    std::ostringstream os;
    os.precision(6);
    os << "principal value point is within " << delta
       << " of a band end; move it inward or lower delta_min_rel";
    throw NumericalError(os.str());
  }

  const IntervalPoint px = IntervalPoint::at(B, x);
  const double wx = w(px);
  AdaptiveOptions aopt = opt.adaptive;
  aopt.abs_tol = std::max(aopt.abs_tol, 1e-15 * (1.0 + std::abs(wx) * B.length()));

  double total = wx * std::log((B.hi - x) / (x - B.lo));
  auto subtracted = [&](const IntervalPoint& p) {
    const double jac = std::sqrt(p.from_lo * p.to_hi);
    const double d = p.minus(x);
    if (d == 0.0) return 0.0;
    return (w(p) - wx) * jac / d;
  };
  total += integrate_arcsine(subtracted, B, 0.0, B.hi - x, aopt).value;
  total += integrate_arcsine(subtracted, B, x - B.lo, 0.0, aopt).value;

  for (std::size_t k = 0; k < E.band_count(); ++k) {
    if (k == *host) continue;
    const Interval& other = E.band(k);
    auto regular = [&](const IntervalPoint& p) { return w(p) * std::sqrt(p.from_lo * p.to_hi) / p.minus(x); };
    total += integrate_arcsine(regular, other, 0.0, 0.0, aopt).value;
  }
  return total;
}

}  // namespace widomlab
