#include "widomlab/potential.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "product_form.hpp"

namespace widomlab {

namespace {

constexpr double kPi = std::numbers::pi;

detail::ProductForm base_form(const std::vector<double>& ends, Pole pole) {
  detail::ProductForm pf;
  pf.half_poles = ends;
  if (pole) {
    pf.half_poles.push_back(*pole);
    pf.half_poles.push_back(*pole);
  }
  return pf;
}

// Per-gap data for the period conditions with the gap's own root factored out:
// the integrand is sign * h(p) * (t - c_j), h > 0 on the gap.
struct GapWeight {
  Interval gap;
  double sign = 1.0;
  detail::ProductForm pf;

  double h(const IntervalPoint& p) const { return std::exp(pf.log_abs(p, gap.lo, gap.hi)); }
};

GapWeight gap_weight(const BandSet& E, const std::vector<double>& ends, Pole pole,
                     const std::vector<double>& roots, std::size_t j) {
  GapWeight gw;
  gw.gap = E.gap(j);
  gw.pf = base_form(ends, pole);
  for (std::size_t m = 0; m < roots.size(); ++m) {
    if (m != j) gw.pf.zeros.push_back(roots[m]);
  }
  const IntervalPoint mid = IntervalPoint::at(gw.gap, gw.gap.center());
  gw.pf.log_scale = -gw.pf.log_abs(mid, gw.gap.lo, gw.gap.hi);
  gw.sign = gw.pf.zero_sign(mid);
  if (pole && mid.minus(*pole) < 0.0) gw.sign = -gw.sign;
  return gw;
}

std::vector<double> expand_monic(std::span<const double> roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace

HarmonicDensity HarmonicDensity::solve(const BandSet& E, Pole pole, const SolveOptions& opt,
                                       std::span<const double> warm_roots) {
  if (pole && !std::isfinite(*pole)) pole.reset();
  if (pole && *pole >= E.lo() && *pole <= E.hi()) {
    throw DomainError("pole must lie outside the convex hull of E; poles in gaps go through harmonic_measure");
  }
  HarmonicDensity hd;
  hd.E_ = E;
  hd.pole_ = pole;
  hd.ends_ = E.endpoints();
  const std::size_t N = E.gap_count();

  std::vector<double> c(N);
  for (std::size_t j = 0; j < N; ++j) {
    const Interval g = E.gap(j);
    const bool warm_ok = warm_roots.size() == N && g.contains_open(warm_roots[j]);
    c[j] = warm_ok ? warm_roots[j] : g.center();
  }

  std::vector<double> residual(N, 0.0);
  auto gauss_seidel = [&] {
    for (std::size_t j = 0; j < N; ++j) {
      const GapWeight gw = gap_weight(E, hd.ends_, pole, c, j);
      const double B = integrate_arcsine([&](const IntervalPoint& p) { return gw.h(p); }, gw.gap, 0, 0, opt.quad).value;
      const double M = integrate_arcsine([&](const IntervalPoint& p) { return gw.h(p) * p.minus(gw.gap.lo); },
                                         gw.gap, 0, 0, opt.quad)
                           .value;
      c[j] = gw.gap.lo + std::clamp(M / B, 0.0, gw.gap.length());
      if (!gw.gap.contains_open(c[j])) c[j] = gw.gap.center();
    }
  };

  int iter = 0;
  if (N > 0) {
    if (warm_roots.size() != N) {
      gauss_seidel();
      gauss_seidel();
    }
    double last_step = 1.0, best = INFINITY;
    int stalled = 0;
    for (; iter < opt.max_iterations; ++iter) {
      Eigen::MatrixXd J(N, N);
      Eigen::VectorXd F(N);
      for (std::size_t j = 0; j < N; ++j) {
        const GapWeight gw = gap_weight(E, hd.ends_, pole, c, j);
        const double len = gw.gap.length();
        const double B = integrate_arcsine([&](const IntervalPoint& p) { return gw.h(p); }, gw.gap, 0, 0, opt.quad).value;
        AdaptiveOptions cancel = opt.quad;
        cancel.abs_tol = 1e-15 * len * B;
        const double Fj = integrate_arcsine([&](const IntervalPoint& p) { return gw.h(p) * p.minus(c[j]); }, gw.gap,
                                            0, 0, cancel)
                              .value;
        const double scale = len * B;
        F(j) = gw.sign * Fj / scale;
        residual[j] = std::abs(Fj) / scale;
        for (std::size_t k = 0; k < N; ++k) {
          double Jjk;
          if (k == j) {
            Jjk = -B;
          } else {
            // Jacobian accuracy only sets the Newton rate, so a loose tolerance suffices.
            const double ck = c[k];
            AdaptiveOptions jopt{1e-8, 1e-9 * scale / E.gap(k).length(), opt.quad.max_panels};
            Jjk = -integrate_arcsine([&](const IntervalPoint& p) { return gw.h(p) * p.minus(c[j]) / p.minus(ck); },
                                     gw.gap, 0, 0, jopt)
                       .value;
          }
          J(j, k) = gw.sign * Jjk * E.gap(k).length() / scale;
        }
      }
      const double worst = *std::max_element(residual.begin(), residual.end());
      if (worst < 1e-14 || last_step < 1e-15) break;
      // Rounding floor: no halving of the residual over three iterations.
      stalled = worst > 0.5 * best ? stalled + 1 : 0;
      best = std::min(best, worst);
      if (stalled >= 3 && worst <= 1e-2 * opt.residual_tol) break;

      Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
      const double rcond = lu.rcond();
      if (!(rcond > 1e-15)) {
        std::ostringstream os;
        os << "period-condition system is singular or ill-conditioned (condition estimate " << 1.0 / rcond << ")";
        throw NumericalError(os.str());
      }
      const Eigen::VectorXd dy = lu.solve(-F);
      double lambda = 1.0;
      std::vector<double> trial(N);
      for (int damp = 0; damp < 60; ++damp) {
        bool inside = true;
        for (std::size_t k = 0; k < N && inside; ++k) {
          trial[k] = c[k] + lambda * dy(k) * E.gap(k).length();
          inside = E.gap(k).contains_open(trial[k]);
        }
        if (inside) break;
        lambda *= 0.5;
      }
      last_step = 0.0;
      for (std::size_t k = 0; k < N; ++k) last_step = std::max(last_step, std::abs(lambda * dy(k)));
      c = trial;
    }
    hd.max_residual_ = *std::max_element(residual.begin(), residual.end());
    if (!(hd.max_residual_ <= opt.residual_tol)) {
      std::ostringstream os;
      os << "period conditions not met: residual " << hd.max_residual_ << " after " << iter << " iterations";
      throw NumericalError(os.str());
    }
  }
  hd.iterations_ = iter;
  hd.roots_ = c;

  if (pole) {
    double s = 0.0;
    for (double e : hd.ends_) s += 0.5 * std::log(std::abs(*pole - e));
    for (double r : c) s -= std::log(std::abs(*pole - r));
    hd.log_scale_ = s;
  }
  return hd;
}

double HarmonicDensity::density(const IntervalPoint& p) const {
  detail::ProductForm pf = base_form(ends_, pole_);
  pf.zeros = roots_;
  pf.log_scale = log_scale_;
  return std::exp(pf.log_abs(p)) / kPi;
}

double HarmonicDensity::density(double t) const {
  const auto k = E_.band_containing(t);
  if (!k || !E_.band(*k).contains_open(t)) throw DomainError("density requested outside the open bands");
  return density(IntervalPoint::at(E_.band(*k), t));
}

double HarmonicDensity::mass(const ArcSelection& arcs, const AdaptiveOptions& opt) const {
  validate_arcs(E_, arcs);
  detail::ProductForm pf = base_form(ends_, pole_);
  pf.zeros = roots_;
  pf.log_scale = log_scale_ - std::log(kPi);
  double total = 0.0;
  for (const auto& piece : arcs.pieces) {
    const Interval& b = E_.band(piece.band);
    auto h = [&](const IntervalPoint& p) { return std::exp(pf.log_abs(p, b.lo, b.hi)); };
    total += integrate_arcsine(h, b, piece.arc.lo - b.lo, b.hi - piece.arc.hi, opt).value;
  }
  return total;
}

double HarmonicDensity::differential(const IntervalPoint& p, double skip_a, double skip_b) const {
  detail::ProductForm pf = base_form(ends_, pole_);
  pf.zeros = roots_;
  pf.log_scale = log_scale_;
  double sign = pf.zero_sign(p);
  if (pole_ && p.minus(*pole_) < 0.0) sign = -sign;
  return sign * std::exp(pf.log_abs(p, skip_a, skip_b));
}

EquilibriumData equilibrium(const BandSet& E, const SolveOptions& opt) {
  EquilibriumData eq{E, {}, {}, HarmonicDensity::solve(E, std::nullopt, opt)};
  eq.roots.assign(eq.density.roots().begin(), eq.density.roots().end());
  eq.poly_coeffs = expand_monic(eq.roots);
  for (std::size_t j = 0; j < eq.roots.size(); ++j) {
    if (!E.gap(j).contains_open(eq.roots[j])) throw NumericalError("critical point not bracketed by its gap");
  }
  return eq;
}

double equilibrium_density(const EquilibriumData& eq, double t) { return eq.density.density(t); }

double equilibrium_mass(const EquilibriumData& eq, const ArcSelection& arcs) { return eq.density.mass(arcs); }

double green_value(const EquilibriumData& eq, double x, const AdaptiveOptions& opt) {
  const BandSet& E = eq.source;
  if (!std::isfinite(x)) throw DomainError("Green value needs a finite point");
  if (const auto k = E.band_containing(x)) {
    const Interval& b = E.band(*k);
    if (x == b.lo || x == b.hi) return 0.0;
    throw DomainError("Green value requested inside a band");
  }
  const HarmonicDensity& hd = eq.density;
  if (const auto j = E.gap_containing(x)) {
    const Interval g = E.gap(*j);
    auto h = [&](const IntervalPoint& p) { return hd.differential(p, g.lo, g.hi); };
    const double v = (x - g.lo <= g.hi - x) ? integrate_arcsine(h, g, 0.0, g.hi - x, opt).value
                                            : integrate_arcsine(h, g, x - g.lo, 0.0, opt).value;
    return std::abs(v);
  }
  if (x > E.hi()) {
    const Interval I{E.hi(), x};
    auto h = [&](const IntervalPoint& p) { return hd.differential(p, E.hi()); };
    return std::abs(integrate_sqrt_end(h, I, SingularEnd::lo, opt).value);
  }
  const Interval I{x, E.lo()};
  auto h = [&](const IntervalPoint& p) { return hd.differential(p, E.lo()); };
  return std::abs(integrate_sqrt_end(h, I, SingularEnd::hi, opt).value);
}

WidomSum widom_sum(const EquilibriumData& eq) {
  WidomSum ws;
  for (double c : eq.roots) {
    const double g = green_value(eq, c);
    ws.terms.push_back(g);
    ws.sum += g;
  }
  return ws;
}

HarmonicMeasureResult harmonic_measure(const BandSet& E, Pole pole, const ArcSelection& arc,
                                       const SolveOptions& opt) {
  validate_arcs(E, arc);
  if (pole && !std::isfinite(*pole)) pole.reset();
  HarmonicMeasureResult res{0.0, pole, arc};
  double value;
  if (!pole) {
    value = HarmonicDensity::solve(E, std::nullopt, opt).mass(arc);
  } else if (E.band_containing(*pole)) {
    throw DomainError("harmonic measure pole lies on E");
  } else if (*pole < E.lo() || *pole > E.hi()) {
    value = HarmonicDensity::solve(E, pole, opt).mass(arc);
  } else {
    // Center a Möbius map in the pole's gap; that gap becomes unbounded.
    const Interval g = E.gap(*E.gap_containing(*pole));
    const double far = (*pole - g.lo > g.hi - *pole) ? g.lo : g.hi;
    const double q = 0.5 * (*pole + far);
    const MobiusImage img = mobius_invert(E, q);
    value = HarmonicDensity::solve(img.image, img.forward(*pole), opt).mass(img.map_arcs(arc));
  }
  res.value = std::clamp(value, 0.0, 1.0);
  return res;
}

bool bands_contained(const BandSet& inner, const BandSet& outer) {
  for (const auto& b : inner.bands()) {
    const bool ok = std::any_of(outer.bands().begin(), outer.bands().end(),
                                [&](const Interval& o) { return o.lo <= b.lo && b.hi <= o.hi; });
    if (!ok) return false;
  }
  return true;
}

bool domain_monotonicity_check(const BandSet& E, const BandSet& E_larger, double x) {
  if (!bands_contained(E, E_larger)) throw ValidationError("smaller set is not contained in the larger one");
  if (E_larger.band_containing(x)) throw DomainError("comparison point lies on the larger set");
  const double g_small = green_value(equilibrium(E), x);
  const double g_large = green_value(equilibrium(E_larger), x);
  return g_large <= g_small + 1e-9;
}

}  // namespace widomlab
