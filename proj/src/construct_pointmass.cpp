#include "widomlab/construct_pointmass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace widomlab {

namespace {

struct SlitEvaluator {
  const BandSet& E_prev;
  double a;
  double pole;
  const SolveOptions& opt;
  std::vector<double> warm;

  double b_of(double u) const {
    const double s = std::exp(u);
    return s > 0.5 ? pole + (a - pole) * -std::expm1(u) : a - (a - pole) * s;
  }

  double omega(double b) {
    const BandSet E = merge(E_prev, make_bandset({{b, a}}));
    const auto hd = HarmonicDensity::solve(E, pole, opt, warm);
    warm.assign(hd.roots().begin(), hd.roots().end());
    return hd.mass(single_band(E, *E.band_containing(a)));
  }
};

}  // namespace

void validate(const PointmassConfig& cfg) {
  if (!(cfg.a0 > cfg.b1 && cfg.b1 > 0.0)) throw ValidationError("pointmass construction needs 0 < b1 < a0");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw ValidationError("omega tolerance must lie in (0, 1)");
  if (cfg.depth < 2) throw ValidationError("pointmass depth must be at least 2");
  if (cfg.depth > kPointmassDepthCap) {
    std::ostringstream os;
    os << "pointmass depth " << cfg.depth << " exceeds the double-precision cap " << kPointmassDepthCap;
    throw ValidationError(os.str());
  }
  if (cfg.max_halvings < 1) throw ValidationError("max_halvings must be positive");
}

double slit_measure(const BandSet& E_prev, double b, double a, double pole, const SolveOptions& opt) {
  SlitEvaluator ev{E_prev, a, pole, opt, {}};
  return ev.omega(b);
}

SlitSearch find_b(const BandSet& E_prev, double a_prev, double pole, double target, double tol,
                  const SolveOptions& opt) {
  if (!(pole < a_prev && a_prev < E_prev.lo())) throw DomainError("find_b needs pole < a_prev < every band");
  const double goal = target + 0.5 * tol;
  SlitEvaluator ev{E_prev, a_prev, pole, opt, {}};
  SlitSearch out;
  auto f = [&](double u) {
    const double b = ev.b_of(u);
    const double w = ev.omega(b);
    out.path.emplace_back(b, w);
    ++out.evaluations;
    return w - goal;
  };

  // Shortest slit still resolvable next to a_prev in doubles.
  const double s_min = std::max(1e-15, 64 * std::numeric_limits<double>::epsilon() * std::abs(a_prev) / (a_prev - pole));
  double u_lo = std::log(s_min), u_hi = std::log1p(-1e-9);
  double f_lo = f(u_lo), f_hi = f(u_hi);
  if (f_hi < 0.0) {
    std::ostringstream os;
    os << "slit harmonic measure stays below " << goal << " (reaches " << f_hi + goal
       << " with the slit next to the pole)";
    throw ConstructionError(os.str());
  }
  if (f_lo > 0.0) throw ConstructionError("slit harmonic measure exceeds the target even for a minimal slit");

  // Illinois variant of regula falsi in u = log s; omega increases with s.
  double u = u_hi, fu = f_hi;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    u = u_hi - f_hi * (u_hi - u_lo) / (f_hi - f_lo);
    if (!(u > u_lo && u < u_hi)) u = 0.5 * (u_lo + u_hi);
    fu = f(u);
    if (std::abs(fu) < 1e-14 || u_hi - u_lo < 1e-15 * std::max(1.0, std::abs(u))) break;
    if (fu > 0.0) {
      u_hi = u;
      f_hi = fu;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    } else {
      u_lo = u;
      f_lo = fu;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    }
  }
  if (!(std::abs(fu) <= 0.5 * tol)) {
    u = u_hi;
    fu = f(u);
  }
  out.s = std::exp(u);
  out.b = ev.b_of(u);
  out.omega = fu + goal;
  if (!(out.omega >= target && out.omega <= target + tol)) {
    std::ostringstream os;
    os << "slit search ended at omega = " << out.omega << ", outside [" << target << ", " << target + tol << "]";
    throw ConstructionError(os.str());
  }
  return out;
}

SlitChoice find_a(const BandSet& E_prev, double b_n, double ratio_floor, const PointmassConfig& cfg, double pole) {
  if (!(ratio_floor < 1.0)) {
    std::ostringstream os;
    os << "ratio floor " << ratio_floor << " leaves no admissible slit (ratio must lie in (floor, 1))";
    throw NumericalError(os.str());
  }
  SlitChoice last;
  for (int k = 1; k <= cfg.max_halvings; ++k) {
    const double a = pole + std::ldexp(b_n - pole, -k);
    if (!(a > pole)) break;
    SlitChoice c{a, find_b(E_prev, a, pole, cfg.target, cfg.tol, cfg.solve), 0.0, k};
    c.ratio = 1.0 - c.next.s;
    if (c.ratio > ratio_floor) return c;
    last = c;
  }
  std::ostringstream os;
  os.precision(6);
  os << "no slit with ratio above " << ratio_floor << " after " << cfg.max_halvings
     << " halvings (last a = " << last.a << ", ratio " << last.ratio << ")";
  throw NumericalError(os.str());
}

std::vector<double> ConstructionTrace::green_chain() const {
  std::vector<double> g{initial_green_at_0};
  for (const auto& s : steps) g.push_back(s.green_at_0);
  return g;
}

ConstructionTrace run_pointmass(const PointmassConfig& cfg) {
  validate(cfg);
  ConstructionTrace tr;
  tr.config = cfg;
  BandSet E = make_bandset({{cfg.b1, cfg.a0}});
  tr.initial_green_at_0 = green_value(equilibrium(E, cfg.solve), 0.0);
  double b_n = cfg.b1;
  double series = 0.0;
  double log_atom = 0.5 * std::log(cfg.b1 / cfg.a0);
  for (int n = 1; n <= cfg.depth; ++n) {
    const SlitChoice c = find_a(E, b_n, 1.0 - std::ldexp(1.0, -n), cfg);
    E = merge(E, make_bandset({{c.next.b, c.a}}));
    const auto eq = equilibrium(E, cfg.solve);
    PointmassStep st;
    st.n = n;
    st.a = c.a;
    st.b = c.next.b;
    st.omega = c.next.omega;
    st.ratio = c.ratio;
    st.s = c.next.s;
    st.halvings = c.halvings;
    st.green_at_0 = green_value(eq, 0.0);
    st.widom_partial = widom_sum(eq).sum;
    series += st.s / (1.0 - st.s);
    st.series_partial = series;
    log_atom += 0.5 * std::log1p(-st.s);
    st.atom_estimate = std::exp(log_atom);
    tr.steps.push_back(st);
    b_n = c.next.b;
  }
  tr.final_set = E;
  const auto eq = equilibrium(E, cfg.solve);
  // Gap (a_n, b_n) is the n-th gap from the right.
  for (int n = 1; n <= cfg.depth; ++n) {
    const double c = eq.roots[eq.roots.size() - n];
    tr.critical_points.push_back(c);
    tr.widom_terms.push_back(green_value(eq, c));
  }
  return tr;
}

std::vector<LemmaRow> verify_lemma_harmonic(const BandSet& E_fixed, const std::vector<double>& a_seq, double target,
                                            double tol, const SolveOptions& opt) {
  std::vector<LemmaRow> rows;
  for (double a : a_seq) {
    if (!(a > 0.0 && a < E_fixed.lo())) throw DomainError("each a must lie strictly between 0 and the fixed set");
    const SlitSearch s = find_b(E_fixed, a, 0.0, target, tol, opt);
    rows.push_back({a, s.b, 1.0 - s.s, s.omega});
  }
  return rows;
}

}  // namespace widomlab
