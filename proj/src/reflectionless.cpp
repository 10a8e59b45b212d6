#include "widomlab/reflectionless.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "product_form.hpp"

namespace widomlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Factors of R: zeros (z - x) and half factors (z - e)^(-1/2).
struct Factors {
  std::vector<double> zeros;
  std::vector<double> halves;
};

Factors factors(const ReflectionlessFn& f) {
  Factors fs;
  fs.halves = {f.a0(), f.b0()};
  for (std::size_t j = 0; j < f.E.gap_count(); ++j) {
    const Interval g = f.E.gap(j);
    fs.halves.push_back(g.lo);
    fs.halves.push_back(g.hi);
    fs.zeros.push_back(f.divisor.points[j]);
  }
  if (f.anchor) {
    fs.halves.push_back(f.E.lo());
    fs.halves.push_back(*f.anchor);
    fs.zeros.push_back(f.E.lo());
  }
  return fs;
}

detail::ProductForm density_form(const ReflectionlessFn& f) {
  detail::ProductForm pf;
  pf.log_scale = -std::log(kPi);
  pf.zeros = f.divisor.points;
  pf.half_poles = f.E.endpoints();
  if (f.anchor) {
    pf.zeros.push_back(f.E.lo());
    pf.half_poles.push_back(*f.anchor);
    pf.half_poles.push_back(*f.anchor);
  }
  return pf;
}

void check_off_support(const ReflectionlessFn& f, double x) {
  if (f.E.band_containing(x)) throw DomainError("R is evaluated on the bands only through boundary_density");
  if (f.anchor && x == *f.anchor) throw DomainError("R has a pole at the anchor");
}

}  // namespace

ReflectionlessFn make_reflectionless(BandSet E, Divisor divisor, std::optional<double> anchor) {
  validate_divisor(E, divisor);
  if (anchor && !(std::isfinite(*anchor) && *anchor < E.lo())) {
    throw DomainError("anchor must be a finite point left of the bands");
  }
  return {std::move(E), std::move(divisor), anchor};
}

double eval_R_real(const ReflectionlessFn& f, double x) {
  check_off_support(f, x);
  const Factors fs = factors(f);
  double logmag = 0.0;
  int half_turns = 2;  // the leading minus sign
  for (double z : fs.zeros) {
    logmag += std::log(std::abs(x - z));
    if (x < z) half_turns += 2;
  }
  for (double h : fs.halves) {
    logmag -= 0.5 * std::log(std::abs(x - h));
    if (x < h) half_turns -= 1;
  }
  // Off the bands the half turns pair up.
  const double sign = ((half_turns / 2) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(logmag);
}

cplx eval_R(const ReflectionlessFn& f, cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("R needs a finite argument");
  if (z.imag() == 0.0) return eval_R_real(f, z.real());
  const Factors fs = factors(f);
  cplx s{0.0, kPi};
  for (double x : fs.zeros) s += std::log(z - x);
  for (double h : fs.halves) s -= 0.5 * std::log(z - h);
  return std::exp(s);
}

double boundary_density(const ReflectionlessFn& f, const IntervalPoint& p) {
  return std::exp(density_form(f).log_abs(p));
}

double boundary_density(const ReflectionlessFn& f, double x) {
  const auto k = f.E.band_containing(x);
  if (!k || !f.E.band(*k).contains_open(x)) throw DomainError("boundary density needs a band interior point");
  return boundary_density(f, IntervalPoint::at(f.E.band(*k), x));
}

double measure_mass(const ReflectionlessFn& f, const ArcSelection& arcs, const AdaptiveOptions& opt) {
  validate_arcs(f.E, arcs);
  const detail::ProductForm pf = density_form(f);
  double total = 0.0;
  for (const auto& piece : arcs.pieces) {
    const Interval& b = f.E.band(piece.band);
    auto h = [&](const IntervalPoint& p) { return std::exp(pf.log_abs(p, b.lo, b.hi)); };
    total += integrate_arcsine(h, b, piece.arc.lo - b.lo, b.hi - piece.arc.hi, opt).value;
  }
  return total;
}

GFunction g_function(const ReflectionlessFn& f) {
  GFunction g;
  for (std::size_t k = 0; k < f.E.band_count(); ++k) {
    g.pieces.push_back({f.E.band(k), kPi / 2});
    if (k + 1 < f.E.band_count()) {
      const Interval gap = f.E.gap(k);
      const double x = f.divisor.points[k];
      if (x < gap.hi) g.pieces.push_back({{x, gap.hi}, kPi});
    }
  }
  return g;
}

cplx exp_representation(const GFunction& g, double b0, cplx z) {
  if (z == cplx(b0, 0.0)) throw DomainError("exp representation has a pole at b0");
  if (z.imag() == 0.0) {
    for (const auto& p : g.pieces) {
      if (p.support.contains(z.real())) throw DomainError("exp representation is evaluated off the support of g");
    }
  }
  cplx s = 0.0;
  for (const auto& p : g.pieces) s += p.level * std::log((p.support.hi - z) / (p.support.lo - z));
  return -std::exp(-s / kPi) / (z - b0);
}

double atom_mass_closed_form(const ReflectionlessFn& f) {
  if (!f.anchor) throw DomainError("atom mass needs an anchor point left of the bands");
  const double b0 = *f.anchor;
  double s = 0.0;
  for (const auto& p : g_function(f).pieces) {
    s += p.level * std::log1p(p.support.length() / (p.support.lo - b0));
  }
  return std::exp(-s / kPi);
}

PointmassSeries pointmass_series(const std::vector<std::pair<double, double>>& endpoints, double b0, double q,
                                 std::size_t window) {
  PointmassSeries out;
  double sum = 0.0;
  for (std::size_t j = 0; j < endpoints.size(); ++j) {
    const auto [a, x] = endpoints[j];
    const bool ordered = x > b0 && x <= a &&
                         (j == 0 || (a < endpoints[j - 1].first && x < endpoints[j - 1].second));
    if (!ordered) {
      std::ostringstream os;
      os << "endpoint pair " << j << " breaks the ordering b0 < x_{j+1} <= a_j, decreasing in j";
      throw ValidationError(os.str());
    }
    const double term = (a - x) / (x - b0);
    out.terms.push_back(term);
    sum += term;
    out.partial_sums.push_back(sum);
  }
  const std::size_t n = out.terms.size();
  if (window > 0 && n > window) {
    out.converged_heuristic = true;
    for (std::size_t i = n - window; i < n; ++i) {
      const double prev = out.terms[i - 1], cur = out.terms[i];
      if (prev == 0.0 ? cur != 0.0 : cur / prev > q) out.converged_heuristic = false;
    }
  }
  return out;
}

NevanlinnaReport nevanlinna_check(const ReflectionlessFn& f, const std::vector<cplx>& grid) {
  NevanlinnaReport rep{INFINITY, INFINITY};
  for (const cplx z : grid) {
    if (!(z.imag() > 0.0)) throw DomainError("Nevanlinna grid must lie in the open upper half plane");
    const cplx R = eval_R(f, z);
    rep.min_im_R = std::min(rep.min_im_R, R.imag());
    rep.min_im_shifted = std::min(rep.min_im_shifted, ((z - f.b0()) * R).imag());
  }
  return rep;
}

MeasureOnBands reflectionless_measure(const ReflectionlessFn& f) {
  MeasureOnBands m;
  m.density = [pf = density_form(f)](const IntervalPoint& p) { return std::exp(pf.log_abs(p)); };
  if (f.anchor) m.atoms.push_back({*f.anchor, atom_mass_closed_form(f)});
  return m;
}

ReflectivityReport classify_reflectionless(const MeasureOnBands& m, const BandSet& E, std::size_t sample_count,
                                           double tol) {
  if (sample_count == 0) throw ValidationError("sample count must be positive");
  ReflectivityReport rep;
  for (const auto& b : E.bands()) {
    const double margin = 1e-3 * b.length();
    const double span = b.length() - 2 * margin;
    for (std::size_t j = 0; j < sample_count; ++j) {
      const double x = b.lo + margin + span * (j + 0.5) / sample_count;
      double re = pv_cauchy(m.density, E, x);
      for (const auto& a : m.atoms) re += a.mass / (a.location - x);
      if (std::abs(re) > rep.max_abs_re) {
        rep.max_abs_re = std::abs(re);
        rep.worst_x = x;
      }
      ++rep.samples;
    }
  }
  rep.verdict = rep.max_abs_re < tol;
  return rep;
}

}  // namespace widomlab
