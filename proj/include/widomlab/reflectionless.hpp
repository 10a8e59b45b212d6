#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "widomlab/bandset.hpp"
#include "widomlab/quadrature.hpp"

namespace widomlab {

using cplx = std::complex<double>;

/// R(z) = -(1/s_0(z)) prod_j (z - x_j) / s_j(z), with s_0 cut along the hull
/// [b0, a0] and s_j along the j-th bounded gap (a_j, b_j), so that R is real
/// on the gaps and purely imaginary on the bands.
///
/// With an anchor b0 left of the bands the hull becomes [b0, a0] and the extra
/// gap (b0, lo E) gets its divisor point at lo E. Then R has a simple pole at
/// b0, i.e. the measure carries an atom there.
struct ReflectionlessFn {
  BandSet E;
  Divisor divisor;
  std::optional<double> anchor;

  double b0() const { return anchor ? *anchor : E.lo(); }
  double a0() const { return E.hi(); }
};

ReflectionlessFn make_reflectionless(BandSet E, Divisor divisor, std::optional<double> anchor = std::nullopt);

cplx eval_R(const ReflectionlessFn& f, cplx z);
/// R on a gap or outside the hull; real there.
double eval_R_real(const ReflectionlessFn& f, double x);

/// (1/pi) Im R(x + i0) on a band interior, from the closed form.
double boundary_density(const ReflectionlessFn& f, double x);
double boundary_density(const ReflectionlessFn& f, const IntervalPoint& p);

/// Mass of the absolutely continuous part on the arcs.
double measure_mass(const ReflectionlessFn& f, const ArcSelection& arcs,
                    const AdaptiveOptions& opt = {1e-13, 0.0, 6000});

struct GPiece {
  Interval support;
  double level = 0.0;
};

struct GFunction {
  std::vector<GPiece> pieces;
};

/// pi/2 on the bands, pi on (x_j, b_j) inside each gap, zero elsewhere.
GFunction g_function(const ReflectionlessFn& f);

/// -(1/(z - b0)) exp(-(1/pi) sum level * Log((d - z)/(c - z))).
cplx exp_representation(const GFunction& g, double b0, cplx z);

/// Mass of the atom at the anchor, prod ((c - b0)/(d - b0))^(level/pi) over g.
double atom_mass_closed_form(const ReflectionlessFn& f);

struct PointmassSeries {
  std::vector<double> terms;
  std::vector<double> partial_sums;
  bool converged_heuristic = false;
};

/// Partial sums of sum (a_j - x_{j+1}) / (x_{j+1} - b0). The heuristic flag
/// asks that every ratio of consecutive terms in the trailing window be <= q.
PointmassSeries pointmass_series(const std::vector<std::pair<double, double>>& endpoints, double b0,
                                 double q = 0.9, std::size_t window = 3);

struct NevanlinnaReport {
  double min_im_R = 0.0;
  double min_im_shifted = 0.0;
  bool holds(double tol = 1e-12) const { return min_im_R >= -tol && min_im_shifted >= -tol; }
};

NevanlinnaReport nevanlinna_check(const ReflectionlessFn& f, const std::vector<cplx>& grid);

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

struct MeasureOnBands {
  PointFn density;
  std::vector<Atom> atoms;
};

/// The measure of R: closed-form density plus the anchor atom, if any.
MeasureOnBands reflectionless_measure(const ReflectionlessFn& f);

struct ReflectivityReport {
  double max_abs_re = 0.0;
  double worst_x = 0.0;
  std::size_t samples = 0;
  bool verdict = false;
};

/// Samples Re C(x + i0) = pv int density/(t - x) + sum mass/(loc - x) at
/// `sample_count` points per band, keeping 1e-3 of the band length away from
/// either end.
ReflectivityReport classify_reflectionless(const MeasureOnBands& m, const BandSet& E, std::size_t sample_count,
                                           double tol = 1e-6);

}  // namespace widomlab
