#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "widomlab/bandset.hpp"
#include "widomlab/quadrature.hpp"

namespace widomlab {

/// Pole of a harmonic measure; std::nullopt stands for infinity.
using Pole = std::optional<double>;

struct SolveOptions {
  AdaptiveOptions quad{1e-13, 0.0, 6000};
  double residual_tol = 1e-10;
  int max_iterations = 80;
};

/// Density of harmonic measure of C \ E for a real pole outside the convex
/// hull of E (or at infinity).
///
/// On the bands, dω/dt = C |Q(t)| / (π |t - pole| sqrt|R(t)|) where
/// R(t) = prod (t - e) over all band endpoints and Q is a polynomial with one
/// root in each bounded gap. The roots solve the period conditions
/// ∫_gap Q(t) dt / ((t - pole) sqrt R(t)) = 0 for every bounded gap; C makes
/// the residue at the pole equal to one (Q monic for the pole at infinity).
///
/// Q is stored by its roots, not by coefficients: the sets built by the
/// constructions span dozens of orders of magnitude, where any global
/// polynomial basis loses all accuracy.
class HarmonicDensity {
 public:
  static HarmonicDensity solve(const BandSet& E, Pole pole, const SolveOptions& opt = {},
                               std::span<const double> warm_roots = {});

  const BandSet& bands() const { return E_; }
  Pole pole() const { return pole_; }
  std::span<const double> roots() const { return roots_; }
  double log_scale() const { return log_scale_; }
  /// Largest normalized period residual |∫_gap Q w| / ∫_gap |Q w| after the solve.
  double max_residual() const { return max_residual_; }
  int iterations() const { return iterations_; }

  /// Density at a band interior point.
  double density(const IntervalPoint& p) const;
  double density(double t) const;
  /// Mass of the arcs; each arc must lie in a band.
  double mass(const ArcSelection& arcs, const AdaptiveOptions& opt = {1e-13, 0.0, 6000}) const;

  /// Signed differential Q(t) / ((t - pole) sqrt R(t)) at a point of a gap or
  /// the unbounded complement, with the factors for `skip_a`, `skip_b`
  /// removed from sqrt R.
  double differential(const IntervalPoint& p, double skip_a = NAN, double skip_b = NAN) const;

 private:
  BandSet E_;
  Pole pole_;
  std::vector<double> roots_;
  std::vector<double> ends_;
  double log_scale_ = 0.0;
  double max_residual_ = 0.0;
  int iterations_ = 0;
};

/// Equilibrium measure of E (harmonic measure with pole at infinity) and the
/// monic polynomial P whose roots are the critical points of the Green
/// function G(z, ∞), one per bounded gap.
struct EquilibriumData {
  BandSet source;
  std::vector<double> roots;
  /// Coefficients of P in the monomial basis, lowest degree first.
  std::vector<double> poly_coeffs;
  HarmonicDensity density;
};

EquilibriumData equilibrium(const BandSet& E, const SolveOptions& opt = {});

double equilibrium_density(const EquilibriumData& eq, double t);
double equilibrium_mass(const EquilibriumData& eq, const ArcSelection& arcs);

/// G(x, ∞) for real x outside the open bands; zero at band endpoints.
double green_value(const EquilibriumData& eq, double x, const AdaptiveOptions& opt = {1e-13, 0.0, 6000});

struct WidomSum {
  double sum = 0.0;
  std::vector<double> terms;
};

/// Sum over the bounded gaps of the Green function at its critical point.
WidomSum widom_sum(const EquilibriumData& eq);

struct HarmonicMeasureResult {
  double value = 0.0;
  Pole pole;
  ArcSelection arc;
};

/// ω(arc, pole) for C \ E. A pole inside a bounded gap is first moved to the
/// unbounded complement by a Möbius map centered in that gap.
HarmonicMeasureResult harmonic_measure(const BandSet& E, Pole pole, const ArcSelection& arc,
                                       const SolveOptions& opt = {});

/// Checks G_{E'}(x) <= G_E(x) + 1e-9 for E contained in E'.
bool domain_monotonicity_check(const BandSet& E, const BandSet& E_larger, double x);

/// True if every band of `inner` lies inside a band of `outer`.
bool bands_contained(const BandSet& inner, const BandSet& outer);

}  // namespace widomlab
