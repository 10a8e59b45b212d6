#pragma once

#include <vector>

#include "widomlab/bandset.hpp"
#include "widomlab/potential.hpp"

namespace widomlab {

/// Largest depth accepted in double precision.
inline constexpr int kPointmassDepthCap = 10;

struct PointmassConfig {
  double a0 = 1.0;
  /// Left end of the first slit [b1, a0]; any value works since the first
  /// slit carries all the harmonic measure.
  double b1 = 0.5;
  double target = 0.5;
  double tol = 1e-3;
  int depth = 8;
  int max_halvings = 120;
  SolveOptions solve;
};

void validate(const PointmassConfig& cfg);

struct SlitSearch {
  double b = 0.0;
  double omega = 0.0;
  /// Relative slit length s = (a - b) / (a - pole).
  double s = 0.0;
  int evaluations = 0;
  /// (b, omega) at every evaluation, in evaluation order.
  std::vector<std::pair<double, double>> path;
};

/// Harmonic measure at `pole` of the slit [b, a] in C \ (E_prev ∪ [b, a]).
double slit_measure(const BandSet& E_prev, double b, double a, double pole, const SolveOptions& opt = {});

/// Left end b of the slit [b, a_prev] whose harmonic measure at the pole lies
/// in [target, target + tol]. The search drives omega to target + tol/2 to
/// full precision so that the result is reproducible under translation and
/// scaling of the configuration.
SlitSearch find_b(const BandSet& E_prev, double a_prev, double pole = 0.0, double target = 0.5, double tol = 1e-3,
                  const SolveOptions& opt = {});

struct SlitChoice {
  double a = 0.0;
  SlitSearch next;
  double ratio = 0.0;
  int halvings = 0;
};

/// Tries a = pole + (b_n - pole) 2^-k for k = 1, 2, ... until the slit found
/// by find_b has (b' - pole)/(a - pole) in (ratio_floor, 1).
SlitChoice find_a(const BandSet& E_prev, double b_n, double ratio_floor, const PointmassConfig& cfg,
                  double pole = 0.0);

struct PointmassStep {
  int n = 0;
  double a = 0.0;
  double b = 0.0;
  double omega = 0.0;
  /// b_{n+1} / a_n.
  double ratio = 0.0;
  /// 1 - ratio, kept separately to avoid cancellation.
  double s = 0.0;
  int halvings = 0;
  double green_at_0 = 0.0;
  double widom_partial = 0.0;
  double series_partial = 0.0;
  double atom_estimate = 0.0;
};

struct ConstructionTrace {
  PointmassConfig config;
  /// G of C \ [b1, a0] at 0.
  double initial_green_at_0 = 0.0;
  std::vector<PointmassStep> steps;
  BandSet final_set;
  /// Critical point of the deepest Green function in gap (a_n, b_n), by n.
  std::vector<double> critical_points;
  /// Green function of the deepest truncation at those critical points.
  std::vector<double> widom_terms;

  /// G_n(0) for n = 1..depth+1.
  std::vector<double> green_chain() const;
};

ConstructionTrace run_pointmass(const PointmassConfig& cfg);

struct LemmaRow {
  double a = 0.0;
  double b = 0.0;
  double ratio = 0.0;
  double omega = 0.0;
};

/// b'(a) / a for slits [b', a] between the pole 0 and a fixed set.
std::vector<LemmaRow> verify_lemma_harmonic(const BandSet& E_fixed, const std::vector<double>& a_seq,
                                            double target = 0.5, double tol = 1e-3, const SolveOptions& opt = {});

}  // namespace widomlab
