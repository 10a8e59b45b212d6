#pragma once

#include <optional>
#include <string>
#include <vector>

#include "widomlab/bandset.hpp"
#include "widomlab/reflectionless.hpp"

namespace widomlab {

inline constexpr int kScDepthCap = 4;

/// |(z - alpha)/(z - beta)|^(1/2) for s = [alpha, beta] and z outside the open segment.
double r_metric(const Interval& s, double z);

struct ScConfig {
  int depth = 3;
  /// eps[n-1] is epsilon_n. Defaults to 4^(-n-2); must cover n <= max(3, depth + 2).
  std::vector<double> eps;
  /// L[n-1] is L_n. Defaults to L_1 = 1/2, L_{n+1} = eps_n L_n / 2.
  std::vector<double> lengths;
  /// Require the Green function between every flanking pair to be below its
  /// epsilon while fitting. Off by default: in double precision the bound is
  /// out of reach (see the construction audit), so it is measured instead.
  bool enforce_green_bounds = false;
  /// Grid size for Green-function maxima between flanking pairs.
  int green_grid = 9;
  double sibling_factor = 1.1;

  double epsilon(int n) const { return eps.at(n - 1); }
  double length(int n) const { return lengths.at(n - 1); }
};

/// Fills default schedules and checks the configuration.
ScConfig normalized(ScConfig cfg);

/// Segment centered at `center` with half-length min(max_half, eps d_min / 4),
/// d_min the distance to the nearest constraint point, halved until r_s lies
/// in (1 - eps, 1 + eps) at every constraint point.
Interval fit_segment(double center, const std::vector<double>& constraint_points, double eps, double max_half);

struct FlankingPair {
  Interval left;
  Interval right;
  /// Distance from `around` to the inner ends.
  double h = 0.0;
  /// Largest Green value sampled between the pair in the fitting context;
  /// NaN when no bound was requested.
  double green_max = 0.0;
};

/// Segments [c - h - 2l, c - h] and [c + h, c + h + 2l] with l = eps h / 4,
/// starting from h = dist(c, ends of inside) / 4 and halving h until the
/// r-constraints hold at every point and the sampled Green function of
/// C \ (E_context ∪ pair) between the pair is below green_bound.
FlankingPair fit_flanking_pair(double around, const Interval& inside, double eps, double green_bound,
                               const BandSet& E_context, const std::vector<double>& constraint_points,
                               int green_grid = 9);

/// Largest Green value of C \ E on a uniform grid of the open gap region (lo, hi).
double green_max_between(const BandSet& E, double lo, double hi, int grid);

enum class SegmentRole { outer_left, outer_right, flank_left, flank_right, tree };

struct ScSegment {
  std::string label;
  Interval seg;
  SegmentRole role = SegmentRole::tree;
  /// Tree depth below s5 (s5 is 0); -1 for the other roles.
  int generation = -1;
  /// Step of the construction that placed the segment.
  int step = 0;
  int parent = -1;
  std::vector<int> children;
  std::optional<Interval> neighborhood;
};

struct RConstraint {
  std::string segment;
  double z = 0.0;
  double eps = 0.0;
  double r = 0.0;
  bool ok = false;
};

struct GreenAudit {
  std::string pair;
  int step = 0;
  Interval between;
  double eps = 0.0;
  double green_at_fit = 0.0;
  double green_final = 0.0;
  bool met = false;
};

struct MassRecord {
  std::string segment;
  int generation = -1;
  /// k of the measure mu^k.
  int measure = 0;
  double mass = 0.0;
};

struct ScTrace {
  ScConfig config;
  std::vector<ScSegment> segments;
  BandSet final_set;
  Divisor divisor;
  std::vector<RConstraint> r_audit;
  std::vector<GreenAudit> green_audit;
  std::vector<MassRecord> masses;
  /// Total mass of mu^k, k = 1..depth.
  std::vector<double> total_mass;
  /// Half-length of s5.
  double ell1 = 0.0;

  int index_of(const std::string& label) const;
  double mass_of(const std::string& label, int measure) const;
};

/// Band set and divisor of the first `k` steps of a trace.
struct ScStage {
  BandSet E;
  Divisor divisor;
  ReflectionlessFn fn() const { return make_reflectionless(E, divisor); }
};
ScStage stage(const ScTrace& trace, int k);

ScTrace run_sc(const ScConfig& cfg);

struct MassCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct MassReport {
  std::vector<MassCheck> checks;
  bool all_passed() const;
};

/// Mass-splitting checks on a finished trace.
MassReport verify_masses(const ScTrace& trace);

/// The bound on mu^2(s5) from the mass-removal step,
/// (1+eps1)(1+eps2)^2(1+eps3)^4 l1^2/2.
double s5_removal_bound(const ScTrace& trace);

}  // namespace widomlab
