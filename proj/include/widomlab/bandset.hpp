#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "widomlab/error.hpp"

namespace widomlab {

/// Closed interval [lo, hi] of the real line with lo < hi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains_open(double x) const { return lo < x && x < hi; }
};

/// Throws ValidationError unless lo < hi and both are finite.
Interval make_interval(double lo, double hi);

/// A compact set E given as finitely many disjoint closed bands, sorted
/// ascending with strict separation. Gap k is the open interval between
/// band k and band k+1.
class BandSet {
 public:
  BandSet() = default;

  std::span<const Interval> bands() const { return bands_; }
  std::size_t band_count() const { return bands_.size(); }
  std::size_t gap_count() const { return bands_.empty() ? 0 : bands_.size() - 1; }
  const Interval& band(std::size_t k) const { return bands_.at(k); }
  Interval gap(std::size_t k) const;
  std::vector<Interval> gaps() const;

  double lo() const { return bands_.front().lo; }
  double hi() const { return bands_.back().hi; }
  Interval hull() const { return {lo(), hi()}; }
  double diameter() const { return hi() - lo(); }

  /// Band endpoints in ascending order: lo_0, hi_0, lo_1, hi_1, ...
  std::vector<double> endpoints() const;

  /// Index of the band containing x (closed), if any.
  std::optional<std::size_t> band_containing(double x) const;
  /// Index of the bounded gap containing x (open), if any.
  std::optional<std::size_t> gap_containing(double x) const;

  /// Lebesgue measure of E ∩ (lo, hi).
  double clipped_measure(double lo, double hi) const;
  double total_length() const;

  friend BandSet make_bandset(std::vector<Interval> intervals);

 private:
  std::vector<Interval> bands_;
};

/// Sorts and validates. Touching or overlapping bands are rejected.
BandSet make_bandset(std::vector<Interval> intervals);

/// Union of two band sets; they must be disjoint with strict separation.
BandSet merge(const BandSet& a, const BandSet& b);

/// One point per bounded gap, each in the closed gap.
struct Divisor {
  std::vector<double> points;
};

/// Throws ValidationError if `d` does not fit the gaps of `E`.
void validate_divisor(const BandSet& E, const Divisor& d);

/// Divisor placing every point at the right end of its gap.
Divisor right_end_divisor(const BandSet& E);

struct ArcPiece {
  std::size_t band = 0;
  Interval arc;
};

/// A union of sub-arcs of the bands of some BandSet.
struct ArcSelection {
  std::vector<ArcPiece> pieces;
};

ArcSelection whole_set(const BandSet& E);
ArcSelection single_band(const BandSet& E, std::size_t k);
/// Locates the band containing [lo, hi]; throws DomainError if none does.
ArcSelection arc_in(const BandSet& E, double lo, double hi);
void validate_arcs(const BandSet& E, const ArcSelection& arcs);

/// Image of E under t -> 1 / (t - pole).
///
/// Bands to the right of the pole land on the positive axis in reversed
/// order, bands to the left on the negative axis. `image_band[k]` is the
/// image index of source band k.
struct MobiusImage {
  BandSet image;
  double pole = 0.0;
  std::vector<std::size_t> image_band;

  double forward(double t) const { return 1.0 / (t - pole); }
  double backward(double s) const { return pole + 1.0 / s; }
  ArcSelection map_arcs(const ArcSelection& arcs) const;
};

MobiusImage mobius_invert(const BandSet& E, double pole);

/// Inverse of mobius_invert: s -> pole + 1/s applied to every band.
BandSet mobius_restore(const BandSet& image, double pole);

struct HomogeneityReport {
  bool holds = false;
  double eta = 0.0;
  double worst_ratio = 0.0;
  double witness_x = 0.0;
  double witness_h = 0.0;
  std::size_t x_samples = 0;
  std::size_t h_samples = 0;
};

/// Sampled check of |E ∩ (x-h, x+h)| >= eta*h.
///
/// x ranges over band endpoints and midpoints. For each x the h grid is
/// `h_samples` logarithmically spaced values covering six decades below
/// diam E, plus every distance from x to an endpoint of E not exceeding
/// diam E. The ratio is piecewise of the form (affine)/h between those
/// breakpoints, so its minimum over h in (0, diam E] is attained on the grid.
HomogeneityReport is_homogeneous(const BandSet& E, double eta, std::size_t h_samples);

}  // namespace widomlab
