#include "widomlab/bandset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace widomlab {

namespace {

std::string describe(const Interval& I) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << I.lo << ", " << I.hi << "]";
  return os.str();
}

}  // namespace

Interval make_interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw ValidationError("interval endpoints must be finite");
  }
  if (!(lo < hi)) {
    throw ValidationError("interval " + describe({lo, hi}) + " has reversed or equal endpoints");
  }
  return {lo, hi};
}

BandSet make_bandset(std::vector<Interval> intervals) {
  if (intervals.empty()) throw ValidationError("band set needs at least one band");
  for (const auto& I : intervals) make_interval(I.lo, I.hi);
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t k = 0; k + 1 < intervals.size(); ++k) {
    if (!(intervals[k].hi < intervals[k + 1].lo)) {
      throw ValidationError("bands " + describe(intervals[k]) + " and " +
                            describe(intervals[k + 1]) + " overlap or touch");
    }
  }
  BandSet E;
  E.bands_ = std::move(intervals);
  return E;
}

BandSet merge(const BandSet& a, const BandSet& b) {
  std::vector<Interval> all(a.bands().begin(), a.bands().end());
  all.insert(all.end(), b.bands().begin(), b.bands().end());
  return make_bandset(std::move(all));
}

Interval BandSet::gap(std::size_t k) const {
  if (k + 1 >= bands_.size()) throw DomainError("gap index out of range");
  return {bands_[k].hi, bands_[k + 1].lo};
}

std::vector<Interval> BandSet::gaps() const {
  std::vector<Interval> out;
  for (std::size_t k = 0; k < gap_count(); ++k) out.push_back(gap(k));
  return out;
}

std::vector<double> BandSet::endpoints() const {
  std::vector<double> out;
  out.reserve(2 * bands_.size());
  for (const auto& b : bands_) {
    out.push_back(b.lo);
    out.push_back(b.hi);
  }
  return out;
}

std::optional<std::size_t> BandSet::band_containing(double x) const {
  for (std::size_t k = 0; k < bands_.size(); ++k) {
    if (bands_[k].contains(x)) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> BandSet::gap_containing(double x) const {
  for (std::size_t k = 0; k < gap_count(); ++k) {
    if (gap(k).contains_open(x)) return k;
  }
  return std::nullopt;
}

double BandSet::clipped_measure(double lo, double hi) const {
  double total = 0.0;
  for (const auto& b : bands_) {
    const double l = std::max(lo, b.lo);
    const double h = std::min(hi, b.hi);
    if (h > l) total += h - l;
  }
  return total;
}

double BandSet::total_length() const {
  double total = 0.0;
  for (const auto& b : bands_) total += b.length();
  return total;
}

void validate_divisor(const BandSet& E, const Divisor& d) {
  if (d.points.size() != E.gap_count()) {
    throw ValidationError("divisor has " + std::to_string(d.points.size()) + " points but the set has " +
                          std::to_string(E.gap_count()) + " bounded gaps");
  }
  for (std::size_t j = 0; j < d.points.size(); ++j) {
    if (!E.gap(j).contains(d.points[j])) {
      throw ValidationError("divisor point " + std::to_string(j) + " is outside the closed gap " +
                            describe(E.gap(j)));
    }
  }
}

Divisor right_end_divisor(const BandSet& E) {
  Divisor d;
  for (std::size_t j = 0; j < E.gap_count(); ++j) d.points.push_back(E.gap(j).hi);
  return d;
}

ArcSelection whole_set(const BandSet& E) {
  ArcSelection s;
  for (std::size_t k = 0; k < E.band_count(); ++k) s.pieces.push_back({k, E.band(k)});
  return s;
}

ArcSelection single_band(const BandSet& E, std::size_t k) {
  return ArcSelection{{ArcPiece{k, E.band(k)}}};
}

ArcSelection arc_in(const BandSet& E, double lo, double hi) {
  const Interval arc = make_interval(lo, hi);
  for (std::size_t k = 0; k < E.band_count(); ++k) {
    if (E.band(k).contains(arc.lo) && E.band(k).contains(arc.hi)) return ArcSelection{{ArcPiece{k, arc}}};
  }
  throw DomainError("arc " + describe(arc) + " is not contained in a single band");
}

void validate_arcs(const BandSet& E, const ArcSelection& arcs) {
  for (const auto& p : arcs.pieces) {
    if (p.band >= E.band_count()) throw DomainError("arc refers to a nonexistent band");
    const Interval& b = E.band(p.band);
    if (!(p.arc.lo < p.arc.hi) || p.arc.lo < b.lo || p.arc.hi > b.hi) {
      throw DomainError("arc " + describe(p.arc) + " is not inside band " + describe(b));
    }
  }
}

MobiusImage mobius_invert(const BandSet& E, double pole) {
  if (!std::isfinite(pole)) throw DomainError("Mobius pole must be finite");
  if (E.band_containing(pole)) throw DomainError("Mobius pole lies inside a band");
  std::vector<Interval> images;
  images.reserve(E.band_count());
  for (const auto& b : E.bands()) images.push_back({1.0 / (b.hi - pole), 1.0 / (b.lo - pole)});
  MobiusImage out;
  out.pole = pole;
  out.image = make_bandset(images);
  out.image_band.resize(E.band_count());
  for (std::size_t k = 0; k < E.band_count(); ++k) {
    for (std::size_t m = 0; m < out.image.band_count(); ++m) {
      if (out.image.band(m).lo == images[k].lo) out.image_band[k] = m;
    }
  }
  return out;
}

ArcSelection MobiusImage::map_arcs(const ArcSelection& arcs) const {
  ArcSelection out;
  for (const auto& p : arcs.pieces) {
    const std::size_t m = image_band.at(p.band);
    const Interval& target = image.band(m);
    // Clamp so that full-band arcs map exactly onto full image bands.
    double lo = forward(p.arc.hi);
    double hi = forward(p.arc.lo);
    lo = std::clamp(lo, target.lo, target.hi);
    hi = std::clamp(hi, target.lo, target.hi);
    out.pieces.push_back({m, {lo, hi}});
  }
  return out;
}

BandSet mobius_restore(const BandSet& image, double pole) {
  if (image.band_containing(0.0)) throw DomainError("image band contains 0, which maps to infinity");
  std::vector<Interval> bands;
  for (const auto& b : image.bands()) bands.push_back({pole + 1.0 / b.hi, pole + 1.0 / b.lo});
  return make_bandset(bands);
}

HomogeneityReport is_homogeneous(const BandSet& E, double eta, std::size_t h_samples) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in (0, 1]");
  if (h_samples < 2) throw ValidationError("h_samples must be at least 2");

  const double diam = E.diameter();
  const auto ends = E.endpoints();
  std::vector<double> xs = ends;
  for (const auto& b : E.bands()) xs.push_back(b.center());
  std::sort(xs.begin(), xs.end());

  HomogeneityReport rep;
  rep.eta = eta;
  rep.worst_ratio = std::numeric_limits<double>::infinity();
  rep.x_samples = xs.size();
  rep.h_samples = h_samples;

  std::vector<double> hs;
  for (double x : xs) {
    hs.clear();
    for (std::size_t i = 0; i < h_samples; ++i) {
      hs.push_back(diam * std::pow(10.0, -6.0 * static_cast<double>(i) / static_cast<double>(h_samples - 1)));
    }
    for (double e : ends) {
      const double d = std::abs(e - x);
      if (d > 0.0 && d <= diam) hs.push_back(d);
    }
    for (double h : hs) {
      // Overlaps measured as offsets from x; exact when x is a band end.
      double m = 0.0;
      for (const auto& b : E.bands()) m += std::max(0.0, std::min(b.hi - x, h) - std::max(b.lo - x, -h));
      const double ratio = m / h;
      if (ratio < rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.witness_x = x;
        rep.witness_h = h;
      }
    }
  }
  rep.holds = rep.worst_ratio >= eta;
  return rep;
}

}  // namespace widomlab
