#include "widomlab/construct_sc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "widomlab/potential.hpp"

namespace widomlab {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool within(double r, double eps) { return r > 1.0 - eps && r < 1.0 + eps; }

void require_resolved(const Interval& s, const std::string& label) {
  const double scale = std::max(std::abs(s.lo), std::abs(s.hi));
  if (!(s.length() > 4096 * std::numeric_limits<double>::epsilon() * scale)) {
    throw NumericalError("segment " + label + " of length " + fmt(s.length()) + " at " + fmt(s.center()) +
                         " is below double resolution; reduce depth or relax the epsilon schedule");
  }
}

bool owns_hi(const ScSegment& s, bool parent) {
  return s.role == SegmentRole::outer_left || s.role == SegmentRole::flank_left ||
         (s.role == SegmentRole::tree && parent);
}

bool owns_lo(const ScSegment& s, bool parent) {
  return s.role == SegmentRole::outer_right || s.role == SegmentRole::flank_right ||
         (s.role == SegmentRole::tree && parent);
}

class Builder {
 public:
  explicit Builder(const ScConfig& cfg) { tr_.config = cfg; }

  ScTrace run() {
    step1();
    for (int k = 2; k <= cfg().depth; ++k) step(k);
    const ScStage last = stage(tr_, cfg().depth);
    tr_.final_set = last.E;
    tr_.divisor = last.divisor;
    audit_green_final();
    ledger();
    return std::move(tr_);
  }

 private:
  ScTrace tr_;

  const ScConfig& cfg() const { return tr_.config; }

  int add(std::string label, Interval seg, SegmentRole role, int generation, int step, int parent = -1) {
    require_resolved(seg, label);
    ScSegment s;
    s.label = std::move(label);
    s.seg = seg;
    s.role = role;
    s.generation = generation;
    s.step = step;
    s.parent = parent;
    tr_.segments.push_back(s);
    const int id = static_cast<int>(tr_.segments.size()) - 1;
    if (parent >= 0) tr_.segments[parent].children.push_back(id);
    return id;
  }

  BandSet context() const {
    std::vector<Interval> b;
    for (const auto& s : tr_.segments) b.push_back(s.seg);
    return make_bandset(b);
  }

  void record(const std::string& label, const Interval& seg, double z, double eps) {
    const double r = r_metric(seg, z);
    tr_.r_audit.push_back({label, z, eps, r, within(r, eps)});
  }

  void record_pair(const std::string& label, const FlankingPair& p, const std::vector<double>& pts, double eps,
                   int step) {
    for (double z : pts) {
      record("L" + label, p.left, z, eps);
      record("R" + label, p.right, z, eps);
    }
    tr_.green_audit.push_back({"L" + label + "|R" + label, step, {p.left.hi, p.right.lo}, eps, p.green_max, 0.0, false});
  }

  // Half-length of a neighborhood around c, at most `cap`, halved until the
  // r-constraints of `segs` hold at c +/- m within eps.
  double fit_neighborhood(double c, double cap, const std::vector<Interval>& segs, double eps) {
    double m = cap;
    for (int it = 0; it < 200; ++it) {
      const bool ok = std::all_of(segs.begin(), segs.end(), [&](const Interval& s) {
        return within(r_metric(s, c - m), eps) && within(r_metric(s, c + m), eps);
      });
      if (ok) return m;
      m *= 0.5;
    }
    throw ConstructionError("no neighborhood around " + fmt(c) + " satisfies the r-constraints");
  }

  double green_bound(double eps) const { return cfg().enforce_green_bounds ? eps : INFINITY; }

  void step1() {
    const double e1 = cfg().epsilon(1), e2 = cfg().epsilon(2), e3 = cfg().epsilon(3);
    const double L1 = cfg().length(1), L2 = cfg().length(2);
    const Interval n1{-L1 / 2, L1 / 2};
    // Outer segments [-1, -1 + d], [1 - d, 1] with r_{s2}/r_{s1} in (1 - e1, 1) on n1.
    double d = e1 * (1.0 - n1.hi) / 4;
    auto product = [&](double z) { return r_metric({1.0 - d, 1.0}, z) / r_metric({-1.0, -1.0 + d}, z); };
    for (int it = 0;; ++it) {
      bool ok = true;
      for (int i = 0; i <= 64 && ok; ++i) {
        const double p = product(n1.lo + n1.length() * i / 64.0);
        ok = p > 1.0 - e1 && p < 1.0;
      }
      if (ok) break;
      if (it > 100) throw ConstructionError("outer segments cannot meet the n1 constraint");
      d *= 0.5;
    }
    const int s1 = add("s1", {-1.0, -1.0 + d}, SegmentRole::outer_left, -1, 1);
    const int s2 = add("s2", {1.0 - d, 1.0}, SegmentRole::outer_right, -1, 1);
    for (double z : {n1.lo, 0.0, n1.hi}) {
      const double p = product(z);
      tr_.r_audit.push_back({"s2/s1", z, e1, p, p > 1.0 - e1 && p < 1.0});
    }
    (void)s1;
    (void)s2;

    const std::vector<double> pts{0.0};
    const FlankingPair pair = fit_flanking_pair(0.0, n1, e2, green_bound(e2), context(), pts, cfg().green_grid);
    add("s3", pair.left, SegmentRole::flank_left, -1, 1);
    add("s4", pair.right, SegmentRole::flank_right, -1, 1);
    for (double z : pts) {
      record("s3", pair.left, z, e2);
      record("s4", pair.right, z, e2);
    }
    tr_.green_audit.push_back({"s3|s4", 1, {pair.left.hi, pair.right.lo}, e2, pair.green_max, 0.0, false});

    const double m = fit_neighborhood(0.0, std::min(L2 / 2, pair.h / 2), {pair.left, pair.right}, e2);
    const Interval n2{-m, m};
    record("s3", pair.left, n2.lo, e2);
    record("s4", pair.right, n2.hi, e2);
    const std::vector<double> s5pts{-n2.length() / 8, n2.length() / 8};
    const Interval s5 = fit_segment(0.0, s5pts, e3, m);
    const int id = add("s5", s5, SegmentRole::tree, 0, 1);
    tr_.segments[id].neighborhood = n2;
    for (double z : s5pts) record("s5", s5, z, e3);
    tr_.ell1 = s5.length() / 2;
  }

  void step(int k) {
    const double ef = cfg().epsilon(k + 1), ec = cfg().epsilon(k + 2);
    const double Lk = cfg().length(k + 1);
    std::vector<int> parents;
    for (int i = 0; i < static_cast<int>(tr_.segments.size()); ++i) {
      const auto& s = tr_.segments[i];
      if (s.role == SegmentRole::tree && s.generation == k - 2) parents.push_back(i);
    }
    for (int pid : parents) {
      const Interval nP = *tr_.segments[pid].neighborhood;
      const Interval P = tr_.segments[pid].seg;
      const std::string plabel = tr_.segments[pid].label;
      for (int side = 0; side < 2; ++side) {
        const double q = nP.length() / 4;
        const double c = side == 0 ? nP.center() - q : nP.center() + q;
        const double sib = side == 0 ? nP.center() + q : nP.center() - q;
        const Interval inside = side == 0 ? Interval{nP.lo, P.lo} : Interval{P.hi, nP.hi};
        const std::vector<double> pts{c, nP.lo, nP.hi, sib - nP.length() / 8, sib + nP.length() / 8};
        const FlankingPair pair = fit_flanking_pair(c, inside, ef, green_bound(ef), context(), pts, cfg().green_grid);
        const std::string label = plabel + std::to_string(side + 1);
        add("L" + label, pair.left, SegmentRole::flank_left, -1, k);
        add("R" + label, pair.right, SegmentRole::flank_right, -1, k);
        record_pair(label, pair, pts, ef, k);

        const double m = fit_neighborhood(c, std::min(Lk / 2, pair.h / 2), {pair.left, pair.right, P}, ef);
        const Interval nc{c - m, c + m};
        for (double z : {nc.lo, nc.hi}) {
          record("L" + label, pair.left, z, ef);
          record("R" + label, pair.right, z, ef);
          record(plabel, P, z, ef);
        }
        const std::vector<double> cpts{c - nc.length() / 8, c + nc.length() / 8};
        const Interval child = fit_segment(c, cpts, ec, m);
        const int id = add(label, child, SegmentRole::tree, k - 1, k, pid);
        tr_.segments[id].neighborhood = nc;
        for (double z : cpts) record(label, child, z, ec);
      }
    }
  }

  void audit_green_final() {
    const auto eq = equilibrium(tr_.final_set);
    for (auto& g : tr_.green_audit) {
      double worst = 0.0;
      const int grid = cfg().green_grid;
      for (int i = 1; i <= grid; ++i) {
        const double t = g.between.lo + g.between.length() * i / (grid + 1.0);
        if (tr_.final_set.band_containing(t)) continue;
        worst = std::max(worst, green_value(eq, t));
      }
      g.green_final = worst;
      g.met = worst < g.eps;
    }
  }

  void ledger() {
    for (int k = 1; k <= cfg().depth; ++k) {
      const ScStage st = stage(tr_, k);
      const ReflectionlessFn f = st.fn();
      double total = 0.0;
      for (const auto& s : tr_.segments) {
        if (s.step > k) continue;
        const double m = measure_mass(f, arc_in(st.E, s.seg.lo, s.seg.hi));
        tr_.masses.push_back({s.label, s.generation, k, m});
        total += m;
      }
      tr_.total_mass.push_back(total);
    }
  }
};

}  // namespace

double r_metric(const Interval& s, double z) {
  if (s.contains_open(z)) throw DomainError("r-metric point lies inside the segment");
  return std::sqrt(std::abs((z - s.lo) / (z - s.hi)));
}

ScConfig normalized(ScConfig cfg) {
  if (cfg.depth < 1 || cfg.depth > kScDepthCap) {
    throw ValidationError("sc depth must lie in [1, " + std::to_string(kScDepthCap) + "]");
  }
  const int need = std::max(3, cfg.depth + 2);
  if (cfg.eps.empty()) {
    for (int n = 1; n <= need; ++n) cfg.eps.push_back(std::pow(4.0, -n - 2));
  }
  if (static_cast<int>(cfg.eps.size()) < need) {
    throw ValidationError("epsilon schedule needs " + std::to_string(need) + " entries");
  }
  for (double e : cfg.eps) {
    if (!(e > 0.0 && e < 0.5)) throw ValidationError("epsilon entries must lie in (0, 1/2)");
  }
  if (cfg.lengths.empty()) {
    cfg.lengths.push_back(0.5);
    for (int n = 1; n < need; ++n) cfg.lengths.push_back(cfg.eps[n - 1] * cfg.lengths.back() / 2);
  }
  if (static_cast<int>(cfg.lengths.size()) < cfg.depth + 1) {
    throw ValidationError("length schedule needs " + std::to_string(cfg.depth + 1) + " entries");
  }
  if (!(cfg.lengths[0] > 0.0 && cfg.lengths[0] < 2.0)) throw ValidationError("L_1 must lie in (0, 2)");
  for (std::size_t n = 1; n < cfg.lengths.size(); ++n) {
    if (!(cfg.lengths[n] > 0.0 && cfg.lengths[n] < cfg.eps[n - 1] * cfg.lengths[n - 1])) {
      throw ValidationError("length schedule must satisfy 0 < L_{n+1} < eps_n L_n at n = " + std::to_string(n));
    }
  }
  if (cfg.green_grid < 1) throw ValidationError("green grid must be positive");
  if (!(cfg.sibling_factor >= 1.0)) throw ValidationError("sibling factor must be at least 1");
  return cfg;
}

Interval fit_segment(double center, const std::vector<double>& constraint_points, double eps, double max_half) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("segment epsilon must lie in (0, 1)");
  double d_min = INFINITY;
  for (double z : constraint_points) d_min = std::min(d_min, std::abs(z - center));
  if (d_min == 0.0) throw DomainError("constraint point coincides with the segment center");
  double l = std::min(max_half, eps * d_min / 4);
  for (int it = 0; it < 200; ++it) {
    const Interval s{center - l, center + l};
    const bool ok = std::all_of(constraint_points.begin(), constraint_points.end(),
                                [&](double z) { return within(r_metric(s, z), eps); });
    if (ok) return s;
    l *= 0.5;
  }
  throw ConstructionError("segment fit did not converge");
}

double green_max_between(const BandSet& E, double lo, double hi, int grid) {
  const auto eq = equilibrium(E);
  double worst = 0.0;
  for (int i = 1; i <= grid; ++i) {
    const double t = lo + (hi - lo) * i / (grid + 1.0);
    if (E.band_containing(t)) continue;
    worst = std::max(worst, green_value(eq, t));
  }
  return worst;
}

FlankingPair fit_flanking_pair(double around, const Interval& inside, double eps, double green_bound,
                               const BandSet& E_context, const std::vector<double>& constraint_points, int green_grid) {
  if (!inside.contains_open(around)) throw DomainError("flanking center lies outside its interval");
  const double room = std::min(around - inside.lo, inside.hi - around);
  const double floor = 1e-12 * (std::abs(around) + inside.length());
  double h = room / 4;
  while (h >= floor) {
    const double l = eps * h / 4;
    const Interval L{around - h - 2 * l, around - h}, R{around + h, around + h + 2 * l};
    bool ok = L.lo > inside.lo && R.hi < inside.hi;
    for (double z : constraint_points) {
      if (!ok) break;
      ok = !L.contains_open(z) && !R.contains_open(z) && within(r_metric(L, z), eps) && within(r_metric(R, z), eps);
    }
    if (ok && std::isinf(green_bound)) return {L, R, h, NAN};
    if (ok) {
      const BandSet E = merge(E_context, make_bandset({L, R}));
      const double g = green_max_between(E, L.hi, R.lo, green_grid);
      if (g < green_bound) return {L, R, h, g};
    }
    h *= 0.5;
  }
  throw NumericalError("no flanking pair around " + fmt(around) + " before the precision floor h = " + fmt(floor));
}

int ScTrace::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].label == label) return static_cast<int>(i);
  }
  throw ValidationError("no segment labelled " + label);
}

double ScTrace::mass_of(const std::string& label, int measure) const {
  for (const auto& m : masses) {
    if (m.segment == label && m.measure == measure) return m.mass;
  }
  throw ValidationError("no mass recorded for " + label + " under mu^" + std::to_string(measure));
}

ScStage stage(const ScTrace& trace, int k) {
  std::vector<int> ids;
  for (int i = 0; i < static_cast<int>(trace.segments.size()); ++i) {
    if (trace.segments[i].step <= k) ids.push_back(i);
  }
  std::sort(ids.begin(), ids.end(),
            [&](int a, int b) { return trace.segments[a].seg.lo < trace.segments[b].seg.lo; });
  auto is_parent = [&](int i) {
    const auto& ch = trace.segments[i].children;
    return std::any_of(ch.begin(), ch.end(), [&](int c) { return trace.segments[c].step <= k; });
  };
  ScStage st;
  std::vector<Interval> bands;
  for (int i : ids) bands.push_back(trace.segments[i].seg);
  st.E = make_bandset(bands);
  for (std::size_t j = 0; j + 1 < ids.size(); ++j) {
    const ScSegment& X = trace.segments[ids[j]];
    const ScSegment& Y = trace.segments[ids[j + 1]];
    const bool left = owns_hi(X, is_parent(ids[j]));
    const bool right = owns_lo(Y, is_parent(ids[j + 1]));
    if (left == right) {
      throw ConstructionError("gap between " + X.label + " and " + Y.label + " has " +
                              (left ? "two divisor points" : "no divisor point"));
    }
    st.divisor.points.push_back(left ? X.seg.hi : Y.seg.lo);
  }
  return st;
}

ScTrace run_sc(const ScConfig& cfg) { return Builder(normalized(cfg)).run(); }

bool MassReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const MassCheck& c) { return c.passed; });
}

MassReport verify_masses(const ScTrace& tr) {
  MassReport rep;
  const int depth = tr.config.depth;
  const double mu1 = tr.mass_of("s5", 1);

  for (int k = 1; k <= depth; ++k) {
    const double t = tr.total_mass[k - 1];
    rep.checks.push_back({"total mass of mu^" + std::to_string(k), std::abs(t - 1.0) < 1e-8, "total " + fmt(t)});
  }

  std::vector<double> max_by_gen;
  double seg_factor = 1.0, tot_factor = 1.0;
  for (int n = 0; n < depth; ++n) {
    if (n > 0) {
      seg_factor *= 0.5 - std::ldexp(1.0, -n - 2);
      tot_factor *= 1.0 - std::ldexp(1.0, -n - 1);
    }
    double total = 0.0, lowest = INFINITY, highest = 0.0;
    std::string low_label;
    for (const auto& m : tr.masses) {
      if (m.generation != n || m.measure != n + 1) continue;
      total += m.mass;
      highest = std::max(highest, m.mass);
      if (m.mass < lowest) {
        lowest = m.mass;
        low_label = m.segment;
      }
    }
    max_by_gen.push_back(highest);
    if (n == 0) continue;
    const std::string g = "generation " + std::to_string(n);
    const double bseg = seg_factor * mu1, btot = tot_factor * mu1;
    rep.checks.push_back({g + " per-segment mass", lowest >= bseg,
                          "smallest " + low_label + " = " + fmt(lowest) + ", bound " + fmt(bseg)});
    rep.checks.push_back({g + " total mass", total >= btot, "total " + fmt(total) + ", bound " + fmt(btot)});
  }
  for (std::size_t n = 1; n < max_by_gen.size(); ++n) {
    rep.checks.push_back({"max segment mass decreases into generation " + std::to_string(n),
                          max_by_gen[n] < max_by_gen[n - 1],
                          fmt(max_by_gen[n - 1]) + " -> " + fmt(max_by_gen[n])});
  }
  for (const auto& s : tr.segments) {
    if (s.children.size() != 2) continue;
    const auto& a = tr.segments[s.children[0]];
    const auto& b = tr.segments[s.children[1]];
    const int k = a.generation + 1;
    const double ma = tr.mass_of(a.label, k), mb = tr.mass_of(b.label, k);
    const double ratio = std::max(ma, mb) / std::min(ma, mb);
    rep.checks.push_back({"siblings " + a.label + ", " + b.label, ratio <= tr.config.sibling_factor,
                          "ratio " + fmt(ratio) + ", allowed " + fmt(tr.config.sibling_factor)});
  }
  return rep;
}

double s5_removal_bound(const ScTrace& tr) {
  const auto& c = tr.config;
  const double f = (1 + c.epsilon(1)) * std::pow(1 + c.epsilon(2), 2) * std::pow(1 + c.epsilon(3), 4);
  return f * tr.ell1 * tr.ell1 / 2;
}

}  // namespace widomlab
