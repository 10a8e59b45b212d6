#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "widomlab/acceptance.hpp"
#include "widomlab/config.hpp"
#include "widomlab/error.hpp"
#include "widomlab/io.hpp"
#include "widomlab/potential.hpp"
#include "widomlab/reflectionless.hpp"

using namespace widomlab;
namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitAcceptance = 3;

// Raised when a run completed but its own check failed.
struct CheckFailed {
  int code;
  std::string message;
};

struct Common {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "JSON config overriding the defaults (else $WIDOMLAB_CONFIG)");
  sub->add_option("--seed", c.seed, "Seed for randomized samples");
  sub->add_option("--out", c.out, "Output JSON path (CSV goes next to it)");
}

RunConfig effective_config(const Common& c) {
  RunConfig cfg = load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

std::string output_path(const Common& c, const RunConfig& cfg, const std::string& name) {
  return c.out.empty() ? (fs::path(cfg.output.dir) / (name + ".json")).string() : c.out;
}

void emit(const std::string& path, const json& doc, const RunConfig& cfg, const std::string& csv = {}) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  write_text_file(path, doc.dump(2) + "\n");
  std::cout << "wrote " << path << "\n";
  if (cfg.output.csv && !csv.empty()) {
    const std::string csv_path = fs::path(path).replace_extension(".csv").string();
    write_text_file(csv_path, csv);
    std::cout << "wrote " << csv_path << "\n";
  }
}

// Interior sample points of a band, denser toward the ends.
std::vector<double> band_samples(const Interval& b, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(b.center() - 0.5 * b.length() * std::cos(M_PI * (i + 0.5) / n));
  return xs;
}

// ---------------------------------------------------------------- potential

struct PotentialArgs {
  Common common;
  std::string bands;
  std::string pole = "inf";
  std::vector<double> arc;
  bool widom = false;
  std::vector<double> green_at;
  std::optional<int> points;
};

void run_potential(const PotentialArgs& a) {
  const RunConfig cfg = effective_config(a.common);
  const SolveOptions so = solve_options(cfg);
  const BandInput in = parse_band_input(read_json_file(a.bands));
  const BandSet& E = in.E;
  Pole pole;
  if (a.pole != "inf" && a.pole != "infinity") {
    try {
      std::size_t used = 0;
      pole = std::stod(a.pole, &used);
      if (used != a.pole.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ValidationError("--pole must be a number or 'inf'");
    }
  }
  const int n = a.points.value_or(cfg.sampling.density_points);
  if (n < 1) throw ValidationError("--points must be positive");

  json doc = envelope("potential_report", cfg);
  doc["bands"] = bandset_json(E);
  doc["pole"] = pole ? json(*pole) : json("inf");

  std::string csv = "band,x,density\n";
  json samples = json::array();
  const bool outside_hull = !pole || *pole < E.lo() || *pole > E.hi();
  if (outside_hull) {
    const HarmonicDensity hd = HarmonicDensity::solve(E, pole, so);
    doc["roots"] = std::vector<double>(hd.roots().begin(), hd.roots().end());
    doc["solver"] = {{"iterations", hd.iterations()}, {"max_residual", hd.max_residual()}};
    for (std::size_t k = 0; k < E.band_count(); ++k) {
      for (double x : band_samples(E.band(k), n)) {
        const double d = hd.density(x);
        samples.push_back({{"band", k}, {"x", x}, {"density", d}});
        csv += std::to_string(k) + "," + format_double(x) + "," + format_double(d) + "\n";
      }
    }
  } else {
    if (E.band_containing(*pole)) throw DomainError("pole lies on E");
    doc["roots"] = nullptr;
  }
  doc["density_samples"] = samples;

  json hm = json::array();
  std::vector<ArcSelection> arcs;
  if (!a.arc.empty()) {
    arcs.push_back(arc_in(E, a.arc[0], a.arc[1]));
    hm.push_back({{"arc", {a.arc[0], a.arc[1]}}, {"value", 0.0}});
  } else {
    for (std::size_t k = 0; k < E.band_count(); ++k) {
      arcs.push_back(single_band(E, k));
      hm.push_back({{"arc", {E.band(k).lo, E.band(k).hi}}, {"value", 0.0}});
    }
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) hm[i]["value"] = harmonic_measure(E, pole, arcs[i], so).value;
  doc["harmonic_measure"] = hm;

  if (a.widom || !a.green_at.empty()) {
    const EquilibriumData eq = equilibrium(E, so);
    doc["poly_coeffs"] = eq.poly_coeffs;
    if (a.widom) {
      const WidomSum ws = widom_sum(eq);
      doc["widom_terms"] = ws.terms;
      doc["widom_sum"] = ws.sum;
      doc["critical_points"] = eq.roots;
    }
    json g = json::array();
    for (double x : a.green_at) g.push_back({{"x", x}, {"value", green_value(eq, x, so.quad)}});
    doc["green"] = g;
  }
  emit(output_path(a.common, cfg, "potential"), doc, cfg, csv);
  std::cout << "harmonic measure:";
  for (const auto& h : hm) std::cout << " " << h["value"].get<double>();
  std::cout << "\n";
}

// --------------------------------------------------------------------- refl

struct ReflArgs {
  Common common;
  std::string bands;
  std::optional<double> anchor;
  std::vector<double> at;
  std::vector<std::pair<double, double>> complex_points;
  std::vector<double> mass;
  bool check_identity = false;
  bool classify = false;
  std::optional<int> points;
};

void run_refl(const ReflArgs& a) {
  const RunConfig cfg = effective_config(a.common);
  BandInput in = parse_band_input(read_json_file(a.bands));
  if (!in.divisor) throw ValidationError("refl needs a 'divisor' in the band input");
  if (a.anchor) in.anchor = a.anchor;
  const ReflectionlessFn f = make_reflectionless(in.E, *in.divisor, in.anchor);
  const BandSet& E = f.E;
  const int n = a.points.value_or(cfg.sampling.identity_points);
  if (n < 1) throw ValidationError("--points must be positive");

  json doc = envelope("refl_report", cfg);
  doc["bands"] = bandset_json(E);
  doc["divisor"] = f.divisor.points;
  doc["anchor"] = f.anchor ? json(*f.anchor) : json(nullptr);
  const double ac = measure_mass(f, whole_set(E));
  const double atom = f.anchor ? atom_mass_closed_form(f) : 0.0;
  doc["ac_mass"] = ac;
  doc["atom_mass"] = atom;
  doc["total_mass"] = ac + atom;
  json g = json::array();
  for (const auto& p : g_function(f).pieces) g.push_back({{"support", {p.support.lo, p.support.hi}}, {"level", p.level}});
  doc["g_function"] = g;

  json at = json::array();
  for (double x : a.at) {
    if (const auto k = E.band_containing(x); k && E.band(*k).contains_open(x)) {
      at.push_back({{"x", x}, {"on_band", true}, {"density", boundary_density(f, x)}});
    } else {
      at.push_back({{"x", x}, {"on_band", false}, {"R", eval_R_real(f, x)}});
    }
  }
  doc["at"] = at;
  json cz = json::array();
  for (const auto& [re, im] : a.complex_points) {
    const cplx r = eval_R(f, {re, im});
    cz.push_back({{"z", {re, im}}, {"R", {r.real(), r.imag()}}});
  }
  doc["complex"] = cz;
  if (!a.mass.empty()) doc["mass"] = {{"arc", {a.mass[0], a.mass[1]}}, {"value", measure_mass(f, arc_in(E, a.mass[0], a.mass[1]))}};

  std::optional<CheckFailed> failure;
  if (a.check_identity) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double d = E.diameter();
    const GFunction gf = g_function(f);
    std::vector<cplx> grid;
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx z{E.lo() - 0.5 * d + 2.0 * d * u(rng), d * std::pow(10.0, -3.0 + 3.5 * u(rng))};
      grid.push_back(z);
      const cplx p = eval_R(f, z), e = exp_representation(gf, f.b0(), z);
      worst = std::max(worst, std::abs(p - e) / std::abs(p));
    }
    const NevanlinnaReport nv = nevanlinna_check(f, grid);
    const bool ok = worst < cfg.tolerances.identity_tol;
    doc["identity"] = {{"points", n},
                       {"max_rel_err", worst},
                       {"tol", cfg.tolerances.identity_tol},
                       {"passed", ok},
                       {"herglotz_min_im_R", nv.min_im_R},
                       {"herglotz_min_im_shifted", nv.min_im_shifted}};
    std::cout << "identity: max relative error " << worst << " over " << n << " points\n";
    if (!ok) failure = CheckFailed{kExitNumerical, "identity error above tolerance"};
  }
  if (a.classify) {
    const std::size_t per_band = std::max<std::size_t>(1, (n + E.band_count() - 1) / E.band_count());
    const ReflectivityReport rep = classify_reflectionless(reflectionless_measure(f), E, per_band, cfg.tolerances.pv_tol);
    doc["classification"] = {{"max_abs_re", rep.max_abs_re},
                             {"worst_x", rep.worst_x},
                             {"samples", rep.samples},
                             {"tol", cfg.tolerances.pv_tol},
                             {"weakly_reflectionless", rep.verdict}};
    std::cout << "classification: max |Re C| = " << rep.max_abs_re << (rep.verdict ? " (weakly reflectionless)\n" : "\n");
  }

  std::string csv = "band,x,density\n";
  for (std::size_t k = 0; k < E.band_count(); ++k) {
    for (double x : band_samples(E.band(k), cfg.sampling.density_points)) {
      csv += std::to_string(k) + "," + format_double(x) + "," + format_double(boundary_density(f, x)) + "\n";
    }
  }
  emit(output_path(a.common, cfg, "refl"), doc, cfg, csv);
  std::cout << "total mass " << ac + atom << " (atom " << atom << ")\n";
  if (failure) throw *failure;
}

// ----------------------------------------------------------- constructions

struct PointmassArgs {
  Common common;
  std::optional<int> depth;
  std::optional<double> tol;
  std::optional<double> target;
  std::optional<double> b1;
};

void run_build_pointmass(const PointmassArgs& a) {
  RunConfig cfg = effective_config(a.common);
  if (a.depth) cfg.pointmass.depth = *a.depth;
  if (a.tol) cfg.tolerances.omega_tol = *a.tol;
  if (a.target) cfg.pointmass.target = *a.target;
  if (a.b1) cfg.pointmass.b1 = *a.b1;
  validate(cfg);
  const ConstructionTrace tr = run_pointmass(pointmass_config(cfg));
  json doc = envelope("pointmass_trace", cfg);
  doc.update(pointmass_trace_json(tr));
  emit(output_path(a.common, cfg, "pointmass_trace"), doc, cfg, pointmass_trace_csv(tr));
  for (const auto& s : tr.steps) {
    std::printf("n=%d a=%.6e b=%.6e omega=%.6f ratio=%.6f G(0)=%.6e atom=%.6f\n", s.n, s.a, s.b, s.omega, s.ratio,
                s.green_at_0, s.atom_estimate);
  }
}

struct ScArgs {
  Common common;
  std::optional<int> depth;
  std::string eps_schedule;
  bool enforce_green = false;
};

void run_build_sc(const ScArgs& a) {
  RunConfig cfg = effective_config(a.common);
  if (a.depth) cfg.sc.depth = *a.depth;
  if (a.enforce_green) cfg.sc.enforce_green_bounds = true;
  if (!a.eps_schedule.empty()) {
    json sched = read_json_file(a.eps_schedule);
    if (!sched.is_object()) throw ValidationError("eps schedule must be an object {\"eps\": [...], \"lengths\": [...]}");
    json patch = {{"sc", json::object()}};
    for (auto it = sched.begin(); it != sched.end(); ++it) patch["sc"][it.key()] = it.value();
    for (auto it = sched.begin(); it != sched.end(); ++it) {
      if (it.key() != "eps" && it.key() != "lengths") throw ValidationError("unknown key '" + it.key() + "' in eps schedule");
    }
    apply_json(cfg, patch);
  }
  validate(cfg);
  const ScTrace tr = run_sc(sc_config(cfg));
  const MassReport rep = verify_masses(tr);
  json doc = envelope("sc_trace", cfg);
  doc.update(sc_trace_json(tr, rep));
  emit(output_path(a.common, cfg, "sc_trace"), doc, cfg, sc_segments_csv(tr));
  std::printf("%zu segments, ell1 = %.6e\n", tr.segments.size(), tr.ell1);
  for (const auto& c : rep.checks) std::printf("[%s] %s: %s\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.detail.c_str());
  int unmet = 0;
  for (const auto& g : tr.green_audit) unmet += g.met ? 0 : 1;
  if (unmet > 0) std::printf("green bound unmet between %d of %zu flanking pairs (see green_audit)\n", unmet, tr.green_audit.size());
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
  Common common;
  std::string suite = "all";
  std::vector<std::string> only;
};

void run_verify(const VerifyArgs& a) {
  const RunConfig cfg = effective_config(a.common);
  std::vector<std::string> ids = a.only.empty() ? suite_ids(a.suite) : a.only;
  const AcceptanceOptions opt = acceptance_options(cfg);
  std::vector<CriterionResult> results;
  std::vector<std::string> failed;
  std::printf("%-5s %-6s %-48s %9s  %s\n", "id", "result", "criterion", "seconds", "detail");
  for (const auto& id : ids) {
    results.push_back(run_criterion(id, opt));
    const auto& r = results.back();
    std::printf("%-5s %-6s %-48s %9.2f  %s\n", r.id.c_str(), r.passed ? "PASS" : "FAIL", r.title.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) failed.push_back(r.id);
  }
  json doc = envelope("verify_report", cfg);
  doc.update(acceptance_json(results));
  emit(output_path(a.common, cfg, "verify"), doc, cfg);
  if (!failed.empty()) {
    std::string list;
    for (const auto& id : failed) list += (list.empty() ? "" : ",") + id;
    throw CheckFailed{kExitAcceptance, "acceptance failures: " + list};
  }
}

// ---------------------------------------------------------------- homog

struct HomogArgs {
  Common common;
  std::string bands;
  double eta = 0.0;
  std::optional<int> h_samples;
};

void run_homog(const HomogArgs& a) {
  const RunConfig cfg = effective_config(a.common);
  const BandInput in = parse_band_input(read_json_file(a.bands));
  const int hs = a.h_samples.value_or(cfg.sampling.homog_h_samples);
  if (hs < 2) throw ValidationError("--h-samples must be at least 2");
  const HomogeneityReport rep = is_homogeneous(in.E, a.eta, static_cast<std::size_t>(hs));
  json doc = envelope("homog_report", cfg);
  doc["bands"] = bandset_json(in.E);
  doc["eta"] = rep.eta;
  doc["holds"] = rep.holds;
  doc["worst_ratio"] = rep.worst_ratio;
  doc["witness"] = {{"x", rep.witness_x}, {"h", rep.witness_h}};
  doc["samples"] = {{"x", rep.x_samples}, {"h", rep.h_samples}};
  emit(output_path(a.common, cfg, "homog"), doc, cfg);
  std::printf("homogeneous at eta=%g: %s (worst ratio %.12g at x=%g, h=%g)\n", rep.eta, rep.holds ? "yes" : "no",
              rep.worst_ratio, rep.witness_x, rep.witness_h);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Potential theory on finite unions of intervals: equilibrium and harmonic measure, reflectionless "
               "functions and the two finite-depth constructions."};
  app.require_subcommand(1);

  PotentialArgs pa;
  auto* pot = app.add_subcommand("potential", "Equilibrium or harmonic measure, critical points, Widom sum");
  add_common(pot, pa.common);
  pot->add_option("--bands", pa.bands, "Band-set JSON")->required()->check(CLI::ExistingFile);
  pot->add_option("--pole", pa.pole, "Pole: a real number or 'inf'");
  pot->add_option("--arc", pa.arc, "Arc lo hi for the harmonic measure")->expected(2);
  pot->add_flag("--widom", pa.widom, "Include Green critical values and the Widom sum");
  pot->add_option("--green", pa.green_at, "Evaluate G(x, inf) at these points");
  pot->add_option("--points", pa.points, "Density samples per band");

  ReflArgs ra;
  auto* refl = app.add_subcommand("refl", "Reflectionless function of a band set and divisor");
  add_common(refl, ra.common);
  refl->add_option("--bands", ra.bands, "Band-set JSON with a divisor")->required()->check(CLI::ExistingFile);
  refl->add_option("--anchor", ra.anchor, "Accumulation point b0 left of the bands");
  refl->add_option("--at", ra.at, "Real points: density on bands, R in gaps");
  refl->add_option("--complex", ra.complex_points, "Complex points re im (repeatable)");
  refl->add_option("--mass", ra.mass, "Mass of the arc lo hi")->expected(2);
  refl->add_flag("--check-identity", ra.check_identity, "Compare product and exponential forms of R");
  refl->add_flag("--classify", ra.classify, "Weak-reflectionless test of the measure");
  refl->add_option("--points", ra.points, "Sample points for the identity check and classification");

  PointmassArgs pma;
  auto* bpm = app.add_subcommand("build-pointmass", "Widom set whose reflectionless measure has a point mass");
  add_common(bpm, pma.common);
  bpm->add_option("--depth", pma.depth, "Number of slits");
  bpm->add_option("--tol", pma.tol, "Harmonic measure window above the target");
  bpm->add_option("--target", pma.target, "Harmonic measure target of each slit");
  bpm->add_option("--b1", pma.b1, "Left end of the first slit");

  ScArgs sa;
  auto* bsc = app.add_subcommand("build-sc", "Multiscale construction with a singular-continuous component");
  add_common(bsc, sa.common);
  bsc->add_option("--depth", sa.depth, "Construction depth (1 to 4)");
  bsc->add_option("--eps-schedule", sa.eps_schedule, "JSON {\"eps\": [...], \"lengths\": [...]}")->check(CLI::ExistingFile);
  bsc->add_flag("--enforce-green-bounds", sa.enforce_green, "Require G < eps between flanking pairs while fitting");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run acceptance criteria");
  add_common(ver, va.common);
  ver->add_option("--suite", va.suite, "all | closed-forms | constructions | properties");
  ver->add_option("--only", va.only, "Criterion ids, e.g. AC1,AC5")->delimiter(',');

  HomogArgs ha;
  auto* hom = app.add_subcommand("homog", "Homogeneity test |E ∩ (x-h, x+h)| >= eta h");
  add_common(hom, ha.common);
  hom->add_option("--bands", ha.bands, "Band-set JSON")->required()->check(CLI::ExistingFile);
  hom->add_option("--eta", ha.eta, "Homogeneity constant in (0, 1]")->required();
  hom->add_option("--h-samples", ha.h_samples, "Logarithmic h samples per point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*pot) run_potential(pa);
    if (*refl) run_refl(ra);
    if (*bpm) run_build_pointmass(pma);
    if (*bsc) run_build_sc(sa);
    if (*ver) run_verify(va);
    if (*hom) run_homog(ha);
  } catch (const CheckFailed& f) {
    std::cerr << "widomlab: " << f.message << "\n";
    return f.code;
  } catch (const ValidationError& e) {
    std::cerr << "widomlab: invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "widomlab: invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "widomlab: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "widomlab: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
