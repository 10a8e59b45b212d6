#include "widomlab/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <type_traits>

#include "widomlab/error.hpp"
#include "widomlab/io.hpp"

namespace widomlab {

namespace {

// Reads the keys of one JSON object into fields, rejecting anything unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_ + " must be an object");
    for (auto it = j_.begin(); it != j_.end(); ++it) pending_.push_back(it.key());
  }

  void finish() const {
    if (!pending_.empty()) throw ValidationError("unknown config key " + path_ + "." + pending_.front());
  }

  template <class T>
  void get(const char* key, T& out) {
    if (!take(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ValidationError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ValidationError("");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) throw ValidationError("");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ValidationError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ValidationError("");
      } else {
        if (!v.is_array()) throw ValidationError("");
        for (const auto& e : v) {
          if (!e.is_number()) throw ValidationError("");
        }
      }
      out = v.get<T>();
    } catch (const ValidationError&) {
      throw ValidationError("config key " + path_ + "." + key + " has the wrong type");
    }
  }

  const json* child(const char* key) { return take(key) ? &j_.at(key) : nullptr; }

 private:
  bool take(const char* key) {
    const auto it = std::find(pending_.begin(), pending_.end(), key);
    if (it == pending_.end()) return false;
    pending_.erase(it);
    return true;
  }

  const json& j_;
  std::string path_;
  std::vector<std::string> pending_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("invalid config: " + what);
}

}  // namespace

void validate(const RunConfig& c) {
  require(c.quadrature.order >= 1 && c.quadrature.order <= 1024, "quadrature.order must lie in [1, 1024]");
  require(c.quadrature.rel_tol > 0.0, "quadrature.rel_tol must be positive");
  require(c.quadrature.max_panels >= 1, "quadrature.max_panels must be positive");
  require(c.tolerances.pv_tol > 0.0, "tolerances.pv_tol must be positive");
  require(c.tolerances.omega_tol > 0.0 && c.tolerances.omega_tol < 1.0, "tolerances.omega_tol must lie in (0, 1)");
  require(c.tolerances.identity_tol > 0.0, "tolerances.identity_tol must be positive");
  require(c.tolerances.residual_tol > 0.0, "tolerances.residual_tol must be positive");
  require(c.sampling.density_points >= 1, "sampling.density_points must be positive");
  require(c.sampling.identity_points >= 1, "sampling.identity_points must be positive");
  require(c.sampling.random_sets >= 1, "sampling.random_sets must be positive");
  require(c.sampling.homog_h_samples >= 2, "sampling.homog_h_samples must be at least 2");
  require(!c.output.dir.empty(), "output.dir must not be empty");
  validate(pointmass_config(c));
  normalized(sc_config(c));
}

json to_json(const RunConfig& c) {
  return json{
      {"seed", c.seed},
      {"quadrature", {{"order", c.quadrature.order}, {"rel_tol", c.quadrature.rel_tol}, {"max_panels", c.quadrature.max_panels}}},
      {"tolerances",
       {{"pv_tol", c.tolerances.pv_tol},
        {"omega_tol", c.tolerances.omega_tol},
        {"identity_tol", c.tolerances.identity_tol},
        {"residual_tol", c.tolerances.residual_tol}}},
      {"sampling",
       {{"density_points", c.sampling.density_points},
        {"identity_points", c.sampling.identity_points},
        {"random_sets", c.sampling.random_sets},
        {"homog_h_samples", c.sampling.homog_h_samples}}},
      {"pointmass",
       {{"a0", c.pointmass.a0},
        {"b1", c.pointmass.b1},
        {"target", c.pointmass.target},
        {"depth", c.pointmass.depth},
        {"max_halvings", c.pointmass.max_halvings}}},
      {"sc",
       {{"depth", c.sc.depth},
        {"eps", c.sc.eps},
        {"lengths", c.sc.lengths},
        {"enforce_green_bounds", c.sc.enforce_green_bounds},
        {"green_grid", c.sc.green_grid},
        {"sibling_factor", c.sc.sibling_factor}}},
      {"output", {{"dir", c.output.dir}, {"csv", c.output.csv}}},
  };
}

void apply_json(RunConfig& c, const json& j) {
  Section root(j, "config");
  root.get("seed", c.seed);
  if (const json* q = root.child("quadrature")) {
    Section s(*q, "quadrature");
    s.get("order", c.quadrature.order);
    s.get("rel_tol", c.quadrature.rel_tol);
    s.get("max_panels", c.quadrature.max_panels);
    s.finish();
  }
  if (const json* q = root.child("tolerances")) {
    Section s(*q, "tolerances");
    s.get("pv_tol", c.tolerances.pv_tol);
    s.get("omega_tol", c.tolerances.omega_tol);
    s.get("identity_tol", c.tolerances.identity_tol);
    s.get("residual_tol", c.tolerances.residual_tol);
    s.finish();
  }
  if (const json* q = root.child("sampling")) {
    Section s(*q, "sampling");
    s.get("density_points", c.sampling.density_points);
    s.get("identity_points", c.sampling.identity_points);
    s.get("random_sets", c.sampling.random_sets);
    s.get("homog_h_samples", c.sampling.homog_h_samples);
    s.finish();
  }
  if (const json* q = root.child("pointmass")) {
    Section s(*q, "pointmass");
    s.get("a0", c.pointmass.a0);
    s.get("b1", c.pointmass.b1);
    s.get("target", c.pointmass.target);
    s.get("depth", c.pointmass.depth);
    s.get("max_halvings", c.pointmass.max_halvings);
    s.finish();
  }
  if (const json* q = root.child("sc")) {
    Section s(*q, "sc");
    s.get("depth", c.sc.depth);
    s.get("eps", c.sc.eps);
    s.get("lengths", c.sc.lengths);
    s.get("enforce_green_bounds", c.sc.enforce_green_bounds);
    s.get("green_grid", c.sc.green_grid);
    s.get("sibling_factor", c.sc.sibling_factor);
    s.finish();
  }
  if (const json* q = root.child("output")) {
    Section s(*q, "output");
    s.get("dir", c.output.dir);
    s.get("csv", c.output.csv);
    s.finish();
  }
  root.finish();
}

RunConfig load_config(const std::optional<std::string>& path) {
  RunConfig cfg;
  std::optional<std::string> file = path;
  if (!file) {
    if (const char* env = std::getenv("WIDOMLAB_CONFIG"); env && *env) file = env;
  }
  if (file) apply_json(cfg, read_json_file(*file));
  validate(cfg);
  return cfg;
}

SolveOptions solve_options(const RunConfig& c) {
  SolveOptions o;
  o.quad = {c.quadrature.rel_tol, 0.0, c.quadrature.max_panels};
  o.residual_tol = c.tolerances.residual_tol;
  return o;
}

PointmassConfig pointmass_config(const RunConfig& c) {
  PointmassConfig p;
  p.a0 = c.pointmass.a0;
  p.b1 = c.pointmass.b1;
  p.target = c.pointmass.target;
  p.tol = c.tolerances.omega_tol;
  p.depth = c.pointmass.depth;
  p.max_halvings = c.pointmass.max_halvings;
  p.solve = solve_options(c);
  return p;
}

ScConfig sc_config(const RunConfig& c) {
  ScConfig s;
  s.depth = c.sc.depth;
  s.eps = c.sc.eps;
  s.lengths = c.sc.lengths;
  s.enforce_green_bounds = c.sc.enforce_green_bounds;
  s.green_grid = c.sc.green_grid;
  s.sibling_factor = c.sc.sibling_factor;
  return s;
}

AcceptanceOptions acceptance_options(const RunConfig& c) {
  AcceptanceOptions a;
  a.seed = c.seed;
  a.random_sets = c.sampling.random_sets;
  a.samples = c.sampling.identity_points;
  a.pointmass_depth = c.pointmass.depth;
  a.sc_depth = c.sc.depth;
  a.quad_order = c.quadrature.order;
  a.solve = solve_options(c);
  return a;
}

}  // namespace widomlab
