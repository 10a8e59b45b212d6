#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "widomlab/acceptance.hpp"
#include "widomlab/construct_pointmass.hpp"
#include "widomlab/construct_sc.hpp"

namespace widomlab {

/// Every tunable of a run. The built-in values mirror config/defaults.json.
struct RunConfig {
  std::uint64_t seed = 20240601;

  struct Quadrature {
    /// Highest Gauss-Legendre order exercised by the moment suite.
    int order = 64;
    double rel_tol = 1e-13;
    int max_panels = 6000;
  } quadrature;

  struct Tolerances {
    /// Threshold on |Re C(x + i0)| for the weakly-reflectionless verdict.
    double pv_tol = 1e-6;
    double omega_tol = 1e-3;
    double identity_tol = 1e-10;
    double residual_tol = 1e-10;
  } tolerances;

  struct Sampling {
    int density_points = 64;
    int identity_points = 50;
    int random_sets = 20;
    int homog_h_samples = 64;
  } sampling;

  struct Pointmass {
    double a0 = 1.0;
    double b1 = 0.5;
    double target = 0.5;
    int depth = 8;
    int max_halvings = 120;
  } pointmass;

  struct Sc {
    int depth = 3;
    std::vector<double> eps;
    std::vector<double> lengths;
    bool enforce_green_bounds = false;
    int green_grid = 9;
    double sibling_factor = 1.1;
  } sc;

  struct Output {
    std::string dir = "out";
    bool csv = true;
  } output;
};

void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

/// Overlays the keys present in `j`. Unknown keys and wrong types are
/// validation errors naming the offending path.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

/// Built-in defaults, then the file named by WIDOMLAB_CONFIG (or `path`,
/// which takes precedence), validated.
RunConfig load_config(const std::optional<std::string>& path);

SolveOptions solve_options(const RunConfig& cfg);
PointmassConfig pointmass_config(const RunConfig& cfg);
ScConfig sc_config(const RunConfig& cfg);
AcceptanceOptions acceptance_options(const RunConfig& cfg);

}  // namespace widomlab
