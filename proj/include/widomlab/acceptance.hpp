#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "widomlab/potential.hpp"

namespace widomlab {

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  int random_sets = 20;
  int samples = 50;
  int pointmass_depth = 8;
  int sc_depth = 3;
  /// Largest Gauss-Legendre order in the moment suite.
  int quad_order = 64;
  SolveOptions solve;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  /// Named measurements backing the verdict.
  std::vector<std::pair<std::string, double>> metrics;
  /// Wall time; kept out of serialized reports so they stay reproducible.
  double seconds = 0.0;
};

/// Criterion ids of a suite: all, closed-forms, constructions, properties.
std::vector<std::string> suite_ids(const std::string& suite);

/// Runs one criterion. Library exceptions become a failed result.
CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opt);

std::vector<CriterionResult> run_suite(const std::vector<std::string>& ids, const AcceptanceOptions& opt);

}  // namespace widomlab
