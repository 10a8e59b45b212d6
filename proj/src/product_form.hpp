#pragma once

#include <cmath>
#include <vector>

#include "widomlab/quadrature.hpp"

namespace widomlab::detail {

// |f(t)| = exp(log_scale) * prod |t - z| / prod |t - h|^(1/2), accumulated as a
// sum of logarithms so that hundreds of factors spanning many orders of
// magnitude neither overflow nor underflow.
struct ProductForm {
  double log_scale = 0.0;
  std::vector<double> zeros;
  std::vector<double> half_poles;

  // Skips at most one occurrence of each of skip_a, skip_b among half_poles.
  double log_abs(const IntervalPoint& p, double skip_a = NAN, double skip_b = NAN) const {
    double s = log_scale;
    for (double z : zeros) s += std::log(std::abs(p.minus(z)));
    bool used_a = false, used_b = false;
    double poles = 0.0;
    for (double h : half_poles) {
      if (!used_a && h == skip_a) {
        used_a = true;
        continue;
      }
      if (!used_b && h == skip_b) {
        used_b = true;
        continue;
      }
      poles += std::log(std::abs(p.minus(h)));
    }
    return s - 0.5 * poles;
  }

  double log_abs_at(double t) const {
    double s = log_scale;
    for (double z : zeros) s += std::log(std::abs(t - z));
    double poles = 0.0;
    for (double h : half_poles) poles += std::log(std::abs(t - h));
    return s - 0.5 * poles;
  }

  // Sign of prod (t - z) over the zeros.
  double zero_sign(const IntervalPoint& p) const {
    double s = 1.0;
    for (double z : zeros) {
      if (p.minus(z) < 0.0) s = -s;
    }
    return s;
  }
};

}  // namespace widomlab::detail
