#pragma once

#include <cmath>

#include "silo/core/error.hpp"

namespace silo {

/// Material constants of the two-layer model.
///
/// `alpha` is the critical slope, `beta` the mobility of the rolling layer and
/// `gamma` the collision (exchange) rate. All three must be strictly positive.
struct Parameters {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  Parameters() = default;
  Parameters(double alpha_, double beta_, double gamma_)
      : alpha(alpha_), beta(beta_), gamma(gamma_) {
    validate();
  }

  void validate() const {
    detail::require(std::isfinite(alpha) && alpha > 0, "alpha must be positive");
    detail::require(std::isfinite(beta) && beta > 0, "beta must be positive");
    detail::require(std::isfinite(gamma) && gamma > 0, "gamma must be positive");
  }
};

}  // namespace silo
