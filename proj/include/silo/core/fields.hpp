#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "silo/core/error.hpp"

namespace silo {

using NodalField = std::vector<double>;

/// Standing layer u and rolling layer v sampled at the grid nodes at time t.
struct LayerState {
  NodalField u;
  NodalField v;
  double t = 0.0;

  static LayerState zeros(std::size_t nodes) { return {NodalField(nodes, 0.0), NodalField(nodes, 0.0), 0.0}; }

  void validate() const {
    detail::require(u.size() == v.size(), "u and v must have the same length");
    detail::require(t >= 0, "time must be nonnegative");
    for (std::size_t i = 0; i < u.size(); ++i) {
      detail::require(std::isfinite(u[i]), "u must be finite");
      detail::require(v[i] >= 0, "v must be nonnegative");
    }
  }
};

/// Similarity profile pair: u = U + c t, v = V. U is normalized to min 0.
struct SimilarityPair {
  NodalField U;
  NodalField V;
  double c = 0.0;
};

inline double min_value(const NodalField& f) { return *std::min_element(f.begin(), f.end()); }
inline double max_value(const NodalField& f) { return *std::max_element(f.begin(), f.end()); }

/// Subtracts the minimum so that min(f) == 0.
inline NodalField min_shifted(NodalField f) {
  if (f.empty()) return f;
  const double m = min_value(f);
  for (double& x : f) x -= m;
  return f;
}

/// max_i |a_i - b_i|.
inline double sup_distance(const NodalField& a, const NodalField& b) {
  detail::require(a.size() == b.size(), "fields differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace silo
