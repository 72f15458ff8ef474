#pragma once

// Closed-form similarity solutions. These serve as oracles for the
// finite-element characterization and for the evolutive scheme.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "silo/core/error.hpp"
#include "silo/core/fields.hpp"
#include "silo/core/grid.hpp"
#include "silo/core/parameters.hpp"
#include "silo/core/source.hpp"

namespace silo {

/// G(x) = (x/L) Int_0^L f - Int_0^x f, the flux of the 1D similarity solution
/// (up to the factor 1/beta). Atoms use the left limit at their location.
inline double g_function(const Source1D& f, double length, double x) {
  detail::require(x >= 0.0 && x <= length, "G evaluated outside [0, L]");
  return (x / length) * f.total_mass() - cumulative_mass(f, x);
}

/// U_x at every grid node: alpha*G / ((beta/(gamma L)) Int f + |G|).
inline NodalField exact_slope_1d(const Source1D& f, const Grid1D& grid, const Parameters& p) {
  validate(f, grid.domain());
  const double mass = f.total_mass();
  detail::require(mass > 0, "similarity solution needs a source with positive mass");
  const double L = grid.length();
  const double floor_term = p.beta / (p.gamma * L) * mass;
  NodalField ux(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = g_function(f, L, grid.x(i));
    ux[i] = p.alpha * g / (floor_term + std::abs(g));
  }
  return ux;
}

/// Exact 1D similarity pair on the nodes of `grid`.
///
/// V(x) = Int f/(gamma alpha L) + |G(x)|/(alpha beta). U is the trapezoidal
/// integral of U_x from 0, shifted to min 0.
inline SimilarityPair similarity_1d_exact(const Source1D& f, const Grid1D& grid,
                                          const Parameters& p) {
  p.validate();
  const NodalField ux = exact_slope_1d(f, grid, p);
  const double L = grid.length();
  const double mass = f.total_mass();

  SimilarityPair out;
  out.c = source_mean(f, grid.domain());
  out.V.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.V[i] = mass / (p.gamma * p.alpha * L) +
               std::abs(g_function(f, L, grid.x(i))) / (p.alpha * p.beta);

  // An atom on a node makes U_x jump there; the interval to its right starts
  // from the right limit.
  const double floor_term = p.beta / (p.gamma * L) * mass;
  out.U.assign(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x0 = grid.x(i - 1);
    double left = ux[i - 1];
    double jump = 0.0;
    for (const auto& a : f.atoms)
      if (a.x == x0) jump += a.mass;
    if (jump != 0.0) {
      const double g = g_function(f, L, x0) - jump;
      left = p.alpha * g / (floor_term + std::abs(g));
    }
    out.U[i] = out.U[i - 1] + 0.5 * (grid.x(i) - x0) * (ux[i] + left);
  }
  out.U = min_shifted(std::move(out.U));
  return out;
}

/// Unit point source at L/2: logarithmic standing layer, piecewise linear
/// rolling layer. The log term is evaluated exactly as printed, which is only
/// dimensionally unambiguous for alpha = beta = gamma = 1.
inline SimilarityPair example1_exact(const Grid1D& grid, const Parameters& p) {
  p.validate();
  const double L = grid.length();
  const double k = p.alpha * p.gamma / p.beta;
  SimilarityPair out;
  out.c = 1.0 / L;
  out.U.resize(grid.size());
  out.V.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    const double s = std::min(x, L - x);
    out.V[i] = 1.0 / (p.gamma * p.alpha * L) + s / (p.alpha * p.beta * L);
    out.U[i] = x <= 0.5 * L ? k * (x - std::log1p(x)) : k * (L - x - std::log1p(L - x));
  }
  return out;
}

struct RadialProfile {
  double radius = 0.0;
  double c = 0.0;
  std::vector<double> r;
  std::vector<double> V;
  std::vector<double> Ur;
  std::vector<double> U;
};

/// Radial similarity solution for a point source at the centre of a disk of
/// radius R. U is integrated inward from the wall with U(R) = 0.
inline RadialProfile example2_radial(double radius, const Parameters& p, double c,
                                     std::vector<double> radii) {
  p.validate();
  detail::require(radius > 0, "silo radius must be positive");
  detail::require(c > 0, "growth velocity must be positive");
  for (double r : radii)
    detail::require(r > 0.0 && r <= radius, "radial samples must lie in (0, R]; V is singular at 0");

  RadialProfile out;
  out.radius = radius;
  out.c = c;
  out.r = std::move(radii);
  const std::size_t n = out.r.size();
  out.V.resize(n);
  out.Ur.resize(n);
  out.U.assign(n, 0.0);

  const double R2 = radius * radius;
  auto slope = [&](double r) {
    const double d = R2 - r * r;
    return -p.alpha * d / (d + 2.0 * p.beta * r / p.gamma);
  };
  for (std::size_t k = 0; k < n; ++k) {
    const double r = out.r[k];
    out.V[k] = c / (p.gamma * p.alpha) * (1.0 + p.gamma / (2.0 * p.beta * r) * (R2 - r * r));
    out.Ur[k] = slope(r);
  }

  // Trapezoidal integration from R inward over the radii in decreasing order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return out.r[a] > out.r[b]; });
  double prev_r = radius, prev_slope = 0.0, acc = 0.0;
  for (std::size_t idx : order) {
    const double r = out.r[idx];
    acc -= 0.5 * (prev_r - r) * (out.Ur[idx] + prev_slope);
    out.U[idx] = acc;
    prev_r = r;
    prev_slope = out.Ur[idx];
  }
  if (n > 0) {
    const double m = *std::min_element(out.U.begin(), out.U.end());
    for (double& u : out.U) u -= m;
  }
  return out;
}

}  // namespace silo
