#pragma once

// Finite-element characterization of similarity solutions.
//
// Pipeline: solve the pure-Neumann potential problem -Lap(psi) = (f - c_h)/beta
// with P1 elements, take the elementwise flux w = grad(psi), recover the
// rolling layer V = c_h/(gamma alpha) + |w|/alpha and the standing-layer
// gradient z = w/V, then rebuild U by cumulative integration (1D) or by the
// V-weighted Neumann problem (2D).

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "silo/core/courant_mesh.hpp"
#include "silo/core/error.hpp"
#include "silo/core/fields.hpp"
#include "silo/core/grid.hpp"
#include "silo/core/parameters.hpp"
#include "silo/core/source.hpp"
#include "silo/discrete/sparse.hpp"

namespace silo {

/// One value per interval (1D) or per triangle (2D).
using ElementScalar = std::vector<double>;
/// One gradient per triangle.
using ElementVector = std::vector<Point2>;

struct PotentialSolution {
  NodalField psi;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  double c_h = 0.0;
};

/// c_h = (1/|Omega_h|) Int f, using the same integration as the load vector.
inline double discrete_mean_rate(const Source1D& f, const Grid1D& grid) {
  const NodalField b = hat_loads(f, grid);
  return std::accumulate(b.begin(), b.end(), 0.0) / grid.length();
}

inline double discrete_mean_rate(const Source2D& f, const CourantMesh& mesh) {
  const NodalField b = hat_loads(f, mesh);
  return std::accumulate(b.begin(), b.end(), 0.0) / mesh.grid().domain().measure();
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

/// P1 stiffness matrix on a 1D grid with one weight per interval.
inline CsrMatrix assemble_stiffness(const Grid1D& grid, const ElementScalar& weight) {
  detail::require(weight.size() == grid.intervals(), "one weight per interval expected");
  std::vector<CsrMatrix::Triplet> t;
  t.reserve(4 * grid.intervals());
  for (std::size_t k = 0; k < grid.intervals(); ++k) {
    const double a = weight[k] / (grid.x(k + 1) - grid.x(k));
    t.push_back({k, k, a});
    t.push_back({k + 1, k + 1, a});
    t.push_back({k, k + 1, -a});
    t.push_back({k + 1, k, -a});
  }
  return CsrMatrix(grid.size(), std::move(t));
}

/// P1 stiffness matrix on the Courant mesh with one weight per triangle.
inline CsrMatrix assemble_stiffness(const CourantMesh& mesh, const ElementScalar& weight) {
  detail::require(weight.size() == mesh.element_count(), "one weight per element expected");
  std::vector<CsrMatrix::Triplet> t;
  t.reserve(9 * mesh.element_count());
  const double area = mesh.element_area();
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto el = mesh.element(e);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        const double g = el.grad[a].x * el.grad[b].x + el.grad[a].y * el.grad[b].y;
        t.push_back({el.nodes[a], el.nodes[b], weight[e] * area * g});
      }
  }
  return CsrMatrix(mesh.grid().size(), std::move(t));
}

namespace detail {

/// (Int f phi_i - c_h Int phi_i) / beta, checked for compatibility.
inline NodalField neumann_rhs(const NodalField& loads, const NodalField& mass, double c_h,
                              double beta) {
  NodalField rhs(loads.size());
  double sum = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < loads.size(); ++i) {
    rhs[i] = (loads[i] - c_h * mass[i]) / beta;
    sum += rhs[i];
    scale += std::abs(loads[i]) / beta;
  }
  if (std::abs(sum) > 1e-12 * std::max(scale, 1.0))
    throw SolverError("Neumann right-hand side is not zero-mean (sum " + std::to_string(sum) +
                      "); load assembly is inconsistent");
  // Entries at rounding level of the loads mean g_h vanishes identically.
  double norm = 0.0;
  for (double r : rhs) norm = std::max(norm, std::abs(r));
  if (norm <= 1e-14 * std::max(scale, 1e-300)) std::fill(rhs.begin(), rhs.end(), 0.0);
  return rhs;
}

inline NodalField zero_weighted_mean(NodalField x, const NodalField& mass) {
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m += mass[i] * x[i];
  m /= total;
  for (double& v : x) v -= m;
  return x;
}

inline PotentialSolution solve_neumann(const CsrMatrix& A, const NodalField& rhs,
                                       const NodalField& mass, double c_h, const CgOptions& opts,
                                       NodalField guess = {}) {
  CgResult cg = projected_cg(A, rhs, std::move(guess), opts);
  PotentialSolution sol;
  sol.psi = zero_weighted_mean(std::move(cg.x), mass);
  sol.residual_norm = cg.relative_residual;
  sol.iterations = cg.iterations;
  sol.c_h = c_h;
  return sol;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Potential problem
// ---------------------------------------------------------------------------

/// Solves the discrete semidefinite Neumann problem
/// Int grad(psi).grad(phi) = Int (f - c_h)/beta phi for all P1 phi.
inline PotentialSolution solve_potential(const Source1D& f, const Grid1D& grid, const Parameters& p,
                                         const CgOptions& opts = {}, NodalField guess = {}) {
  p.validate();
  detail::require(f.total_mass() > 0, "potential problem needs a source with positive mass");
  const NodalField loads = hat_loads(f, grid);
  const NodalField mass = lumped_mass(grid);
  const double c_h = std::accumulate(loads.begin(), loads.end(), 0.0) / grid.length();
  const CsrMatrix A = assemble_stiffness(grid, ElementScalar(grid.intervals(), 1.0));
  return detail::solve_neumann(A, detail::neumann_rhs(loads, mass, c_h, p.beta), mass, c_h, opts,
                               std::move(guess));
}

inline PotentialSolution solve_potential(const Source2D& f, const CourantMesh& mesh,
                                         const Parameters& p, const CgOptions& opts = {},
                                         NodalField guess = {}) {
  p.validate();
  detail::require(f.total_mass() > 0, "potential problem needs a source with positive mass");
  const NodalField loads = hat_loads(f, mesh);
  const NodalField mass = lumped_mass(mesh);
  const double c_h = std::accumulate(loads.begin(), loads.end(), 0.0) / mesh.grid().domain().measure();
  const CsrMatrix A = assemble_stiffness(mesh, ElementScalar(mesh.element_count(), 1.0));
  return detail::solve_neumann(A, detail::neumann_rhs(loads, mass, c_h, p.beta), mass, c_h, opts,
                               std::move(guess));
}

// ---------------------------------------------------------------------------
// Flux, rolling layer and standing-layer gradient
// ---------------------------------------------------------------------------

/// Interval-wise derivative of the piecewise linear interpolant.
inline ElementScalar flux_from_potential(const NodalField& psi, const Grid1D& grid) {
  detail::require(psi.size() == grid.size(), "psi must be nodal");
  ElementScalar w(grid.intervals());
  for (std::size_t k = 0; k < w.size(); ++k)
    w[k] = (psi[k + 1] - psi[k]) / (grid.x(k + 1) - grid.x(k));
  return w;
}

/// Triangle-wise gradient of the piecewise linear interpolant.
inline ElementVector flux_from_potential(const NodalField& psi, const CourantMesh& mesh) {
  detail::require(psi.size() == mesh.grid().size(), "psi must be nodal");
  ElementVector w(mesh.element_count());
  for (std::size_t e = 0; e < w.size(); ++e) {
    const auto el = mesh.element(e);
    Point2 g{};
    for (std::size_t a = 0; a < 3; ++a) {
      g.x += psi[el.nodes[a]] * el.grad[a].x;
      g.y += psi[el.nodes[a]] * el.grad[a].y;
    }
    w[e] = g;
  }
  return w;
}

/// V = c_h/(gamma alpha) + |w|/alpha elementwise.
inline ElementScalar rolling_from_flux(const ElementScalar& w, double c_h, const Parameters& p) {
  ElementScalar v(w.size());
  for (std::size_t k = 0; k < w.size(); ++k)
    v[k] = c_h / (p.gamma * p.alpha) + std::abs(w[k]) / p.alpha;
  return v;
}

inline ElementScalar rolling_from_flux(const ElementVector& w, double c_h, const Parameters& p) {
  ElementScalar v(w.size());
  for (std::size_t k = 0; k < w.size(); ++k)
    v[k] = c_h / (p.gamma * p.alpha) + std::hypot(w[k].x, w[k].y) / p.alpha;
  return v;
}

/// z = w / V elementwise; |z| < alpha by construction.
inline ElementScalar standing_gradient(const ElementScalar& w, const ElementScalar& v) {
  detail::require(w.size() == v.size(), "flux and rolling layer differ in length");
  ElementScalar z(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!(v[k] > 0)) throw InvalidInput("rolling layer must be positive on every element");
    z[k] = w[k] / v[k];
  }
  return z;
}

inline ElementVector standing_gradient(const ElementVector& w, const ElementScalar& v) {
  detail::require(w.size() == v.size(), "flux and rolling layer differ in length");
  ElementVector z(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!(v[k] > 0)) throw InvalidInput("rolling layer must be positive on every element");
    z[k] = {w[k].x / v[k], w[k].y / v[k]};
  }
  return z;
}

// ---------------------------------------------------------------------------
// Standing layer reconstruction
// ---------------------------------------------------------------------------

enum class CumulativeRule {
  /// u(x_i) = h * sum of z over intervals 1..i, the interval to the right of
  /// x_i included (last node: all intervals). This is the printed cumulative
  /// formula; it lags the node by one interval, an O(h) offset.
  inclusive,
  /// u(x_0) = 0, u(x_i) = h * sum of z over the intervals left of x_i.
  node_anchored,
};

/// Cumulative integration of the piecewise constant gradient, min-shifted.
inline NodalField reconstruct_u_1d(const ElementScalar& z, const Grid1D& grid,
                                   CumulativeRule rule = CumulativeRule::node_anchored) {
  detail::require(z.size() == grid.intervals(), "one gradient per interval expected");
  NodalField u(grid.size(), 0.0);
  double acc = 0.0;
  if (rule == CumulativeRule::node_anchored) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
      acc += (grid.x(i) - grid.x(i - 1)) * z[i - 1];
      u[i] = acc;
    }
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (i < z.size()) acc += (grid.x(i + 1) - grid.x(i)) * z[i];
      u[i] = acc;
    }
  }
  return min_shifted(std::move(u));
}

/// Solves Int v grad(u).grad(phi) = Int (f - c_h)/beta phi with element-constant
/// weights v, then min-shifts u.
inline NodalField reconstruct_u_2d(const ElementScalar& v, const Source2D& f,
                                   const CourantMesh& mesh, const Parameters& p,
                                   const CgOptions& opts = {}, PotentialSolution* info = nullptr) {
  p.validate();
  detail::require(v.size() == mesh.element_count(), "one weight per element expected");
  for (double x : v) detail::require(x > 0, "rolling layer must be positive on every element");
  const NodalField loads = hat_loads(f, mesh);
  const NodalField mass = lumped_mass(mesh);
  const double c_h = std::accumulate(loads.begin(), loads.end(), 0.0) / mesh.grid().domain().measure();
  const CsrMatrix A = assemble_stiffness(mesh, v);
  PotentialSolution sol =
      detail::solve_neumann(A, detail::neumann_rhs(loads, mass, c_h, p.beta), mass, c_h, opts);
  NodalField u = min_shifted(sol.psi);
  if (info) *info = std::move(sol);
  return u;
}

// ---------------------------------------------------------------------------
// Element to node projection
// ---------------------------------------------------------------------------

/// Arithmetic mean over the incident intervals.
inline NodalField element_to_node(const ElementScalar& field, const Grid1D& grid) {
  detail::require(field.size() == grid.intervals(), "one value per interval expected");
  NodalField out(grid.size());
  out.front() = field.front();
  out.back() = field.back();
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) out[i] = 0.5 * (field[i - 1] + field[i]);
  return out;
}

/// Arithmetic mean over the incident triangles.
inline NodalField element_to_node(const ElementScalar& field, const CourantMesh& mesh) {
  detail::require(field.size() == mesh.element_count(), "one value per element expected");
  NodalField sum(mesh.grid().size(), 0.0), count(mesh.grid().size(), 0.0);
  for (std::size_t e = 0; e < field.size(); ++e)
    for (std::size_t n : mesh.element(e).nodes) {
      sum[n] += field[e];
      count[n] += 1.0;
    }
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] /= count[i];
  return sum;
}

// ---------------------------------------------------------------------------
// Full pipelines
// ---------------------------------------------------------------------------

struct DiscreteSimilarity1D {
  SimilarityPair pair;  ///< nodal u^e (min 0), v^e = element_to_node(V_h), c = c_h
  PotentialSolution potential;
  ElementScalar flux;
  ElementScalar rolling;
  ElementScalar gradient;
};

inline DiscreteSimilarity1D similarity_1d_discrete(const Source1D& f, const Grid1D& grid,
                                                   const Parameters& p,
                                                   CumulativeRule rule = CumulativeRule::inclusive,
                                                   const CgOptions& opts = {}) {
  DiscreteSimilarity1D out;
  out.potential = solve_potential(f, grid, p, opts);
  out.flux = flux_from_potential(out.potential.psi, grid);
  out.rolling = rolling_from_flux(out.flux, out.potential.c_h, p);
  out.gradient = standing_gradient(out.flux, out.rolling);
  out.pair.U = reconstruct_u_1d(out.gradient, grid, rule);
  out.pair.V = element_to_node(out.rolling, grid);
  out.pair.c = out.potential.c_h;
  return out;
}

struct DiscreteSimilarity2D {
  SimilarityPair pair;
  PotentialSolution potential;
  PotentialSolution standing;
  ElementVector flux;
  ElementScalar rolling;
};

inline DiscreteSimilarity2D similarity_2d_discrete(const Source2D& f, const Grid2D& grid,
                                                   const Parameters& p,
                                                   const CgOptions& opts = {}) {
  const CourantMesh mesh(grid);
  DiscreteSimilarity2D out;
  out.potential = solve_potential(f, mesh, p, opts);
  out.flux = flux_from_potential(out.potential.psi, mesh);
  out.rolling = rolling_from_flux(out.flux, out.potential.c_h, p);
  out.pair.U = reconstruct_u_2d(out.rolling, f, mesh, p, opts, &out.standing);
  out.pair.V = element_to_node(out.rolling, mesh);
  out.pair.c = out.potential.c_h;
  return out;
}

}  // namespace silo
