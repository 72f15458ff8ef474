#pragma once

// Explicit upwind finite-difference scheme for the two-layer growth model
//
//   v_t = beta div(v grad u) - gamma (alpha - |grad u|) v + f
//   u_t = gamma (alpha - |grad u|) v
//
// on intervals and rectangles with zero-flux walls.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "silo/core/courant_mesh.hpp"
#include "silo/core/error.hpp"
#include "silo/core/fields.hpp"
#include "silo/core/grid.hpp"
#include "silo/core/parameters.hpp"
#include "silo/core/source.hpp"

namespace silo {

struct SchemeConfig {
  double cfl_safety = 0.25;
  double exchange_cap_safety = 0.5;
  double stop_epsilon = 1e-3;
  std::size_t stop_window = 50;
  std::size_t max_steps = 5'000'000;
  /// Clipped rolling-layer mass tolerated, relative to the injected mass.
  double clip_alarm = 1e-8;

  void validate() const {
    detail::require(cfl_safety > 0 && cfl_safety <= 1, "cfl_safety must lie in (0, 1]");
    detail::require(exchange_cap_safety > 0 && exchange_cap_safety <= 1,
                    "exchange_cap_safety must lie in (0, 1]");
    detail::require(stop_epsilon > 0 && stop_epsilon < 1, "stop_epsilon must lie in (0, 1)");
    detail::require(stop_window >= 1, "stop_window must be at least 1");
    detail::require(max_steps >= 1, "max_steps must be at least 1");
  }
};

// ---------------------------------------------------------------------------
// Stencil primitives (1D, also applied along each axis in 2D)
// ---------------------------------------------------------------------------

namespace detail {

/// Selects the upwind slope from the backward and forward differences of a node.
inline double godunov(double back, double fwd) {
  const double down_left = back > 0.0 ? back : 0.0;
  const double down_right = fwd < 0.0 ? -fwd : 0.0;
  return down_left >= down_right ? down_left : -down_right;
}

}  // namespace detail

/// Upwind slope at node i: the steeper of the two one-sided differences among
/// those that go downhill from node i (the backward one wins an exact tie).
/// A node with no lower neighbour (local minimum or flat) gets 0. Walls act as
/// a ghost node level with the wall node, so the missing difference is 0.
inline double du_upwind(std::span<const double> u, std::size_t i, double h) {
  const double back = i > 0 ? (u[i] - u[i - 1]) / h : 0.0;
  const double fwd = i + 1 < u.size() ? (u[i + 1] - u[i]) / h : 0.0;
  return detail::godunov(back, fwd);
}

namespace detail {

/// Flux through the face between nodes a and b = a + 1 (positive: towards a),
/// carried by the rolling layer of the higher node.
inline double face_flux(double ua, double ub, double va, double vb, double h) {
  const double slope = (ub - ua) / h;
  return (slope > 0 ? vb : va) * slope;
}

/// face_flux times h.
inline double face_transfer(double ua, double ub, double va, double vb) {
  const double du = ub - ua;
  return (du > 0 ? vb : va) * du;
}

}  // namespace detail

/// Upwind approximation of (v u_x)_x at node i.
///
/// Each face carries v of its upstream (higher) node times the face slope and
/// G_i is the difference of the two face fluxes; wall faces carry nothing. On
/// monotone stretches this is (v_{i+1}Du_{i+1} - v_i Du_i)/h when Du_i > 0 and
/// (v_i Du_i - v_{i-1}Du_{i-1})/h when Du_i < 0.
inline double flux_G(std::span<const double> u, std::span<const double> v, std::size_t i, double h) {
  const std::size_t n = u.size();
  const double right = i + 1 < n ? detail::face_flux(u[i], u[i + 1], v[i], v[i + 1], h) : 0.0;
  const double left = i > 0 ? detail::face_flux(u[i - 1], u[i], v[i - 1], v[i], h) : 0.0;
  return (right - left) / h;
}

/// Time step bound combining an advective CFL limit and a cap on the exchange
/// term; `dims` divides the advective limit in 2D.
inline double stable_dt(double max_slope, double max_v, const Parameters& p,
                        const SchemeConfig& cfg, double h, int dims = 1) {
  const double speed = std::max(p.beta, p.gamma) * (p.alpha + max_slope);
  const double advective = cfg.cfl_safety * h / (dims * speed) / std::max(1.0, max_v);
  const double exchange = cfg.exchange_cap_safety / (p.gamma * (p.alpha + max_slope));
  return std::min(advective, exchange);
}

inline double max_upwind_slope(const LayerState& s, double h) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) m = std::max(m, std::abs(du_upwind(s.u, i, h)));
  return m;
}

inline double stable_dt(const LayerState& s, const Parameters& p, const SchemeConfig& cfg, double h) {
  return stable_dt(max_upwind_slope(s, h), max_value(s.v), p, cfg, h, 1);
}

// ---------------------------------------------------------------------------
// Time steps
// ---------------------------------------------------------------------------

struct StepDiagnostics {
  double clipped = 0.0;    ///< rolling-layer mass removed by clipping at 0 (times cell measure)
  double max_slope = 0.0;  ///< max |Du| (|grad u| in 2D) on the old state
};

namespace detail {

inline void check_finite(const LayerState& s, std::size_t step) {
  for (std::size_t i = 0; i < s.u.size(); ++i)
    if (!std::isfinite(s.u[i]) || !std::isfinite(s.v[i]))
      throw SolverError("non-finite value at node " + std::to_string(i) + " in step " +
                        std::to_string(step));
}

}  // namespace detail

/// One explicit step of the 1D scheme.
inline LayerState step_1d(const LayerState& s, std::span<const double> f, const Parameters& p,
                          double dt, double h, StepDiagnostics* diag = nullptr,
                          std::size_t step_index = 0) {
  const std::size_t n = s.u.size();
  detail::require(s.v.size() == n && f.size() == n, "state and source sizes differ");
  LayerState next{NodalField(n), NodalField(n), s.t + dt};
  StepDiagnostics d;
  std::vector<double> face(n + 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    face[i + 1] = detail::face_flux(s.u[i], s.u[i + 1], s.v[i], s.v[i + 1], h);
  for (std::size_t i = 0; i < n; ++i) {
    const double slope = std::abs(du_upwind(s.u, i, h));
    d.max_slope = std::max(d.max_slope, slope);
    const double exchange = p.gamma * (p.alpha - slope) * s.v[i];
    const double G = (face[i + 1] - face[i]) / h;
    double v = s.v[i] + dt * (p.beta * G - exchange + f[i]);
    if (v < 0) {
      d.clipped += -v * h;
      v = 0.0;
    }
    next.v[i] = v;
    next.u[i] = s.u[i] + dt * exchange;
  }
  detail::check_finite(next, step_index);
  if (diag) *diag = d;
  return next;
}

namespace detail {

/// Upwind slope components at node (i, j) of a row-major nx-by-ny lattice.
inline Point2 upwind_gradient(const double* u, std::size_t i, std::size_t j, std::size_t nx,
                              std::size_t ny, double h) {
  const std::size_t k = j * nx + i;
  const double bx = i > 0 ? u[k] - u[k - 1] : 0.0;
  const double fx = i + 1 < nx ? u[k + 1] - u[k] : 0.0;
  const double by = j > 0 ? u[k] - u[k - nx] : 0.0;
  const double fy = j + 1 < ny ? u[k + nx] - u[k] : 0.0;
  return {godunov(bx, fx) / h, godunov(by, fy) / h};
}

}  // namespace detail

/// One explicit step on a rectangle: the flux divergence is split into
/// (v u_x)_x + (v u_y)_y, each discretized by the 1D rule along its axis, and
/// |grad u| = sqrt(Du_x^2 + Du_y^2).
inline LayerState step_2d(const LayerState& s, std::span<const double> f, const Parameters& p,
                          double dt, const Grid2D& grid, StepDiagnostics* diag = nullptr,
                          std::size_t step_index = 0) {
  const std::size_t nx = grid.nx(), ny = grid.ny(), n = grid.size();
  const double h = grid.h();
  detail::require(s.u.size() == n && s.v.size() == n && f.size() == n,
                  "state and source sizes differ from the grid");
  LayerState next{NodalField(n), NodalField(n), s.t + dt};
  StepDiagnostics d;
  const double* u = s.u.data();
  const double* v = s.v.data();
  const double inv_h2 = 1.0 / (h * h);

  // east[k], north[k]: h times the flux through the face shared with the
  // right and upper neighbour of node k.
  std::vector<double> east(n, 0.0), north(n, 0.0);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = j * nx + i;
      if (i + 1 < nx) east[k] = detail::face_transfer(u[k], u[k + 1], v[k], v[k + 1]);
      if (j + 1 < ny) north[k] = detail::face_transfer(u[k], u[k + nx], v[k], v[k + nx]);
    }

  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = j * nx + i;
      const Point2 g = detail::upwind_gradient(u, i, j, nx, ny, h);
      const double slope = std::sqrt(g.x * g.x + g.y * g.y);
      d.max_slope = std::max(d.max_slope, slope);
      const double exchange = p.gamma * (p.alpha - slope) * v[k];
      const double west = i > 0 ? east[k - 1] : 0.0;
      const double south = j > 0 ? north[k - nx] : 0.0;
      const double G = ((east[k] - west) + (north[k] - south)) * inv_h2;
      double vn = v[k] + dt * (p.beta * G - exchange + f[k]);
      if (vn < 0) {
        d.clipped += -vn * h * h;
        vn = 0.0;
      }
      next.v[k] = vn;
      next.u[k] = u[k] + dt * exchange;
    }
  detail::check_finite(next, step_index);
  if (diag) *diag = d;
  return next;
}

/// max over nodes of sqrt(Du_x^2 + Du_y^2).
inline double max_upwind_slope(const LayerState& s, const Grid2D& grid) {
  double m = 0.0;
  for (std::size_t j = 0; j < grid.ny(); ++j)
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const Point2 g = detail::upwind_gradient(s.u.data(), i, j, grid.nx(), grid.ny(), grid.h());
      m = std::max(m, std::sqrt(g.x * g.x + g.y * g.y));
    }
  return m;
}

// ---------------------------------------------------------------------------
// Similarity detection
// ---------------------------------------------------------------------------

struct Detection {
  bool converged = false;
  double c_obs = 0.0;
};

/// Tracks node-wise growth rates r_i = (u_i^{n+1} - u_i^n)/dt and declares a
/// similarity profile once max r - min r <= epsilon * mean r held for
/// `stop_window` consecutive steps and the step means over that window agree
/// to the same relative tolerance. A nonpositive mean never counts.
class SimilarityDetector {
 public:
  explicit SimilarityDetector(const SchemeConfig& cfg) : eps_(cfg.stop_epsilon), window_(cfg.stop_window) {}

  Detection observe(std::span<const double> u_old, std::span<const double> u_new, double dt) {
    double lo = INFINITY, hi = -INFINITY, sum = 0.0;
    for (std::size_t i = 0; i < u_old.size(); ++i) {
      const double r = (u_new[i] - u_old[i]) / dt;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      sum += r;
    }
    return observe_rates(lo, hi, sum / static_cast<double>(u_old.size()));
  }

  Detection observe_rates(double lo, double hi, double mean) {
    if (mean > 0 && hi - lo <= eps_ * mean) {
      means_.push_back(mean);
      if (means_.size() > window_) means_.pop_front();
    } else {
      means_.clear();
    }
    Detection d;
    if (means_.empty()) return d;
    d.c_obs = means_.back();
    const auto [lo_m, hi_m] = std::minmax_element(means_.begin(), means_.end());
    d.converged = means_.size() >= window_ && *hi_m - *lo_m <= eps_ * means_.back();
    return d;
  }

 private:
  double eps_;
  std::size_t window_;
  std::deque<double> means_;
};

/// Batch form: feeds a history of node-wise rate vectors to a detector.
inline Detection detect_similarity(const std::vector<NodalField>& rate_history, const SchemeConfig& cfg) {
  SimilarityDetector det(cfg);
  Detection d;
  for (const auto& r : rate_history) {
    if (r.empty()) continue;
    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    d = det.observe_rates(*lo, *hi, std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size()));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

struct RunReport {
  LayerState final_state;
  NodalField u_d;  ///< final u shifted to min 0
  NodalField v_d;
  std::size_t steps = 0;
  bool converged = false;
  double c_obs = 0.0;
  double injected_mass = 0.0;
  double clipped_mass = 0.0;
  double mass_defect = 0.0;            ///< accumulated |d(mass) - dt * injected rate|
  std::vector<double> defect_history;  ///< per-step defect
  std::vector<double> slope_history;   ///< per-step max |Du| on the old state
  double final_max_slope = 0.0;

  double defect_per_unit_time() const {
    return final_state.t > 0 ? mass_defect / final_state.t : 0.0;
  }
  bool clip_alarm(const SchemeConfig& cfg) const {
    return clipped_mass > cfg.clip_alarm * std::max(injected_mass, 1e-300);
  }
};

using SnapshotCallback = std::function<void(const LayerState&, std::size_t step)>;

namespace detail {

template <class Step, class Slope>
RunReport evolve(LayerState state, std::span<const double> f, double cell, const SchemeConfig& cfg,
                 Step&& step, Slope&& max_slope, const SnapshotCallback& snapshot,
                 std::size_t snapshot_every) {
  cfg.validate();
  state.validate();
  RunReport rep;
  SimilarityDetector detector(cfg);
  const double source_rate = cell * std::accumulate(f.begin(), f.end(), 0.0);
  auto mass_of = [cell](const LayerState& s) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) m += s.u[i] + s.v[i];
    return cell * m;
  };
  double mass = mass_of(state);
  if (snapshot) snapshot(state, 0);

  for (rep.steps = 0; rep.steps < cfg.max_steps;) {
    const double dt = max_slope(state);
    StepDiagnostics diag;
    LayerState next = step(state, dt, diag, rep.steps);
    ++rep.steps;

    const double next_mass = mass_of(next);
    const double defect = std::abs((next_mass - mass) - dt * source_rate);
    rep.mass_defect += defect;
    rep.defect_history.push_back(defect);
    rep.slope_history.push_back(diag.max_slope);
    rep.injected_mass += dt * source_rate;
    rep.clipped_mass += diag.clipped;
    mass = next_mass;

    const Detection det = detector.observe(state.u, next.u, dt);
    state = std::move(next);
    if (snapshot && snapshot_every > 0 && rep.steps % snapshot_every == 0) snapshot(state, rep.steps);
    if (det.converged) {
      rep.converged = true;
      rep.c_obs = det.c_obs;
      break;
    }
    rep.c_obs = det.c_obs;
  }
  rep.u_d = min_shifted(state.u);
  rep.v_d = state.v;
  rep.final_state = std::move(state);
  return rep;
}

}  // namespace detail

struct RunOptions {
  SnapshotCallback snapshot;
  std::size_t snapshot_every = 0;
  /// Initial standing layer; empty means u0 = 0. The rolling layer starts at 0.
  NodalField u0;
};

/// Runs the 1D scheme from rest until a similarity profile is detected or
/// max_steps is reached (reported through `converged`, not thrown).
inline RunReport run(const Source1D& f, const Grid1D& grid, const Parameters& p,
                     const SchemeConfig& cfg, const RunOptions& opts = {}) {
  p.validate();
  const NodalField fs = sample_source(f, grid);
  const double h = grid.h();
  LayerState s0 = LayerState::zeros(grid.size());
  if (!opts.u0.empty()) {
    detail::require(opts.u0.size() == grid.size(), "u0 must be nodal");
    s0.u = opts.u0;
  }
  RunReport rep = detail::evolve(
      std::move(s0), fs, h, cfg,
      [&](const LayerState& s, double dt, StepDiagnostics& d, std::size_t k) {
        return step_1d(s, fs, p, dt, h, &d, k);
      },
      [&](const LayerState& s) { return stable_dt(s, p, cfg, h); }, opts.snapshot,
      opts.snapshot_every);
  rep.final_max_slope = max_upwind_slope(rep.final_state, h);
  return rep;
}

inline RunReport run(const Source2D& f, const Grid2D& grid, const Parameters& p,
                     const SchemeConfig& cfg, const RunOptions& opts = {}) {
  p.validate();
  const NodalField fs = sample_source(f, grid);
  const double h = grid.h();
  LayerState s0 = LayerState::zeros(grid.size());
  if (!opts.u0.empty()) {
    detail::require(opts.u0.size() == grid.size(), "u0 must be nodal");
    s0.u = opts.u0;
  }
  RunReport rep = detail::evolve(
      std::move(s0), fs, h * h, cfg,
      [&](const LayerState& s, double dt, StepDiagnostics& d, std::size_t k) {
        return step_2d(s, fs, p, dt, grid, &d, k);
      },
      [&](const LayerState& s) {
        return stable_dt(max_upwind_slope(s, grid), max_value(s.v), p, cfg, h, 2);
      },
      opts.snapshot, opts.snapshot_every);
  rep.final_max_slope = max_upwind_slope(rep.final_state, grid);
  return rep;
}

}  // namespace silo
