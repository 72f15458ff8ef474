#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "silo/core/courant_mesh.hpp"
#include "silo/core/error.hpp"
#include "silo/core/grid.hpp"

namespace silo {

// ---------------------------------------------------------------------------
// Source descriptions. A source is a finite sum of constant-intensity patches
// and point atoms (Dirac masses), so its integrals are available in closed form.
// ---------------------------------------------------------------------------

struct IntervalPatch {
  double a = 0.0;
  double b = 0.0;
  double intensity = 0.0;
};

struct Atom1D {
  double x = 0.0;
  double mass = 0.0;
};

struct Source1D {
  std::vector<IntervalPatch> patches;
  std::vector<Atom1D> atoms;

  static Source1D constant(double k, double length) {
    Source1D f;
    f.patches.push_back({0.0, length, k});
    return f;
  }

  Source1D& add_patch(double a, double b, double intensity) {
    patches.push_back({a, b, intensity});
    return *this;
  }
  Source1D& add_atom(double x, double mass) {
    atoms.push_back({x, mass});
    return *this;
  }

  Source1D scaled(double s) const {
    Source1D out = *this;
    for (auto& p : out.patches) p.intensity *= s;
    for (auto& a : out.atoms) a.mass *= s;
    return out;
  }

  double total_mass() const {
    double m = 0.0;
    for (const auto& p : patches) m += p.intensity * (p.b - p.a);
    for (const auto& a : atoms) m += a.mass;
    return m;
  }
};

inline Source1D operator+(Source1D lhs, const Source1D& rhs) {
  lhs.patches.insert(lhs.patches.end(), rhs.patches.begin(), rhs.patches.end());
  lhs.atoms.insert(lhs.atoms.end(), rhs.atoms.begin(), rhs.atoms.end());
  return lhs;
}

struct RectPatch {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  double intensity = 0.0;
};

struct DiskPatch {
  double cx = 0.0, cy = 0.0, radius = 0.0;
  double intensity = 0.0;
};

struct Atom2D {
  double x = 0.0, y = 0.0;
  double mass = 0.0;
};

struct Source2D {
  std::vector<RectPatch> rects;
  std::vector<DiskPatch> disks;
  std::vector<Atom2D> atoms;

  static Source2D constant(double k, const Rectangle& domain) {
    Source2D f;
    f.rects.push_back({0.0, domain.lx, 0.0, domain.ly, k});
    return f;
  }

  Source2D& add_rect(double x0, double x1, double y0, double y1, double intensity) {
    rects.push_back({x0, x1, y0, y1, intensity});
    return *this;
  }
  Source2D& add_disk(double cx, double cy, double r, double intensity) {
    disks.push_back({cx, cy, r, intensity});
    return *this;
  }
  Source2D& add_atom(double x, double y, double mass) {
    atoms.push_back({x, y, mass});
    return *this;
  }

  Source2D scaled(double s) const {
    Source2D out = *this;
    for (auto& p : out.rects) p.intensity *= s;
    for (auto& d : out.disks) d.intensity *= s;
    for (auto& a : out.atoms) a.mass *= s;
    return out;
  }

  double total_mass() const {
    double m = 0.0;
    for (const auto& p : rects) m += p.intensity * (p.x1 - p.x0) * (p.y1 - p.y0);
    for (const auto& d : disks) m += d.intensity * std::numbers::pi * d.radius * d.radius;
    for (const auto& a : atoms) m += a.mass;
    return m;
  }
};

inline Source2D operator+(Source2D lhs, const Source2D& rhs) {
  lhs.rects.insert(lhs.rects.end(), rhs.rects.begin(), rhs.rects.end());
  lhs.disks.insert(lhs.disks.end(), rhs.disks.begin(), rhs.disks.end());
  lhs.atoms.insert(lhs.atoms.end(), rhs.atoms.begin(), rhs.atoms.end());
  return lhs;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {

constexpr double kGeomTol = 1e-12;

inline bool inside(double s, double lo, double hi) {
  return s >= lo - kGeomTol && s <= hi + kGeomTol;
}

}  // namespace detail

inline void validate(const Source1D& f, const Interval& domain) {
  for (const auto& p : f.patches) {
    detail::require(p.a <= p.b, "patch endpoints out of order");
    detail::require(p.intensity >= 0 && std::isfinite(p.intensity),
                    "patch intensity must be finite and nonnegative");
    detail::require(detail::inside(p.a, 0.0, domain.length) &&
                        detail::inside(p.b, 0.0, domain.length),
                    "patch [" + std::to_string(p.a) + ", " + std::to_string(p.b) +
                        "] extends outside the domain");
  }
  for (const auto& a : f.atoms) {
    detail::require(a.mass >= 0 && std::isfinite(a.mass), "atom mass must be nonnegative");
    detail::require(detail::inside(a.x, 0.0, domain.length), "atom lies outside the domain");
  }
}

inline void validate(const Source2D& f, const Rectangle& domain) {
  for (const auto& p : f.rects) {
    detail::require(p.x0 <= p.x1 && p.y0 <= p.y1, "rectangle corners out of order");
    detail::require(p.intensity >= 0 && std::isfinite(p.intensity),
                    "rectangle intensity must be finite and nonnegative");
    detail::require(detail::inside(p.x0, 0.0, domain.lx) && detail::inside(p.x1, 0.0, domain.lx) &&
                        detail::inside(p.y0, 0.0, domain.ly) &&
                        detail::inside(p.y1, 0.0, domain.ly),
                    "rectangle patch extends outside the domain");
  }
  for (const auto& d : f.disks) {
    detail::require(d.radius > 0, "disk radius must be positive");
    detail::require(d.intensity >= 0 && std::isfinite(d.intensity),
                    "disk intensity must be finite and nonnegative");
    detail::require(detail::inside(d.cx - d.radius, 0.0, domain.lx) &&
                        detail::inside(d.cx + d.radius, 0.0, domain.lx) &&
                        detail::inside(d.cy - d.radius, 0.0, domain.ly) &&
                        detail::inside(d.cy + d.radius, 0.0, domain.ly),
                    "disk patch extends outside the domain");
  }
  for (const auto& a : f.atoms) {
    detail::require(a.mass >= 0 && std::isfinite(a.mass), "atom mass must be nonnegative");
    detail::require(detail::inside(a.x, 0.0, domain.lx) && detail::inside(a.y, 0.0, domain.ly),
                    "atom lies outside the domain");
  }
}

/// Growth velocity c = (1/|Omega|) * Int f, computed exactly.
inline double source_mean(const Source1D& f, const Interval& domain) {
  detail::require(domain.measure() > 0, "domain measure must be positive");
  validate(f, domain);
  return f.total_mass() / domain.measure();
}

inline double source_mean(const Source2D& f, const Rectangle& domain) {
  detail::require(domain.measure() > 0, "domain measure must be positive");
  validate(f, domain);
  return f.total_mass() / domain.measure();
}

/// Int_0^x f. An atom at z counts only for x > z (left limit at z).
inline double cumulative_mass(const Source1D& f, double x) {
  double m = 0.0;
  for (const auto& p : f.patches) m += p.intensity * std::clamp(x - p.a, 0.0, p.b - p.a);
  for (const auto& a : f.atoms)
    if (x > a.x) m += a.mass;
  return m;
}

// ---------------------------------------------------------------------------
// Hat-function integrals
// ---------------------------------------------------------------------------

/// Int phi_i over the domain (lumped mass): h inside, h/2 at the walls.
inline std::vector<double> lumped_mass(const Grid1D& grid) {
  std::vector<double> m(grid.size(), grid.h());
  m.front() = m.back() = 0.5 * grid.h();
  return m;
}

/// Int phi_i on the Courant mesh: h^2 inside, h^2/2 on edges, h^2/3 or h^2/6
/// at corners depending on whether a cell diagonal ends there.
inline std::vector<double> lumped_mass(const CourantMesh& mesh) {
  std::vector<double> m(mesh.grid().size(), 0.0);
  const double share = mesh.element_area() / 3.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e)
    for (std::size_t n : mesh.element(e).nodes) m[n] += share;
  return m;
}

/// Int f*phi_i over patches only (atoms excluded), exact.
inline std::vector<double> patch_loads(const Source1D& f, const Grid1D& grid) {
  validate(f, grid.domain());
  const std::size_t n = grid.size();
  const double h = grid.h();
  std::vector<double> b(n, 0.0);
  for (const auto& p : f.patches) {
    if (p.b <= p.a || p.intensity == 0.0) continue;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double xl = grid.x(k), xr = grid.x(k + 1);
      const double lo = std::max(xl, p.a), hi = std::min(xr, p.b);
      if (hi <= lo) continue;
      // phi_k falls linearly from 1 at xl, phi_{k+1} rises to 1 at xr.
      const double len = hi - lo;
      const double mid = 0.5 * (lo + hi);
      b[k] += p.intensity * len * (xr - mid) / h;
      b[k + 1] += p.intensity * len * (mid - xl) / h;
    }
  }
  return b;
}

/// Int f*phi_i with atoms contributing mass*phi_i(z) (point evaluation).
inline std::vector<double> hat_loads(const Source1D& f, const Grid1D& grid) {
  std::vector<double> b = patch_loads(f, grid);
  const double h = grid.h();
  for (const auto& a : f.atoms) {
    const double t = std::clamp(a.x / h, 0.0, static_cast<double>(grid.intervals()));
    auto k = static_cast<std::size_t>(std::floor(t));
    if (k >= grid.intervals()) k = grid.intervals() - 1;
    const double s = t - static_cast<double>(k);
    b[k] += a.mass * (1.0 - s);
    b[k + 1] += a.mass * s;
  }
  return b;
}

namespace detail {

inline std::size_t nearest_node(double coord, double h, std::size_t count) {
  const double t = coord / h;
  const double fl = std::floor(t);
  auto k = static_cast<std::size_t>(std::max(0.0, fl));
  if (t - fl > 0.5) ++k;  // exact half-way stays on the lower index
  return std::min(k, count - 1);
}

using Polygon = std::vector<Point2>;

/// Clip a convex polygon against the half plane {p : sign * (p.axis - level) <= 0}.
inline Polygon clip(const Polygon& poly, bool x_axis, double level, double sign) {
  Polygon out;
  if (poly.empty()) return out;
  auto value = [&](const Point2& p) { return sign * ((x_axis ? p.x : p.y) - level); };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& cur = poly[i];
    const Point2& nxt = poly[(i + 1) % poly.size()];
    const double vc = value(cur), vn = value(nxt);
    if (vc <= 0) out.push_back(cur);
    if ((vc < 0 && vn > 0) || (vc > 0 && vn < 0)) {
      const double t = vc / (vc - vn);
      out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
    }
  }
  return out;
}

/// Area and centroid of a simple polygon (counter-clockwise or not).
inline std::pair<double, Point2> area_centroid(const Polygon& poly) {
  double a2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    const double cr = p.x * q.y - q.x * p.y;
    a2 += cr;
    cx += (p.x + q.x) * cr;
    cy += (p.y + q.y) * cr;
  }
  if (a2 == 0.0) return {0.0, {}};
  return {std::abs(0.5 * a2), {cx / (3.0 * a2), cy / (3.0 * a2)}};
}

constexpr int kDiskDepth = 11;

/// Accumulates Int_{T cap disk} lambda_k for the parent element's barycentric
/// coordinates by recursive midpoint subdivision of T.
inline void disk_triangle(const std::array<Point2, 3>& parent, const std::array<Point2, 3>& t,
                          const DiskPatch& d, int depth, std::array<double, 3>& acc) {
  auto inside_disk = [&](const Point2& p) {
    const double dx = p.x - d.cx, dy = p.y - d.cy;
    return dx * dx + dy * dy <= d.radius * d.radius;
  };
  const Point2 cen{(t[0].x + t[1].x + t[2].x) / 3.0, (t[0].y + t[1].y + t[2].y) / 3.0};
  const double area =
      0.5 * std::abs((t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y));
  auto add = [&](double weight) {
    const auto lam = barycentric(parent[0], parent[1], parent[2], cen);
    for (int k = 0; k < 3; ++k) acc[k] += weight * area * lam[k];
  };
  const int in = inside_disk(t[0]) + inside_disk(t[1]) + inside_disk(t[2]);
  if (in == 3) {
    add(1.0);
    return;
  }
  double reach = 0.0;
  for (const auto& p : t) reach = std::max(reach, std::hypot(p.x - cen.x, p.y - cen.y));
  if (in == 0 && std::hypot(cen.x - d.cx, cen.y - d.cy) > d.radius + reach) return;
  if (depth == 0) {
    if (inside_disk(cen)) add(1.0);
    return;
  }
  const Point2 m01{0.5 * (t[0].x + t[1].x), 0.5 * (t[0].y + t[1].y)};
  const Point2 m12{0.5 * (t[1].x + t[2].x), 0.5 * (t[1].y + t[2].y)};
  const Point2 m20{0.5 * (t[2].x + t[0].x), 0.5 * (t[2].y + t[0].y)};
  disk_triangle(parent, {t[0], m01, m20}, d, depth - 1, acc);
  disk_triangle(parent, {m01, t[1], m12}, d, depth - 1, acc);
  disk_triangle(parent, {m20, m12, t[2]}, d, depth - 1, acc);
  disk_triangle(parent, {m01, m12, m20}, d, depth - 1, acc);
}

/// Element range [c0, c1) x [r0, r1) of cells overlapping [x0, x1] x [y0, y1].
struct CellRange {
  std::size_t c0, c1, r0, r1;
};

inline CellRange cells_overlapping(const CourantMesh& mesh, double x0, double x1, double y0,
                                   double y1) {
  const double h = mesh.grid().h();
  auto lo = [h](double s) { return static_cast<std::size_t>(std::max(0.0, std::floor(s / h) - 1)); };
  auto hi = [h](double s, std::size_t cells) {
    return std::min(cells, static_cast<std::size_t>(std::max(0.0, std::ceil(s / h) + 1)));
  };
  return {lo(x0), hi(x1, mesh.cells_x()), lo(y0), hi(y1, mesh.cells_y())};
}

}  // namespace detail

/// Int f*phi_i over rectangle and disk patches (atoms excluded). Rectangles are
/// integrated exactly by polygon clipping; disks by adaptive subdivision.
inline std::vector<double> patch_loads(const Source2D& f, const CourantMesh& mesh) {
  const Grid2D& grid = mesh.grid();
  validate(f, grid.domain());
  std::vector<double> b(grid.size(), 0.0);
  const std::size_t cx = mesh.cells_x();

  auto for_cells = [&](detail::CellRange r, auto&& body) {
    for (std::size_t j = r.r0; j < r.r1; ++j)
      for (std::size_t i = r.c0; i < r.c1; ++i)
        for (std::size_t half = 0; half < 2; ++half) body(2 * (j * cx + i) + half);
  };

  for (const auto& p : f.rects) {
    if (p.intensity == 0.0 || p.x1 <= p.x0 || p.y1 <= p.y0) continue;
    for_cells(detail::cells_overlapping(mesh, p.x0, p.x1, p.y0, p.y1), [&](std::size_t e) {
      const auto v = mesh.vertices(e);
      detail::Polygon poly{v[0], v[1], v[2]};
      poly = detail::clip(poly, true, p.x0, -1.0);
      poly = detail::clip(poly, true, p.x1, 1.0);
      poly = detail::clip(poly, false, p.y0, -1.0);
      poly = detail::clip(poly, false, p.y1, 1.0);
      if (poly.size() < 3) return;
      const auto [area, cen] = detail::area_centroid(poly);
      if (area == 0.0) return;
      const auto lam = barycentric(v[0], v[1], v[2], cen);
      const auto el = mesh.element(e);
      for (int k = 0; k < 3; ++k) b[el.nodes[k]] += p.intensity * area * lam[k];
    });
  }

  for (const auto& d : f.disks) {
    if (d.intensity == 0.0) continue;
    for_cells(detail::cells_overlapping(mesh, d.cx - d.radius, d.cx + d.radius, d.cy - d.radius,
                                        d.cy + d.radius),
              [&](std::size_t e) {
                const auto v = mesh.vertices(e);
                std::array<double, 3> acc{0.0, 0.0, 0.0};
                detail::disk_triangle(v, v, d, detail::kDiskDepth, acc);
                const auto el = mesh.element(e);
                for (int k = 0; k < 3; ++k) b[el.nodes[k]] += d.intensity * acc[k];
              });
  }
  return b;
}

/// Int f*phi_i with atoms contributing mass*phi_i(z).
inline std::vector<double> hat_loads(const Source2D& f, const CourantMesh& mesh) {
  std::vector<double> b = patch_loads(f, mesh);
  for (const auto& a : f.atoms) {
    const std::size_t e = mesh.locate({a.x, a.y});
    const auto v = mesh.vertices(e);
    const auto lam = barycentric(v[0], v[1], v[2], {a.x, a.y});
    const auto el = mesh.element(e);
    for (int k = 0; k < 3; ++k) b[el.nodes[k]] += a.mass * lam[k];
  }
  return b;
}

/// Nodal source for the finite-difference scheme.
///
/// Patches are sampled as hat-weighted averages (Int f phi_i)/(Int phi_i):
/// constant sources sample exactly and the sampled mass equals the exact
/// integral. Each atom of mass m adds m/h to its nearest node (ties go to the
/// lower index).
inline std::vector<double> sample_source(const Source1D& f, const Grid1D& grid) {
  std::vector<double> s = patch_loads(f, grid);
  const std::vector<double> m = lumped_mass(grid);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] /= m[i];
  for (const auto& a : f.atoms)
    s[detail::nearest_node(a.x, grid.h(), grid.size())] += a.mass / grid.h();
  return s;
}

/// 2D analogue of sample_source; atoms add m/h^2 at the nearest node.
inline std::vector<double> sample_source(const Source2D& f, const Grid2D& grid) {
  const CourantMesh mesh(grid);
  std::vector<double> s = patch_loads(f, mesh);
  const std::vector<double> m = lumped_mass(mesh);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] /= m[i];
  const double h = grid.h();
  for (const auto& a : f.atoms) {
    const std::size_t i = detail::nearest_node(a.x, h, grid.nx());
    const std::size_t j = detail::nearest_node(a.y, h, grid.ny());
    s[grid.index(i, j)] += a.mass / (h * h);
  }
  return s;
}

}  // namespace silo
