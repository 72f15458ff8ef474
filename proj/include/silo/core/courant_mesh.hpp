#pragma once

#include <array>
#include <cstddef>

#include "silo/core/grid.hpp"

namespace silo {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform Courant triangulation of a Grid2D.
///
/// Every square cell (i, j) is split along its lower-left to upper-right
/// diagonal into a lower triangle (n00, n10, n11) and an upper triangle
/// (n00, n11, n01), both counter-clockwise. Element 2*c is the lower and
/// 2*c+1 the upper triangle of cell c = j*(nx-1) + i.
class CourantMesh {
 public:
  struct Element {
    std::array<std::size_t, 3> nodes;
    /// Gradients of the three P1 basis functions (constant on the element).
    std::array<Point2, 3> grad;
  };

  explicit CourantMesh(const Grid2D& grid) : grid_(grid) {}

  const Grid2D& grid() const { return grid_; }
  std::size_t cells_x() const { return grid_.nx() - 1; }
  std::size_t cells_y() const { return grid_.ny() - 1; }
  std::size_t element_count() const { return 2 * cells_x() * cells_y(); }
  double element_area() const { return 0.5 * grid_.h() * grid_.h(); }

  Element element(std::size_t e) const {
    const std::size_t cell = e / 2;
    const std::size_t i = cell % cells_x();
    const std::size_t j = cell / cells_x();
    const double inv_h = 1.0 / grid_.h();
    const std::size_t n00 = grid_.index(i, j);
    const std::size_t n10 = grid_.index(i + 1, j);
    const std::size_t n01 = grid_.index(i, j + 1);
    const std::size_t n11 = grid_.index(i + 1, j + 1);
    if (e % 2 == 0) {
      return {{n00, n10, n11}, {{{-inv_h, 0.0}, {inv_h, -inv_h}, {0.0, inv_h}}}};
    }
    return {{n00, n11, n01}, {{{0.0, -inv_h}, {inv_h, 0.0}, {-inv_h, inv_h}}}};
  }

  std::array<Point2, 3> vertices(std::size_t e) const {
    const Element el = element(e);
    std::array<Point2, 3> out;
    for (std::size_t k = 0; k < 3; ++k) out[k] = node_point(el.nodes[k]);
    return out;
  }

  Point2 node_point(std::size_t n) const {
    return {grid_.x(n % grid_.nx()), grid_.y(n / grid_.nx())};
  }

  /// Element containing `p` (points on shared edges resolve to the lower cell
  /// index and to the lower triangle on the diagonal).
  std::size_t locate(Point2 p) const {
    const double h = grid_.h();
    auto cell_of = [h](double s, std::size_t cells) {
      auto c = static_cast<std::size_t>(s > 0 ? s / h : 0.0);
      return c >= cells ? cells - 1 : c;
    };
    const std::size_t i = cell_of(p.x, cells_x());
    const std::size_t j = cell_of(p.y, cells_y());
    const double lx = p.x - static_cast<double>(i) * h;
    const double ly = p.y - static_cast<double>(j) * h;
    const std::size_t cell = j * cells_x() + i;
    return ly <= lx ? 2 * cell : 2 * cell + 1;
  }

 private:
  Grid2D grid_;
};

/// Barycentric coordinates of `p` in the triangle (a, b, c).
inline std::array<double, 3> barycentric(Point2 a, Point2 b, Point2 c, Point2 p) {
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace silo
