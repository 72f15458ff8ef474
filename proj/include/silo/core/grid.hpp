#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "silo/core/error.hpp"

namespace silo {

/// Open interval (0, L).
struct Interval {
  double length = 1.0;
  double measure() const { return length; }
};

/// Axis-aligned rectangle (0, Lx) x (0, Ly).
struct Rectangle {
  double lx = 1.0;
  double ly = 1.0;
  double measure() const { return lx * ly; }
};

/// Uniform node lattice x_i = i*h, i = 0..N-1, on [0, L].
class Grid1D {
 public:
  Grid1D(double length, std::size_t nodes) : length_(length), nodes_(nodes) {
    detail::require(std::isfinite(length) && length > 0, "grid length must be positive");
    detail::require(nodes >= 3, "grid needs at least 3 nodes");
    h_ = length_ / static_cast<double>(nodes_ - 1);
  }

  /// Grid whose spacing is (as close as possible to) `h`; N = round(L/h) + 1.
  static Grid1D with_spacing(double length, double h) {
    detail::require(h > 0 && h < length, "spacing must lie in (0, L)");
    return Grid1D(length, static_cast<std::size_t>(std::llround(length / h)) + 1);
  }

  double length() const { return length_; }
  std::size_t size() const { return nodes_; }
  std::size_t intervals() const { return nodes_ - 1; }
  double h() const { return h_; }
  Interval domain() const { return {length_}; }

  /// Node coordinate; the last node is pinned to L exactly.
  double x(std::size_t i) const {
    return i + 1 == nodes_ ? length_ : static_cast<double>(i) * h_;
  }

 private:
  double length_;
  std::size_t nodes_;
  double h_;
};

/// Uniform lattice on [0, Lx] x [0, Ly] with a common spacing in both directions.
/// Node (i, j) sits at (i*h, j*h); storage is row-major with x fastest.
class Grid2D {
 public:
  Grid2D(double lx, double ly, std::size_t nx, std::size_t ny)
      : lx_(lx), ly_(ly), nx_(nx), ny_(ny) {
    detail::require(lx > 0 && ly > 0, "rectangle sides must be positive");
    detail::require(nx >= 3 && ny >= 3, "grid needs at least 3 nodes per direction");
    const double hx = lx / static_cast<double>(nx - 1);
    const double hy = ly / static_cast<double>(ny - 1);
    detail::require(std::abs(hx - hy) <= 1e-12 * std::max(hx, hy),
                    "Grid2D requires equal spacing in x and y");
    h_ = hx;
  }

  static Grid2D unit_square(std::size_t n) { return Grid2D(1.0, 1.0, n, n); }

  static Grid2D with_spacing(double lx, double ly, double h) {
    detail::require(h > 0 && h < std::min(lx, ly), "spacing must lie in (0, min(Lx, Ly))");
    return Grid2D(lx, ly, static_cast<std::size_t>(std::llround(lx / h)) + 1,
                  static_cast<std::size_t>(std::llround(ly / h)) + 1);
  }

  double lx() const { return lx_; }
  double ly() const { return ly_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  double h() const { return h_; }
  Rectangle domain() const { return {lx_, ly_}; }

  std::size_t index(std::size_t i, std::size_t j) const { return j * nx_ + i; }
  double x(std::size_t i) const { return i + 1 == nx_ ? lx_ : static_cast<double>(i) * h_; }
  double y(std::size_t j) const { return j + 1 == ny_ ? ly_ : static_cast<double>(j) * h_; }

 private:
  double lx_, ly_;
  std::size_t nx_, ny_;
  double h_;
};

}  // namespace silo
