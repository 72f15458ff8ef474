#pragma once

// CSV output. Values are written with 17 significant digits so that reruns
// of an experiment reproduce files byte for byte.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "silo/core/fields.hpp"
#include "silo/core/grid.hpp"
#include "silo/harness/error_table.hpp"

namespace silo {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_value(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace detail

/// `x,value`, one row per node.
inline void export_profile(const NodalField& field, const Grid1D& grid, const std::filesystem::path& path) {
  detail::require(field.size() == grid.size(), "field does not match the grid");
  auto out = detail::open_output(path);
  out << "x,value\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << format_value(grid.x(i)) << ',' << format_value(field[i]) << '\n';
  detail::finish(out, path);
}

/// `x,y,value`, row-major (x fastest), one row per node.
inline void export_profile(const NodalField& field, const Grid2D& grid, const std::filesystem::path& path) {
  detail::require(field.size() == grid.size(), "field does not match the grid");
  auto out = detail::open_output(path);
  out << "x,y,value\n";
  for (std::size_t j = 0; j < grid.ny(); ++j)
    for (std::size_t i = 0; i < grid.nx(); ++i)
      out << format_value(grid.x(i)) << ',' << format_value(grid.y(j)) << ','
          << format_value(field[grid.index(i, j)]) << '\n';
  detail::finish(out, path);
}

/// File name of snapshot `index` in a series: snap_000042.csv.
inline std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06zu.csv", index);
  return buf;
}

/// Header `h,<columns>,order_<columns>`; orders refer to the previous row and
/// are empty on the first row. Failed rows print NA.
inline void export_table(const ErrorTable& table, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << 'h';
  for (const auto& c : table.columns) out << ',' << c;
  for (const auto& c : table.columns) out << ",order_" << c;
  out << '\n';
  std::vector<std::vector<Order>> orders;
  for (std::size_t c = 0; c < table.columns.size(); ++c) orders.push_back(table.orders(c));
  std::size_t completed = 0;
  for (const auto& r : table.rows) {
    out << format_value(r.h);
    if (!r.ok()) {
      for (std::size_t c = 0; c < 2 * table.columns.size(); ++c) out << ",NA";
      out << '\n';
      continue;
    }
    for (double e : r.errors) out << ',' << format_value(e);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << ',';
      if (completed > 0) out << format_order(orders[c][completed - 1]);
    }
    out << '\n';
    ++completed;
  }
  detail::finish(out, path);
}

}  // namespace silo
