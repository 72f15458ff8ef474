#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "silo/core/error.hpp"

namespace silo {

/// Observed convergence order; empty when the finer error is exactly zero.
using Order = std::optional<double>;

/// order_j = log(e_j / e_{j+1}) / log(h_j / h_{j+1}) for consecutive pairs.
inline std::vector<Order> observed_order(const std::vector<double>& errs, const std::vector<double>& hs) {
  detail::require(errs.size() == hs.size(), "errors and spacings differ in length");
  detail::require(errs.size() >= 2, "at least two rows are needed for an order");
  std::vector<Order> out;
  for (std::size_t j = 0; j + 1 < errs.size(); ++j) {
    detail::require(errs[j] >= 0 && errs[j + 1] >= 0, "errors must be nonnegative");
    if (errs[j + 1] == 0.0 || errs[j] == 0.0) {
      out.push_back(std::nullopt);
      continue;
    }
    out.push_back(std::log(errs[j] / errs[j + 1]) / std::log(hs[j] / hs[j + 1]));
  }
  return out;
}

inline std::string format_order(const Order& o) {
  if (!o) return "exact";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *o);
  return buf;
}

/// One row per spacing; `errors` follows `columns`. A failed row keeps its
/// spacing and the failure message, with no errors.
struct ErrorRow {
  double h = 0.0;
  std::vector<double> errors;
  std::string failure;

  bool ok() const { return failure.empty(); }
};

struct ErrorTable {
  std::vector<std::string> columns;
  std::vector<ErrorRow> rows;

  /// Column of errors over the completed rows, with their spacings.
  std::pair<std::vector<double>, std::vector<double>> column(std::size_t c) const {
    std::vector<double> e, h;
    for (const auto& r : rows)
      if (r.ok()) {
        e.push_back(r.errors.at(c));
        h.push_back(r.h);
      }
    return {e, h};
  }

  /// Orders between consecutive completed rows of column c.
  std::vector<Order> orders(std::size_t c) const {
    const auto [e, h] = column(c);
    if (e.size() < 2) return {};
    return observed_order(e, h);
  }

  bool complete() const {
    for (const auto& r : rows)
      if (!r.ok()) return false;
    return true;
  }
};

}  // namespace silo
