#pragma once

// Experiment configuration: flat `key = value` text with dotted section keys.
//
//   name = centered_patch
//   domain.kind = interval          # or rectangle
//   domain.length = 1               # interval; rectangles use domain.lx, domain.ly
//   grid.h = 0.01, 0.005, 0.0025
//   params.alpha = 1
//   source.patch = 0.45 0.55 1      # a b intensity            (interval)
//   source.atom = 0.5 1             # x mass  /  x y mass
//   source.rect = x0 x1 y0 y1 intensity
//   source.disk = cx cy radius intensity
//   source.constant = k
//   scheme.stop_epsilon = 1e-6
//   output.table = true
//
// Source keys may repeat; every other key may appear once.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "silo/core/error.hpp"
#include "silo/core/grid.hpp"
#include "silo/core/parameters.hpp"
#include "silo/core/source.hpp"
#include "silo/discrete/similarity_discrete.hpp"
#include "silo/evolution/scheme.hpp"

namespace silo {

class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct OutputRequest {
  bool profiles = true;
  bool table = true;
  /// Write a snapshot every this many FD steps (0: none).
  std::size_t snapshot_every = 0;

  bool any() const { return profiles || table || snapshot_every > 0; }
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::variant<Interval, Rectangle> domain = Interval{1.0};
  std::vector<double> h_list;
  Parameters params;
  std::variant<Source1D, Source2D> source = Source1D{};
  SchemeConfig scheme;
  CgOptions solver;
  CumulativeRule rule = CumulativeRule::inclusive;
  /// Rows whose mass-balance defect per unit time exceeds mass_alarm * h * injection rate are flagged.
  double mass_alarm = 1e-6;
  OutputRequest outputs;
  std::string output_dir = "out";

  bool is_1d() const { return std::holds_alternative<Interval>(domain); }

  void validate() const {
    detail::require(!h_list.empty(), "grid.h must list at least one spacing");
    for (std::size_t k = 0; k < h_list.size(); ++k) {
      detail::require(h_list[k] > 0, "grid spacings must be positive");
      if (k > 0) detail::require(h_list[k] < h_list[k - 1], "grid.h must be strictly decreasing");
    }
    params.validate();
    scheme.validate();
    detail::require(outputs.any(), "at least one output must be requested");
    detail::require(mass_alarm > 0, "mass_alarm must be positive");
    if (is_1d()) {
      const auto& d = std::get<Interval>(domain);
      detail::require(d.length > 0, "domain.length must be positive");
      detail::require(std::holds_alternative<Source1D>(source), "interval domains need 1D sources");
      silo::validate(std::get<Source1D>(source), d);
    } else {
      const auto& d = std::get<Rectangle>(domain);
      detail::require(d.lx > 0 && d.ly > 0, "domain.lx and domain.ly must be positive");
      detail::require(std::holds_alternative<Source2D>(source), "rectangle domains need 2D sources");
      silo::validate(std::get<Source2D>(source), d);
    }
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_number(std::string_view text, const std::string& key) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
    throw ConfigError("key '" + key + "': '" + std::string(text) + "' is not a number");
  return value;
}

/// Numbers separated by commas and/or whitespace.
inline std::vector<double> parse_numbers(std::string_view text, const std::string& key) {
  std::vector<double> out;
  std::string token;
  for (char ch : std::string(text) + " ") {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!token.empty()) out.push_back(parse_number(token, key));
      token.clear();
    } else {
      token += ch;
    }
  }
  return out;
}

inline bool parse_bool(std::string_view text, const std::string& key) {
  text = trim(text);
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false");
}

inline std::size_t parse_count(std::string_view text, const std::string& key) {
  const double v = parse_number(text, key);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw ConfigError("key '" + key + "': expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

inline std::vector<double> parse_tuple(std::string_view text, const std::string& key, std::size_t n) {
  std::vector<double> v = parse_numbers(text, key);
  if (v.size() != n)
    throw ConfigError("key '" + key + "': expected " + std::to_string(n) + " numbers, got " +
                      std::to_string(v.size()));
  return v;
}

}  // namespace detail

/// Parses configuration text. Unknown keys and repeated scalar keys are errors.
inline ExperimentConfig parse_config(std::string_view text) {
  struct Entry {
    std::string key, value;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::map<std::string, std::size_t> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    Entry e{std::string(detail::trim(s.substr(0, eq))), std::string(detail::trim(s.substr(eq + 1))), line};
    if (e.key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
    if (!e.key.starts_with("source.") && seen.count(e.key))
      throw ConfigError("line " + std::to_string(line) + ": key '" + e.key + "' repeated");
    seen[e.key] = line;
    entries.push_back(std::move(e));
  }

  ExperimentConfig cfg;
  auto value_of = [&](const std::string& key) -> std::optional<std::string> {
    for (const auto& e : entries)
      if (e.key == key) return e.value;
    return std::nullopt;
  };

  const std::string kind = value_of("domain.kind").value_or("interval");
  if (kind == "interval") {
    cfg.domain = Interval{1.0};
    cfg.source = Source1D{};
  } else if (kind == "rectangle") {
    cfg.domain = Rectangle{1.0, 1.0};
    cfg.source = Source2D{};
  } else {
    throw ConfigError("domain.kind must be interval or rectangle");
  }

  std::vector<double> constants;  // applied once the domain is known
  for (const auto& e : entries) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    if (k == "name") {
      cfg.name = v;
    } else if (k == "domain.kind") {
    } else if (k == "domain.length") {
      if (!cfg.is_1d()) throw ConfigError("domain.length applies to intervals");
      std::get<Interval>(cfg.domain).length = detail::parse_number(v, k);
    } else if (k == "domain.lx" || k == "domain.ly") {
      if (cfg.is_1d()) throw ConfigError(k + " applies to rectangles");
      auto& r = std::get<Rectangle>(cfg.domain);
      (k == "domain.lx" ? r.lx : r.ly) = detail::parse_number(v, k);
    } else if (k == "grid.h") {
      cfg.h_list = detail::parse_numbers(v, k);
    } else if (k == "grid.n") {
      // Cells per unit length, a convenience for 2D studies (h = 1/n).
      for (double n : detail::parse_numbers(v, k)) {
        if (!(n > 0)) throw ConfigError("grid.n entries must be positive");
        cfg.h_list.push_back(1.0 / n);
      }
    } else if (k == "params.alpha") {
      cfg.params.alpha = detail::parse_number(v, k);
    } else if (k == "params.beta") {
      cfg.params.beta = detail::parse_number(v, k);
    } else if (k == "params.gamma") {
      cfg.params.gamma = detail::parse_number(v, k);
    } else if (k == "source.constant") {
      constants.push_back(detail::parse_number(v, k));
    } else if (k == "source.patch") {
      if (!cfg.is_1d()) throw ConfigError("source.patch applies to intervals; use source.rect");
      const auto t = detail::parse_tuple(v, k, 3);
      std::get<Source1D>(cfg.source).add_patch(t[0], t[1], t[2]);
    } else if (k == "source.atom") {
      if (cfg.is_1d()) {
        const auto t = detail::parse_tuple(v, k, 2);
        std::get<Source1D>(cfg.source).add_atom(t[0], t[1]);
      } else {
        const auto t = detail::parse_tuple(v, k, 3);
        std::get<Source2D>(cfg.source).atoms.push_back({t[0], t[1], t[2]});
      }
    } else if (k == "source.rect") {
      if (cfg.is_1d()) throw ConfigError("source.rect applies to rectangles");
      const auto t = detail::parse_tuple(v, k, 5);
      std::get<Source2D>(cfg.source).rects.push_back({t[0], t[1], t[2], t[3], t[4]});
    } else if (k == "source.disk") {
      if (cfg.is_1d()) throw ConfigError("source.disk applies to rectangles");
      const auto t = detail::parse_tuple(v, k, 4);
      std::get<Source2D>(cfg.source).disks.push_back({t[0], t[1], t[2], t[3]});
    } else if (k == "scheme.cfl_safety") {
      cfg.scheme.cfl_safety = detail::parse_number(v, k);
    } else if (k == "scheme.exchange_cap_safety") {
      cfg.scheme.exchange_cap_safety = detail::parse_number(v, k);
    } else if (k == "scheme.stop_epsilon") {
      cfg.scheme.stop_epsilon = detail::parse_number(v, k);
    } else if (k == "scheme.stop_window") {
      cfg.scheme.stop_window = detail::parse_count(v, k);
    } else if (k == "scheme.max_steps") {
      cfg.scheme.max_steps = detail::parse_count(v, k);
    } else if (k == "scheme.clip_alarm") {
      cfg.scheme.clip_alarm = detail::parse_number(v, k);
    } else if (k == "scheme.mass_alarm") {
      cfg.mass_alarm = detail::parse_number(v, k);
    } else if (k == "solver.tolerance") {
      cfg.solver.tolerance = detail::parse_number(v, k);
    } else if (k == "solver.max_iter_factor") {
      cfg.solver.max_iter_factor = detail::parse_count(v, k);
    } else if (k == "fe.rule") {
      if (v == "inclusive") cfg.rule = CumulativeRule::inclusive;
      else if (v == "node_anchored") cfg.rule = CumulativeRule::node_anchored;
      else throw ConfigError("fe.rule must be inclusive or node_anchored");
    } else if (k == "output.profiles") {
      cfg.outputs.profiles = detail::parse_bool(v, k);
    } else if (k == "output.table") {
      cfg.outputs.table = detail::parse_bool(v, k);
    } else if (k == "output.snapshot_every") {
      cfg.outputs.snapshot_every = detail::parse_count(v, k);
    } else if (k == "output.dir") {
      cfg.output_dir = v;
    } else {
      throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + k + "'");
    }
  }
  for (double c : constants) {
    if (cfg.is_1d()) {
      auto& s = std::get<Source1D>(cfg.source);
      s = s + Source1D::constant(c, std::get<Interval>(cfg.domain).length);
    } else {
      auto& s = std::get<Source2D>(cfg.source);
      s = s + Source2D::constant(c, std::get<Rectangle>(cfg.domain));
    }
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace silo
