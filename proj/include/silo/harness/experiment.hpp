#pragma once

// Grid-refinement experiments: exact, finite-element and finite-difference
// similarity profiles compared in the max norm over a sequence of spacings.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "silo/core/fields.hpp"
#include "silo/core/grid.hpp"
#include "silo/discrete/similarity_discrete.hpp"
#include "silo/evolution/scheme.hpp"
#include "silo/exact/similarity_exact.hpp"
#include "silo/harness/config.hpp"
#include "silo/harness/csv.hpp"
#include "silo/harness/error_table.hpp"

namespace silo {

enum class Mode {
  similarity,  ///< finite-element similarity solution only
  evolve,      ///< finite-difference run only
  compare,     ///< both, plus the error table
};

/// Summary of one finite-difference run.
struct RunSummary {
  std::size_t steps = 0;
  bool converged = false;
  double c_obs = 0.0;
  double t_final = 0.0;
  double clipped_mass = 0.0;
  double injected_mass = 0.0;
  double defect_rate = 0.0;  ///< accumulated mass-balance defect per unit time
  double max_slope = 0.0;    ///< max |Du| on the final state
};

struct RowReport {
  double h = 0.0;
  std::size_t nodes = 0;
  double c = 0.0;                     ///< source mean
  std::optional<double> c_h;          ///< finite-element growth rate
  std::optional<RunSummary> fd;
  std::vector<std::string> alarms;
  std::string failure;

  bool ok() const { return failure.empty() && alarms.empty(); }
};

struct ExperimentResult {
  ErrorTable table;
  std::vector<RowReport> rows;

  bool ok() const {
    for (const auto& r : rows)
      if (!r.ok()) return false;
    return true;
  }
};

namespace detail {

inline std::string h_tag(double h) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "h%.6g", h);
  return buf;
}

inline RunSummary summarize(const RunReport& rep) {
  RunSummary s;
  s.steps = rep.steps;
  s.converged = rep.converged;
  s.c_obs = rep.c_obs;
  s.t_final = rep.final_state.t;
  s.clipped_mass = rep.clipped_mass;
  s.injected_mass = rep.injected_mass;
  s.defect_rate = rep.defect_per_unit_time();
  s.max_slope = rep.final_max_slope;
  return s;
}

inline void check_alarms(const ExperimentConfig& cfg, const RunReport& rep, double h, RowReport& row) {
  if (!rep.converged) row.alarms.push_back("no similarity profile detected within max_steps");
  if (rep.clip_alarm(cfg.scheme)) row.alarms.push_back("clipped rolling-layer mass above threshold");
  const double t = rep.final_state.t;
  const double injection_rate = t > 0 ? rep.injected_mass / t : 0.0;
  if (rep.defect_per_unit_time() > cfg.mass_alarm * h * std::max(injection_rate, 1e-300))
    row.alarms.push_back("mass-balance defect above threshold");
}

template <class Grid>
RunOptions snapshot_options(const ExperimentConfig& cfg, const Grid& grid, const std::filesystem::path& dir) {
  RunOptions opts;
  if (cfg.outputs.snapshot_every == 0) return opts;
  opts.snapshot_every = cfg.outputs.snapshot_every;
  auto counter = std::make_shared<std::size_t>(0);
  opts.snapshot = [grid, dir, counter](const LayerState& s, std::size_t) {
    const std::string name = snapshot_name((*counter)++);
    export_profile(min_shifted(s.u), grid, dir / "u" / name);
    export_profile(s.v, grid, dir / "v" / name);
  };
  return opts;
}

inline void run_row_1d(const ExperimentConfig& cfg, Mode mode, double h, ErrorRow& erow, RowReport& row) {
  const double L = std::get<Interval>(cfg.domain).length;
  const auto& f = std::get<Source1D>(cfg.source);
  const Grid1D grid = Grid1D::with_spacing(L, h);
  row.h = grid.h();
  erow.h = grid.h();
  row.nodes = grid.size();
  row.c = source_mean(f, grid.domain());
  const std::filesystem::path dir = cfg.output_dir;
  const std::string tag = h_tag(h);

  const bool want_exact = f.total_mass() > 0;
  std::optional<SimilarityPair> exact;
  if (want_exact) exact = similarity_1d_exact(f, grid, cfg.params);

  std::optional<SimilarityPair> fe, fd;
  if (mode != Mode::evolve) {
    fe = similarity_1d_discrete(f, grid, cfg.params, cfg.rule, cfg.solver).pair;
    row.c_h = fe->c;
  }
  if (mode != Mode::similarity) {
    const RunReport rep = run(f, grid, cfg.params, cfg.scheme,
                              snapshot_options(cfg, grid, dir / ("snapshots_" + tag)));
    row.fd = summarize(rep);
    check_alarms(cfg, rep, grid.h(), row);
    fd = SimilarityPair{rep.u_d, rep.v_d, rep.c_obs};
  }

  if (cfg.outputs.profiles) {
    if (exact) {
      export_profile(exact->U, grid, dir / ("u_exact_" + tag + ".csv"));
      export_profile(exact->V, grid, dir / ("v_exact_" + tag + ".csv"));
    }
    if (fe) {
      export_profile(fe->U, grid, dir / ("u_fe_" + tag + ".csv"));
      export_profile(fe->V, grid, dir / ("v_fe_" + tag + ".csv"));
    }
    if (fd) {
      export_profile(fd->U, grid, dir / ("u_fd_" + tag + ".csv"));
      export_profile(fd->V, grid, dir / ("v_fd_" + tag + ".csv"));
    }
  }

  if (!exact) throw InvalidInput("error table needs a source with positive mass");
  if (fe && fd)
    erow.errors = {sup_distance(exact->U, fe->U), sup_distance(exact->U, fd->U),
                   sup_distance(exact->V, fe->V), sup_distance(exact->V, fd->V)};
  else if (fe)
    erow.errors = {sup_distance(exact->U, fe->U), sup_distance(exact->V, fe->V)};
  else
    erow.errors = {sup_distance(exact->U, fd->U), sup_distance(exact->V, fd->V)};
}

inline void run_row_2d(const ExperimentConfig& cfg, Mode mode, double h, ErrorRow& erow, RowReport& row) {
  const auto& d = std::get<Rectangle>(cfg.domain);
  const auto& f = std::get<Source2D>(cfg.source);
  const Grid2D grid = Grid2D::with_spacing(d.lx, d.ly, h);
  row.h = grid.h();
  erow.h = grid.h();
  row.nodes = grid.size();
  row.c = source_mean(f, grid.domain());
  const std::filesystem::path dir = cfg.output_dir;
  const std::string tag = h_tag(h);

  std::optional<SimilarityPair> fe, fd;
  if (mode != Mode::evolve) {
    fe = similarity_2d_discrete(f, grid, cfg.params, cfg.solver).pair;
    row.c_h = fe->c;
  }
  if (mode != Mode::similarity) {
    const RunReport rep = run(f, grid, cfg.params, cfg.scheme,
                              snapshot_options(cfg, grid, dir / ("snapshots_" + tag)));
    row.fd = summarize(rep);
    check_alarms(cfg, rep, grid.h(), row);
    fd = SimilarityPair{rep.u_d, rep.v_d, rep.c_obs};
  }
  if (cfg.outputs.profiles) {
    if (fe) {
      export_profile(fe->U, grid, dir / ("u_fe_" + tag + ".csv"));
      export_profile(fe->V, grid, dir / ("v_fe_" + tag + ".csv"));
    }
    if (fd) {
      export_profile(fd->U, grid, dir / ("u_fd_" + tag + ".csv"));
      export_profile(fd->V, grid, dir / ("v_fd_" + tag + ".csv"));
    }
  }
  if (fe && fd) erow.errors = {sup_distance(fe->U, fd->U), sup_distance(fe->V, fd->V)};
}

inline std::vector<std::string> table_columns(bool one_d, Mode mode) {
  if (one_d) {
    switch (mode) {
      case Mode::compare: return {"err_u_fe", "err_u_fd", "err_v_fe", "err_v_fd"};
      case Mode::similarity: return {"err_u_fe", "err_v_fe"};
      case Mode::evolve: return {"err_u_fd", "err_v_fd"};
    }
  }
  if (mode == Mode::compare) return {"err_u", "err_v"};
  return {};
}

inline void export_runs(const ExperimentResult& res, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "h,nodes,c,c_h,c_obs,steps,t_final,converged,clipped_mass,defect_rate,max_slope,status\n";
  for (const auto& r : res.rows) {
    out << format_value(r.h) << ',' << r.nodes << ',' << format_value(r.c) << ','
        << (r.c_h ? format_value(*r.c_h) : "") << ',';
    if (r.fd)
      out << format_value(r.fd->c_obs) << ',' << r.fd->steps << ',' << format_value(r.fd->t_final) << ','
          << (r.fd->converged ? 1 : 0) << ',' << format_value(r.fd->clipped_mass) << ','
          << format_value(r.fd->defect_rate) << ',' << format_value(r.fd->max_slope);
    else
      out << ",,,,,,";
    out << ',' << (r.failure.empty() ? (r.alarms.empty() ? "ok" : "alarm") : "failed") << '\n';
  }
  finish(out, path);
}

}  // namespace detail

/// Runs every spacing of the configuration. Solver failures are recorded per
/// row and the sweep continues; alarms (clipping, mass balance, no detection)
/// mark a row without discarding its numbers.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, Mode mode, std::ostream* log = nullptr) {
  cfg.validate();
  ExperimentResult res;
  res.table.columns = detail::table_columns(cfg.is_1d(), mode);
  for (double h : cfg.h_list) {
    ErrorRow erow;
    RowReport row;
    erow.h = row.h = h;
    try {
      if (cfg.is_1d())
        detail::run_row_1d(cfg, mode, h, erow, row);
      else
        detail::run_row_2d(cfg, mode, h, erow, row);
    } catch (const std::exception& e) {
      row.failure = e.what();
      erow.errors.clear();
    }
    if (!row.failure.empty()) erow.failure = row.failure;
    if (log) {
      *log << cfg.name << " h=" << format_value(row.h);
      if (row.fd) *log << " steps=" << row.fd->steps << " c_obs=" << format_value(row.fd->c_obs);
      for (std::size_t c = 0; c < erow.errors.size(); ++c)
        *log << ' ' << res.table.columns[c] << '=' << format_value(erow.errors[c]);
      for (const auto& a : row.alarms) *log << " [alarm: " << a << ']';
      if (!row.failure.empty()) *log << " [failed: " << row.failure << ']';
      *log << '\n';
    }
    if (!res.table.columns.empty()) res.table.rows.push_back(std::move(erow));
    res.rows.push_back(std::move(row));
  }
  const std::filesystem::path dir = cfg.output_dir;
  if (cfg.outputs.table && !res.table.columns.empty()) export_table(res.table, dir / "table.csv");
  detail::export_runs(res, dir / "runs.csv");
  return res;
}

}  // namespace silo
