// silo: command-line driver for similarity, evolution and comparison runs.
//
// Exit status: 0 when every row completed without alarms, 1 when a row failed
// or raised an alarm, 2 on usage, configuration or I/O errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "silo/silo.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::string h_list;
  std::optional<std::size_t> max_steps;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
  auto* opt = cmd->add_option("--config", flags.config, "experiment configuration file");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "output directory (overrides output.dir)");
  cmd->add_option("--h-list", flags.h_list, "comma-separated grid spacings (overrides grid.h)");
  cmd->add_option("--max-steps", flags.max_steps, "step limit for finite-difference runs");
  cmd->add_flag("--quiet", flags.quiet, "suppress progress output");
}

void apply_overrides(silo::ExperimentConfig& cfg, const CommonFlags& flags, const std::string& out) {
  if (!out.empty()) cfg.output_dir = out;
  if (!flags.h_list.empty()) cfg.h_list = silo::detail::parse_numbers(flags.h_list, "--h-list");
  if (flags.max_steps) cfg.scheme.max_steps = *flags.max_steps;
}

int run_config(silo::ExperimentConfig cfg, silo::Mode mode, const CommonFlags& flags, const std::string& out) {
  apply_overrides(cfg, flags, out);
  const silo::ExperimentResult res = silo::run_experiment(cfg, mode, flags.quiet ? nullptr : &std::cout);
  if (!flags.quiet && !res.table.columns.empty()) {
    for (std::size_t c = 0; c < res.table.columns.size(); ++c) {
      std::cout << "order " << res.table.columns[c] << ':';
      for (const auto& o : res.table.orders(c)) std::cout << ' ' << silo::format_order(o);
      std::cout << '\n';
    }
  }
  return res.ok() ? 0 : 1;
}

/// Radial similarity profile for a central point source on a disk of radius 1.
void export_radial(const std::filesystem::path& dir, bool quiet) {
  const silo::Parameters p;
  const double radius = 1.0;
  const double c = 1.0 / (3.14159265358979323846 * radius * radius);
  std::vector<double> r;
  for (int k = 1; k <= 200; ++k) r.push_back(radius * k / 200.0);
  const silo::RadialProfile prof = silo::example2_radial(radius, p, c, r);
  auto write = [&](const std::vector<double>& values, const std::string& name) {
    const auto path = dir / name;
    std::filesystem::create_directories(dir);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw silo::IoError("cannot write '" + path.string() + "'");
    out << "x,value\n";
    for (std::size_t k = 0; k < r.size(); ++k)
      out << silo::format_value(r[k]) << ',' << silo::format_value(values[k]) << '\n';
    if (!out) throw silo::IoError("write failed for '" + path.string() + "'");
  };
  write(prof.U, "u_radial.csv");
  write(prof.V, "v_radial.csv");
  write(prof.Ur, "ur_radial.csv");
  if (!quiet) std::cout << "radial_point_source written to " << dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-layer silo filling: similarity solutions and evolution"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* similarity = app.add_subcommand("similarity", "finite-element similarity solutions");
  auto* evolve = app.add_subcommand("evolve", "finite-difference evolution to the asymptotic profile");
  auto* compare = app.add_subcommand("compare", "exact, finite-element and finite-difference comparison");
  for (auto* cmd : {similarity, evolve, compare}) add_common(cmd, flags, true);

  auto* examples = app.add_subcommand("examples", "run built-in experiments (compare mode)");
  add_common(examples, flags, false);
  std::vector<std::string> names;
  bool list = false;
  std::string dump;
  examples->add_option("names", names, "built-in experiment names, or 'all'");
  examples->add_flag("--list", list, "list built-in experiments");
  examples->add_option("--dump", dump, "write the built-in configurations to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (examples->parsed()) {
      if (list || (names.empty() && dump.empty())) {
        for (const auto& c : silo::builtin_configs())
          std::cout << c.name << "  " << c.summary << '\n';
        std::cout << "radial_point_source  radial profile of a point source on a disk\n";
        return 0;
      }
      if (!dump.empty()) {
        std::filesystem::create_directories(dump);
        for (const auto& c : silo::builtin_configs()) {
          const auto path = std::filesystem::path(dump) / (std::string(c.name) + ".cfg");
          std::ofstream out(path, std::ios::binary);
          out << c.text;
          if (!out) throw silo::IoError("cannot write '" + path.string() + "'");
        }
        if (names.empty()) return 0;
      }
      if (names.size() == 1 && names[0] == "all") {
        names.clear();
        for (const auto& c : silo::builtin_configs()) names.emplace_back(c.name);
        names.emplace_back("radial_point_source");
      }
      int status = 0;
      for (const auto& name : names) {
        const std::filesystem::path base = flags.out.empty() ? std::filesystem::path("out") : std::filesystem::path(flags.out);
        if (name == "radial_point_source") {
          export_radial(base / name, flags.quiet);
          continue;
        }
        const silo::BuiltinConfig* b = silo::find_builtin(name);
        if (!b) {
          std::cerr << "unknown example '" << name << "' (see --list)\n";
          return 2;
        }
        silo::ExperimentConfig cfg = silo::parse_config(b->text);
        const std::string out = flags.out.empty() ? std::string() : (base / name).string();
        status = std::max(status, run_config(std::move(cfg), silo::Mode::compare, flags, out));
      }
      return status;
    }

    const silo::ExperimentConfig cfg = silo::load_config(flags.config);
    const silo::Mode mode = similarity->parsed() ? silo::Mode::similarity
                            : evolve->parsed()   ? silo::Mode::evolve
                                                 : silo::Mode::compare;
    return run_config(cfg, mode, flags, flags.out);
  } catch (const silo::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const silo::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
