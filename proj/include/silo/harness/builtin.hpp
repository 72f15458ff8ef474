#pragma once

// Built-in experiment configurations. The files under configs/ are copies
// written by `silo examples --dump configs`.

#include <string>
#include <string_view>
#include <vector>

namespace silo {

struct BuiltinConfig {
  std::string_view name;
  std::string_view summary;
  std::string_view text;
};

inline const std::vector<BuiltinConfig>& builtin_configs() {
  static const std::vector<BuiltinConfig> configs = {
      {"point_source_1d", "unit point source over the middle of a 1D silo",
       R"(name = point_source_1d
domain.kind = interval
domain.length = 1
grid.h = 0.01, 0.005, 0.0025
source.atom = 0.5 1
scheme.stop_epsilon = 1e-6
output.dir = out/point_source_1d
)"},
      {"centered_patch_1d", "centered source of width 0.1, the refinement table",
       R"(name = centered_patch_1d
domain.kind = interval
domain.length = 1
grid.h = 0.01, 0.005, 0.0025, 0.001
source.patch = 0.45 0.55 0.1
scheme.stop_epsilon = 1e-6
fe.rule = inclusive
output.dir = out/centered_patch_1d
)"},
      {"boundary_patch_1d", "source close to the right wall",
       R"(name = boundary_patch_1d
domain.kind = interval
domain.length = 1
grid.h = 0.01, 0.005, 0.0025
source.patch = 0.9 1 1
scheme.stop_epsilon = 1e-6
output.snapshot_every = 500
output.dir = out/boundary_patch_1d
)"},
      {"offset_patch_1d", "unit-intensity source on [0.2, 0.3], away from the centre",
       R"(name = offset_patch_1d
domain.kind = interval
domain.length = 1
grid.h = 0.01, 0.005, 0.0025
source.patch = 0.2 0.3 1
scheme.stop_epsilon = 1e-6
output.snapshot_every = 500
output.dir = out/offset_patch_1d
)"},
      {"two_patches_1d",
       "source on [0.25, 0.35] and [0.65, 0.75]; the evolution keeps oscillating and reports no similarity profile",
       R"(name = two_patches_1d
domain.kind = interval
domain.length = 1
grid.h = 0.01, 0.005
source.patch = 0.25 0.35 1
source.patch = 0.65 0.75 1
scheme.stop_epsilon = 1e-6
scheme.max_steps = 400000
output.snapshot_every = 5000
output.dir = out/two_patches_1d
)"},
      {"central_ball_2d", "source on a small ball in the centre of the unit square",
       R"(name = central_ball_2d
domain.kind = rectangle
domain.lx = 1
domain.ly = 1
grid.n = 32, 64, 128
source.disk = 0.5 0.5 0.1 1
scheme.stop_epsilon = 1e-6
output.dir = out/central_ball_2d
)"},
      {"two_balls_2d", "source on two disjoint balls in the unit square",
       R"(name = two_balls_2d
domain.kind = rectangle
domain.lx = 1
domain.ly = 1
grid.n = 32, 64, 128
source.disk = 0.3 0.3 0.1 1
source.disk = 0.7 0.7 0.1 1
scheme.stop_epsilon = 1e-6
output.dir = out/two_balls_2d
)"},
      {"growing_heap_2d", "growth movie for the central ball",
       R"(name = growing_heap_2d
domain.kind = rectangle
domain.lx = 1
domain.ly = 1
grid.n = 64
source.disk = 0.5 0.5 0.1 1
scheme.stop_epsilon = 1e-6
output.profiles = true
output.snapshot_every = 2000
output.dir = out/growing_heap_2d
)"},
  };
  return configs;
}

inline const BuiltinConfig* find_builtin(std::string_view name) {
  for (const auto& c : builtin_configs())
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace silo
