#pragma once

// Flat key = value run configuration. Lines starting with '#' are comments;
// unknown keys are rejected. Recognised keys and defaults:
//
//   A = 1                     driving force
//   a = 0.5                   endpoint half-span, 0 < a <= 1/A
//   grid_n = 201              nodes per chart (odd, >= 17)
//   phi = cos                 cos | parabola
//   sigma = 0.1               amplitude of the initial curve
//   cfl = 0.2                 explicit step factor (<= 0.25)
//   scheme = explicit         explicit | semi_implicit
//   t_max = 50                horizon
//   sample_interval = 0.05    diagnostic sampling period
//   snapshot_stride = 1       keep every k-th sample as a snapshot
//   slope_switch = 10         graph -> polar handoff slope
//   slope_return = 5          polar -> graph handoff slope
//   converge = 5e-4           lock-in distance to an equilibrium
//   escape_gap = 1e-3         clearance above the upper equilibrium for escape
//   dissipation = 1e-6        lock-in dissipation floor
//   sgn_tol = 1e-7            contact tolerance of the sign words
//   sigmas = -1,0,0.1         sweep list
//   bisect_lo = 0.1           bisection lower end
//   bisect_hi = grim          bisection upper end, a number or "grim"
//   width_tol = 0.01          bisection stopping width
//   grim_radius = 2           barrier radius used for the Grim-reaper sigma
//   grim_margin = 0.01        relative margin over the Grim reaper
//   critical_horizon = 50     horizon of the near-critical run
//   out = out                 output directory

#include "extremalflow/analytic.hpp"
#include "extremalflow/evolver.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace extremalflow {

struct RunConfig {
  InitialFamily family{ProblemParams{}, PhiShape::Cosine, 0.1};
  StepControl step;
  ClassifierTolerances tolerances;
  std::vector<double> sigmas{-1.0, 0.0, 0.1};
  double bisect_lo = 0.1;
  /// Empty: use the Grim-reaper sigma.
  std::optional<double> bisect_hi;
  double width_tol = 0.01;
  double grim_radius = 2.0;
  double grim_margin = 0.01;
  double critical_horizon = 50.0;
  std::filesystem::path out_dir = "out";

  /// Throws InvalidArgument on any out-of-range value.
  void validate() const;
};

/// Parses configuration text. Throws InvalidArgument with the source name on
/// syntax errors, unknown keys, or invalid values.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
/// Throws InvalidArgument if the file cannot be opened or parsed.
RunConfig load_config(const std::filesystem::path& path);
/// Canonical key = value rendering; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& c);

} // namespace extremalflow
