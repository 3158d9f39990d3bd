#pragma once

// Method-of-lines integration of V = -kappa + A in the graph chart
//   u_t = u_xx / (1 + u_x^2) + A sqrt(1 + u_x^2)
// and the polar chart
//   rho_t = rho_tt / (rho^2 + rho_t^2) - (2 rho_t^2 + rho^2) / (rho (rho_t^2 + rho^2))
//           + A sqrt(rho_t^2 + rho^2) / rho,
// with chart switching and outcome detection along the run.

#include "extremalflow/analytic.hpp"
#include "extremalflow/geometry.hpp"

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace extremalflow {

enum class Chart { Graph, Polar };
std::string_view to_string(Chart c);

enum class Scheme { Explicit, SemiImplicit };
Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme s);

struct StepControl {
  /// dt <= cfl * h^2 / max(1, max diffusion coefficient).
  double cfl = 0.2;
  double t_max = 50.0;
  double sample_interval = 0.05;
  Scheme scheme = Scheme::Explicit;
  /// Graph -> polar handoff when max |u_x| exceeds this.
  double slope_switch = 10.0;
  /// Polar -> graph handoff when the curve is a graph with max |u_x| below this.
  double slope_return = 5.0;
  /// Keep every k-th diagnostic sample as a snapshot (0 keeps first and last only).
  std::size_t snapshot_stride = 1;
  /// Track per-step changes of E = L - A S (and of the graph monitor) while
  /// the curve stays in {y >= 0}. Costs one extra quadrature per step.
  bool monitor_energy = false;

  void validate() const;
};

struct ClassifierTolerances {
  /// Hausdorff distance for equilibrium lock-in.
  double converge = 5e-4;
  /// Minimum of (rho - rho_upper) / sin(theta) over interior nodes to declare escape.
  double escape_gap = 1e-3;
  /// Dissipation rate floor for equilibrium lock-in.
  double dissipation = 1e-6;
  /// Contact tolerance of the sign-word monitor.
  double sgn_tol = 1e-7;
  /// Stop when the run settles on the lower equilibrium.
  bool stop_on_lower = true;
  /// Stop when the run settles on the upper equilibrium.
  bool stop_on_upper = true;

  void validate() const;
};

using ChartState = std::variant<GraphProfile, PolarProfile>;

Chart chart_of(const ChartState& s);
SampledCurve to_sampled(const ChartState& s);
const ProblemParams& params_of(const ChartState& s);

/// Largest stable explicit step for the profile (semi-implicit: first-order terms only).
double stable_dt(const GraphProfile& g, const StepControl& ctl);
double stable_dt(const PolarProfile& p, const StepControl& ctl);

/// Semi-discrete graph velocity u_xx / (1 + u_x^2) + A sqrt(1 + u_x^2) by
/// central differences on spacing h; zero at the two end nodes.
std::vector<double> graph_operator(const std::vector<double>& u, double h, double A);

/// One step of size dt. Throws BlowupError when |u| or |u_x| exceeds 1e6.
GraphProfile step_graph(const GraphProfile& g, double dt, Scheme scheme = Scheme::Explicit);
/// One step of size dt. Throws BlowupError when rho <= 1e-9 or rho >= 1e6.
PolarProfile step_polar(const PolarProfile& p, double dt, Scheme scheme = Scheme::Explicit);

/// Steps for the given duration in the starting chart, with no switching
/// and no diagnostics.
ChartState advance(const ChartState& start, double duration, const StepControl& ctl);

/// Monotone cubic resampling onto the target chart's grid. Throws ChartError
/// when the curve is not single-valued in that chart.
ChartState switch_chart(const SampledCurve& c, const ProblemParams& p, Chart target);

double max_abs_slope(const GraphProfile& g);
/// max |dy/dx| over the polyline's segments (infinite for vertical segments).
double max_abs_slope(const SampledCurve& c);

enum class EventKind { Escaped, ConvergedLower, ConvergedUpper, ChartLoss, HorizonReached, Blowup };
std::string_view to_string(EventKind k);

struct TerminationEvent {
  EventKind kind = EventKind::HorizonReached;
  double t = 0.0;
};

struct DiagnosticSample {
  double t = 0.0;
  Chart chart = Chart::Graph;
  double L = 0.0;
  double S = 0.0;         // NaN below the axis
  double E = 0.0;         // L - A S, NaN below the axis
  double lyapunov = 0.0;  // J - A int u in the graph chart, E in the polar chart
  int Z = 0;              // -1 when unresolvable
  std::string sgn;        // "?" when unresolvable
  double kappa_dev_P = 0.0;
  double kappa_dev_Q = 0.0;
  double tangent_y_P = 0.0; // dF/ds(0) . (0,1)
  double tangent_y_Q = 0.0; // -dF/ds(L) . (0,1)
  double dissipation = 0.0;
  double dist_lower = 0.0;
  double dist_upper = 0.0;
  double clearance = 0.0; // escape margin, NaN unless the word is [+]
};

struct Snapshot {
  double t = 0.0;
  Chart chart = Chart::Graph;
  SampledCurve curve;
};

struct Trajectory {
  ProblemParams params;
  std::vector<Snapshot> snapshots;
  std::vector<DiagnosticSample> diagnostics;
  TerminationEvent event;
  std::size_t steps = 0;
  std::size_t chart_switches = 0;
  /// Largest one-step increase of E over steps with the curve in {y >= 0}
  /// (-inf when none were checked). Steps that change chart are skipped.
  double max_energy_increase = -std::numeric_limits<double>::infinity();
  /// Largest one-step increase of J - A int u over graph-chart steps.
  double max_lyapunov_increase = -std::numeric_limits<double>::infinity();
  std::size_t energy_steps_checked = 0;
};

/// Evolves sigma*phi from the graph chart until the first termination event.
Trajectory evolve(const InitialFamily& fam, const StepControl& ctl, const ClassifierTolerances& tols);
/// Same, from an arbitrary starting state.
Trajectory evolve(const ChartState& start, const StepControl& ctl, const ClassifierTolerances& tols);

} // namespace extremalflow
