#pragma once

// Outcome classification of the initial family, sigma sweeps and bisection
// of the threshold amplitude.

#include "extremalflow/analytic.hpp"
#include "extremalflow/evolver.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace extremalflow {

enum class Category { Escape, ConvergeUpper, ConvergeLower, Undetermined };

std::string_view to_string(Category c);
Category parse_category(std::string_view name);

/// Audit of the intersection-number principle along one run: Z against the
/// upper equilibrium never increases and every sign word is a subword of the
/// previous one. Unresolvable samples are skipped.
struct IntersectionAudit {
  bool ok = true;
  std::size_t samples_checked = 0;
  std::string detail;
};

IntersectionAudit audit_intersections(const Trajectory& t);

struct Classification {
  double sigma = 0.0;
  Category category = Category::Undetermined;
  bool blowup = false;
  double t_event = 0.0;
  /// Last resolvable sign word against the upper equilibrium ("?" if none).
  std::string final_sgn;
  Trajectory trajectory;
};

/// Runs sigma*phi to its first termination event and maps the event to a category.
Classification classify(const InitialFamily& fam, const StepControl& ctl, const ClassifierTolerances& tols);

struct SweepRow {
  double sigma = 0.0;
  Category category = Category::Undetermined;
  double t_event = 0.0;
  std::string final_sgn;
  bool blowup = false;
};

/// Worker count: EXTREMALFLOW_THREADS if set and positive, else the hardware count.
unsigned worker_count();

/// Classifies every sigma on up to worker_count() threads. Rows follow the
/// input order. Throws MonotonicityViolation if the audit fails.
std::vector<SweepRow> sweep(const InitialFamily& tmpl, const std::vector<double>& sigmas, const StepControl& ctl,
                            const ClassifierTolerances& tols);

/// Throws MonotonicityViolation when some ConvergeLower sigma lies above an
/// Escape sigma, or an Undetermined/ConvergeUpper sigma lies outside the gap
/// between the two.
void audit_monotone(std::vector<SweepRow> rows);

enum class Side { Lower, Upper };
std::string_view to_string(Side s);

/// Side of the threshold implied by a classification. Undetermined and
/// ConvergeUpper outcomes fall back on the final sign word: a word containing
/// '+' counts as Upper, [-] as Lower.
Side side_of(const Classification& c);

struct BisectionStep {
  std::size_t iteration = 0;
  double sigma = 0.0;
  Category category = Category::Undetermined;
  std::string final_sgn;
  Side side = Side::Lower;
  bool voted = false;
  double lo = 0.0;
  double hi = 0.0;
  double t_event = 0.0;
  double max_energy_increase = 0.0;
  bool intersections_ok = true;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double width = 0.0;
  /// Iteration 0 entries record the verified initial endpoints.
  std::vector<BisectionStep> log;

  double midpoint() const { return 0.5 * (lo + hi); }
};

/// Bisection on [lo0, hi0] until hi - lo <= width_tol. Requires lo0 to
/// classify as ConvergeLower and hi0 as Escape (InvalidArgument otherwise).
/// With three or more workers the two quarter points are evaluated alongside
/// each midpoint and the unused one is discarded.
Bracket bisect_sigma_star(const InitialFamily& tmpl, double lo0, double hi0, double width_tol, const StepControl& ctl,
                          const ClassifierTolerances& tols);

struct CriticalReport {
  double sigma = 0.0;
  Trajectory trajectory;
  /// Smallest sampled Hausdorff distance to the upper equilibrium.
  double min_dist_upper = 0.0;
  double t_min = 0.0;
  /// Total sampled time spent within dwell_radius of the upper equilibrium.
  double dwell_time = 0.0;
  double dwell_radius = 0.0;
  /// First time the distance drops below approach_radius (NaN if never).
  double t_approach = 0.0;
  double approach_radius = 0.0;
  /// The sign word was [-+-] at every sample before t_approach.
  bool word_held = false;
  /// Last sample time with word [-+-].
  double word_hold_until = 0.0;
  std::vector<std::string> sgn_history;
};

/// Evolves sigma*phi up to horizon without stopping on the upper equilibrium
/// and reports how closely it shadows it.
CriticalReport critical_run(const InitialFamily& fam, const StepControl& ctl, const ClassifierTolerances& tols,
                            double horizon, double approach_radius, double dwell_radius);

} // namespace extremalflow
