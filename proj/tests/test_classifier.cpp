#include "extremalflow/analytic.hpp"
#include "extremalflow/classifier.hpp"
#include "extremalflow/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

using namespace extremalflow;

namespace {

const ProblemParams kP{1.0, 0.5, 201};
const InitialFamily kFam{kP, PhiShape::Cosine, 0.0};

SweepRow row(double sigma, Category c) { return SweepRow{sigma, c, 1.0, "-", false}; }

Classification outcome(Category c, std::string word) {
  Classification r;
  r.category = c;
  r.final_sgn = std::move(word);
  return r;
}

} // namespace

TEST_CASE("category names") {
  for (Category c : {Category::Escape, Category::ConvergeUpper, Category::ConvergeLower, Category::Undetermined}) {
    CHECK(parse_category(to_string(c)) == c);
  }
  CHECK_THROWS_AS(parse_category("Sideways"), InvalidArgument);
}

TEST_CASE("sub-threshold amplitudes converge to the lower equilibrium") {
  for (double s : {-1.0, 0.1}) {
    const Classification c = classify(kFam.with_sigma(s), StepControl{}, ClassifierTolerances{});
    CHECK(c.sigma == s);
    CHECK(c.category == Category::ConvergeLower);
    CHECK_FALSE(c.blowup);
    CHECK(c.final_sgn == "-");
    CHECK(audit_intersections(c.trajectory).ok);
  }
}

TEST_CASE("the Grim reaper amplitude escapes") {
  const GrimSetup g = grim_reaper_setup(kFam, 2.0);
  const Classification c = classify(kFam.with_sigma(g.sigma), StepControl{}, ClassifierTolerances{});
  CHECK(c.category == Category::Escape);
  CHECK(c.final_sgn == "+");
  CHECK(c.t_event < StepControl{}.t_max);
  CHECK(c.trajectory.chart_switches >= 1);
  const IntersectionAudit a = audit_intersections(c.trajectory);
  CHECK_MESSAGE(a.ok, a.detail);
  CHECK(a.samples_checked > 0);
}

TEST_CASE("intersection audit flags a growing word") {
  Trajectory t;
  t.diagnostics.resize(3);
  t.diagnostics[0].Z = 2;
  t.diagnostics[0].sgn = "-";
  t.diagnostics[1].Z = -1;
  t.diagnostics[1].sgn = "?";
  t.diagnostics[2].Z = 4;
  t.diagnostics[2].sgn = "-+-";
  const IntersectionAudit a = audit_intersections(t);
  CHECK_FALSE(a.ok);
  CHECK_FALSE(a.detail.empty());
  t.diagnostics[2].Z = 2;
  t.diagnostics[2].sgn = "-";
  CHECK(audit_intersections(t).ok);
}

TEST_CASE("sweep preserves input order and is deterministic") {
  const std::vector<double> sigmas{0.1, -1.0, 0.0};
  setenv("EXTREMALFLOW_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  const auto serial = sweep(kFam, sigmas, StepControl{}, ClassifierTolerances{});
  setenv("EXTREMALFLOW_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  const auto parallel = sweep(kFam, sigmas, StepControl{}, ClassifierTolerances{});
  unsetenv("EXTREMALFLOW_THREADS");

  REQUIRE(serial.size() == 3);
  REQUIRE(parallel.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(serial[i].sigma == sigmas[i]);
    CHECK(serial[i].category == Category::ConvergeLower);
    CHECK(parallel[i].sigma == serial[i].sigma);
    CHECK(parallel[i].category == serial[i].category);
    CHECK(parallel[i].t_event == serial[i].t_event);
  }
  CHECK(sweep(kFam, {}, StepControl{}, ClassifierTolerances{}).empty());
}

TEST_CASE("monotonicity audit") {
  CHECK_NOTHROW(audit_monotone({row(0.1, Category::ConvergeLower), row(3.0, Category::Undetermined),
                                row(5.0, Category::Escape)}));
  CHECK_NOTHROW(audit_monotone({row(5.0, Category::Escape), row(0.1, Category::ConvergeLower)}));
  CHECK_THROWS_AS(audit_monotone({row(0.1, Category::Escape), row(5.0, Category::ConvergeLower)}),
                  MonotonicityViolation);
  CHECK_THROWS_AS(audit_monotone({row(0.1, Category::ConvergeUpper), row(1.0, Category::ConvergeLower)}),
                  MonotonicityViolation);
  CHECK_THROWS_AS(audit_monotone({row(1.0, Category::Escape), row(2.0, Category::Undetermined)}),
                  MonotonicityViolation);
  CHECK_NOTHROW(audit_monotone({}));
}

TEST_CASE("side of the threshold") {
  CHECK(side_of(outcome(Category::ConvergeLower, "-")) == Side::Lower);
  CHECK(side_of(outcome(Category::Escape, "+")) == Side::Upper);
  CHECK(side_of(outcome(Category::Undetermined, "-+-")) == Side::Upper);
  CHECK(side_of(outcome(Category::Undetermined, "-")) == Side::Lower);
  CHECK(side_of(outcome(Category::ConvergeUpper, "-+-")) == Side::Upper);
  CHECK(side_of(outcome(Category::ConvergeUpper, "-")) == Side::Lower);
  CHECK(to_string(Side::Upper) == "upper");
}

TEST_CASE("bisection preconditions") {
  CHECK_THROWS_AS(bisect_sigma_star(kFam, 50.0, 60.0, 0.01, StepControl{}, ClassifierTolerances{}), InvalidArgument);
  CHECK_THROWS_AS(bisect_sigma_star(kFam, 0.1, 0.2, 0.01, StepControl{}, ClassifierTolerances{}), InvalidArgument);
  CHECK_THROWS_AS(bisect_sigma_star(kFam, 0.1, 5.0, 0.0, StepControl{}, ClassifierTolerances{}), InvalidArgument);
}

TEST_CASE("bisection brackets the threshold and the flow lingers near the upper equilibrium") {
  const Bracket b = bisect_sigma_star(kFam, 3.0, 3.5, 0.01, StepControl{}, ClassifierTolerances{});
  CHECK(b.width <= 0.01);
  CHECK(b.hi - b.lo == doctest::Approx(b.width));
  CHECK(b.lo > 3.0);
  CHECK(b.hi < 3.5);
  REQUIRE(b.log.size() >= 2);
  CHECK(b.log[0].iteration == 0);
  CHECK(b.log[1].iteration == 0);
  for (const BisectionStep& s : b.log) {
    CHECK(s.intersections_ok);
    CHECK(s.max_energy_increase <= 1e-7);
  }

  // Lower-side amplitudes closer to the threshold shadow the upper equilibrium longer.
  std::vector<double> below;
  for (const BisectionStep& s : b.log) {
    if (s.side == Side::Lower) {
      below.push_back(s.sigma);
    }
  }
  std::sort(below.begin(), below.end());
  below.erase(std::unique(below.begin(), below.end()), below.end());
  REQUIRE(below.size() >= 3);
  double prev = -1.0;
  double prev_min = 1e9;
  for (std::size_t k = below.size() - 3; k < below.size(); ++k) {
    const CriticalReport r =
        critical_run(kFam.with_sigma(below[k]), StepControl{}, ClassifierTolerances{}, 50.0, 0.05, 0.05);
    MESSAGE("sigma ", r.sigma, " dwell ", r.dwell_time, " min ", r.min_dist_upper);
    CHECK(r.dwell_time > prev);
    CHECK(r.min_dist_upper < prev_min);
    prev = r.dwell_time;
    prev_min = r.min_dist_upper;
  }
  CHECK(prev > 0.0);
}
