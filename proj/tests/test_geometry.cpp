#include "extremalflow/analytic.hpp"
#include "extremalflow/errors.hpp"
#include "extremalflow/geometry.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace extremalflow;

namespace {

const ProblemParams kP{1.0, 0.5, 201};

// Closed forms for the unit circle through (+-0.5, 0).
constexpr double kCapLength = 1.0471975511965977;      // 2 asin(1/2)
constexpr double kCapArea = 0.09058607370607955;       // (pi/3 - sin(pi/3)) / 2
constexpr double kMajorArcLength = 5.235987755982989;  // 2 pi - pi/3
constexpr double kMajorArcArea = 3.0510065798837137;   // pi - cap area

GraphProfile flat(const ProblemParams& p) {
  return GraphProfile(p, std::vector<double>(static_cast<std::size_t>(p.grid_n), 0.0));
}

double max_abs_dev(const std::vector<double>& v, double target) {
  double m = 0.0;
  for (double x : v) {
    m = std::max(m, std::abs(x - target));
  }
  return m;
}

} // namespace

TEST_CASE("problem parameters") {
  CHECK_NOTHROW(kP.validate());
  CHECK(kP.center_offset() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
  CHECK_FALSE(kP.degenerate());
  CHECK(ProblemParams{1.0, 1.0, 201}.degenerate());

  CHECK_THROWS_AS((ProblemParams{1.0, 1.5, 201}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ProblemParams{0.0, 0.5, 201}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ProblemParams{1.0, -0.5, 201}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ProblemParams{1.0, 0.5, 200}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ProblemParams{1.0, 0.5, 15}.validate()), InvalidArgument);
}

TEST_CASE("profiles must be pinned and finite") {
  std::vector<double> u(201, 0.0);
  u.front() = 1e-3;
  CHECK_THROWS_AS(GraphProfile(kP, u), InvalidArgument);
  u.front() = 0.0;
  u[10] = std::nan("");
  CHECK_THROWS_AS(GraphProfile(kP, u), InvalidArgument);
  CHECK_THROWS_AS(GraphProfile(kP, std::vector<double>(11, 0.0)), InvalidArgument);

  std::vector<double> rho(201, 0.5);
  rho[3] = -0.1;
  CHECK_THROWS_AS(PolarProfile(kP, rho), InvalidArgument);
}

TEST_CASE("sampled curves run from P to Q") {
  const SampledCurve g = graph_to_sampled(gamma_lower(kP));
  CHECK(g.front().x == -0.5);
  CHECK(g.back().x == 0.5);
  CHECK_NOTHROW(g.validate(0.5));
  CHECK_FALSE(g.self_intersects());

  const SampledCurve p = polar_to_sampled(gamma_upper(kP));
  CHECK(p.front().x == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(p.front().y == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p.back().x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_NOTHROW(p.validate(0.5));
  // The upper arc bulges up through the top of the circle.
  const auto top = std::max_element(p.points.begin(), p.points.end(),
                                     [](const Vec2& a, const Vec2& b) { return a.y < b.y; });
  CHECK(top->y == doctest::Approx(1.0 + std::sqrt(0.75)).epsilon(1e-9));
}

TEST_CASE("equilibria have curvature A in every representation") {
  CHECK(max_abs_dev(curvature_graph(gamma_lower(kP)), 1.0) < 1e-4);
  // Polar stencils are second order in the angle step.
  const ProblemParams fine{1.0, 0.5, 401};
  const double up201 = max_abs_dev(curvature_polar(gamma_upper(kP)), 1.0);
  const double lo201 = max_abs_dev(curvature_polar(gamma_lower_polar(kP)), 1.0);
  CHECK(up201 < 1e-3);
  CHECK(lo201 < 1e-3);
  CHECK(up201 / max_abs_dev(curvature_polar(gamma_upper(fine)), 1.0) > 3.5);
  CHECK(lo201 / max_abs_dev(curvature_polar(gamma_lower_polar(fine)), 1.0) > 3.5);
  CHECK(max_abs_dev(curvature_sampled(graph_to_sampled(gamma_lower(kP))), 1.0) < 1e-4);
  CHECK(max_abs_dev(curvature_sampled(polar_to_sampled(gamma_upper(kP))), 1.0) < 1e-4);

  CHECK(curvature_graph(gamma_lower(kP)).size() == 199);
  CHECK(max_abs_dev(curvature_graph(flat(kP)), 0.0) == 0.0);
}

TEST_CASE("curvature sign: concave-down is positive") {
  std::vector<double> u(201);
  std::vector<double> v(201);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = -0.5 + 0.005 * static_cast<double>(i);
    u[i] = 0.25 - x * x;
    v[i] = x * x - 0.25;
  }
  const auto ku = curvature_graph(GraphProfile(kP, u));
  const auto kv = curvature_graph(GraphProfile(kP, v));
  CHECK(ku[99] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(kv[99] == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("length and enclosed area against closed forms") {
  const SampledCurve seg = graph_to_sampled(flat(kP));
  CHECK(length(seg) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(enclosed_area(seg) == 0.0);

  const SampledCurve cap = graph_to_sampled(gamma_lower(kP));
  CHECK(std::abs(length(cap) - kCapLength) < 1e-5);
  CHECK(std::abs(enclosed_area(cap) - kCapArea) < 1e-5);

  // Inscribed polygon: second-order error in the node spacing.
  const SampledCurve major = polar_to_sampled(gamma_upper(kP));
  const SampledCurve major401 = polar_to_sampled(gamma_upper(ProblemParams{1.0, 0.5, 401}));
  const double eL = kMajorArcLength - length(major);
  const double eS = kMajorArcArea - enclosed_area(major);
  CHECK(eL > 0.0);
  CHECK(eL < 5e-4);
  CHECK(eS < 5e-4);
  CHECK(eL / (kMajorArcLength - length(major401)) == doctest::Approx(4.0).epsilon(0.02));
  CHECK(eS / (kMajorArcArea - enclosed_area(major401)) == doctest::Approx(4.0).epsilon(0.02));

  std::vector<double> below(201);
  for (std::size_t i = 0; i < below.size(); ++i) {
    below[i] = -0.1 * std::cos(std::numbers::pi * (-0.5 + 0.005 * static_cast<double>(i)));
  }
  below.front() = below.back() = 0.0;
  CHECK_THROWS_AS(enclosed_area(graph_to_sampled(GraphProfile(kP, below))), DomainError);
}

TEST_CASE("endpoint tangents") {
  const EndpointTangents seg = endpoint_tangents(graph_to_sampled(flat(kP)));
  CHECK(seg.at_P.x == doctest::Approx(1.0));
  CHECK(seg.at_P.y == doctest::Approx(0.0));
  CHECK(seg.at_Q.x == doctest::Approx(1.0));

  // The cap leaves P at angle pi/6 above the chord and returns symmetrically.
  const EndpointTangents cap = endpoint_tangents(graph_to_sampled(gamma_lower(kP)));
  CHECK(cap.at_P.y == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(cap.at_Q.y == doctest::Approx(-0.5).epsilon(1e-4));

  // The major arc leaves P heading up and outward, perpendicular to the
  // radius from its centre (0, sqrt(3)/2).
  const EndpointTangents up = endpoint_tangents(polar_to_sampled(gamma_upper(kP)));
  CHECK(up.at_P.x == doctest::Approx(-std::sqrt(0.75)).epsilon(1e-4));
  CHECK(up.at_P.y == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(up.at_Q.x == doctest::Approx(-std::sqrt(0.75)).epsilon(1e-4));
  CHECK(up.at_Q.y == doctest::Approx(-0.5).epsilon(1e-4));
}

TEST_CASE("arc parameter and CSV output") {
  const SampledCurve seg = graph_to_sampled(flat(ProblemParams{1.0, 0.5, 17}));
  const auto s = arc_parameter(seg);
  CHECK(s.front() == 0.0);
  CHECK(s.back() == doctest::Approx(1.0));
  CHECK(std::is_sorted(s.begin(), s.end()));

  std::ostringstream os;
  write_csv(os, seg);
  const std::string text = os.str();
  CHECK(text.rfind("x,y\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 18);
  CHECK(text.find("-0.5,0\n") != std::string::npos);
}

TEST_CASE("self-intersection detection") {
  SampledCurve bow{{{-0.5, 0.0}, {0.5, 1.0}, {0.5, 0.5}, {-0.2, 1.0}, {0.5, 0.0}}};
  CHECK(bow.self_intersects());
}
