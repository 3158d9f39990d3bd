#include "extremalflow/analysis.hpp"
#include "extremalflow/analytic.hpp"
#include "extremalflow/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace extremalflow;

namespace {

const ProblemParams kP{1.0, 0.5, 201};
constexpr double kPi = std::numbers::pi;
const double kC = std::sqrt(0.75);

// Roots of the circle closed form for R0 = 2, A = 1 (30-digit arithmetic).
constexpr double kR05 = 2.2649597201255005;
constexpr double kR1 = 2.5571455989976114;
constexpr double kR2 = 3.2079400315693230;

// Bracketed roots of G(x, t) = 0 for b = 0.25, C = 3.
constexpr double kKink00 = 0.3926975456456358;
constexpr double kKink01 = 0.3926914735779709;
constexpr double kKink05 = 0.3881199159290382;

} // namespace

TEST_CASE("equilibrium evaluators") {
  CHECK(gamma_lower_height(kP, 0.0) == doctest::Approx(1.0 - kC).epsilon(1e-15));
  CHECK(gamma_lower_height(kP, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(gamma_lower_radius(kP, kPi / 2) == doctest::Approx(1.0 - kC).epsilon(1e-14));
  CHECK(gamma_upper_radius(kP, kPi / 2) == doctest::Approx(1.0 + kC).epsilon(1e-14));
  CHECK(gamma_lower_radius(kP, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gamma_upper_radius(kP, kPi) == doctest::Approx(0.5).epsilon(1e-14));

  // Polar and graph forms of the cap describe the same points.
  for (double th : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const double r = gamma_lower_radius(kP, th);
    CHECK(r * std::sin(th) == doctest::Approx(gamma_lower_height(kP, r * std::cos(th))).epsilon(1e-12));
    // Every upper point sits on the circle of radius 1/A about (0, c).
    const double R = gamma_upper_radius(kP, th);
    CHECK(std::hypot(R * std::cos(th), R * std::sin(th) - kC) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("equilibrium profiles and distances") {
  const GraphProfile g = gamma_lower(kP);
  CHECK(g.u.front() == 0.0);
  CHECK(g.u.back() == 0.0);
  const PolarProfile u = gamma_upper(kP);
  CHECK(u.rho.front() == 0.5);
  CHECK(u.rho.back() == 0.5);

  CHECK(distance_to_equilibrium(graph_to_sampled(g), kP, Equilibrium::Lower) < 1e-5);
  CHECK(distance_to_equilibrium(polar_to_sampled(u), kP, Equilibrium::Upper) < 5e-4);
  // Cap vs major arc: farthest points are the two tops, 2 apart.
  CHECK(distance_to_equilibrium(graph_to_sampled(g), kP, Equilibrium::Upper) ==
        doctest::Approx(1.0 + kC - (1.0 - kC)).epsilon(1e-3));

  const SampledCurve c = graph_to_sampled(initial_curve(InitialFamily{kP, PhiShape::Cosine, 1.0}));
  const SampledCurve at = equilibrium_at_angles(kP, Equilibrium::Upper, c);
  CHECK(at.size() == c.size());
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    CHECK(std::atan2(at.points[i].y, at.points[i].x) ==
          doctest::Approx(std::atan2(c.points[i].y, c.points[i].x)).epsilon(1e-12));
  }
}

TEST_CASE("Grim reaper closed form") {
  const double b = 0.25;
  const double C = 3.0;
  CHECK(grim_reaper_value(b, C, 0.1, 0.2) == doctest::Approx(2.179442745231236).epsilon(1e-14));
  CHECK(grim_reaper_value(b, C, 0.0, 0.0) == doctest::Approx(C));
  CHECK_THROWS_AS(grim_reaper_value(b, C, b * kPi / 2, 0.0), DomainError);

  CHECK(grim_reaper_kink(b, C, 0.0) == doctest::Approx(kKink00).epsilon(1e-13));
  CHECK(grim_reaper_kink(b, C, 0.1) == doctest::Approx(kKink01).epsilon(1e-13));
  CHECK(grim_reaper_kink(b, C, 0.5) == doctest::Approx(kKink05).epsilon(1e-13));
  CHECK(grim_reaper_value(b, C, grim_reaper_kink(b, C, 0.5), 0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK_THROWS(grim_reaper_kink(b, C, b * C));

  // G_t = G_xx / (1 + G_x^2) by centred differences in x and t.
  const double h = 1e-4;
  for (double x : {-0.2, 0.0, 0.15, 0.3}) {
    const double t = 0.4;
    const double Gt = (grim_reaper_value(b, C, x, t + h) - grim_reaper_value(b, C, x, t - h)) / (2 * h);
    const double Gx = (grim_reaper_value(b, C, x + h, t) - grim_reaper_value(b, C, x - h, t)) / (2 * h);
    const double Gxx = (grim_reaper_value(b, C, x + h, t) - 2 * grim_reaper_value(b, C, x, t) +
                        grim_reaper_value(b, C, x - h, t)) /
                       (h * h);
    CHECK(Gt == doctest::Approx(Gxx / (1 + Gx * Gx)).epsilon(1e-5));
  }
}

TEST_CASE("Grim reaper sub-solution curve") {
  const double b = 0.9 * 2 * 0.5 / kPi;
  const SampledCurve s = grim_reaper_subsolution(kP, b, 0.5, 0.05);
  CHECK(s.front().x == -0.5);
  CHECK(s.back().x == 0.5);
  const double kink = grim_reaper_kink(b, 0.5, 0.05);
  bool has_kink = false;
  for (const Vec2& q : s.points) {
    CHECK(q.y >= 0.0);
    has_kink = has_kink || std::abs(q.x - kink) < 1e-15;
  }
  CHECK(has_kink);
  CHECK_THROWS_AS(grim_reaper_subsolution(kP, 2 * 0.5 / kPi, 0.5, 0.0), InvalidArgument);
}

TEST_CASE("expanding circles") {
  CHECK(circle_radius(2.0, 1.0, 0.5) == doctest::Approx(kR05).epsilon(1e-12));
  CHECK(circle_radius(2.0, 1.0, 1.0) == doctest::Approx(kR1).epsilon(1e-12));
  CHECK(circle_radius(2.0, 1.0, 2.0) == doctest::Approx(kR2).epsilon(1e-12));
  CHECK(circle_radius(2.0, 1.0, 0.0) == 2.0);
  CHECK(circle_time_to_radius(2.0, 1.0, kR1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(circle_radius(1.0, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(circle_radius(0.5, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("barrier circles") {
  const BarrierGeometry g = barrier_geometry(kP, 2.0);
  // Concentric; B1 touches the y-axis; B2 is the equilibrium circle scaled
  // about P by 1 + R/a, so it passes through P.
  CHECK(g.B1.center.x == g.B2.center.x);
  CHECK(g.B1.radius == doctest::Approx(g.B1.center.x));
  CHECK(g.B2.radius == doctest::Approx(5.0));
  CHECK(norm(g.B2.center - kP.P()) == doctest::Approx(g.B2.radius).epsilon(1e-14));
  CHECK(norm(g.B2.center - Vec2{0.0, g.K}) == doctest::Approx(g.B2.radius).epsilon(1e-14));
  CHECK(g.K == doctest::Approx(5.0 * kC + std::sqrt(21.0)).epsilon(1e-14));
  // The circle ODE started at R reaches the B2 radius at t_star.
  CHECK(g.t_star == doctest::Approx(3.0 + std::log(4.0)).epsilon(1e-14));
  CHECK(circle_radius(2.0, 1.0, g.t_star) == doctest::Approx(g.B2.radius).epsilon(1e-10));
  CHECK_THROWS_AS(barrier_geometry(kP, 0.9), InvalidArgument);
}

TEST_CASE("initial family") {
  CHECK(parse_phi("cos") == PhiShape::Cosine);
  CHECK(parse_phi("cosine") == PhiShape::Cosine);
  CHECK(parse_phi("parabola") == PhiShape::Parabola);
  CHECK(parse_phi(to_string(PhiShape::Parabola)) == PhiShape::Parabola);
  CHECK_THROWS_AS(parse_phi("gaussian"), InvalidArgument);

  const InitialFamily fam{kP, PhiShape::Cosine, 2.0};
  const GraphProfile g = initial_curve(fam);
  CHECK(g.u.front() == 0.0);
  CHECK(g.u.back() == 0.0);
  CHECK(g.u[100] == doctest::Approx(2.0));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.u[i] == g.u[g.size() - 1 - i]);
  }

  // The at-most-four-intersections hypothesis holds over the swept range.
  std::vector<double> sigmas;
  for (double s = -2.0; s <= 160.0; s += 0.5) {
    sigmas.push_back(s);
  }
  CHECK(max_intersections_with_upper(fam, sigmas) <= 4);
  CHECK(max_intersections_with_upper(InitialFamily{kP, PhiShape::Parabola, 0.0}, sigmas) <= 4);
}

TEST_CASE("Grim-reaper dominating sigma") {
  const InitialFamily fam{kP, PhiShape::Cosine, 0.0};
  const GrimSetup s = grim_reaper_setup(fam, 2.0);
  CHECK(s.b == doctest::Approx(0.9 / kPi));
  CHECK(s.C == doctest::Approx(s.barrier.K + s.barrier.t_star / s.b + 1.0));

  // sigma * phi lies above max(G, 0) at t = 0, and the margin is tight.
  double worst = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const double x = -0.5 + k * 1e-5;
    const double G = std::abs(x) < s.b * kPi / 2 ? std::max(0.0, grim_reaper_value(s.b, s.C, x, 0.0)) : 0.0;
    if (G > 0.0) {
      CHECK_MESSAGE(s.sigma * fam.phi_value(x) > G, "x = " << x);
      worst = std::max(worst, G / fam.phi_value(x));
    }
  }
  CHECK(s.sigma / worst == doctest::Approx(1.01).epsilon(1e-6));

  const SampledCurve sub = grim_reaper_subsolution(kP, s.b, s.C, 0.0);
  const SampledCurve top = graph_to_sampled(initial_curve(fam.with_sigma(s.sigma)));
  CHECK(semi_order(top, sub) == Order::Above);
}
