#include "extremalflow/analysis.hpp"
#include "extremalflow/analytic.hpp"
#include "extremalflow/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace extremalflow;

namespace {

const ProblemParams kP{1.0, 0.5, 201};
constexpr double kPi = std::numbers::pi;

// Reference values from closed forms and adaptive quadrature.
constexpr double kCapLength = 1.0471975511965977;
constexpr double kCapEnergy = 0.9566114774905182;   // cap length - cap area
constexpr double kMajorEnergy = 2.1849811760992750; // major arc length - enclosed area
constexpr double kInitialEnergy33 = 4.628769041368988; // sigma = 3.3, cosine profile

SampledCurve initial(double sigma, int n = 201) {
  return graph_to_sampled(initial_curve(InitialFamily{ProblemParams{1.0, 0.5, n}, PhiShape::Cosine, sigma}));
}

SampledCurve upper() { return polar_to_sampled(gamma_upper(kP)); }
SampledCurve lower() { return graph_to_sampled(gamma_lower(kP)); }

SampledCurve lower_plus(double (*bump)(double)) {
  GraphProfile g = gamma_lower(kP);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    g.u[i] += bump(g.x(i));
  }
  return graph_to_sampled(g);
}

SgnWord random_word(std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::bernoulli_distribution coin;
  std::vector<Sign> letters(static_cast<std::size_t>(len(rng)));
  for (Sign& s : letters) {
    s = coin(rng) ? Sign::Plus : Sign::Minus;
  }
  return SgnWord(letters);
}

} // namespace

TEST_CASE("word parsing and printing") {
  const SgnWord w = SgnWord::parse("[- + - + -]");
  CHECK(w.str() == "-+-+-");
  CHECK(w.size() == 5);
  CHECK(w.z() == 6);
  CHECK(w.contains(Sign::Plus));
  CHECK(w.flipped().str() == "+-+-+");
  CHECK(SgnWord::parse("-").z() == 2);
  CHECK_THROWS_AS(SgnWord::parse("+x-"), InvalidArgument);
}

TEST_CASE("subword examples") {
  const SgnWord pm = SgnWord::parse("+-");
  CHECK(subword(pm, SgnWord::parse("+-")));
  CHECK(subword(pm, SgnWord::parse("+")));
  CHECK(subword(pm, SgnWord::parse("-")));
  CHECK_FALSE(subword(pm, SgnWord::parse("-+")));
  CHECK(subword(SgnWord::parse("-+-"), SgnWord::parse("-")));
  CHECK(subword(SgnWord::parse("-+-"), SgnWord::parse("+")));
  CHECK_FALSE(subword(SgnWord::parse("-"), SgnWord::parse("-+-")));
}

TEST_CASE("subword is a partial order, stable under flipping") {
  std::mt19937 rng(20241019);
  for (int trial = 0; trial < 3000; ++trial) {
    const SgnWord u = random_word(rng, 6);
    const SgnWord v = random_word(rng, 6);
    const SgnWord w = random_word(rng, 6);
    CHECK(subword(u, u));
    if (subword(u, v) && subword(v, u)) {
      CHECK(u == v);
    }
    if (subword(u, v) && subword(v, w)) {
      CHECK(subword(u, w));
    }
    CHECK(subword(u, v) == subword(u.flipped(), v.flipped()));
  }
}

TEST_CASE("interleaved configuration with four interior crossings") {
  // c1 - c2 = -0.05 sin(5 pi (x + a) / 2a): signs - + - + - from P to Q.
  const SampledCurve c1 = lower_plus([](double x) { return -0.05 * std::sin(5.0 * kPi * (x + 0.5)); });
  const SampledCurve c2 = lower();
  CHECK(intersection_count(c1, c2) == 6);
  CHECK(sgn_word(c1, c2).str() == "-+-+-");
  CHECK(sgn_word(c2, c1).str() == "+-+-+");
  CHECK(gap_profile(c1, c2).kind == Parameterization::Graph);

  // The same pattern around the upper arc, compared by polar angle.
  PolarProfile p = gamma_upper(kP);
  for (std::size_t j = 1; j + 1 < p.size(); ++j) {
    p.rho[j] -= 0.05 * std::sin(5.0 * p.theta(j));
  }
  const SampledCurve d1 = polar_to_sampled(p);
  CHECK(gap_profile(d1, upper()).kind == Parameterization::Polar);
  CHECK(sgn_word(d1, upper()).str() == "-+-+-");
}

TEST_CASE("initial curves against the upper equilibrium") {
  CHECK(intersection_count(initial(0.1), upper()) == 2);
  CHECK(sgn_word(initial(0.1), upper()).str() == "-");
  CHECK(sgn_word(initial(1.0), upper()).str() == "-");
  CHECK(sgn_word(initial(3.3), upper()).str() == "-+-");
  CHECK(sgn_word(initial(5.0), upper()).str() == "-+-");
  CHECK(intersection_count(initial(5.0), upper()) == 4);
  CHECK(sgn_word(upper(), initial(5.0)).str() == "+-+");
}

TEST_CASE("no interior crossing and coincident arcs") {
  const SampledCurve shifted = lower_plus([](double) { return 2e-6; });
  CHECK(intersection_count(shifted, lower()) == 2);
  CHECK(sgn_word(shifted, lower()).str() == "+");

  CHECK_THROWS_AS(intersection_count(lower(), lower()), Unresolvable);
  // Coincide on the middle 40%, separate elsewhere.
  const SampledCurve partial = lower_plus([](double x) {
    const double r = std::abs(x) - 0.1;
    return r > 0.0 ? 0.01 * r : 0.0;
  });
  CHECK_THROWS_AS(sgn_word(partial, lower()), Unresolvable);
}

TEST_CASE("semi-order") {
  CHECK(semi_order(upper(), lower()) == Order::Above);
  CHECK(semi_order(lower(), upper()) == Order::Below);
  CHECK(semi_order(lower(), lower()) == Order::Touching);
  CHECK(semi_order(initial(5.0), upper()) == Order::Crossing);
  CHECK(semi_order(initial(0.5), initial(0.1)) == Order::Above);
  // Same endpoint tangents: tangential contact at P and Q.
  const SampledCurve tangent = lower_plus([](double x) { return 1e-3 * std::pow(std::cos(kPi * x), 2); });
  CHECK(semi_order(tangent, lower()) == Order::Touching);
}

TEST_CASE("graph Lyapunov functional") {
  const GraphProfile zero(kP, std::vector<double>(201, 0.0));
  const LyapunovValue z = lyapunov_graph(zero);
  CHECK(z.J == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(z.monitor == doctest::Approx(1.0).epsilon(1e-15));

  const LyapunovValue cap = lyapunov_graph(gamma_lower(kP));
  CHECK(std::abs(cap.J - kCapLength) < 1e-4);
  CHECK(std::abs(cap.monitor - kCapEnergy) < 1e-4);
}

TEST_CASE("energy") {
  const SampledCurve seg = graph_to_sampled(GraphProfile(kP, std::vector<double>(201, 0.0)));
  CHECK(energy(seg, 1.0).E == doctest::Approx(1.0).epsilon(1e-15));

  const EnergyRecord cap = energy(lower(), 1.0);
  CHECK(std::abs(cap.L - kCapLength) < 1e-5);
  CHECK(std::abs(cap.E - kCapEnergy) < 1e-5);

  const double e_major = energy(upper(), 1.0).E;
  const double e_init = energy(initial(3.3), 1.0).E;
  CHECK(std::abs(e_major - kMajorEnergy) < 5e-4);
  CHECK(std::abs(e_init - kInitialEnergy33) < 1e-4);
  CHECK(e_major < e_init);

  CHECK_THROWS_AS(energy(initial(-0.5), 1.0), DomainError);
}

TEST_CASE("dissipation estimate") {
  CHECK(dissipation_estimate(lower(), 1.0) < 1e-5);
  CHECK(dissipation_estimate(upper(), 1.0) < 1e-5);
  const SampledCurve seg = graph_to_sampled(GraphProfile(kP, std::vector<double>(201, 0.0)));
  CHECK(dissipation_estimate(seg, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  for (double s : {-1.0, 0.3, 2.0, 5.0}) {
    CHECK(dissipation_estimate(initial(s), 1.0) >= 0.0);
  }
}

TEST_CASE("endpoint curvature") {
  const SampledCurve seg = graph_to_sampled(GraphProfile(kP, std::vector<double>(201, 0.0)));
  const auto [sp, sq] = endpoint_curvature_deviation(seg, 1.0);
  CHECK(sp == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sq == doctest::Approx(1.0).epsilon(1e-12));

  for (const SampledCurve& c : {lower(), upper()}) {
    const auto [dp, dq] = endpoint_curvature_deviation(c, 1.0);
    CHECK(dp < 0.05);
    CHECK(dq < 0.05);
  }
  // The parabola sigma (1 - x^2/a^2) has endpoint curvature
  // (2 sigma / a^2) / (1 + (2 sigma / a)^2)^(3/2); the cosine profile has none.
  const double s = 0.3;
  const double slope = 2.0 * s / 0.5;
  const double exact = 2.0 * s / 0.25 / std::pow(1.0 + slope * slope, 1.5);
  const SampledCurve para =
      graph_to_sampled(initial_curve(InitialFamily{kP, PhiShape::Parabola, s}));
  const auto [kp, kq] = endpoint_curvature(para);
  CHECK(kp == doctest::Approx(exact).epsilon(1e-4));
  CHECK(kq == doctest::Approx(exact).epsilon(1e-4));
  CHECK(std::abs(endpoint_curvature(initial(s)).first) < 1e-4);
}
