#include "extremalflow/analytic.hpp"

#include "extremalflow/analysis.hpp"
#include "extremalflow/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

namespace extremalflow {

namespace {

constexpr double kPi = std::numbers::pi;

struct Arc {
  Vec2 center;
  double radius;
  double start; // angular range [start, end] about the centre, end > start
  double end;
};

Arc equilibrium_arc(const ProblemParams& p, Equilibrium which) {
  const double c = p.center_offset();
  const double phi0 = std::atan2(c, p.a);
  if (which == Equilibrium::Lower) {
    return {{0.0, -c}, p.radius(), phi0, kPi - phi0};
  }
  return {{0.0, c}, p.radius(), -phi0, kPi + phi0};
}

Vec2 arc_point(const Arc& arc, double angle) {
  return {arc.center.x + arc.radius * std::cos(angle), arc.center.y + arc.radius * std::sin(angle)};
}

double distance_to_arc(const Arc& arc, Vec2 q) {
  const Vec2 d = q - arc.center;
  double ang = std::atan2(d.y, d.x);
  // Map into [start, start + 2 pi).
  while (ang < arc.start) {
    ang += 2.0 * kPi;
  }
  while (ang >= arc.start + 2.0 * kPi) {
    ang -= 2.0 * kPi;
  }
  if (ang <= arc.end) {
    return std::abs(norm(d) - arc.radius);
  }
  return std::min(norm(q - arc_point(arc, arc.start)), norm(q - arc_point(arc, arc.end)));
}

double distance_to_polyline(Vec2 q, const SampledCurve& c) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < c.size(); ++i) {
    const Vec2 a = c.points[i - 1];
    const Vec2 ab = c.points[i] - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(q - a, ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, norm(q - (a + t * ab)));
  }
  return best;
}

std::vector<double> polar_nodes(const ProblemParams& p, double (*radius)(const ProblemParams&, double)) {
  p.validate();
  const std::size_t n = static_cast<std::size_t>(p.grid_n);
  const double h = kPi / (p.grid_n - 1);
  std::vector<double> rho(n);
  for (std::size_t j = 0; j < n; ++j) {
    rho[j] = radius(p, static_cast<double>(j) * h);
  }
  rho.front() = p.a;
  rho.back() = p.a;
  return rho;
}

} // namespace

double gamma_lower_height(const ProblemParams& p, double x) {
  const double r = p.radius();
  return std::sqrt(std::max(0.0, r * r - x * x)) - p.center_offset();
}

double gamma_lower_radius(const ProblemParams& p, double theta) {
  const double c = p.center_offset();
  const double r = p.radius();
  const double cc = c * std::cos(theta);
  return -c * std::sin(theta) + std::sqrt(std::max(0.0, r * r - cc * cc));
}

double gamma_upper_radius(const ProblemParams& p, double theta) {
  const double c = p.center_offset();
  const double r = p.radius();
  const double cc = c * std::cos(theta);
  return c * std::sin(theta) + std::sqrt(std::max(0.0, r * r - cc * cc));
}

GraphProfile gamma_lower(const ProblemParams& p) {
  p.validate();
  const std::size_t n = static_cast<std::size_t>(p.grid_n);
  const double dx = 2.0 * p.a / (p.grid_n - 1);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = gamma_lower_height(p, -p.a + static_cast<double>(i) * dx);
  }
  u.front() = 0.0;
  u.back() = 0.0;
  return GraphProfile(p, std::move(u));
}

PolarProfile gamma_lower_polar(const ProblemParams& p) {
  return PolarProfile(p, polar_nodes(p, &gamma_lower_radius));
}

PolarProfile gamma_upper(const ProblemParams& p) {
  return PolarProfile(p, polar_nodes(p, &gamma_upper_radius));
}

SampledCurve equilibrium_at_angles(const ProblemParams& p, Equilibrium which, const SampledCurve& c) {
  SampledCurve out;
  out.points.reserve(c.size());
  out.points.push_back(p.P());
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    const double th = std::atan2(c.points[i].y, c.points[i].x);
    const double r = which == Equilibrium::Lower ? gamma_lower_radius(p, th) : gamma_upper_radius(p, th);
    out.points.push_back({r * std::cos(th), r * std::sin(th)});
  }
  out.points.push_back(p.Q());
  return out;
}

double distance_to_equilibrium(const SampledCurve& c, const ProblemParams& p, Equilibrium which) {
  const Arc arc = equilibrium_arc(p, which);
  double d = 0.0;
  for (const Vec2& q : c.points) {
    d = std::max(d, distance_to_arc(arc, q));
  }
  const std::size_t m = 2 * c.size();
  for (std::size_t k = 0; k <= m; ++k) {
    const double ang = arc.start + (arc.end - arc.start) * static_cast<double>(k) / static_cast<double>(m);
    d = std::max(d, distance_to_polyline(arc_point(arc, ang), c));
  }
  return d;
}

double grim_reaper_value(double b, double C, double x, double t) {
  if (!(b > 0.0) || !(std::abs(x) < b * kPi / 2.0)) {
    throw DomainError("Grim reaper is defined only for |x| < b*pi/2");
  }
  return C - t / b + b * std::log(std::cos(x / b));
}

double grim_reaper_kink(double b, double C, double t) {
  if (!(t >= 0.0) || !(t < b * C)) {
    throw DomainError("Grim reaper kink exists only for 0 <= t < b*C");
  }
  return b * std::acos(std::exp((t / b - C) / b));
}

SampledCurve grim_reaper_subsolution(const ProblemParams& p, double b, double C, double t) {
  p.validate();
  if (!(b > 0.0) || !(b < 2.0 * p.a / kPi)) {
    throw InvalidArgument("Grim reaper sub-solution requires 0 < b < 2a/pi");
  }
  const std::size_t n = static_cast<std::size_t>(p.grid_n);
  const double dx = 2.0 * p.a / (p.grid_n - 1);
  std::vector<double> xs;
  xs.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(-p.a + static_cast<double>(i) * dx);
  }
  if (t >= 0.0 && t < b * C) {
    const double k = grim_reaper_kink(b, C, t);
    for (double x : {-k, k}) {
      if (std::none_of(xs.begin(), xs.end(), [&](double v) { return std::abs(v - x) < 1e-14; })) {
        xs.push_back(x);
      }
    }
    std::sort(xs.begin(), xs.end());
  }
  SampledCurve c;
  c.points.reserve(xs.size());
  for (double x : xs) {
    double y = 0.0;
    if (std::abs(x) < b * kPi / 2.0) {
      y = std::max(0.0, grim_reaper_value(b, C, x, t));
    }
    c.points.push_back({x, y});
  }
  c.points.front() = p.P();
  c.points.back() = p.Q();
  return c;
}

double circle_radius(double R0, double A, double t) {
  if (!(A > 0.0) || !(R0 * A > 1.0)) {
    throw InvalidArgument("circle_radius requires R0 > 1/A");
  }
  if (!(t >= 0.0)) {
    throw InvalidArgument("circle_radius requires t >= 0");
  }
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 1>;
  State R{R0};
  if (t == 0.0) {
    return R0;
  }
  auto rhs = [A](const State& r, State& drdt, double) { drdt[0] = A - 1.0 / r[0]; };
  auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_adaptive(stepper, rhs, R, 0.0, t, std::min(1e-3, t));
  return R[0];
}

double circle_time_to_radius(double R0, double A, double R) {
  if (!(R0 * A > 1.0) || !(R >= R0)) {
    throw InvalidArgument("circle_time_to_radius requires R >= R0 > 1/A");
  }
  return (R - R0) / A + std::log((A * R - 1.0) / (A * R0 - 1.0)) / (A * A);
}

BarrierGeometry barrier_geometry(const ProblemParams& p, double R) {
  p.validate();
  if (!(R * p.A > 1.0)) {
    throw InvalidArgument("barrier circles require R > 1/A");
  }
  const double scale = 1.0 + R / p.a;
  const Vec2 center{R, scale * p.center_offset()};
  BarrierGeometry g;
  g.B1 = {center, R};
  g.B2 = {center, scale / p.A};
  g.K = center.y + std::sqrt(g.B2.radius * g.B2.radius - R * R);
  g.t_star = circle_time_to_radius(R, p.A, g.B2.radius);
  return g;
}

PhiShape parse_phi(std::string_view name) {
  if (name == "cos" || name == "cosine") {
    return PhiShape::Cosine;
  }
  if (name == "parabola") {
    return PhiShape::Parabola;
  }
  throw InvalidArgument("unknown phi shape '" + std::string(name) + "' (expected cos or parabola)");
}

std::string_view to_string(PhiShape s) {
  return s == PhiShape::Cosine ? "cos" : "parabola";
}

double InitialFamily::phi_value(double x) const {
  if (std::abs(x) >= params.a) {
    return 0.0;
  }
  switch (phi) {
  case PhiShape::Cosine:
    return std::cos(kPi * x / (2.0 * params.a));
  case PhiShape::Parabola:
    return 1.0 - (x / params.a) * (x / params.a);
  }
  return 0.0;
}

namespace {

int intersections_with_upper(const GraphProfile& g) {
  const SampledCurve c = graph_to_sampled(g);
  const SampledCurve upper =
      is_polar_chartable(c) ? equilibrium_at_angles(g.params, Equilibrium::Upper, c)
                            : polar_to_sampled(gamma_upper(g.params));
  return intersection_count(c, upper, {1e-10 * g.params.radius(), 0.1});
}

GraphProfile family_nodes(const InitialFamily& fam) {
  fam.params.validate();
  if (!std::isfinite(fam.sigma)) {
    throw InvalidArgument("sigma must be finite");
  }
  const std::size_t n = static_cast<std::size_t>(fam.params.grid_n);
  const double dx = 2.0 * fam.params.a / (fam.params.grid_n - 1);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -fam.params.a + static_cast<double>(i) * dx;
    // Evaluate at |x| so mirrored nodes agree bit for bit.
    u[i] = fam.sigma * fam.phi_value(std::abs(x));
  }
  u.front() = 0.0;
  u.back() = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    u[n - 1 - i] = u[i];
  }
  return GraphProfile(fam.params, std::move(u));
}

} // namespace

GraphProfile initial_curve(const InitialFamily& fam) {
  GraphProfile g = family_nodes(fam);
  if (intersections_with_upper(g) > 4) {
    throw InvalidArgument("initial curve meets the upper equilibrium more than four times");
  }
  return g;
}

int max_intersections_with_upper(const InitialFamily& fam, const std::vector<double>& sigmas) {
  int worst = 0;
  for (double s : sigmas) {
    worst = std::max(worst, intersections_with_upper(family_nodes(fam.with_sigma(s))));
  }
  return worst;
}

GrimSetup grim_reaper_setup(const InitialFamily& fam, double R, double margin) {
  const ProblemParams& p = fam.params;
  GrimSetup s;
  s.R = R;
  s.b = 0.9 * 2.0 * p.a / kPi;
  s.barrier = barrier_geometry(p, R);
  s.C = s.barrier.K + s.barrier.t_star / s.b + 1.0;

  // sup over 0 <= x < kink of G(x,0)/phi(x); the ratio is even in x.
  const double kink = grim_reaper_kink(s.b, s.C, 0.0);
  auto ratio = [&](double x) { return std::max(0.0, grim_reaper_value(s.b, s.C, x, 0.0)) / fam.phi_value(x); };
  constexpr int samples = 20000;
  double best = 0.0;
  int best_k = 0;
  for (int k = 0; k < samples; ++k) {
    const double x = kink * k / samples;
    const double r = ratio(x);
    if (r > best) {
      best = r;
      best_k = k;
    }
  }
  const double lo = kink * std::max(0, best_k - 1) / samples;
  const double hi = kink * std::min(samples - 1, best_k + 1) / samples;
  const auto refined =
      boost::math::tools::brent_find_minima([&](double x) { return -ratio(x); }, lo, hi, 52);
  best = std::max(best, -refined.second);
  s.sigma = (1.0 + margin) * best;
  return s;
}

} // namespace extremalflow
