#include "extremalflow/geometry.hpp"

#include "extremalflow/errors.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

namespace extremalflow {

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os << what << " (got " << std::setprecision(17) << value << ")";
  return os.str();
}

// Proper crossing or touching of closed segments p1p2 and q1q2.
bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_segment = [](Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
  };
  return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
         (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

// Derivative at the first of three nodes with spacings h1, h2 (second order).
double one_sided_derivative(double f0, double f1, double f2, double h1, double h2) {
  return -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f0 + (h1 + h2) / (h1 * h2) * f1 -
         h1 / (h2 * (h1 + h2)) * f2;
}

Vec2 normalized(Vec2 v) {
  const double n = norm(v);
  return {v.x / n, v.y / n};
}

} // namespace

void ProblemParams::validate() const {
  if (!(A > 0.0) || !std::isfinite(A)) {
    throw InvalidArgument(describe("driving force A must be positive", A));
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidArgument(describe("half-span a must be positive", a));
  }
  if (a * A > 1.0) {
    throw InvalidArgument(describe("half-span a must satisfy a <= 1/A; the a > 1/A regime is not supported",
                                   a));
  }
  if (grid_n < 17 || grid_n % 2 == 0) {
    throw InvalidArgument(describe("grid_n must be odd and at least 17", grid_n));
  }
}

double ProblemParams::center_offset() const {
  const double r = radius();
  return std::sqrt(std::max(0.0, r * r - a * a));
}

GraphProfile::GraphProfile(ProblemParams p, std::vector<double> heights)
    : params(p), u(std::move(heights)) {
  validate();
}

void GraphProfile::validate() const {
  params.validate();
  if (u.size() != static_cast<std::size_t>(params.grid_n)) {
    throw InvalidArgument("graph profile size does not match grid_n");
  }
  if (u.front() != 0.0 || u.back() != 0.0) {
    throw InvalidArgument("graph profile must be pinned: u(-a) = u(a) = 0");
  }
  for (double v : u) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("graph profile has a non-finite height");
    }
  }
}

PolarProfile::PolarProfile(ProblemParams p, std::vector<double> radii)
    : params(p), rho(std::move(radii)) {
  validate();
}

void PolarProfile::validate() const {
  params.validate();
  if (rho.size() != static_cast<std::size_t>(params.grid_n)) {
    throw InvalidArgument("polar profile size does not match grid_n");
  }
  if (rho.front() != params.a || rho.back() != params.a) {
    throw InvalidArgument("polar profile must be pinned: rho(0) = rho(pi) = a");
  }
  for (double r : rho) {
    if (!std::isfinite(r) || !(r > 0.0)) {
      throw InvalidArgument(describe("polar profile radii must be positive and finite", r));
    }
  }
}

void SampledCurve::validate(double a) const {
  if (points.size() < 2) {
    throw InvalidArgument("sampled curve needs at least two points");
  }
  if (points.front() != Vec2{-a, 0.0} || points.back() != Vec2{a, 0.0}) {
    throw InvalidArgument("sampled curve must start at (-a,0) and end at (a,0)");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] == points[i - 1]) {
      throw InvalidArgument("sampled curve has repeated consecutive points");
    }
  }
}

bool SampledCurve::self_intersects() const {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      if (segments_intersect(points[i], points[i + 1], points[j], points[j + 1])) {
        return true;
      }
    }
  }
  return false;
}

SampledCurve graph_to_sampled(const GraphProfile& g) {
  SampledCurve c;
  c.points.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    c.points.push_back({g.x(i), g.u[i]});
  }
  c.points.front() = g.params.P();
  c.points.back() = g.params.Q();
  return c;
}

SampledCurve polar_to_sampled(const PolarProfile& p) {
  // theta = 0 is Q; walk the nodes backwards so the curve runs P -> Q.
  SampledCurve c;
  const std::size_t n = p.size();
  c.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = n - 1 - k;
    const double th = p.theta(j);
    c.points.push_back({p.rho[j] * std::cos(th), p.rho[j] * std::sin(th)});
  }
  c.points.front() = p.params.P();
  c.points.back() = p.params.Q();
  return c;
}

std::vector<double> curvature_graph(const GraphProfile& g) {
  const std::size_t n = g.size();
  const double dx = g.dx();
  std::vector<double> kappa;
  kappa.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ux = (g.u[i + 1] - g.u[i - 1]) / (2.0 * dx);
    const double uxx = ((g.u[i + 1] + g.u[i - 1]) - 2.0 * g.u[i]) / (dx * dx);
    const double w = 1.0 + ux * ux;
    kappa.push_back(-uxx / (w * std::sqrt(w)));
  }
  return kappa;
}

std::vector<double> curvature_polar(const PolarProfile& p) {
  const std::size_t n = p.size();
  const double h = p.dtheta();
  std::vector<double> kappa;
  kappa.reserve(n - 2);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double r = p.rho[j];
    const double rt = (p.rho[j + 1] - p.rho[j - 1]) / (2.0 * h);
    const double rtt = ((p.rho[j + 1] + p.rho[j - 1]) - 2.0 * r) / (h * h);
    const double w = r * r + rt * rt;
    kappa.push_back((r * r + 2.0 * rt * rt - r * rtt) / (w * std::sqrt(w)));
  }
  return kappa;
}

std::vector<double> curvature_sampled(const SampledCurve& c) {
  const auto& pts = c.points;
  std::vector<double> kappa;
  if (pts.size() < 3) {
    return kappa;
  }
  kappa.reserve(pts.size() - 2);
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Vec2 e1 = pts[i] - pts[i - 1];
    const Vec2 e2 = pts[i + 1] - pts[i];
    const Vec2 e3 = pts[i + 1] - pts[i - 1];
    // Clockwise turning (cap traversed left to right) is positive curvature.
    kappa.push_back(-2.0 * cross(e1, e2) / (norm(e1) * norm(e2) * norm(e3)));
  }
  return kappa;
}

double length(const SampledCurve& c) {
  double total = 0.0;
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    total += norm(c.points[i] - c.points[i - 1]);
  }
  return total;
}

double enclosed_area(const SampledCurve& c) {
  for (const Vec2& p : c.points) {
    if (p.y < -1e-9) {
      throw DomainError("enclosed area is defined only for curves in {y >= 0}");
    }
  }
  // Polygon closed by the baseline segment Q -> P, which adds nothing.
  double area = 0.0;
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    const Vec2 p = c.points[i - 1];
    const Vec2 q = c.points[i];
    area += 0.5 * (q.x - p.x) * (p.y + q.y);
  }
  return area;
}

std::vector<double> arc_parameter(const SampledCurve& c) {
  std::vector<double> s(c.points.size(), 0.0);
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    s[i] = s[i - 1] + norm(c.points[i] - c.points[i - 1]);
  }
  return s;
}

EndpointTangents endpoint_tangents(const SampledCurve& c) {
  const auto& p = c.points;
  if (p.size() < 3) {
    throw InvalidArgument("endpoint tangents need at least three points");
  }
  const std::size_t n = p.size();
  const double h1 = norm(p[1] - p[0]);
  const double h2 = norm(p[2] - p[1]);
  const Vec2 dP{one_sided_derivative(p[0].x, p[1].x, p[2].x, h1, h2),
                one_sided_derivative(p[0].y, p[1].y, p[2].y, h1, h2)};
  const double k1 = norm(p[n - 1] - p[n - 2]);
  const double k2 = norm(p[n - 2] - p[n - 3]);
  // Differentiating backwards from Q gives -dF/ds.
  const Vec2 dQ{-one_sided_derivative(p[n - 1].x, p[n - 2].x, p[n - 3].x, k1, k2),
                -one_sided_derivative(p[n - 1].y, p[n - 2].y, p[n - 3].y, k1, k2)};
  return {normalized(dP), normalized(dQ)};
}

void write_csv(std::ostream& os, const SampledCurve& c) {
  const auto old = os.precision(17);
  os << "x,y\n";
  for (const Vec2& p : c.points) {
    os << p.x << ',' << p.y << '\n';
  }
  os.precision(old);
}

} // namespace extremalflow
