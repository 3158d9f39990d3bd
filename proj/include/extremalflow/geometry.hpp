#pragma once

// Curve representations for the pinned problem P=(-a,0), Q=(a,0):
// graph chart y=u(x), polar chart (rho(theta) cos theta, rho(theta) sin theta),
// and the chart-free polyline used by every diagnostic.

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <vector>

namespace extremalflow {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 p, Vec2 q) { return {p.x + q.x, p.y + q.y}; }
  friend Vec2 operator-(Vec2 p, Vec2 q) { return {p.x - q.x, p.y - q.y}; }
  friend Vec2 operator*(double s, Vec2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 p, Vec2 q) { return p.x * q.x + p.y * q.y; }
inline double cross(Vec2 p, Vec2 q) { return p.x * q.y - p.y * q.x; }
inline double norm(Vec2 p) { return std::hypot(p.x, p.y); }

/// Driving force A, endpoint half-span a, and the node count of each chart.
struct ProblemParams {
  double A = 1.0;
  double a = 0.5;
  int grid_n = 201;

  /// Throws InvalidArgument unless A > 0, 0 < a <= 1/A, grid_n >= 17 and odd.
  void validate() const;

  double radius() const { return 1.0 / A; }
  /// Height of the equilibrium circle centres, sqrt(1/A^2 - a^2).
  double center_offset() const;
  bool degenerate() const { return center_offset() == 0.0; }
  Vec2 P() const { return {-a, 0.0}; }
  Vec2 Q() const { return {a, 0.0}; }
};

/// Heights u(x_i) at uniform nodes x_i = -a + i*dx, i = 0..grid_n-1.
struct GraphProfile {
  ProblemParams params;
  std::vector<double> u;

  GraphProfile() = default;
  GraphProfile(ProblemParams p, std::vector<double> heights);

  double dx() const { return 2.0 * params.a / (params.grid_n - 1); }
  double x(std::size_t i) const { return -params.a + static_cast<double>(i) * dx(); }
  std::size_t size() const { return u.size(); }
  void validate() const;
};

/// Radii rho(theta_j) at uniform nodes theta_j = j*dtheta over [0, pi].
struct PolarProfile {
  ProblemParams params;
  std::vector<double> rho;

  PolarProfile() = default;
  PolarProfile(ProblemParams p, std::vector<double> radii);

  double dtheta() const { return std::numbers::pi / (params.grid_n - 1); }
  double theta(std::size_t j) const { return static_cast<double>(j) * dtheta(); }
  std::size_t size() const { return rho.size(); }
  void validate() const;
};

/// Ordered polyline from P to Q.
struct SampledCurve {
  std::vector<Vec2> points;

  std::size_t size() const { return points.size(); }
  Vec2 front() const { return points.front(); }
  Vec2 back() const { return points.back(); }

  /// Checks pinning at (-a,0), (a,0) and that consecutive points are distinct.
  void validate(double a) const;
  bool self_intersects() const;
};

/// Unit tangents dF/ds at s=0 and s=L, both oriented P -> Q.
struct EndpointTangents {
  Vec2 at_P;
  Vec2 at_Q;
};

SampledCurve graph_to_sampled(const GraphProfile& g);
SampledCurve polar_to_sampled(const PolarProfile& p);

// Curvature sign: concave-down graphs and circles seen from inside are positive,
// so both equilibria have kappa = +A. Results cover interior nodes only.
std::vector<double> curvature_graph(const GraphProfile& g);
std::vector<double> curvature_polar(const PolarProfile& p);
/// Three-point (Menger) curvature at interior vertices of a polyline.
std::vector<double> curvature_sampled(const SampledCurve& c);

double length(const SampledCurve& c);
/// Area between the curve and the baseline y=0. Throws DomainError if the
/// curve dips below y = -1e-9.
double enclosed_area(const SampledCurve& c);
EndpointTangents endpoint_tangents(const SampledCurve& c);

/// Cumulative chord length, starting at 0.
std::vector<double> arc_parameter(const SampledCurve& c);

/// Two-column CSV with header "x,y", 17 significant digits.
void write_csv(std::ostream& os, const SampledCurve& c);

} // namespace extremalflow
