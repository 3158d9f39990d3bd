#pragma once

// Closed-form curves: the two equilibria, the Grim reaper sub-solution, the
// expanding-circle ODE with its barrier circles, and the initial family
// y = sigma * phi(x).

#include "extremalflow/geometry.hpp"

#include <string_view>
#include <vector>

namespace extremalflow {

// ---------------------------------------------------------------------------
// Equilibria. Both are arcs of radius 1/A; the lower cap is centred at
// (0, -c), the upper major arc at (0, c), with c = sqrt(1/A^2 - a^2).

double gamma_lower_height(const ProblemParams& p, double x);
double gamma_lower_radius(const ProblemParams& p, double theta);
double gamma_upper_radius(const ProblemParams& p, double theta);

GraphProfile gamma_lower(const ProblemParams& p);
/// The lower cap in the polar chart.
PolarProfile gamma_lower_polar(const ProblemParams& p);
PolarProfile gamma_upper(const ProblemParams& p);

enum class Equilibrium { Lower, Upper };

/// Equilibrium sampled at the polar angles of `c`'s vertices (c must lie in
/// {y > 0} between its endpoints), so gap profiles need no interpolation.
SampledCurve equilibrium_at_angles(const ProblemParams& p, Equilibrium which, const SampledCurve& c);

/// Symmetric Hausdorff distance between a polyline and the exact equilibrium arc.
double distance_to_equilibrium(const SampledCurve& c, const ProblemParams& p, Equilibrium which);

// ---------------------------------------------------------------------------
// Grim reaper G(x,t) = C - t/b + b ln cos(x/b), |x| < b pi / 2.

double grim_reaper_value(double b, double C, double x, double t);
/// Positive root x(t) of G(x,t) = 0, defined for 0 <= t < bC.
double grim_reaper_kink(double b, double C, double t);
/// max(G, 0) on |x| < b pi/2 and zero elsewhere on [-a, a], with the kinks
/// inserted as vertices. Requires b < 2a/pi.
SampledCurve grim_reaper_subsolution(const ProblemParams& p, double b, double C, double t);

// ---------------------------------------------------------------------------
// Expanding circles R' = A - 1/R.

/// Adaptive Runge-Kutta integration of R' = A - 1/R from R(0) = R0 > 1/A.
double circle_radius(double R0, double A, double t);
/// Implicit closed form: time at which the circle reaches radius R.
double circle_time_to_radius(double R0, double A, double R);

struct BarrierCircle {
  Vec2 center;
  double radius = 0.0;
};

struct BarrierGeometry {
  BarrierCircle B1;
  BarrierCircle B2;
  double K = 0.0;      // height where B2 meets the positive y-axis
  double t_star = 0.0; // R(t_star) = radius of B2
};

BarrierGeometry barrier_geometry(const ProblemParams& p, double R);

// ---------------------------------------------------------------------------
// Initial family.

enum class PhiShape { Cosine, Parabola };

PhiShape parse_phi(std::string_view name);
std::string_view to_string(PhiShape s);

struct InitialFamily {
  ProblemParams params;
  PhiShape phi = PhiShape::Cosine;
  double sigma = 0.0;

  double phi_value(double x) const;
  InitialFamily with_sigma(double s) const {
    InitialFamily f = *this;
    f.sigma = s;
    return f;
  }
};

/// Nodes of sigma*phi. Throws InvalidArgument when the curve meets the upper
/// equilibrium more than four times (endpoints included).
GraphProfile initial_curve(const InitialFamily& fam);

/// Maximum intersection count with the upper equilibrium over the given sigmas.
int max_intersections_with_upper(const InitialFamily& fam, const std::vector<double>& sigmas);

/// A sigma whose initial curve lies strictly above the capped Grim reaper at t=0.
struct GrimSetup {
  double b = 0.0;
  double C = 0.0;
  double R = 0.0;
  BarrierGeometry barrier;
  double sigma = 0.0;
};

/// Width b = 0.9 * 2a/pi, offset C = K + t_star/b + 1 for barrier radius R,
/// and sigma = (1 + margin) * sup max(G(x,0), 0) / phi(x).
GrimSetup grim_reaper_setup(const InitialFamily& fam, double R, double margin = 0.01);

} // namespace extremalflow
