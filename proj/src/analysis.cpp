#include "extremalflow/analysis.hpp"

#include "extremalflow/errors.hpp"
#include "extremalflow/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace extremalflow {

namespace {

constexpr double kPi = std::numbers::pi;

struct ChartSamples {
  std::vector<double> t; // strictly increasing abscissa
  std::vector<double> v;
};

// (theta, rho) ascending in theta, i.e. ordered Q -> P.
ChartSamples polar_samples(const SampledCurve& c) {
  const std::size_t n = c.size();
  ChartSamples s;
  s.t.resize(n);
  s.v.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 p = c.points[n - 1 - k];
    s.t[k] = std::atan2(p.y, p.x);
    s.v[k] = norm(p);
  }
  s.t.front() = 0.0;
  s.t.back() = kPi;
  return s;
}

ChartSamples graph_samples(const SampledCurve& c) {
  ChartSamples s;
  s.t.reserve(c.size());
  s.v.reserve(c.size());
  for (const Vec2& p : c.points) {
    s.t.push_back(p.x);
    s.v.push_back(p.y);
  }
  return s;
}

std::vector<double> merged_abscissae(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> m;
  m.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
  const double span = m.back() - m.front();
  std::vector<double> out;
  out.reserve(m.size());
  for (double v : m) {
    if (out.empty() || v - out.back() > 1e-12 * span) {
      out.push_back(v);
    }
  }
  // Keep the exact shared endpoints.
  out.back() = m.back();
  return out;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

// Even-odd point-in-polygon test.
bool inside_polygon(Vec2 p, const std::vector<Vec2>& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xc) {
        inside = !inside;
      }
    }
  }
  return inside;
}

GapProfile signed_distance_gap(const SampledCurve& c1, const SampledCurve& c2) {
  // The region below c2: c2 closed by horizontal rays from the endpoints and a
  // far box underneath. Points of c1 inside it are below c2.
  double xmin = 0.0, xmax = 0.0, ymin = 0.0;
  for (const auto* c : {&c1, &c2}) {
    for (const Vec2& p : c->points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
    }
  }
  const double pad = 1.0 + (xmax - xmin);
  std::vector<Vec2> below = c2.points;
  below.push_back({xmax + pad, c2.back().y});
  below.push_back({xmax + pad, ymin - pad});
  below.push_back({xmin - pad, ymin - pad});
  below.push_back({xmin - pad, c2.front().y});

  GapProfile g;
  g.kind = Parameterization::SignedDistance;
  g.param = arc_parameter(c1);
  g.gap.assign(c1.size(), 0.0);
  for (std::size_t i = 1; i + 1 < c1.size(); ++i) {
    const Vec2 p = c1.points[i];
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < c2.size(); ++j) {
      d = std::min(d, point_segment_distance(p, c2.points[j - 1], c2.points[j]));
    }
    g.gap[i] = inside_polygon(p, below) ? -d : d;
  }
  return g;
}

GapProfile chart_gap(const ChartSamples& s1, const ChartSamples& s2, Parameterization kind) {
  const MonotoneCubic f1(s1.t, s1.v);
  const MonotoneCubic f2(s2.t, s2.v);
  const std::vector<double> m = merged_abscissae(s1.t, s2.t);
  GapProfile g;
  g.kind = kind;
  g.param.reserve(m.size());
  g.gap.reserve(m.size());
  for (double t : m) {
    g.param.push_back(t);
    g.gap.push_back(f1(t) - f2(t));
  }
  g.gap.front() = 0.0;
  g.gap.back() = 0.0;
  return g;
}

} // namespace

SgnWord SgnWord::parse(std::string_view text) {
  std::vector<Sign> letters;
  for (char ch : text) {
    if (ch == '+') {
      letters.push_back(Sign::Plus);
    } else if (ch == '-') {
      letters.push_back(Sign::Minus);
    } else if (ch != ' ' && ch != '[' && ch != ']') {
      throw InvalidArgument("sign words may only contain '+' and '-'");
    }
  }
  return SgnWord(std::move(letters));
}

bool SgnWord::contains(Sign s) const {
  return std::find(letters_.begin(), letters_.end(), s) != letters_.end();
}

SgnWord SgnWord::flipped() const {
  std::vector<Sign> out;
  out.reserve(letters_.size());
  for (Sign s : letters_) {
    out.push_back(s == Sign::Plus ? Sign::Minus : Sign::Plus);
  }
  return SgnWord(std::move(out));
}

std::string SgnWord::str() const {
  std::string s;
  for (Sign l : letters_) {
    s.push_back(static_cast<char>(l));
  }
  return s;
}

bool subword(const SgnWord& word, const SgnWord& sub) {
  auto it = word.letters().begin();
  const auto end = word.letters().end();
  for (Sign s : sub.letters()) {
    it = std::find(it, end, s);
    if (it == end) {
      return false;
    }
    ++it;
  }
  return true;
}

bool is_polar_chartable(const SampledCurve& c) {
  if (c.size() < 4) {
    return false;
  }
  double prev = kPi;
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    const Vec2 p = c.points[i];
    if (!(p.y > 0.0)) {
      return false;
    }
    const double th = std::atan2(p.y, p.x);
    if (!(th < prev)) {
      return false;
    }
    prev = th;
  }
  return prev > 0.0;
}

bool is_graph_chartable(const SampledCurve& c) {
  if (c.size() < 4) {
    return false;
  }
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (!(c.points[i].x > c.points[i - 1].x)) {
      return false;
    }
  }
  return true;
}

GapProfile gap_profile(const SampledCurve& c1, const SampledCurve& c2) {
  if (is_polar_chartable(c1) && is_polar_chartable(c2)) {
    GapProfile g = chart_gap(polar_samples(c1), polar_samples(c2), Parameterization::Polar);
    // Report from P to Q with parameter pi - theta.
    std::reverse(g.param.begin(), g.param.end());
    std::reverse(g.gap.begin(), g.gap.end());
    for (double& t : g.param) {
      t = kPi - t;
    }
    g.param.front() = 0.0;
    return g;
  }
  if (is_graph_chartable(c1) && is_graph_chartable(c2)) {
    return chart_gap(graph_samples(c1), graph_samples(c2), Parameterization::Graph);
  }
  return signed_distance_gap(c1, c2);
}

SgnWord word_from_gap(const GapProfile& g, IntersectionOptions opt) {
  const std::size_t n = g.gap.size();
  if (n < 3) {
    throw Unresolvable("gap profile has no interior samples");
  }
  const double span = g.param.back() - g.param.front();
  const double max_contact = opt.coincide_fraction * span;

  // Runs of interior samples with state +1 / -1 / 0 (contact).
  struct Run {
    int state;
    std::size_t first;
    std::size_t last;
  };
  std::vector<Run> runs;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double v = g.gap[i];
    const int state = v > opt.tol ? 1 : (v < -opt.tol ? -1 : 0);
    if (!runs.empty() && runs.back().state == state) {
      runs.back().last = i;
    } else {
      runs.push_back({state, i, i});
    }
  }

  std::vector<Sign> letters;
  for (const Run& r : runs) {
    if (r.state == 0) {
      // Contact runs are measured between the neighbouring separated samples.
      const double len = g.param[r.last + 1] - g.param[r.first - 1];
      if (len > max_contact) {
        throw Unresolvable("curves coincide within tolerance over a sub-arc");
      }
      continue;
    }
    letters.push_back(r.state > 0 ? Sign::Plus : Sign::Minus);
  }
  if (letters.empty()) {
    throw Unresolvable("curves coincide within tolerance");
  }
  return SgnWord(std::move(letters));
}

SgnWord sgn_word(const SampledCurve& c1, const SampledCurve& c2, IntersectionOptions opt) {
  return word_from_gap(gap_profile(c1, c2), opt);
}

int intersection_count(const SampledCurve& c1, const SampledCurve& c2, IntersectionOptions opt) {
  return sgn_word(c1, c2, opt).z();
}

std::string_view to_string(Order o) {
  switch (o) {
  case Order::Above:
    return "Above";
  case Order::Below:
    return "Below";
  case Order::Crossing:
    return "Crossing";
  case Order::Touching:
    return "Touching";
  }
  return "?";
}

Order semi_order(const SampledCurve& c1, const SampledCurve& c2, double tol, double angle_tol) {
  SgnWord w;
  try {
    w = sgn_word(c1, c2, {tol, 0.1});
  } catch (const Unresolvable&) {
    return Order::Touching;
  }
  if (w.contains(Sign::Plus) && w.contains(Sign::Minus)) {
    return Order::Crossing;
  }
  if (w.size() > 1) {
    return Order::Touching; // interior tangential contact
  }
  const EndpointTangents t1 = endpoint_tangents(c1);
  const EndpointTangents t2 = endpoint_tangents(c2);
  auto angle = [](Vec2 u, Vec2 v) { return std::abs(std::atan2(cross(u, v), dot(u, v))); };
  if (angle(t1.at_P, t2.at_P) <= angle_tol || angle(t1.at_Q, t2.at_Q) <= angle_tol) {
    return Order::Touching;
  }
  return w.contains(Sign::Plus) ? Order::Above : Order::Below;
}

LyapunovValue lyapunov_graph(const GraphProfile& g) {
  const std::size_t n = g.size();
  const double dx = g.dx();
  // Slopes at nodes: central inside, second-order one-sided at the ends.
  std::vector<double> ux(n);
  ux[0] = (-3.0 * g.u[0] + 4.0 * g.u[1] - g.u[2]) / (2.0 * dx);
  ux[n - 1] = (3.0 * g.u[n - 1] - 4.0 * g.u[n - 2] + g.u[n - 3]) / (2.0 * dx);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    ux[i] = (g.u[i + 1] - g.u[i - 1]) / (2.0 * dx);
  }
  LyapunovValue out;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * dx : dx;
    out.J += w * std::sqrt(1.0 + ux[i] * ux[i]);
    out.integral_u += w * g.u[i];
  }
  out.monitor = out.J - g.params.A * out.integral_u;
  return out;
}

std::pair<double, double> endpoint_curvature(const SampledCurve& c) {
  if (c.size() < 5) {
    throw InvalidArgument("endpoint curvature needs at least five points");
  }
  const std::vector<double> kappa = curvature_sampled(c);
  const std::vector<double> s = arc_parameter(c);
  const std::size_t n = c.size();
  // Quadratic extrapolation from the first three interior vertices.
  auto extrapolate = [](double x0, double x1, double x2, double x3, double k1, double k2, double k3) {
    const double l1 = (x0 - x2) * (x0 - x3) / ((x1 - x2) * (x1 - x3));
    const double l2 = (x0 - x1) * (x0 - x3) / ((x2 - x1) * (x2 - x3));
    const double l3 = (x0 - x1) * (x0 - x2) / ((x3 - x1) * (x3 - x2));
    return l1 * k1 + l2 * k2 + l3 * k3;
  };
  const double kP = extrapolate(s[0], s[1], s[2], s[3], kappa[0], kappa[1], kappa[2]);
  const std::size_t m = kappa.size();
  const double kQ =
      extrapolate(s[n - 1], s[n - 2], s[n - 3], s[n - 4], kappa[m - 1], kappa[m - 2], kappa[m - 3]);
  return {kP, kQ};
}

std::pair<double, double> endpoint_curvature_deviation(const SampledCurve& c, double A) {
  const auto [kP, kQ] = endpoint_curvature(c);
  return {std::abs(kP - A), std::abs(kQ - A)};
}

double dissipation_estimate(const SampledCurve& c, double A) {
  const std::size_t n = c.size();
  if (n < 5) {
    throw InvalidArgument("dissipation estimate needs at least five points");
  }
  const std::vector<double> kappa = curvature_sampled(c);
  const auto [kP, kQ] = endpoint_curvature(c);
  std::vector<double> f(n);
  f[0] = (kP - A) * (kP - A);
  f[n - 1] = (kQ - A) * (kQ - A);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    f[i] = (kappa[i - 1] - A) * (kappa[i - 1] - A);
  }
  double total = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    total += 0.5 * (f[i] + f[i - 1]) * norm(c.points[i] - c.points[i - 1]);
  }
  return total;
}

EnergyRecord energy(const SampledCurve& c, double A) {
  EnergyRecord r;
  r.L = length(c);
  r.S = enclosed_area(c);
  r.E = r.L - A * r.S;
  r.J_graph = std::numeric_limits<double>::quiet_NaN();
  r.dissipation = dissipation_estimate(c, A);
  return r;
}

} // namespace extremalflow
