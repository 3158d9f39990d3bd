#include "extremalflow/evolver.hpp"

#include "extremalflow/analysis.hpp"
#include "extremalflow/errors.hpp"
#include "extremalflow/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace extremalflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBlowup = 1e6;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Solves (I - dt * diag(coef) * D2) v = rhs on interior nodes, Dirichlet ends
// already stored in v.front() / v.back().
void implicit_diffusion(std::vector<double>& v, const std::vector<double>& rhs,
                        const std::vector<double>& coef, double dt, double h) {
  const std::size_t n = v.size();
  const std::size_t m = n - 2;
  std::vector<double> lower(m), diag(m), upper(m), b(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    const double r = dt * coef[i] / (h * h);
    lower[k] = -r;
    diag[k] = 1.0 + 2.0 * r;
    upper[k] = -r;
    b[k] = rhs[i];
  }
  b[0] += -lower[0] * v.front();
  b[m - 1] += -upper[m - 1] * v.back();
  // Thomas algorithm.
  for (std::size_t k = 1; k < m; ++k) {
    const double w = lower[k] / diag[k - 1];
    diag[k] -= w * upper[k - 1];
    b[k] -= w * b[k - 1];
  }
  v[m] = b[m - 1] / diag[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) {
    v[k + 1] = (b[k] - upper[k] * v[k + 2]) / diag[k];
  }
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw BlowupError(std::string(what) + " became non-finite");
  }
}

} // namespace

std::string_view to_string(Chart c) {
  return c == Chart::Graph ? "graph" : "polar";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "explicit") {
    return Scheme::Explicit;
  }
  if (name == "semi_implicit" || name == "semi-implicit") {
    return Scheme::SemiImplicit;
  }
  throw InvalidArgument("unknown scheme '" + std::string(name) + "' (expected explicit or semi_implicit)");
}

std::string_view to_string(Scheme s) {
  return s == Scheme::Explicit ? "explicit" : "semi_implicit";
}

std::string_view to_string(EventKind k) {
  switch (k) {
  case EventKind::Escaped:
    return "Escaped";
  case EventKind::ConvergedLower:
    return "ConvergedLower";
  case EventKind::ConvergedUpper:
    return "ConvergedUpper";
  case EventKind::ChartLoss:
    return "ChartLoss";
  case EventKind::HorizonReached:
    return "HorizonReached";
  case EventKind::Blowup:
    return "Blowup";
  }
  return "?";
}

void StepControl::validate() const {
  if (!(cfl > 0.0)) {
    throw InvalidArgument("cfl must be positive");
  }
  if (scheme == Scheme::Explicit && cfl > 0.25) {
    throw InvalidArgument("explicit stepping requires cfl <= 0.25");
  }
  if (!(t_max > 0.0) || !(sample_interval > 0.0)) {
    throw InvalidArgument("t_max and sample_interval must be positive");
  }
  if (!(slope_switch > 0.0) || !(slope_return > 0.0) || !(slope_return < slope_switch)) {
    throw InvalidArgument("chart switching requires 0 < slope_return < slope_switch");
  }
}

void ClassifierTolerances::validate() const {
  if (!(converge > 0.0) || !(escape_gap > 0.0) || !(dissipation > 0.0) || !(sgn_tol > 0.0)) {
    throw InvalidArgument("classifier tolerances must all be positive");
  }
}

Chart chart_of(const ChartState& s) {
  return std::holds_alternative<GraphProfile>(s) ? Chart::Graph : Chart::Polar;
}

SampledCurve to_sampled(const ChartState& s) {
  return std::visit(
      [](const auto& prof) {
        if constexpr (std::is_same_v<std::decay_t<decltype(prof)>, GraphProfile>) {
          return graph_to_sampled(prof);
        } else {
          return polar_to_sampled(prof);
        }
      },
      s);
}

const ProblemParams& params_of(const ChartState& s) {
  return std::visit([](const auto& prof) -> const ProblemParams& { return prof.params; }, s);
}

double max_abs_slope(const GraphProfile& g) {
  const double dx = g.dx();
  double m = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    m = std::max(m, std::abs(g.u[i] - g.u[i - 1]) / dx);
  }
  return m;
}

double max_abs_slope(const SampledCurve& c) {
  double m = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    const Vec2 d = c.points[i] - c.points[i - 1];
    if (d.x == 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    m = std::max(m, std::abs(d.y / d.x));
  }
  return m;
}

double stable_dt(const GraphProfile& g, const StepControl& ctl) {
  const double h = g.dx();
  const double A = g.params.A;
  // The diffusion coefficient 1/(1+u_x^2) never exceeds 1; the first-order
  // term moves information at speed at most A.
  const double hyperbolic = 0.5 * h / A;
  if (ctl.scheme == Scheme::SemiImplicit) {
    return ctl.cfl * hyperbolic;
  }
  return std::min(ctl.cfl * h * h, hyperbolic);
}

double stable_dt(const PolarProfile& p, const StepControl& ctl) {
  const double h = p.dtheta();
  const double A = p.params.A;
  double max_coef = 1.0;
  double min_rho = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < p.size(); ++j) {
    const double r = p.rho[j];
    const double rt = (p.rho[j + 1] - p.rho[j - 1]) / (2.0 * h);
    max_coef = std::max(max_coef, 1.0 / (r * r + rt * rt));
    min_rho = std::min(min_rho, r);
  }
  min_rho = std::min(min_rho, p.params.a);
  // Advection speed in theta of the forcing and lower-order terms is O(1/rho).
  const double hyperbolic = 0.5 * h * min_rho / std::max(A, 1.0 / min_rho);
  if (ctl.scheme == Scheme::SemiImplicit) {
    return ctl.cfl * hyperbolic;
  }
  return std::min(ctl.cfl * h * h / max_coef, hyperbolic);
}

std::vector<double> graph_operator(const std::vector<double>& u, double h, double A) {
  const std::size_t n = u.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ux = (u[i + 1] - u[i - 1]) / (2.0 * h);
    const double uxx = ((u[i + 1] + u[i - 1]) - 2.0 * u[i]) / (h * h);
    const double w = 1.0 + ux * ux;
    out[i] = uxx / w + A * std::sqrt(w);
  }
  return out;
}

GraphProfile step_graph(const GraphProfile& g, double dt, Scheme scheme) {
  const std::size_t n = g.size();
  const double h = g.dx();
  const double A = g.params.A;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ux = (g.u[i + 1] - g.u[i - 1]) / (2.0 * h);
    if (std::abs(ux) > kBlowup || std::abs(g.u[i]) > kBlowup) {
      throw BlowupError("graph profile exceeded |u| or |u_x| bound");
    }
  }
  std::vector<double> next(n, 0.0);
  if (scheme == Scheme::Explicit) {
    const std::vector<double> v = graph_operator(g.u, h, A);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      next[i] = g.u[i] + dt * v[i];
    }
  } else {
    std::vector<double> coef(n, 0.0);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double ux = (g.u[i + 1] - g.u[i - 1]) / (2.0 * h);
      const double w = 1.0 + ux * ux;
      coef[i] = 1.0 / w;
      rhs[i] = g.u[i] + dt * A * std::sqrt(w);
    }
    implicit_diffusion(next, rhs, coef, dt, h);
  }
  for (double v : next) {
    check_finite(v, "graph height");
  }
  next.front() = 0.0;
  next.back() = 0.0;
  GraphProfile out;
  out.params = g.params;
  out.u = std::move(next);
  return out;
}

ChartState advance(const ChartState& start, double duration, const StepControl& ctl) {
  ctl.validate();
  if (!(duration >= 0.0)) {
    throw InvalidArgument("duration must be non-negative");
  }
  ChartState state = start;
  double t = 0.0;
  while (t < duration) {
    double dt = std::visit([&](const auto& prof) { return stable_dt(prof, ctl); }, state);
    const bool last = t + dt >= duration;
    if (last) {
      dt = duration - t;
    }
    if (const auto* g = std::get_if<GraphProfile>(&state)) {
      state = step_graph(*g, dt, ctl.scheme);
    } else {
      state = step_polar(std::get<PolarProfile>(state), dt, ctl.scheme);
    }
    t = last ? duration : t + dt;
  }
  return state;
}

PolarProfile step_polar(const PolarProfile& p, double dt, Scheme scheme) {
  const std::size_t n = p.size();
  const double h = p.dtheta();
  const double A = p.params.A;
  std::vector<double> next(n, 0.0);
  next.front() = p.params.a;
  next.back() = p.params.a;
  std::vector<double> coef;
  std::vector<double> rhs;
  if (scheme == Scheme::SemiImplicit) {
    coef.assign(n, 0.0);
    rhs.assign(n, 0.0);
  }
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double r = p.rho[j];
    if (!(r > 1e-9) || !(r < kBlowup)) {
      throw BlowupError("polar radius left (1e-9, 1e6)");
    }
    const double rt = (p.rho[j + 1] - p.rho[j - 1]) / (2.0 * h);
    const double w = r * r + rt * rt;
    const double lower = -(2.0 * rt * rt + r * r) / (r * w) + A * std::sqrt(w) / r;
    if (scheme == Scheme::Explicit) {
      const double rtt = ((p.rho[j + 1] + p.rho[j - 1]) - 2.0 * r) / (h * h);
      next[j] = r + dt * (rtt / w + lower);
      check_finite(next[j], "polar radius");
    } else {
      coef[j] = 1.0 / w;
      rhs[j] = r + dt * lower;
    }
  }
  if (scheme == Scheme::SemiImplicit) {
    implicit_diffusion(next, rhs, coef, dt, h);
  }
  for (std::size_t j = 1; j + 1 < n; ++j) {
    check_finite(next[j], "polar radius");
    if (!(next[j] > 1e-9) || !(next[j] < kBlowup)) {
      throw BlowupError("polar radius left (1e-9, 1e6)");
    }
  }
  PolarProfile out;
  out.params = p.params;
  out.rho = std::move(next);
  return out;
}

ChartState switch_chart(const SampledCurve& c, const ProblemParams& p, Chart target) {
  const std::size_t n = static_cast<std::size_t>(p.grid_n);
  if (target == Chart::Graph) {
    if (!is_graph_chartable(c)) {
      throw ChartError("curve is not a graph over x");
    }
    std::vector<double> xs, ys;
    xs.reserve(c.size());
    ys.reserve(c.size());
    for (const Vec2& q : c.points) {
      xs.push_back(q.x);
      ys.push_back(q.y);
    }
    const MonotoneCubic f(std::move(xs), std::move(ys));
    GraphProfile g;
    g.params = p;
    g.u.resize(n);
    const double dx = 2.0 * p.a / (p.grid_n - 1);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      g.u[i] = f(-p.a + static_cast<double>(i) * dx);
    }
    g.u.front() = 0.0;
    g.u.back() = 0.0;
    return g;
  }
  if (!is_polar_chartable(c)) {
    throw ChartError("curve is not star-shaped about the origin in the upper half-plane");
  }
  const std::size_t m = c.size();
  std::vector<double> th(m), rr(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Vec2 q = c.points[m - 1 - k];
    th[k] = std::atan2(q.y, q.x);
    rr[k] = norm(q);
  }
  th.front() = 0.0;
  th.back() = kPi;
  const MonotoneCubic f(std::move(th), std::move(rr));
  PolarProfile pp;
  pp.params = p;
  pp.rho.resize(n);
  const double h = kPi / (p.grid_n - 1);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    pp.rho[j] = f(static_cast<double>(j) * h);
  }
  pp.rho.front() = p.a;
  pp.rho.back() = p.a;
  return pp;
}

namespace {

DiagnosticSample diagnose(const ChartState& state, double t, const ClassifierTolerances& tols) {
  const ProblemParams& p = params_of(state);
  const SampledCurve c = to_sampled(state);
  DiagnosticSample d;
  d.t = t;
  d.chart = chart_of(state);
  d.L = length(c);
  try {
    d.S = enclosed_area(c);
    d.E = d.L - p.A * d.S;
  } catch (const DomainError&) {
    d.S = kNaN;
    d.E = kNaN;
  }
  if (const auto* g = std::get_if<GraphProfile>(&state)) {
    d.lyapunov = lyapunov_graph(*g).monitor;
  } else {
    d.lyapunov = d.E;
  }

  const bool polar_ok = is_polar_chartable(c);
  const SampledCurve upper =
      polar_ok ? equilibrium_at_angles(p, Equilibrium::Upper, c) : polar_to_sampled(gamma_upper(p));
  SgnWord word;
  try {
    word = sgn_word(c, upper, {tols.sgn_tol, 0.1});
    d.Z = word.z();
    d.sgn = word.str();
  } catch (const Unresolvable&) {
    d.Z = -1;
    d.sgn = "?";
  }

  const auto [devP, devQ] = endpoint_curvature_deviation(c, p.A);
  d.kappa_dev_P = devP;
  d.kappa_dev_Q = devQ;
  const EndpointTangents tan = endpoint_tangents(c);
  d.tangent_y_P = tan.at_P.y;
  d.tangent_y_Q = -tan.at_Q.y;
  d.dissipation = dissipation_estimate(c, p.A);
  d.dist_lower = distance_to_equilibrium(c, p, Equilibrium::Lower);
  d.dist_upper = distance_to_equilibrium(c, p, Equilibrium::Upper);

  d.clearance = kNaN;
  if (d.sgn == "+" && polar_ok) {
    double clearance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
      const Vec2 q = c.points[i];
      const double th = std::atan2(q.y, q.x);
      clearance = std::min(clearance, (norm(q) - gamma_upper_radius(p, th)) / std::sin(th));
    }
    d.clearance = clearance;
  }
  return d;
}

bool terminal(const DiagnosticSample& d, const ClassifierTolerances& tols, double t_max,
              TerminationEvent& event) {
  auto fire = [&](EventKind k) {
    event = {k, d.t};
    return true;
  };
  if (d.sgn == "+" && d.clearance > tols.escape_gap) {
    return fire(EventKind::Escaped);
  }
  if (tols.stop_on_lower && d.dist_lower < tols.converge && d.dissipation < tols.dissipation) {
    return fire(EventKind::ConvergedLower);
  }
  if (tols.stop_on_upper && d.dist_upper < tols.converge && d.dissipation < tols.dissipation) {
    return fire(EventKind::ConvergedUpper);
  }
  if (d.chart == Chart::Polar && (d.tangent_y_P <= 0.0 || d.tangent_y_Q <= 0.0)) {
    return fire(EventKind::ChartLoss);
  }
  if (d.t >= t_max) {
    return fire(EventKind::HorizonReached);
  }
  return false;
}

// Graph -> polar when slopes get steep, polar -> graph once the curve is a
// gentle graph again. Returns true if the chart changed.
bool maybe_switch(ChartState& state, const StepControl& ctl) {
  if (auto* g = std::get_if<GraphProfile>(&state)) {
    if (max_abs_slope(*g) <= ctl.slope_switch) {
      return false;
    }
    const SampledCurve c = graph_to_sampled(*g);
    if (!is_polar_chartable(c)) {
      return false;
    }
    state = switch_chart(c, g->params, Chart::Polar);
    return true;
  }
  const auto& pp = std::get<PolarProfile>(state);
  const SampledCurve c = polar_to_sampled(pp);
  if (!is_graph_chartable(c) || max_abs_slope(c) >= ctl.slope_return) {
    return false;
  }
  state = switch_chart(c, pp.params, Chart::Graph);
  return true;
}

struct EnergyProbe {
  double E = kNaN;
  double J = kNaN;
};

EnergyProbe probe_energy(const ChartState& state) {
  EnergyProbe e;
  const ProblemParams& p = params_of(state);
  const SampledCurve c = to_sampled(state);
  try {
    e.E = length(c) - p.A * enclosed_area(c);
  } catch (const DomainError&) {
  }
  if (const auto* g = std::get_if<GraphProfile>(&state)) {
    e.J = lyapunov_graph(*g).monitor;
  }
  return e;
}

} // namespace

Trajectory evolve(const InitialFamily& fam, const StepControl& ctl, const ClassifierTolerances& tols) {
  return evolve(ChartState{initial_curve(fam)}, ctl, tols);
}

Trajectory evolve(const ChartState& start, const StepControl& ctl, const ClassifierTolerances& tols) {
  ctl.validate();
  tols.validate();
  ChartState state = start;
  Trajectory traj;
  traj.params = params_of(start);

  std::size_t sample_index = 0;
  auto record = [&](double t) {
    const DiagnosticSample d = diagnose(state, t, tols);
    traj.diagnostics.push_back(d);
    const bool keep = sample_index == 0 || (ctl.snapshot_stride > 0 && sample_index % ctl.snapshot_stride == 0);
    if (keep) {
      traj.snapshots.push_back({t, d.chart, to_sampled(state)});
    }
    ++sample_index;
    return terminal(d, tols, ctl.t_max, traj.event);
  };
  auto keep_final = [&](double t) {
    if (traj.snapshots.empty() || traj.snapshots.back().t != t) {
      traj.snapshots.push_back({t, chart_of(state), to_sampled(state)});
    }
  };

  double t = 0.0;
  try {
    if (maybe_switch(state, ctl)) {
      ++traj.chart_switches;
    }
    if (record(t)) {
      keep_final(t);
      return traj;
    }
    double next_sample = ctl.sample_interval;
    std::size_t k = 1;
    bool blocked_switch = false;
    EnergyProbe before;
    if (ctl.monitor_energy) {
      before = probe_energy(state);
    }
    while (true) {
      const std::size_t switches_before = traj.chart_switches;
      double dt = std::visit([&](const auto& prof) { return stable_dt(prof, ctl); }, state);
      bool landing = false;
      if (t + dt >= next_sample) {
        dt = next_sample - t;
        landing = true;
      }
      if (auto* g = std::get_if<GraphProfile>(&state)) {
        state = step_graph(*g, dt, ctl.scheme);
      } else {
        state = step_polar(std::get<PolarProfile>(state), dt, ctl.scheme);
      }
      ++traj.steps;
      t = landing ? next_sample : t + dt;

      // Steep graphs hand off immediately; other switches wait for samples.
      if (!blocked_switch && chart_of(state) == Chart::Graph &&
          max_abs_slope(std::get<GraphProfile>(state)) > ctl.slope_switch) {
        if (maybe_switch(state, ctl)) {
          ++traj.chart_switches;
        } else {
          blocked_switch = true;
        }
      }
      if (landing) {
        blocked_switch = false;
        if (maybe_switch(state, ctl)) {
          ++traj.chart_switches;
        }
      }
      if (ctl.monitor_energy) {
        const EnergyProbe after = probe_energy(state);
        if (traj.chart_switches == switches_before) {
          if (std::isfinite(before.E) && std::isfinite(after.E)) {
            traj.max_energy_increase = std::max(traj.max_energy_increase, after.E - before.E);
            ++traj.energy_steps_checked;
          }
          if (std::isfinite(before.J) && std::isfinite(after.J)) {
            traj.max_lyapunov_increase = std::max(traj.max_lyapunov_increase, after.J - before.J);
          }
        }
        before = after;
      }
      if (landing) {
        if (record(t)) {
          keep_final(t);
          return traj;
        }
        ++k;
        next_sample = static_cast<double>(k) * ctl.sample_interval;
      }
    }
  } catch (const BlowupError&) {
    traj.event = {EventKind::Blowup, t};
    keep_final(t);
  }
  return traj;
}

} // namespace extremalflow
