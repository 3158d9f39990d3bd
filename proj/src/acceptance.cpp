#include "extremalflow/acceptance.hpp"

#include "extremalflow/analysis.hpp"
#include "extremalflow/classifier.hpp"
#include "extremalflow/errors.hpp"

#include <boost/math/tools/roots.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>

namespace extremalflow {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int odd_at_least(int n, int lo) {
  n = std::max(n, lo);
  return n % 2 == 0 ? n + 1 : n;
}

// ---------------------------------------------------------------------------

class Suite {
public:
  Suite(const RunConfig& cfg, std::ostream* log) : cfg_(cfg), log_(log) {
    ctl_ = cfg.step;
    ctl_.monitor_energy = true;
    ctl_.snapshot_stride = 1;
  }

  CriterionResult run(int id);

private:
  struct LowerRuns {
    std::vector<Classification> runs;
    double seconds = 0.0;
  };
  struct EscapeRun {
    GrimSetup grim;
    double hi = 0.0;
    Classification run;
    double seconds = 0.0;
  };
  struct Threshold {
    Bracket fine;
    Bracket coarse;
    int coarse_grid = 0;
    Bracket refined;
    CriticalReport critical;
    double seconds = 0.0;
  };

  void say(const std::string& line) const {
    if (log_ != nullptr) {
      *log_ << "  .. " << line << std::endl;
    }
  }

  InitialFamily family(double sigma) const { return cfg_.family.with_sigma(sigma); }

  const LowerRuns& lower_runs();
  const EscapeRun& escape_run();
  const Threshold& threshold();
  void compute_threshold();

  CriterionResult equilibria();
  CriterionResult grim_residual();
  CriterionResult circle();
  CriterionResult lower();
  CriterionResult escape();
  CriterionResult bracketing();
  CriterionResult energy();
  CriterionResult intersections();
  CriterionResult comparison();
  CriterionResult words();

  const RunConfig& cfg_;
  std::ostream* log_;
  StepControl ctl_;
  std::optional<LowerRuns> lower_;
  std::optional<EscapeRun> escape_;
  std::optional<Threshold> threshold_;
  std::optional<std::string> threshold_error_;
};

const Suite::LowerRuns& Suite::lower_runs() {
  if (!lower_) {
    const auto t0 = Clock::now();
    StepControl ctl = ctl_;
    ctl.t_max = std::min(ctl.t_max, 20.0);
    LowerRuns lr;
    for (double s : {-1.0, 0.0, 0.1}) {
      lr.runs.push_back(classify(family(s), ctl, cfg_.tolerances));
      say(fmt::format("sigma={:g}: {} at t={:g}", s, to_string(lr.runs.back().category), lr.runs.back().t_event));
    }
    lr.seconds = seconds_since(t0);
    lower_ = std::move(lr);
  }
  return *lower_;
}

const Suite::EscapeRun& Suite::escape_run() {
  if (!escape_) {
    const auto t0 = Clock::now();
    EscapeRun er;
    er.grim = grim_reaper_setup(cfg_.family, cfg_.grim_radius, cfg_.grim_margin);
    er.hi = cfg_.bisect_hi.value_or(er.grim.sigma);
    er.run = classify(family(er.hi), ctl_, cfg_.tolerances);
    er.seconds = seconds_since(t0);
    say(fmt::format("Grim-reaper sigma={:.6f} (b={:.6f}, C={:.6f}): {} at t={:g}", er.grim.sigma, er.grim.b, er.grim.C,
                    to_string(er.run.category), er.run.t_event));
    escape_ = std::move(er);
  }
  return *escape_;
}

const Suite::Threshold& Suite::threshold() {
  if (threshold_error_) {
    throw Error(*threshold_error_);
  }
  if (!threshold_) {
    try {
      compute_threshold();
    } catch (const std::exception& e) {
      threshold_error_ = e.what();
      throw;
    }
  }
  return *threshold_;
}

void Suite::compute_threshold() {
  {
    const double hi = escape_run().hi;
    const auto t0 = Clock::now();
    Threshold th;
    th.fine = bisect_sigma_star(cfg_.family, cfg_.bisect_lo, hi, cfg_.width_tol, ctl_, cfg_.tolerances);
    say(fmt::format("grid {}: bracket [{:.8f}, {:.8f}]", cfg_.family.params.grid_n, th.fine.lo, th.fine.hi));

    InitialFamily coarse = cfg_.family;
    th.coarse_grid = odd_at_least((cfg_.family.params.grid_n + 1) / 2, 17);
    coarse.params.grid_n = th.coarse_grid;
    th.coarse = bisect_sigma_star(coarse, cfg_.bisect_lo, hi, cfg_.width_tol, ctl_, cfg_.tolerances);
    say(fmt::format("grid {}: bracket [{:.8f}, {:.8f}]", th.coarse_grid, th.coarse.lo, th.coarse.hi));

    // Refine from the tightest pair whose outcomes were not settled by vote.
    double lo = cfg_.bisect_lo;
    double hi_strict = hi;
    for (const BisectionStep& s : th.fine.log) {
      if (s.category == Category::ConvergeLower) {
        lo = std::max(lo, s.sigma);
      } else if (s.category == Category::Escape) {
        hi_strict = std::min(hi_strict, s.sigma);
      }
    }
    th.refined = bisect_sigma_star(cfg_.family, lo, hi_strict, 0.1 * cfg_.width_tol, ctl_, cfg_.tolerances);
    say(fmt::format("refined bracket [{:.8f}, {:.8f}]", th.refined.lo, th.refined.hi));

    const double radius = 10.0 * cfg_.tolerances.converge;
    th.critical = critical_run(family(th.refined.midpoint()), ctl_, cfg_.tolerances, cfg_.critical_horizon, radius,
                               cfg_.tolerances.converge);
    say(fmt::format("critical run sigma={:.8f}: min distance {:.3e} at t={:g}", th.critical.sigma,
                    th.critical.min_dist_upper, th.critical.t_min));
    th.seconds = seconds_since(t0);
    threshold_ = std::move(th);
  }
}

CriterionResult Suite::run(int id) {
  switch (id) {
  case 1:
    return equilibria();
  case 2:
    return grim_residual();
  case 3:
    return circle();
  case 4:
    return lower();
  case 5:
    return escape();
  case 6:
    return bracketing();
  case 7:
    return energy();
  case 8:
    return intersections();
  case 9:
    return comparison();
  case 10:
    return words();
  default:
    throw InvalidArgument(fmt::format("no acceptance criterion {}", id));
  }
}

// 1 -------------------------------------------------------------------------
CriterionResult Suite::equilibria() {
  CriterionResult r{1, "equilibrium stationarity", true, "", 0.0};
  const ProblemParams& p = cfg_.family.params;
  std::vector<std::string> parts;
  auto check = [&](const char* label, const ChartState& start, auto&& values) {
    const auto t0 = Clock::now();
    const ChartState end = advance(start, 1.0, cfg_.step);
    const double secs = seconds_since(t0);
    const std::vector<double>& v0 = values(start);
    const std::vector<double>& v1 = values(end);
    double disp = 0.0;
    for (std::size_t i = 0; i < v0.size(); ++i) {
      disp = std::max(disp, std::abs(v1[i] - v0[i]));
    }
    r.pass = r.pass && disp < 1e-3 && secs < 5.0;
    parts.push_back(fmt::format("{} displacement {:.2e} in {:.2f}s", label, disp, secs));
  };
  check("lower", ChartState{gamma_lower(p)},
        [](const ChartState& s) -> const std::vector<double>& { return std::get<GraphProfile>(s).u; });
  check("upper", ChartState{gamma_upper(p)},
        [](const ChartState& s) -> const std::vector<double>& { return std::get<PolarProfile>(s).rho; });
  r.detail = fmt::format("{}; {} (bound 1e-3, 5s each)", parts[0], parts[1]);
  return r;
}

// 2 -------------------------------------------------------------------------
CriterionResult Suite::grim_residual() {
  CriterionResult r{2, "Grim reaper residual order", true, "", 0.0};
  const double b = 0.25;
  const double C = 3.0;
  const double half = 0.8 * b * std::numbers::pi / 2.0;
  const double bar = 3.5;
  const std::vector<int> grids{101, 201, 401};
  std::vector<double> residuals;
  for (int n : grids) {
    const double h = 2.0 * half / (n - 1);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      u[static_cast<std::size_t>(i)] = grim_reaper_value(b, C, -half + i * h, 0.0);
    }
    const std::vector<double> op = graph_operator(u, h, 0.0);
    double res = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      res = std::max(res, std::abs(-1.0 / b - op[static_cast<std::size_t>(i)]));
    }
    residuals.push_back(res);
  }
  const double r1 = residuals[0] / residuals[1];
  const double r2 = residuals[1] / residuals[2];
  r.pass = r1 >= bar && r2 >= bar;
  r.detail = fmt::format("sup residuals {:.3e}, {:.3e}, {:.3e} on grids {}/{}/{}; ratios {:.3f}, {:.3f} (need >= {:g})",
                         residuals[0], residuals[1], residuals[2], grids[0], grids[1], grids[2], r1, r2, bar);
  return r;
}

// 3 -------------------------------------------------------------------------
CriterionResult Suite::circle() {
  CriterionResult r{3, "circle ODE oracle", true, "", 0.0};
  const double A = 1.0;
  const double R0 = 2.0;
  double worst_t = 0.0;
  double worst_R = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    const double R = circle_radius(R0, A, t);
    worst_t = std::max(worst_t, std::abs(circle_time_to_radius(R0, A, R) - t));
    // Root of the closed form, bracketed by R0 and R0 + A t.
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        [&](double x) { return circle_time_to_radius(R0, A, x) - t; }, R0, R0 + A * t, tol, iters);
    worst_R = std::max(worst_R, std::abs(R - 0.5 * (lo + hi)));
  }
  r.pass = worst_t < 1e-8 && worst_R < 1e-8;
  r.detail = fmt::format("max |t_closed(R_num) - t| = {:.2e}, max |R_num - R_root| = {:.2e} (bound 1e-8)", worst_t,
                         worst_R);
  return r;
}

// 4 -------------------------------------------------------------------------
CriterionResult Suite::lower() {
  CriterionResult r{4, "lower convergence", true, "", 0.0};
  const LowerRuns& lr = lower_runs();
  std::string parts;
  for (const Classification& c : lr.runs) {
    const double d = c.trajectory.diagnostics.back().dist_lower;
    r.pass = r.pass && c.category == Category::ConvergeLower && d < 1e-3 && c.t_event <= 20.0;
    parts += fmt::format("sigma={:g}: {} t={:g} dist={:.2e}; ", c.sigma, to_string(c.category), c.t_event, d);
  }
  r.pass = r.pass && lr.seconds < 30.0;
  r.detail = parts + fmt::format("{:.1f}s total (bound 30s)", lr.seconds);
  return r;
}

// 5 -------------------------------------------------------------------------
CriterionResult Suite::escape() {
  CriterionResult r{5, "escape", true, "", 0.0};
  const EscapeRun& er = escape_run();
  const Classification& c = er.run;
  r.pass = c.category == Category::Escape && c.final_sgn == "+" && c.t_event < ctl_.t_max;
  r.detail = fmt::format("sigma={:.6f}: {} at t={:g}, final word [{}]", er.hi, to_string(c.category), c.t_event,
                         c.final_sgn);
  return r;
}

// 6 -------------------------------------------------------------------------
CriterionResult Suite::bracketing() {
  CriterionResult r{6, "threshold bracketing", true, "", 0.0};
  const Threshold& th = threshold();
  const double agree = std::abs(th.fine.midpoint() - th.coarse.midpoint());
  const double bar = 10.0 * cfg_.tolerances.converge;
  const CriticalReport& cr = th.critical;
  r.pass = th.fine.width <= 0.01 && agree < 0.05 && cr.min_dist_upper < bar && cr.word_held && th.seconds < 300.0;
  r.detail = fmt::format(
      "bracket [{:.6f}, {:.6f}] width {:.2e}; grid {} midpoint {:.6f} vs grid {} midpoint {:.6f} (diff {:.2e}); "
      "critical sigma {:.6f}: min distance {:.2e} < {:.1e} at t={:g}, word [-+-] held until t={:g}, dwell {:g}; {:.1f}s",
      th.fine.lo, th.fine.hi, th.fine.width, cfg_.family.params.grid_n, th.fine.midpoint(), th.coarse_grid,
      th.coarse.midpoint(), agree, cr.sigma, cr.min_dist_upper, bar, cr.t_min, cr.word_hold_until, cr.dwell_time,
      th.seconds);
  if (!cr.word_held) {
    r.detail += "; word changed before the approach";
  }
  return r;
}

// 7 -------------------------------------------------------------------------
CriterionResult Suite::energy() {
  CriterionResult r{7, "energy monotonicity", true, "", 0.0};
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t runs = 0;
  auto take = [&](double v) {
    worst = std::max(worst, v);
    ++runs;
  };
  for (const Classification& c : lower_runs().runs) {
    take(c.trajectory.max_energy_increase);
  }
  take(escape_run().run.trajectory.max_energy_increase);
  const Threshold& th = threshold();
  for (const Bracket* b : {&th.fine, &th.coarse, &th.refined}) {
    for (const BisectionStep& s : b->log) {
      take(s.max_energy_increase);
    }
  }
  take(th.critical.trajectory.max_energy_increase);

  // Identity dE/dt = -int (kappa - A)^2 ds on the sigma = 0.1 run.
  StepControl ctl = cfg_.step;
  ctl.t_max = 5.0;
  ctl.sample_interval = 0.01;
  ctl.snapshot_stride = 0;
  ClassifierTolerances tols = cfg_.tolerances;
  tols.stop_on_lower = false;
  tols.stop_on_upper = false;
  const Trajectory tr = evolve(family(0.1), ctl, tols);
  double E0 = std::numeric_limits<double>::quiet_NaN();
  double integral = 0.0;
  const auto& d = tr.diagnostics;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    if (d[i].t >= 0.5 - 1e-12) {
      if (std::isnan(E0)) {
        E0 = d[i].E;
      }
      integral += 0.5 * (d[i].dissipation + d[i + 1].dissipation) * (d[i + 1].t - d[i].t);
    }
  }
  const double dE = d.back().E - E0;
  const double rel = std::abs(dE + integral) / integral;
  const bool reached = std::abs(d.back().t - 5.0) < 1e-9;

  r.pass = worst <= 1e-7 && reached && rel < 0.05;
  r.detail = fmt::format("max one-step increase of E over {} runs {:.2e} (bound 1e-7); on [0.5, 5]: "
                         "dE/dt = {:.6e}, -mean dissipation = {:.6e}, relative mismatch {:.2e} (bound 5e-2)",
                         runs, worst, dE / 4.5, -integral / 4.5, rel);
  return r;
}

// 8 -------------------------------------------------------------------------
CriterionResult Suite::intersections() {
  CriterionResult r{8, "intersection-number principle", true, "", 0.0};
  std::size_t runs = 0;
  std::size_t samples = 0;
  std::string failure;
  auto take = [&](const Trajectory& t, double sigma) {
    const IntersectionAudit a = audit_intersections(t);
    ++runs;
    samples += a.samples_checked;
    if (!a.ok && failure.empty()) {
      failure = fmt::format("sigma={:.8f}: {}", sigma, a.detail);
    }
  };
  for (const Classification& c : lower_runs().runs) {
    take(c.trajectory, c.sigma);
  }
  take(escape_run().run.trajectory, escape_run().hi);
  const Threshold& th = threshold();
  take(th.critical.trajectory, th.critical.sigma);
  for (const Bracket* b : {&th.fine, &th.coarse, &th.refined}) {
    for (const BisectionStep& s : b->log) {
      ++runs;
      if (!s.intersections_ok && failure.empty()) {
        failure = fmt::format("bisection run sigma={:.8f}", s.sigma);
      }
    }
  }
  r.pass = failure.empty();
  r.detail = fmt::format("{} runs, {} sample transitions audited in full trajectories", runs, samples);
  if (!failure.empty()) {
    r.detail += "; violation: " + failure;
  }
  return r;
}

// 9 -------------------------------------------------------------------------
CriterionResult Suite::comparison() {
  CriterionResult r{9, "comparison-principle ordering", true, "", 0.0};
  std::string parts;
  StepControl ctl = cfg_.step;
  ctl.snapshot_stride = 1;
  for (auto [lo, hi] : {std::pair{0.1, 0.5}, std::pair{0.5, 1.0}, std::pair{-0.5, 0.5}}) {
    const Trajectory a = evolve(family(hi), ctl, cfg_.tolerances);
    const Trajectory b = evolve(family(lo), ctl, cfg_.tolerances);
    const std::size_t n = std::min(a.snapshots.size(), b.snapshots.size());
    std::size_t compared = 0;
    std::string bad;
    for (std::size_t i = 0; i < n; ++i) {
      if (a.snapshots[i].t != b.snapshots[i].t) {
        break;
      }
      const Order o = semi_order(a.snapshots[i].curve, b.snapshots[i].curve);
      ++compared;
      if (o != Order::Above && bad.empty()) {
        bad = fmt::format(" ({} at t={:g})", to_string(o), a.snapshots[i].t);
      }
    }
    const bool ok = bad.empty() && compared >= 2;
    r.pass = r.pass && ok;
    parts += fmt::format("{:g} over {:g}: {} of {} common samples{}; ", hi, lo, ok ? "strictly above at all" : "FAILED",
                         compared, bad);
  }
  r.detail = parts.substr(0, parts.size() - 2);
  return r;
}

// 10 ------------------------------------------------------------------------
CriterionResult Suite::words() {
  CriterionResult r{10, "word algebra", true, "", 0.0};
  std::vector<std::string> all;
  for (int len = 1; len <= 4; ++len) {
    for (int bits = 0; bits < (1 << len); ++bits) {
      std::string w;
      for (int k = 0; k < len; ++k) {
        w += (bits >> k & 1) ? '+' : '-';
      }
      all.push_back(w);
    }
  }
  // Reference: every subset of positions of w, read in order.
  auto reference = [](const std::string& w, const std::string& s) {
    const int n = static_cast<int>(w.size());
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::string pick;
      for (int k = 0; k < n; ++k) {
        if (mask >> k & 1) {
          pick += w[static_cast<std::size_t>(k)];
        }
      }
      if (pick == s) {
        return true;
      }
    }
    return false;
  };
  std::map<std::pair<std::size_t, std::size_t>, bool> rel;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      const bool got = subword(SgnWord::parse(all[i]), SgnWord::parse(all[j]));
      rel[{i, j}] = got;
      mismatches += got != reference(all[i], all[j]);
    }
  }
  std::size_t order_failures = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    order_failures += !rel[{i, i}];
    for (std::size_t j = 0; j < all.size(); ++j) {
      order_failures += i != j && rel[{i, j}] && rel[{j, i}];
      for (std::size_t k = 0; k < all.size(); ++k) {
        order_failures += rel[{i, j}] && rel[{j, k}] && !rel[{i, k}];
      }
    }
  }
  const bool examples = subword(SgnWord::parse("+-"), SgnWord::parse("+")) &&
                        subword(SgnWord::parse("+-"), SgnWord::parse("-")) &&
                        subword(SgnWord::parse("+-"), SgnWord::parse("+-")) &&
                        !subword(SgnWord::parse("+-"), SgnWord::parse("-+"));
  r.pass = mismatches == 0 && order_failures == 0 && examples;
  r.detail = fmt::format("{} words, {} pairs: {} mismatches against subset enumeration, {} partial-order failures; "
                         "[+-] contains [+], [-], not [-+]: {}",
                         all.size(), all.size() * all.size(), mismatches, order_failures, examples ? "yes" : "no");
  return r;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const RunConfig& cfg, const std::vector<int>& only, std::ostream* log) {
  cfg.validate();
  std::vector<int> ids = only;
  if (ids.empty()) {
    for (int i = 1; i <= 10; ++i) {
      ids.push_back(i);
    }
  }
  for (int id : ids) {
    if (id < 1 || id > 10) {
      throw InvalidArgument(fmt::format("no acceptance criterion {}", id));
    }
  }
  Suite suite(cfg, log);
  std::vector<CriterionResult> out;
  for (int id : ids) {
    if (log != nullptr) {
      *log << "criterion " << id << " ..." << std::endl;
    }
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = suite.run(id);
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0.0};
    }
    r.seconds = seconds_since(t0);
    out.push_back(r);
  }
  return out;
}

void print_results(std::ostream& os, const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results) {
    os << fmt::format("[{}] {:2d}. {}: {} ({:.1f}s)\n", r.pass ? "PASS" : "FAIL", r.id, r.name, r.detail, r.seconds);
  }
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
}

} // namespace extremalflow
