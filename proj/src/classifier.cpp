#include "extremalflow/classifier.hpp"

#include "extremalflow/analysis.hpp"
#include "extremalflow/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace extremalflow {

namespace {

// Runs jobs[0..n) on up to `workers` threads; rethrows the first failure.
void run_parallel(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      job(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) {
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

int rank(Category c) {
  switch (c) {
  case Category::ConvergeLower:
    return 0;
  case Category::Escape:
    return 2;
  default:
    return 1;
  }
}

std::string last_word(const Trajectory& t) {
  for (auto it = t.diagnostics.rbegin(); it != t.diagnostics.rend(); ++it) {
    if (it->sgn != "?") {
      return it->sgn;
    }
  }
  return "?";
}

} // namespace

IntersectionAudit audit_intersections(const Trajectory& t) {
  IntersectionAudit audit;
  const DiagnosticSample* prev = nullptr;
  for (const DiagnosticSample& d : t.diagnostics) {
    if (d.Z < 0) {
      continue;
    }
    if (prev != nullptr) {
      ++audit.samples_checked;
      if (d.Z > prev->Z || !subword(SgnWord::parse(prev->sgn), SgnWord::parse(d.sgn))) {
        std::ostringstream msg;
        msg << "word [" << prev->sgn << "] (Z=" << prev->Z << ") at t=" << prev->t << " followed by [" << d.sgn
            << "] (Z=" << d.Z << ") at t=" << d.t;
        audit.ok = false;
        audit.detail = msg.str();
        return audit;
      }
    }
    prev = &d;
  }
  return audit;
}

std::string_view to_string(Category c) {
  switch (c) {
  case Category::Escape:
    return "Escape";
  case Category::ConvergeUpper:
    return "ConvergeUpper";
  case Category::ConvergeLower:
    return "ConvergeLower";
  case Category::Undetermined:
    return "Undetermined";
  }
  return "Undetermined";
}

Category parse_category(std::string_view name) {
  for (Category c : {Category::Escape, Category::ConvergeUpper, Category::ConvergeLower, Category::Undetermined}) {
    if (to_string(c) == name) {
      return c;
    }
  }
  throw InvalidArgument("unknown category '" + std::string(name) + "'");
}

std::string_view to_string(Side s) {
  return s == Side::Lower ? "lower" : "upper";
}

Classification classify(const InitialFamily& fam, const StepControl& ctl, const ClassifierTolerances& tols) {
  Classification out;
  out.sigma = fam.sigma;
  out.trajectory = evolve(fam, ctl, tols);
  out.t_event = out.trajectory.event.t;
  out.final_sgn = last_word(out.trajectory);
  switch (out.trajectory.event.kind) {
  case EventKind::Escaped:
    out.category = Category::Escape;
    break;
  case EventKind::ConvergedLower:
    out.category = Category::ConvergeLower;
    break;
  case EventKind::ConvergedUpper:
    out.category = Category::ConvergeUpper;
    break;
  case EventKind::ChartLoss:
    out.category = out.final_sgn == "+" ? Category::Escape : Category::Undetermined;
    break;
  case EventKind::HorizonReached:
    out.category = Category::Undetermined;
    break;
  case EventKind::Blowup:
    out.category = Category::Undetermined;
    out.blowup = true;
    break;
  }
  return out;
}

unsigned worker_count() {
  if (const char* env = std::getenv("EXTREMALFLOW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      return static_cast<unsigned>(v);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> sweep(const InitialFamily& tmpl, const std::vector<double>& sigmas, const StepControl& ctl,
                            const ClassifierTolerances& tols) {
  for (double s : sigmas) {
    if (!std::isfinite(s)) {
      throw InvalidArgument("sweep sigmas must be finite");
    }
  }
  std::vector<SweepRow> rows(sigmas.size());
  run_parallel(sigmas.size(), worker_count(), [&](std::size_t i) {
    const Classification c = classify(tmpl.with_sigma(sigmas[i]), ctl, tols);
    rows[i] = {c.sigma, c.category, c.t_event, c.final_sgn, c.blowup};
  });
  audit_monotone(rows);
  return rows;
}

void audit_monotone(std::vector<SweepRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) { return x.sigma < y.sigma; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rank(rows[i].category) < rank(rows[i - 1].category)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "classification not monotone in sigma: " << to_string(rows[i - 1].category) << " at sigma="
          << rows[i - 1].sigma << " but " << to_string(rows[i].category) << " at sigma=" << rows[i].sigma;
      throw MonotonicityViolation(msg.str());
    }
  }
}

Side side_of(const Classification& c) {
  switch (c.category) {
  case Category::ConvergeLower:
    return Side::Lower;
  case Category::Escape:
    return Side::Upper;
  default:
    return c.final_sgn.find('+') != std::string::npos ? Side::Upper : Side::Lower;
  }
}

Bracket bisect_sigma_star(const InitialFamily& tmpl, double lo0, double hi0, double width_tol, const StepControl& ctl,
                          const ClassifierTolerances& tols) {
  if (!std::isfinite(lo0) || !std::isfinite(hi0) || !(lo0 < hi0)) {
    throw InvalidArgument("bisection needs finite lo < hi");
  }
  if (!(width_tol > 0.0)) {
    throw InvalidArgument("bisection width tolerance must be positive");
  }
  const unsigned workers = worker_count();

  Classification ends[2];
  const double end_sigmas[2] = {lo0, hi0};
  run_parallel(2, workers, [&](std::size_t i) { ends[i] = classify(tmpl.with_sigma(end_sigmas[i]), ctl, tols); });
  if (ends[0].category != Category::ConvergeLower) {
    throw InvalidArgument("invalid bracket: lower end sigma=" + std::to_string(lo0) + " classifies as " +
                          std::string(to_string(ends[0].category)) + ", expected ConvergeLower");
  }
  if (ends[1].category != Category::Escape) {
    throw InvalidArgument("invalid bracket: upper end sigma=" + std::to_string(hi0) + " classifies as " +
                          std::string(to_string(ends[1].category)) + ", expected Escape");
  }

  Bracket br;
  br.lo = lo0;
  br.hi = hi0;
  std::size_t iteration = 0;
  auto entry = [&](const Classification& c, std::size_t it, Side side) {
    const bool voted = c.category != Category::ConvergeLower && c.category != Category::Escape;
    return BisectionStep{it,
                         c.sigma,
                         c.category,
                         c.final_sgn,
                         side,
                         voted,
                         br.lo,
                         br.hi,
                         c.t_event,
                         c.trajectory.max_energy_increase,
                         audit_intersections(c.trajectory).ok};
  };
  br.log.push_back(entry(ends[0], 0, Side::Lower));
  br.log.push_back(entry(ends[1], 0, Side::Upper));
  auto apply = [&](const Classification& c) {
    const Side side = side_of(c);
    if (side == Side::Lower) {
      br.lo = c.sigma;
    } else {
      br.hi = c.sigma;
    }
    br.log.push_back(entry(c, ++iteration, side));
  };

  while (br.hi - br.lo > width_tol) {
    const double mid = 0.5 * (br.lo + br.hi);
    const bool speculate = workers >= 3 && 0.5 * (br.hi - br.lo) > width_tol;
    if (!speculate) {
      apply(classify(tmpl.with_sigma(mid), ctl, tols));
      continue;
    }
    // The quarter point on the surviving side is exactly the next midpoint.
    const double probes[3] = {mid, 0.5 * (br.lo + mid), 0.5 * (mid + br.hi)};
    Classification results[3];
    run_parallel(3, workers, [&](std::size_t i) { results[i] = classify(tmpl.with_sigma(probes[i]), ctl, tols); });
    apply(results[0]);
    apply(side_of(results[0]) == Side::Lower ? results[2] : results[1]);
  }
  br.width = br.hi - br.lo;
  return br;
}

CriticalReport critical_run(const InitialFamily& fam, const StepControl& ctl, const ClassifierTolerances& tols,
                            double horizon, double approach_radius, double dwell_radius) {
  if (!(horizon > 0.0) || !(approach_radius > 0.0) || !(dwell_radius > 0.0)) {
    throw InvalidArgument("critical run needs positive horizon and radii");
  }
  StepControl c = ctl;
  c.t_max = horizon;
  ClassifierTolerances t = tols;
  t.stop_on_upper = false;

  CriticalReport rep;
  rep.sigma = fam.sigma;
  rep.approach_radius = approach_radius;
  rep.dwell_radius = dwell_radius;
  rep.trajectory = evolve(fam, c, t);

  const auto& diag = rep.trajectory.diagnostics;
  rep.min_dist_upper = std::numeric_limits<double>::infinity();
  rep.t_approach = std::numeric_limits<double>::quiet_NaN();
  rep.word_held = true;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const DiagnosticSample& d = diag[i];
    rep.sgn_history.push_back(d.sgn);
    if (d.dist_upper < rep.min_dist_upper) {
      rep.min_dist_upper = d.dist_upper;
      rep.t_min = d.t;
    }
    if (d.sgn == "-+-") {
      rep.word_hold_until = d.t;
    }
    if (std::isnan(rep.t_approach)) {
      if (d.dist_upper < approach_radius) {
        rep.t_approach = d.t;
      } else if (d.sgn != "-+-") {
        rep.word_held = false;
      }
    }
    if (i > 0 && d.dist_upper < dwell_radius && diag[i - 1].dist_upper < dwell_radius) {
      rep.dwell_time += d.t - diag[i - 1].t;
    }
  }
  if (std::isnan(rep.t_approach)) {
    rep.word_held = false;
  }
  return rep;
}

} // namespace extremalflow
