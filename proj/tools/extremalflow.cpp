// extremalflow: run, sweep, bisect and verify the forced curve-shortening flow
// between two pinned endpoints.
//
// Exit status: 0 success, 1 configuration or usage error, 2 blowup,
// 3 failed verification or non-monotone sweep.

#include "extremalflow/acceptance.hpp"
#include "extremalflow/classifier.hpp"
#include "extremalflow/config.hpp"
#include "extremalflow/errors.hpp"
#include "extremalflow/io.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace ef = extremalflow;

namespace {

constexpr int kConfigError = 1;
constexpr int kBlowup = 2;
constexpr int kDiagnosticFailure = 3;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<double> sigma;
  std::optional<int> grid;
  bool quiet = false;
};

ef::RunConfig resolve(const Overrides& o) {
  ef::RunConfig cfg = o.config.empty() ? ef::RunConfig{} : ef::load_config(o.config);
  if (!o.out.empty()) {
    cfg.out_dir = o.out;
  }
  if (o.sigma) {
    cfg.family.sigma = *o.sigma;
  }
  if (o.grid) {
    cfg.family.params.grid_n = *o.grid;
  }
  cfg.validate();
  return cfg;
}

std::vector<double> parse_sigmas(const std::string& text) {
  std::istringstream in("sigmas = " + text);
  return ef::parse_config(in, "--sigmas").sigmas;
}

int cmd_run(const ef::RunConfig& cfg, bool quiet) {
  if (!quiet) {
    std::cerr << fmt::format("running sigma={} on grid {}\n", cfg.family.sigma, cfg.family.params.grid_n);
  }
  const ef::Classification result = ef::classify(cfg.family, cfg.step, cfg.tolerances);
  const auto files = ef::write_trajectory(result.trajectory, cfg.out_dir);
  ef::write_json(cfg.out_dir / "summary.json", ef::summary_json(cfg, result, files));
  std::ofstream(cfg.out_dir / "config.txt") << ef::render_config(cfg);
  std::cout << fmt::format("sigma={} category={} event={} t={} final_sgn=[{}]\n", result.sigma,
                           ef::to_string(result.category), ef::to_string(result.trajectory.event.kind),
                           result.t_event, result.final_sgn);
  return result.blowup ? kBlowup : 0;
}

int cmd_sweep(const ef::RunConfig& cfg, bool quiet) {
  if (!quiet) {
    std::cerr << fmt::format("sweeping {} sigmas on {} worker(s)\n", cfg.sigmas.size(), ef::worker_count());
  }
  std::vector<ef::SweepRow> rows;
  try {
    rows = ef::sweep(cfg.family, cfg.sigmas, cfg.step, cfg.tolerances);
  } catch (const ef::MonotonicityViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiagnosticFailure;
  }
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream os(cfg.out_dir / "sweep.csv");
  ef::write_sweep_csv(os, rows);
  ef::write_sweep_csv(std::cout, rows);
  for (const auto& r : rows) {
    if (r.blowup) {
      return kBlowup;
    }
  }
  return 0;
}

int cmd_bisect(const ef::RunConfig& cfg, bool quiet) {
  double hi = 0.0;
  if (cfg.bisect_hi) {
    hi = *cfg.bisect_hi;
  } else {
    const ef::GrimSetup g = ef::grim_reaper_setup(cfg.family, cfg.grim_radius, cfg.grim_margin);
    hi = g.sigma;
    if (!quiet) {
      std::cerr << fmt::format("upper end from the Grim reaper: sigma={:.17g} (b={:.6g}, C={:.6g})\n", hi, g.b, g.C);
    }
  }
  const ef::Bracket br = ef::bisect_sigma_star(cfg.family, cfg.bisect_lo, hi, cfg.width_tol, cfg.step, cfg.tolerances);
  std::filesystem::create_directories(cfg.out_dir);
  ef::write_json(cfg.out_dir / "bracket.json", ef::bracket_json(cfg, br));
  std::cout << fmt::format("bracket [{:.17g}, {:.17g}] width {:.3g} after {} runs\n", br.lo, br.hi, br.width,
                           br.log.size());
  return 0;
}

int cmd_verify(const ef::RunConfig& cfg, const std::vector<int>& only, bool quiet) {
  const auto results = ef::run_acceptance(cfg, only, quiet ? nullptr : &std::cerr);
  ef::print_results(std::cout, results);
  const bool ok = ef::all_passed(results);
  std::cout << (ok ? "all acceptance checks passed\n" : "some acceptance checks FAILED\n");
  return ok ? 0 : kDiagnosticFailure;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forced curve-shortening flow with pinned endpoints"};
  app.require_subcommand(1);

  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "key = value configuration file");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--sigma", o.sigma, "override sigma");
    sub->add_option("--grid", o.grid, "override grid_n");
    sub->add_flag("--quiet", o.quiet, "suppress progress output");
  };

  CLI::App* run = app.add_subcommand("run", "evolve one initial curve and write its trajectory");
  add_common(run);

  CLI::App* sweep = app.add_subcommand("sweep", "classify a list of sigmas");
  add_common(sweep);
  std::string sigmas;
  sweep->add_option("--sigmas", sigmas, "comma-separated sigmas (overrides the config)");

  CLI::App* bisect = app.add_subcommand("bisect", "bracket the threshold sigma");
  add_common(bisect);
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<double> width;
  bisect->add_option("--lo", lo, "lower end (must converge to the lower equilibrium)");
  bisect->add_option("--hi", hi, "upper end (must escape); default from the Grim reaper");
  bisect->add_option("--width", width, "stopping width");

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks");
  add_common(verify);
  std::vector<int> only;
  verify->add_option("--only", only, "criterion numbers to run (default all)")->check(CLI::Range(1, 10));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  ef::RunConfig cfg;
  try {
    cfg = resolve(o);
    if (!sigmas.empty()) {
      cfg.sigmas = parse_sigmas(sigmas);
    }
    if (lo) {
      cfg.bisect_lo = *lo;
    }
    if (hi) {
      cfg.bisect_hi = *hi;
    }
    if (width) {
      cfg.width_tol = *width;
    }
    cfg.validate();
  } catch (const ef::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*run) {
      return cmd_run(cfg, o.quiet);
    }
    if (*sweep) {
      return cmd_sweep(cfg, o.quiet);
    }
    if (*bisect) {
      return cmd_bisect(cfg, o.quiet);
    }
    return cmd_verify(cfg, only, o.quiet);
  } catch (const ef::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiagnosticFailure;
  }
}
