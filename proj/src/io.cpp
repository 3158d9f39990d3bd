#include "extremalflow/io.hpp"

#include "extremalflow/errors.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace extremalflow {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw InvalidArgument("cannot write '" + path.string() + "'");
  }
  return os;
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

} // namespace

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticSample>& samples) {
  const auto old = os.precision(17);
  os << "t,chart,L,S,E,lyapunov,Z,sgn_word,kappa_dev_P,kappa_dev_Q,tangent_y_P,tangent_y_Q,dissipation,"
        "dist_lower,dist_upper,clearance\n";
  for (const DiagnosticSample& d : samples) {
    os << d.t << ',' << to_string(d.chart) << ',' << d.L << ',' << d.S << ',' << d.E << ',' << d.lyapunov << ','
       << d.Z << ',' << d.sgn << ',' << d.kappa_dev_P << ',' << d.kappa_dev_Q << ',' << d.tangent_y_P << ','
       << d.tangent_y_Q << ',' << d.dissipation << ',' << d.dist_lower << ',' << d.dist_upper << ',' << d.clearance
       << '\n';
  }
  os.precision(old);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  const auto old = os.precision(17);
  os << "sigma,category,t_event,final_sgn,blowup\n";
  for (const SweepRow& r : rows) {
    os << r.sigma << ',' << to_string(r.category) << ',' << r.t_event << ',' << r.final_sgn << ','
       << (r.blowup ? "true" : "false") << '\n';
  }
  os.precision(old);
}

std::vector<std::string> write_trajectory(const Trajectory& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < t.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshots_%04zu.csv", i);
    std::ofstream os = open_out(dir / name);
    write_csv(os, t.snapshots[i].curve);
    names.emplace_back(name);
  }
  std::ofstream os = open_out(dir / "diagnostics.csv");
  write_diagnostics_csv(os, t.diagnostics);
  return names;
}

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["A"] = c.family.params.A;
  j["a"] = c.family.params.a;
  j["grid_n"] = c.family.params.grid_n;
  j["phi"] = to_string(c.family.phi);
  j["sigma"] = c.family.sigma;
  j["cfl"] = c.step.cfl;
  j["scheme"] = to_string(c.step.scheme);
  j["t_max"] = c.step.t_max;
  j["sample_interval"] = c.step.sample_interval;
  j["tolerances"] = {{"converge", c.tolerances.converge},
                     {"escape_gap", c.tolerances.escape_gap},
                     {"dissipation", c.tolerances.dissipation},
                     {"sgn_tol", c.tolerances.sgn_tol}};
  return j;
}

nlohmann::json summary_json(const RunConfig& c, const Classification& result,
                            const std::vector<std::string>& snapshot_files) {
  const Trajectory& t = result.trajectory;
  nlohmann::json j;
  j["config"] = config_json(c);
  j["sigma"] = result.sigma;
  j["category"] = to_string(result.category);
  j["undetermined"] = result.category == Category::Undetermined;
  j["blowup"] = result.blowup;
  j["event"] = {{"kind", to_string(t.event.kind)}, {"t", t.event.t}};
  j["final_sgn"] = result.final_sgn;
  if (!t.diagnostics.empty()) {
    const DiagnosticSample& d = t.diagnostics.back();
    j["final"] = {{"t", d.t},
                  {"chart", to_string(d.chart)},
                  {"dist_lower", number_or_null(d.dist_lower)},
                  {"dist_upper", number_or_null(d.dist_upper)},
                  {"L", number_or_null(d.L)},
                  {"E", number_or_null(d.E)},
                  {"Z", d.Z},
                  {"sgn_word", d.sgn}};
  }
  j["steps"] = t.steps;
  j["chart_switches"] = t.chart_switches;
  nlohmann::json snaps = nlohmann::json::array();
  for (std::size_t i = 0; i < t.snapshots.size() && i < snapshot_files.size(); ++i) {
    snaps.push_back({{"file", snapshot_files[i]}, {"t", t.snapshots[i].t}, {"chart", to_string(t.snapshots[i].chart)}});
  }
  j["snapshots"] = snaps;
  return j;
}

nlohmann::json bracket_json(const RunConfig& c, const Bracket& b) {
  nlohmann::json j;
  j["lo"] = b.lo;
  j["hi"] = b.hi;
  j["width"] = b.width;
  j["midpoint"] = b.midpoint();
  j["grid_n"] = c.family.params.grid_n;
  j["config"] = config_json(c);
  j["tolerances"] = {{"width_tol", c.width_tol},
                     {"converge", c.tolerances.converge},
                     {"escape_gap", c.tolerances.escape_gap},
                     {"dissipation", c.tolerances.dissipation},
                     {"sgn_tol", c.tolerances.sgn_tol}};
  nlohmann::json log = nlohmann::json::array();
  for (const BisectionStep& s : b.log) {
    log.push_back({{"iteration", s.iteration},
                   {"sigma", s.sigma},
                   {"category", to_string(s.category)},
                   {"final_sgn", s.final_sgn},
                   {"side", to_string(s.side)},
                   {"voted", s.voted},
                   {"t_event", s.t_event},
                   {"lo", s.lo},
                   {"hi", s.hi}});
  }
  j["log"] = log;
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os = open_out(path);
  os << j.dump(2) << '\n';
}

} // namespace extremalflow
