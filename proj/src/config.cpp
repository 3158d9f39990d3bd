#include "extremalflow/config.hpp"

#include "extremalflow/errors.hpp"

#include <boost/program_options.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace extremalflow {

namespace po = boost::program_options;

namespace {

double parse_number(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) {
    ++used;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw InvalidArgument(key + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (text.find_first_not_of(" \t") == std::string::npos) {
    return out;
  }
  std::stringstream ss(text + ",");
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) {
      throw InvalidArgument("sigmas: empty list entry in '" + text + "'");
    }
    const auto e = item.find_last_not_of(" \t");
    out.push_back(parse_number(item.substr(b, e - b + 1), "sigmas"));
  }
  return out;
}

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

} // namespace

void RunConfig::validate() const {
  family.params.validate();
  if (!std::isfinite(family.sigma)) {
    throw InvalidArgument("sigma must be finite");
  }
  step.validate();
  tolerances.validate();
  for (double s : sigmas) {
    if (!std::isfinite(s)) {
      throw InvalidArgument("sigmas must be finite");
    }
  }
  if (!(width_tol > 0.0)) {
    throw InvalidArgument("width_tol must be positive");
  }
  if (bisect_hi && !(*bisect_hi > bisect_lo)) {
    throw InvalidArgument("bisect_hi must exceed bisect_lo");
  }
  if (!(grim_radius > 1.0 / family.params.A)) {
    throw InvalidArgument("grim_radius must exceed 1/A");
  }
  if (!(grim_margin > 0.0)) {
    throw InvalidArgument("grim_margin must be positive");
  }
  if (!(critical_horizon > 0.0)) {
    throw InvalidArgument("critical_horizon must be positive");
  }
  if (out_dir.empty()) {
    throw InvalidArgument("out must not be empty");
  }
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig c;
  std::string phi = std::string(to_string(c.family.phi));
  std::string scheme = std::string(to_string(c.step.scheme));
  std::string sigmas;
  std::string bisect_hi = "grim";
  std::string out = c.out_dir.string();
  int snapshot_stride = static_cast<int>(c.step.snapshot_stride);

  po::options_description desc;
  desc.add_options()
      ("A", po::value(&c.family.params.A))
      ("a", po::value(&c.family.params.a))
      ("grid_n", po::value(&c.family.params.grid_n))
      ("phi", po::value(&phi))
      ("sigma", po::value(&c.family.sigma))
      ("cfl", po::value(&c.step.cfl))
      ("scheme", po::value(&scheme))
      ("t_max", po::value(&c.step.t_max))
      ("sample_interval", po::value(&c.step.sample_interval))
      ("snapshot_stride", po::value(&snapshot_stride))
      ("slope_switch", po::value(&c.step.slope_switch))
      ("slope_return", po::value(&c.step.slope_return))
      ("converge", po::value(&c.tolerances.converge))
      ("escape_gap", po::value(&c.tolerances.escape_gap))
      ("dissipation", po::value(&c.tolerances.dissipation))
      ("sgn_tol", po::value(&c.tolerances.sgn_tol))
      ("sigmas", po::value(&sigmas))
      ("bisect_lo", po::value(&c.bisect_lo))
      ("bisect_hi", po::value(&bisect_hi))
      ("width_tol", po::value(&c.width_tol))
      ("grim_radius", po::value(&c.grim_radius))
      ("grim_margin", po::value(&c.grim_margin))
      ("critical_horizon", po::value(&c.critical_horizon))
      ("out", po::value(&out));

  try {
    po::variables_map vm;
    po::store(po::parse_config_file(in, desc, false), vm);
    po::notify(vm);
    c.family.phi = parse_phi(phi);
    c.step.scheme = parse_scheme(scheme);
    if (snapshot_stride < 0) {
      throw InvalidArgument("snapshot_stride must be non-negative");
    }
    c.step.snapshot_stride = static_cast<std::size_t>(snapshot_stride);
    if (vm.count("sigmas")) {
      c.sigmas = parse_list(sigmas);
    }
    if (bisect_hi != "grim") {
      c.bisect_hi = parse_number(bisect_hi, "bisect_hi");
    }
    c.out_dir = out;
    c.validate();
  } catch (const po::error& e) {
    throw InvalidArgument(source + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(source + ": " + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("cannot open config file '" + path.string() + "'");
  }
  return parse_config(in, path.string());
}

std::string render_config(const RunConfig& c) {
  std::ostringstream os;
  os << "A = " << number(c.family.params.A) << '\n'
     << "a = " << number(c.family.params.a) << '\n'
     << "grid_n = " << c.family.params.grid_n << '\n'
     << "phi = " << to_string(c.family.phi) << '\n'
     << "sigma = " << number(c.family.sigma) << '\n'
     << "cfl = " << number(c.step.cfl) << '\n'
     << "scheme = " << to_string(c.step.scheme) << '\n'
     << "t_max = " << number(c.step.t_max) << '\n'
     << "sample_interval = " << number(c.step.sample_interval) << '\n'
     << "snapshot_stride = " << c.step.snapshot_stride << '\n'
     << "slope_switch = " << number(c.step.slope_switch) << '\n'
     << "slope_return = " << number(c.step.slope_return) << '\n'
     << "converge = " << number(c.tolerances.converge) << '\n'
     << "escape_gap = " << number(c.tolerances.escape_gap) << '\n'
     << "dissipation = " << number(c.tolerances.dissipation) << '\n'
     << "sgn_tol = " << number(c.tolerances.sgn_tol) << '\n'
     << "sigmas = ";
  for (std::size_t i = 0; i < c.sigmas.size(); ++i) {
    os << (i ? "," : "") << number(c.sigmas[i]);
  }
  os << '\n'
     << "bisect_lo = " << number(c.bisect_lo) << '\n'
     << "bisect_hi = " << (c.bisect_hi ? number(*c.bisect_hi) : std::string("grim")) << '\n'
     << "width_tol = " << number(c.width_tol) << '\n'
     << "grim_radius = " << number(c.grim_radius) << '\n'
     << "grim_margin = " << number(c.grim_margin) << '\n'
     << "critical_horizon = " << number(c.critical_horizon) << '\n'
     << "out = " << c.out_dir.string() << '\n';
  return os.str();
}

} // namespace extremalflow
