#include "accflow/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/program_options.hpp>

#include "accflow/errors.hpp"

namespace acc {

namespace po = boost::program_options;

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::zonal: return "zonal";
    case RunMode::evolve: return "evolve";
    case RunMode::stability: return "stability";
    case RunMode::spectrum: return "spectrum";
  }
  return "?";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "zonal") return RunMode::zonal;
  if (s == "evolve") return RunMode::evolve;
  if (s == "stability") return RunMode::stability;
  if (s == "spectrum") return RunMode::spectrum;
  throw ValidationError("mode must be one of zonal, evolve, stability, spectrum (got '" + s + "')");
}

void RunSpec::validate() const {
  if (!mode) throw ValidationError("mode is required (zonal, evolve, stability or spectrum)");
  config.validate();
  if (n_rho < 8 || n_phi < 8) throw ValidationError("grid.n_rho and grid.n_phi must be at least 8");
  if (profile_points < 8) throw ValidationError("grid.profile_points must be at least 8");
  const bool timed = *mode == RunMode::evolve || *mode == RunMode::stability;
  if (dt && !(*dt > 0.0) && timed) throw ValidationError("run.dt must be positive");
  if (dt && !std::isfinite(*dt)) throw ValidationError("run.dt must be finite");
  if (!(cfl > 0.0 && cfl <= 0.8)) throw ValidationError("run.cfl must lie in (0, 0.8]");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("run.t_end must be finite and >= 0");
  if (output_stride < 1) throw ValidationError("run.output_stride must be at least 1");
  if (sl_terms < 1) throw ValidationError("run.sl_terms must be at least 1");
  if (n_eigen < 1) throw ValidationError("run.n_eigen must be at least 1");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ValidationError("run.amplitude must be >= 0");
  if (wavenumber < 1) throw ValidationError("run.wavenumber must be at least 1");
  if (!(drift_tolerance > 0.0)) throw ValidationError("run.drift_tolerance must be positive");
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    throw ValidationError(key + ": expected a number, got '" + raw + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    throw ValidationError(key + ": expected an integer, got '" + raw + "'");
  return x;
}

int to_int(const std::string& key, const std::string& raw) {
  const long long x = to_integer(key, raw);
  if (x < -2147483647LL || x > 2147483647LL) throw ValidationError(key + ": value out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(key + ": expected true or false, got '" + raw + "'");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// First line (1-based) whose key matches `name` inside `section`; 0 if none.
int line_of(const std::string& text, const std::string& dotted) {
  const auto dot = dotted.find('.');
  const std::string section = dot == std::string::npos ? "" : dotted.substr(0, dot);
  const std::string name = dot == std::string::npos ? dotted : dotted.substr(dot + 1);
  std::istringstream in(text);
  std::string line, current;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line.substr(0, line.find('#')));
    if (t.size() > 2 && t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos && current == section && trim(t.substr(0, eq)) == name) return n;
  }
  return 0;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "band.theta1_deg", "band.theta2_deg", "band.psi1",       "band.psi2",          "band.omega",
      "band.lambda",     "band.upsilon",    "band.u_scale",    "grid.n_rho",         "grid.n_phi",
      "grid.profile_points", "run.mode",    "run.method",      "run.dt",             "run.cfl",
      "run.t_end",       "run.output_stride", "run.sl_terms",  "run.n_eigen",        "run.amplitude",
      "run.wavenumber",  "run.seed",        "run.drift_tolerance", "run.write_checkpoints", "run.output_dir",
  };
  return keys;
}

void set_config_value(RunSpec& s, const std::string& key, const std::string& value) {
  auto& c = s.config;
  if (key == "band.theta1_deg") c.theta1 = deg_to_rad(to_double(key, value));
  else if (key == "band.theta2_deg") c.theta2 = deg_to_rad(to_double(key, value));
  else if (key == "band.psi1") c.psi1 = to_double(key, value);
  else if (key == "band.psi2") c.psi2 = to_double(key, value);
  else if (key == "band.omega") c.omega = to_double(key, value);
  else if (key == "band.lambda") c.lambda = to_double(key, value);
  else if (key == "band.upsilon") c.upsilon = to_double(key, value);
  else if (key == "band.u_scale") c.u_scale = to_double(key, value);
  else if (key == "grid.n_rho") s.n_rho = to_int(key, value);
  else if (key == "grid.n_phi") s.n_phi = to_int(key, value);
  else if (key == "grid.profile_points") s.profile_points = to_int(key, value);
  else if (key == "run.mode") s.mode = run_mode_from_string(trim(value));
  else if (key == "run.method") s.method = zonal_method_from_string(trim(value));
  else if (key == "run.dt") {
    if (trim(value) == "auto") s.dt.reset();
    else s.dt = to_double(key, value);
  } else if (key == "run.cfl") s.cfl = to_double(key, value);
  else if (key == "run.t_end") s.t_end = to_double(key, value);
  else if (key == "run.output_stride") s.output_stride = to_int(key, value);
  else if (key == "run.sl_terms") s.sl_terms = to_int(key, value);
  else if (key == "run.n_eigen") s.n_eigen = to_int(key, value);
  else if (key == "run.amplitude") s.amplitude = to_double(key, value);
  else if (key == "run.wavenumber") s.wavenumber = to_int(key, value);
  else if (key == "run.seed") {
    const long long x = to_integer(key, value);
    if (x < 0) throw ValidationError(key + ": seed must be non-negative");
    s.seed = static_cast<std::uint64_t>(x);
  } else if (key == "run.drift_tolerance") s.drift_tolerance = to_double(key, value);
  else if (key == "run.write_checkpoints") s.write_checkpoints = to_bool(key, value);
  else if (key == "run.output_dir") s.output_dir = trim(value);
  else throw ParseError("unknown key '" + key + "'");
}

RunSpec parse_config_text(const std::string& text, RunSpec base) {
  po::options_description desc;
  for (const auto& k : config_keys()) desc.add_options()(k.c_str(), po::value<std::string>());
  std::istringstream in(text);
  po::parsed_options parsed(&desc);
  try {
    parsed = po::parse_config_file(in, desc, false);
  } catch (const po::unknown_option& e) {
    const int line = line_of(text, e.get_option_name());
    throw ParseError("unknown key '" + e.get_option_name() + "'" +
                         (line ? " on line " + std::to_string(line) : std::string()),
                     line);
  } catch (const po::error& e) {
    throw ParseError(std::string("config syntax: ") + e.what());
  }
  std::vector<std::string> seen;
  for (const auto& opt : parsed.options) {
    const int line = line_of(text, opt.string_key);
    if (std::find(seen.begin(), seen.end(), opt.string_key) != seen.end())
      throw ParseError("key '" + opt.string_key + "' given twice (line " + std::to_string(line) + ")", line);
    seen.push_back(opt.string_key);
    try {
      set_config_value(base, opt.string_key, opt.value.empty() ? std::string() : opt.value.front());
    } catch (const ValidationError& e) {
      throw ParseError(std::string(e.what()) + " (line " + std::to_string(line) + ")", line);
    }
  }
  return base;
}

RunSpec parse_config_file(const std::filesystem::path& path, RunSpec base) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config_text(ss.str(), std::move(base));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::string to_config_text(const RunSpec& s) {
  std::ostringstream o;
  const auto& c = s.config;
  o << "[band]\n"
    << "theta1_deg = " << fmt17(rad_to_deg(c.theta1)) << "\n"
    << "theta2_deg = " << fmt17(rad_to_deg(c.theta2)) << "\n"
    << "psi1 = " << fmt17(c.psi1) << "\n"
    << "psi2 = " << fmt17(c.psi2) << "\n"
    << "omega = " << fmt17(c.omega) << "\n"
    << "lambda = " << fmt17(c.lambda) << "\n"
    << "upsilon = " << fmt17(c.upsilon) << "\n"
    << "u_scale = " << fmt17(c.u_scale) << "\n\n"
    << "[grid]\n"
    << "n_rho = " << s.n_rho << "\n"
    << "n_phi = " << s.n_phi << "\n"
    << "profile_points = " << s.profile_points << "\n\n"
    << "[run]\n";
  if (s.mode) o << "mode = " << to_string(*s.mode) << "\n";
  o << "method = " << to_string(s.method) << "\n"
    << "dt = " << (s.dt ? fmt17(*s.dt) : std::string("auto")) << "\n"
    << "cfl = " << fmt17(s.cfl) << "\n"
    << "t_end = " << fmt17(s.t_end) << "\n"
    << "output_stride = " << s.output_stride << "\n"
    << "sl_terms = " << s.sl_terms << "\n"
    << "n_eigen = " << s.n_eigen << "\n"
    << "amplitude = " << fmt17(s.amplitude) << "\n"
    << "wavenumber = " << s.wavenumber << "\n"
    << "seed = " << s.seed << "\n"
    << "drift_tolerance = " << fmt17(s.drift_tolerance) << "\n"
    << "write_checkpoints = " << (s.write_checkpoints ? "true" : "false") << "\n"
    << "output_dir = " << s.output_dir.string() << "\n";
  return o.str();
}

}  // namespace acc
