#include "accflow/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "accflow/errors.hpp"

namespace acc {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, const fs::path& path, int line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    // from_chars rejects "inf"/"nan" spellings produced by printf on some
    // platforms; fall back to strtod for those.
    const std::string tmp(s);
    char* end = nullptr;
    v = std::strtod(tmp.c_str(), &end);
    if (tmp.empty() || end != tmp.c_str() + tmp.size())
      throw ParseError(path.string() + ": bad number '" + tmp + "' on line " + std::to_string(line), line);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto k = s.find(sep, start);
    out.push_back(s.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start));
    if (k == std::string_view::npos) break;
    start = k + 1;
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ValidationError("CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::values(const std::string& name) const {
  const auto c = column(name);
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r[c]);
  return v;
}

void write_csv(const fs::path& path, const CsvTable& table) {
  auto f = open_out(path);
  for (std::size_t k = 0; k < table.header.size(); ++k) f << (k ? "," : "") << table.header[k];
  f << '\n';
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw ValidationError("CSV row width differs from header");
    for (std::size_t k = 0; k < r.size(); ++k) f << (k ? "," : "") << fmt17(r[k]);
    f << '\n';
  }
  if (!f) throw IoError("write failed for " + path.string());
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  int n = 0;
  while (std::getline(f, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (t.header.empty()) {
      for (auto p : parts) t.header.emplace_back(p);
      continue;
    }
    if (parts.size() != t.header.size())
      throw ParseError(path.string() + ": line " + std::to_string(n) + " has " + std::to_string(parts.size()) +
                           " fields, expected " + std::to_string(t.header.size()),
                       n);
    std::vector<double> row;
    row.reserve(parts.size());
    for (auto p : parts) row.push_back(parse_double(p, path, n));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ParseError(path.string() + ": empty CSV", 0);
  return t;
}

CsvTable profile_table(const ZonalProfile& p) {
  CsvTable t;
  t.header = {"theta_deg", "psi", "u_nondim", "u_m_per_s"};
  const bool have_u = p.u.size() == p.thetas.size() && p.u_dimensional.size() == p.thetas.size();
  if (!have_u) throw ValidationError("profile has no velocity; call velocity_profile first");
  for (std::size_t k = 0; k < p.thetas.size(); ++k)
    t.rows.push_back({rad_to_deg(p.thetas[k]), p.psi[k], p.u[k], p.u_dimensional[k]});
  return t;
}

CsvWriter::CsvWriter(const fs::path& path, std::vector<std::string> header)
    : width_(header.size()), path_(path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  f_ = std::fopen(path.string().c_str(), "wb");
  if (!f_) throw IoError("cannot open " + path.string() + " for writing");
  for (std::size_t k = 0; k < header.size(); ++k) std::fprintf(f_, "%s%s", k ? "," : "", header[k].c_str());
  std::fputc('\n', f_);
  std::fflush(f_);
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw ValidationError("CSV row width differs from header");
  for (std::size_t k = 0; k < values.size(); ++k) std::fprintf(f_, "%s%.17g", k ? "," : "", values[k]);
  std::fputc('\n', f_);
  if (std::fflush(f_) != 0) throw IoError("write failed for " + path_.string());
}

std::vector<std::string> diagnostics_header() {
  return {"t", "energy", "circ1", "circ2", "casimir2", "casimir3", "stability_identity", "max_xi", "lambda_circ"};
}

std::vector<double> diagnostics_row(const DiagnosticRecord& r) {
  return {r.t, r.energy, r.circ1, r.circ2, r.casimirs.at("s^2"), r.casimirs.at("s^3"), r.stability_identity,
          r.max_xi, r.lambda_circ};
}

Checkpoint make_checkpoint(const SimState& s) {
  Checkpoint c;
  c.n_rho = s.grid.n_rho();
  c.n_phi = s.grid.n_phi();
  c.theta1 = s.config.theta1;
  c.theta2 = s.config.theta2;
  c.omega = s.config.omega;
  c.t = s.t;
  c.lambda_circ = s.lambda_circ;
  c.zeta = s.zeta;
  return c;
}

void write_checkpoint(const fs::path& path, const Checkpoint& c) {
  if (c.zeta.n_rho() != c.n_rho || c.zeta.n_phi() != c.n_phi)
    throw ValidationError("checkpoint header disagrees with the field shape");
  nlohmann::ordered_json h;
  h["n_rho"] = c.n_rho;
  h["n_phi"] = c.n_phi;
  h["theta1"] = c.theta1;
  h["theta2"] = c.theta2;
  h["omega"] = c.omega;
  h["t"] = c.t;
  h["lambda_circ"] = c.lambda_circ;
  auto f = open_out(path);
  f << h.dump() << '\n';
  for (int i = 0; i < c.n_rho; ++i) {
    const double* row = c.zeta.row(i);
    for (int j = 0; j < c.n_phi; ++j) f << (j ? " " : "") << fmt17(row[j]);
    f << '\n';
  }
  if (!f) throw IoError("write failed for " + path.string());
}

Checkpoint read_checkpoint(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw ParseError(path.string() + ": missing header", 1);
  Checkpoint c;
  try {
    const auto h = nlohmann::json::parse(line);
    c.n_rho = h.at("n_rho").get<int>();
    c.n_phi = h.at("n_phi").get<int>();
    c.theta1 = h.at("theta1").get<double>();
    c.theta2 = h.at("theta2").get<double>();
    c.omega = h.at("omega").get<double>();
    c.t = h.at("t").get<double>();
    c.lambda_circ = h.at("lambda_circ").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": bad checkpoint header: " + e.what(), 1);
  }
  if (c.n_rho < 1 || c.n_phi < 1) throw ParseError(path.string() + ": bad field shape", 1);
  c.zeta = ScalarField(c.n_rho, c.n_phi);
  for (int i = 0; i < c.n_rho; ++i) {
    if (!std::getline(f, line)) throw ParseError(path.string() + ": truncated field", i + 2);
    std::istringstream ls(line);
    std::string tok;
    int j = 0;
    while (ls >> tok) {
      if (j >= c.n_phi) throw ParseError(path.string() + ": too many values", i + 2);
      c.zeta(i, j++) = parse_double(tok, path, i + 2);
    }
    if (j != c.n_phi) throw ParseError(path.string() + ": too few values", i + 2);
  }
  return c;
}

void write_line_plot_svg(const fs::path& path, const std::vector<SvgSeries>& series, const std::string& title,
                         const std::string& x_label, const std::string& y_label) {
  if (series.empty()) throw ValidationError("SVG plot needs at least one series");
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.size() < 2) throw ValidationError("SVG series needs matching x, y samples");
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (y1 - y0 < 1e-300) y0 -= 1.0, y1 += 1.0;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 55;
  const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
    << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  char buf[64];
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5.0, yv = y0 + (y1 - y0) * k / 5.0;
    std::snprintf(buf, sizeof buf, "%.4g", xv);
    o << "<line x1=\"" << px(xv) << "\" y1=\"" << H - B << "\" x2=\"" << px(xv) << "\" y2=\"" << H - B + 5
      << "\" stroke=\"black\"/><text x=\"" << px(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
      << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.4g", yv);
    o << "<line x1=\"" << L - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << L << "\" y2=\"" << py(yv)
      << "\" stroke=\"black\"/><text x=\"" << L - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << buf
      << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xml_escape(x_label)
    << "</text>\n";
  o << "<text transform=\"translate(16," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << xml_escape(y_label) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* c = colors[s % 4];
    o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series[s].x.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(series[s].x[k]), py(series[s].y[k]));
      o << buf;
    }
    o << "\"/>\n";
    if (!series[s].label.empty())
      o << "<text x=\"" << W - R - 5 << "\" y=\"" << T + 15 * (s + 1) << "\" text-anchor=\"end\" fill=\"" << c
        << "\">" << xml_escape(series[s].label) << "</text>\n";
  }
  o << "</svg>\n";
  write_text(path, o.str());
}

void write_text(const fs::path& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
  if (!f) throw IoError("write failed for " + path.string());
}

}  // namespace acc
