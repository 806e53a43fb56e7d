#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "accflow/diagnostics.hpp"
#include "accflow/euler2d.hpp"
#include "accflow/zonal.hpp"

namespace acc {

/// A numeric table with named columns.
///
/// Values are written with 17 significant digits, so a write/read cycle
/// reproduces every double exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws ValidationError if absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// theta_deg,psi,u_nondim,u_m_per_s
CsvTable profile_table(const ZonalProfile& profile);

/// Streams rows as they are produced and flushes each one, so a run that
/// fails part way leaves every completed row on disk.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);

private:
  std::FILE* f_ = nullptr;
  std::size_t width_ = 0;
  std::filesystem::path path_;
};

/// Column names of the diagnostics time series.
std::vector<std::string> diagnostics_header();
std::vector<double> diagnostics_row(const DiagnosticRecord& r);

/// Field dump.
///
/// Line 1 is a JSON object with n_rho, n_phi, theta1, theta2, omega, t and
/// lambda_circ (angles in radians). Then n_rho lines follow, each with n_phi
/// whitespace-separated zeta values in row-major (rho-major) order, printed
/// with 17 significant digits.
struct Checkpoint {
  int n_rho = 0;
  int n_phi = 0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double omega = 0.0;
  double t = 0.0;
  double lambda_circ = 0.0;
  ScalarField zeta;
};

Checkpoint make_checkpoint(const SimState& s);
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// One curve of a line plot.
struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
};

/// Minimal standalone SVG line plot with axes, ticks and labels.
void write_line_plot_svg(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label);

/// Writes text to a file, replacing it.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace acc
