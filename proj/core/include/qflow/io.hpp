#pragma once
#include <fstream>
#include <string>
#include <vector>

#include "qflow/grid.hpp"
#include "qflow/radial.hpp"

namespace qflow {

/// One diagnostic row of a run's time series.
struct SeriesRow {
  double t = 0;
  double energy = 0;
  double r_star = 0;
  double qnorm_origin_sq = 0;
  double planarity_residual = 0;
  double max_abs_q = 0;
};

/// Field snapshot: a text header (magic QFLOW1, then dim, n, h, t,
/// components, layout, endian lines) followed by the five component arrays
/// back to back as little-endian 64-bit floats in flattened node order.
/// The write/read pair is lossless.
void write_snapshot(const std::string& path, const FieldState& field);
FieldState read_snapshot(const std::string& path);

/// CSV writer for the diagnostic series. Values are printed with 17
/// significant digits, so doubles survive a write/read cycle exactly.
class SeriesWriter {
 public:
  explicit SeriesWriter(const std::string& path);
  void row(const SeriesRow& r);

 private:
  std::ofstream out_;
};

/// Reads a series file written by SeriesWriter. Throws ConfigError on a
/// missing file, an unexpected header, or a malformed row.
std::vector<SeriesRow> read_series(const std::string& path);

/// Radial profile CSVs: columns r,h / r,u,v / r,s with 17-digit values.
void write_profile(const std::string& path, const HedgehogProfile& prof);
void write_profile(const std::string& path, const UVProfile& prof);
void write_profile(const std::string& path, const ScalarDiscProfile& prof);

/// A numeric CSV with one header line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);

/// %.17g rendering used by every CSV and report writer.
std::string format_double(double v);

}  // namespace qflow
