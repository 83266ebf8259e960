#include "qflow/io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "qflow/errors.hpp"

namespace qflow {

namespace {

constexpr const char* kMagic = "QFLOW1";

void byteswap_doubles(std::vector<double>& v) {
  for (double& d : v) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    bits = ((bits & 0x00000000000000ffULL) << 56) |
           ((bits & 0x000000000000ff00ULL) << 40) |
           ((bits & 0x0000000000ff0000ULL) << 24) |
           ((bits & 0x00000000ff000000ULL) << 8) |
           ((bits & 0x000000ff00000000ULL) >> 8) |
           ((bits & 0x0000ff0000000000ULL) >> 24) |
           ((bits & 0x00ff000000000000ULL) >> 40) |
           ((bits & 0xff00000000000000ULL) >> 56);
    std::memcpy(&d, &bits, sizeof bits);
  }
}

std::string header_line(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(path + ": truncated snapshot header");
  }
  return line;
}

void expect_line(std::istream& in, const std::string& want,
                 const std::string& path) {
  const std::string got = header_line(in, path);
  if (got != want) {
    throw ConfigError(path + ": expected header line \"" + want +
                      "\", got \"" + got + "\"");
  }
}

long parse_header_long(const std::string& line, const std::string& key,
                       const std::string& path) {
  const std::string prefix = key + " ";
  if (line.rfind(prefix, 0) != 0) {
    throw ConfigError(path + ": expected \"" + key + " ...\" header line, got \"" +
                      line + "\"");
  }
  char* end = nullptr;
  const long v = std::strtol(line.c_str() + prefix.size(), &end, 10);
  if (end == nullptr || *end != '\0') {
    throw ConfigError(path + ": bad integer in header line \"" + line + "\"");
  }
  return v;
}

double parse_header_double(const std::string& line, const std::string& key,
                           const std::string& path) {
  const std::string prefix = key + " ";
  if (line.rfind(prefix, 0) != 0) {
    throw ConfigError(path + ": expected \"" + key + " ...\" header line, got \"" +
                      line + "\"");
  }
  char* end = nullptr;
  const double v = std::strtod(line.c_str() + prefix.size(), &end);
  if (end == nullptr || *end != '\0') {
    throw ConfigError(path + ": bad number in header line \"" + line + "\"");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot(const std::string& path, const FieldState& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open " + path + " for writing");
  }
  out << kMagic << "\n";
  out << "dim " << field.geom.dim << "\n";
  out << "n " << field.geom.N << "\n";
  out << "h " << format_double(field.geom.h()) << "\n";
  out << "t " << format_double(field.time) << "\n";
  out << "components 5\n";
  out << "layout row-major\n";
  out << "endian little\n";
  for (int c = 0; c < 5; ++c) {
    std::vector<double> data = field.comp[c];
    if constexpr (std::endian::native == std::endian::big) {
      byteswap_doubles(data);
    }
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
  }
  if (!out) {
    throw ConfigError("write failed for " + path);
  }
}

FieldState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open " + path);
  }
  expect_line(in, kMagic, path);
  const long dim = parse_header_long(header_line(in, path), "dim", path);
  const long n = parse_header_long(header_line(in, path), "n", path);
  const double h = parse_header_double(header_line(in, path), "h", path);
  const double t = parse_header_double(header_line(in, path), "t", path);
  const long comps = parse_header_long(header_line(in, path), "components", path);
  expect_line(in, "layout row-major", path);
  expect_line(in, "endian little", path);
  if (dim != 2 && dim != 3) {
    throw ConfigError(path + ": dim must be 2 or 3");
  }
  if (n < 4 || n % 2 != 0) {
    throw ConfigError(path + ": grid size must be even and at least 4");
  }
  if (comps != 5) {
    throw ConfigError(path + ": expected 5 components");
  }
  const double expected_h = 2.0 / static_cast<double>(n);
  if (std::abs(h - expected_h) > 1e-15 * expected_h) {
    throw ConfigError(path + ": header spacing disagrees with grid size");
  }

  FieldState field = make_field(make_grid(static_cast<int>(dim), static_cast<int>(n)));
  field.time = t;
  const std::size_t nodes = field.geom.size();
  for (int c = 0; c < 5; ++c) {
    field.comp[c].assign(nodes, 0.0);
    in.read(reinterpret_cast<char*>(field.comp[c].data()),
            static_cast<std::streamsize>(nodes * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != nodes * sizeof(double)) {
      throw ConfigError(path + ": truncated component payload");
    }
    if constexpr (std::endian::native == std::endian::big) {
      byteswap_doubles(field.comp[c]);
    }
  }
  char extra;
  if (in.read(&extra, 1), in.gcount() != 0) {
    throw ConfigError(path + ": trailing bytes after payload");
  }
  return field;
}

SeriesWriter::SeriesWriter(const std::string& path) : out_(path) {
  if (!out_) {
    throw ConfigError("cannot open " + path + " for writing");
  }
  out_ << "t,energy,r_star,qnorm_origin_sq,planarity_residual,max_abs_q\n";
}

void SeriesWriter::row(const SeriesRow& r) {
  out_ << format_double(r.t) << ',' << format_double(r.energy) << ','
       << format_double(r.r_star) << ',' << format_double(r.qnorm_origin_sq)
       << ',' << format_double(r.planarity_residual) << ','
       << format_double(r.max_abs_q) << '\n';
  if (!out_) {
    throw ConfigError("series write failed");
  }
}

std::vector<SeriesRow> read_series(const std::string& path) {
  CsvTable table = read_csv(path);
  const std::vector<std::string> want = {"t",
                                         "energy",
                                         "r_star",
                                         "qnorm_origin_sq",
                                         "planarity_residual",
                                         "max_abs_q"};
  if (table.header != want) {
    throw ConfigError(path + ": unexpected series header");
  }
  std::vector<SeriesRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    rows.push_back({r[0], r[1], r[2], r[3], r[4], r[5]});
  }
  return rows;
}

namespace {

template <typename Row>
void write_profile_csv(const std::string& path, const std::string& header,
                       std::size_t count, Row&& row) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open " + path + " for writing");
  }
  out << header << "\n";
  for (std::size_t j = 0; j < count; ++j) {
    out << row(j) << "\n";
  }
  if (!out) {
    throw ConfigError("write failed for " + path);
  }
}

}  // namespace

void write_profile(const std::string& path, const HedgehogProfile& prof) {
  write_profile_csv(path, "r,h", prof.h.size(), [&](std::size_t j) {
    return format_double(prof.mesh.r(static_cast<int>(j))) + "," +
           format_double(prof.h[j]);
  });
}

void write_profile(const std::string& path, const UVProfile& prof) {
  write_profile_csv(path, "r,u,v", prof.u.size(), [&](std::size_t j) {
    return format_double(prof.mesh.r(static_cast<int>(j))) + "," +
           format_double(prof.u[j]) + "," + format_double(prof.v[j]);
  });
}

void write_profile(const std::string& path, const ScalarDiscProfile& prof) {
  write_profile_csv(path, "r,s", prof.s.size(), [&](std::size_t j) {
    return format_double(prof.mesh.r(static_cast<int>(j))) + "," +
           format_double(prof.s[j]);
  });
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + path);
  }
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(path + ": empty file");
  }
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) {
    table.header.push_back(cell);
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw ConfigError(path + " line " + std::to_string(lineno) +
                          ": bad number \"" + cell + "\"");
      }
      row.push_back(v);
    }
    if (row.size() != table.header.size()) {
      throw ConfigError(path + " line " + std::to_string(lineno) +
                        ": expected " + std::to_string(table.header.size()) +
                        " columns, got " + std::to_string(row.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace qflow
