#include "binmat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "binmat/errors.hpp"

namespace binmat {

namespace {

// Reads the next non-comment, non-blank line; returns false at EOF.
bool next_data_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    return true;
  }
  return false;
}

std::vector<long long> parse_integers(const std::string& line, int line_no) {
  std::istringstream ss(line);
  std::vector<long long> out;
  long long v;
  while (ss >> v) out.push_back(v);
  ss.clear();
  std::string tail;
  if (ss >> tail)
    throw parse_error("expected integers, found '" + tail + "'", line_no);
  return out;
}

int checked_int(long long v, const char* what, int line_no) {
  if (v < 0 || v > std::numeric_limits<int>::max())
    throw parse_error(std::string(what) + " out of range", line_no);
  return static_cast<int>(v);
}

}  // namespace

MarginPair read_margins(std::istream& in) {
  std::string line;
  int line_no = 0;

  if (!next_data_line(in, line, line_no))
    throw parse_error("missing dimensions line", line_no + 1);
  const auto dims = parse_integers(line, line_no);
  if (dims.size() != 2)
    throw parse_error("dimensions line must be 'm n'", line_no);
  const int m = checked_int(dims[0], "row count", line_no);
  const int n = checked_int(dims[1], "column count", line_no);
  if (m < 1 || n < 1) throw parse_error("dimensions must be positive", line_no);

  if (!next_data_line(in, line, line_no))
    throw parse_error("missing row sums line", line_no + 1);
  const auto rvals = parse_integers(line, line_no);
  if (static_cast<int>(rvals.size()) != m)
    throw parse_error("expected " + std::to_string(m) + " row sums", line_no);

  if (!next_data_line(in, line, line_no))
    throw parse_error("missing column sums line", line_no + 1);
  const auto cvals = parse_integers(line, line_no);
  if (static_cast<int>(cvals.size()) != n)
    throw parse_error("expected " + std::to_string(n) + " column sums", line_no);

  MarginPair mp;
  mp.row_sums.reserve(m);
  mp.col_sums.reserve(n);
  for (long long v : rvals) mp.row_sums.push_back(checked_int(v, "row sum", line_no));
  for (long long v : cvals) mp.col_sums.push_back(checked_int(v, "column sum", line_no));
  return mp;
}

MarginPair read_margins_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open margins file: " + path);
  return read_margins(in);
}

StructuralZeroMask read_mask(std::istream& in, int m, int n) {
  std::string line;
  int line_no = 0;
  std::vector<std::pair<int, int>> positions;
  while (next_data_line(in, line, line_no)) {
    const auto vals = parse_integers(line, line_no);
    if (vals.size() != 2)
      throw parse_error("expected 'row col' pair", line_no);
    const int i = checked_int(vals[0], "row index", line_no);
    const int j = checked_int(vals[1], "column index", line_no);
    if (i < 1 || i > m || j < 1 || j > n)
      throw parse_error("structural zero outside the matrix", line_no);
    positions.emplace_back(i - 1, j - 1);
  }
  return StructuralZeroMask::from_positions(m, n, positions);
}

StructuralZeroMask read_mask_file(const std::string& path, int m, int n) {
  std::ifstream in(path);
  if (!in) throw error("cannot open mask file: " + path);
  return read_mask(in, m, n);
}

void write_matrix(std::ostream& out, const BinaryMatrix& z) {
  for (int i = 0; i < z.m; ++i) {
    for (int j = 0; j < z.n; ++j) {
      if (j) out << ' ';
      out << static_cast<int>(z.at(i, j));
    }
    out << '\n';
  }
}

BinaryMatrix read_matrix(std::istream& in, int m, int n) {
  BinaryMatrix z(m, n);
  std::string line;
  int line_no = 0;
  for (int i = 0; i < m; ++i) {
    if (!next_data_line(in, line, line_no))
      throw parse_error("missing matrix row", line_no + 1);
    const auto vals = parse_integers(line, line_no);
    if (static_cast<int>(vals.size()) != n)
      throw parse_error("expected " + std::to_string(n) + " entries", line_no);
    for (int j = 0; j < n; ++j) {
      if (vals[j] != 0 && vals[j] != 1)
        throw parse_error("matrix entries must be 0 or 1", line_no);
      z.set(i, j, static_cast<std::uint8_t>(vals[j]));
    }
  }
  return z;
}

std::uint64_t margins_hash(const MarginPair& mp) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::int64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= static_cast<std::uint64_t>(v >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  mix(mp.rows());
  mix(mp.cols());
  for (int v : mp.row_sums) mix(v);
  for (int v : mp.col_sums) mix(v);
  return h;
}

std::string format_log_value(double natural_log, int significant_digits) {
  if (natural_log == -std::numeric_limits<double>::infinity()) return "0";
  const double log10_v = natural_log / std::numbers::ln10;
  double expo = std::floor(log10_v);
  double mantissa = std::pow(10.0, log10_v - expo);
  if (mantissa >= 10.0) {  // guard against floor/pow rounding at the seam
    mantissa /= 10.0;
    expo += 1.0;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*fe%lld", significant_digits - 1, mantissa,
                static_cast<long long>(expo));
  if (buf[0] == '1' && buf[1] == '0') {  // rounding pushed the mantissa to 10
    std::snprintf(buf, sizeof buf, "%.*fe%lld", significant_digits - 1,
                  mantissa / 10.0, static_cast<long long>(expo + 1.0));
  }
  return buf;
}

}  // namespace binmat
