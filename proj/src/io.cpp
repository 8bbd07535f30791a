#include "rectiscope/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rectiscope/error.hpp"

namespace rectiscope {

static_assert(std::endian::native == std::endian::little, "binary I/O assumes a little-endian host");

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_field(const std::string& raw, std::size_t row, std::size_t line, std::size_t column) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != last) {
    throw InputError("malformed CSV row " + std::to_string(row) + " (line " + std::to_string(line) + "): column " +
                     std::to_string(column) + " value '" + s + "' is not a number");
  }
  return v;
}

}  // namespace

DiscreteMeasure read_csv(std::istream& in, int intrinsic_dim) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV input: missing header");
  const auto header = split_commas(line);
  if (header.size() < 2 || trim(header.back()) != "weight") {
    throw InputError("CSV header must be x0,...,x{m-1},weight");
  }
  const std::size_t m = header.size() - 1;
  for (std::size_t d = 0; d < m; ++d) {
    if (trim(header[d]) != "x" + std::to_string(d)) {
      throw InputError("CSV header column " + std::to_string(d) + " must be 'x" + std::to_string(d) + "'");
    }
  }
  std::vector<double> coords;
  std::vector<double> weights;
  std::size_t line_no = 1;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line) == "\r") continue;
    ++row;
    const auto fields = split_commas(line);
    if (fields.size() != m + 1) {
      throw InputError("malformed CSV row " + std::to_string(row) + " (line " + std::to_string(line_no) +
                       "): expected " + std::to_string(m + 1) + " fields, got " + std::to_string(fields.size()));
    }
    for (std::size_t d = 0; d < m; ++d) coords.push_back(parse_field(fields[d], row, line_no, d));
    const double w = parse_field(fields[m], row, line_no, m);
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InputError("malformed CSV row " + std::to_string(row) + " (line " + std::to_string(line_no) +
                       "): weight must be positive and finite");
    }
    weights.push_back(w);
  }
  if (weights.empty()) throw InputError("CSV input contains no atoms");
  Matrix pts = Eigen::Map<Matrix>(coords.data(), static_cast<Index>(m), static_cast<Index>(weights.size()));
  Vector w = Eigen::Map<Vector>(weights.data(), static_cast<Index>(weights.size()));
  return DiscreteMeasure(std::move(pts), std::move(w), intrinsic_dim);
}

void write_csv(std::ostream& out, const DiscreteMeasure& mu) {
  for (int d = 0; d < mu.ambient_dim(); ++d) out << 'x' << d << ',';
  out << "weight\n";
  for (Index i = 0; i < mu.size(); ++i) {
    for (int d = 0; d < mu.ambient_dim(); ++d) out << format_double(mu.points()(d, i)) << ',';
    out << format_double(mu.weight(i)) << '\n';
  }
}

DiscreteMeasure read_binary(std::istream& in, int intrinsic_dim) {
  char magic[4];
  std::uint32_t m = 0, n = 0;
  if (!in.read(magic, 4) || std::memcmp(magic, kBinaryMagic, 4) != 0) {
    throw InputError("binary input: bad magic bytes (expected RSC1)");
  }
  if (!in.read(reinterpret_cast<char*>(&m), 4) || !in.read(reinterpret_cast<char*>(&n), 4)) {
    throw InputError("binary input: truncated header");
  }
  if (m == 0 || n == 0) throw InputError("binary input: m and N must be positive");
  std::vector<double> row(m + 1);
  Matrix pts(m, n);
  Vector w(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)))) {
      throw InputError("binary input: truncated at atom " + std::to_string(i));
    }
    for (std::uint32_t d = 0; d < m; ++d) pts(d, i) = row[d];
    w(i) = row[m];
  }
  return DiscreteMeasure(std::move(pts), std::move(w), intrinsic_dim);
}

void write_binary(std::ostream& out, const DiscreteMeasure& mu) {
  const std::uint32_t m = static_cast<std::uint32_t>(mu.ambient_dim());
  const std::uint32_t n = static_cast<std::uint32_t>(mu.size());
  out.write(kBinaryMagic, 4);
  out.write(reinterpret_cast<const char*>(&m), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  for (Index i = 0; i < mu.size(); ++i) {
    for (int d = 0; d < mu.ambient_dim(); ++d) {
      const double v = mu.points()(d, i);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    const double wv = mu.weight(i);
    out.write(reinterpret_cast<const char*>(&wv), sizeof wv);
  }
}

DiscreteMeasure read_measure(const std::string& path, int intrinsic_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  const bool binary = in.gcount() == 4 && std::memcmp(magic, kBinaryMagic, 4) == 0;
  in.clear();
  in.seekg(0);
  return binary ? read_binary(in, intrinsic_dim) : read_csv(in, intrinsic_dim);
}

void write_measure(const std::string& path, const DiscreteMeasure& mu) {
  const bool binary = path.ends_with(".rsc") || path.ends_with(".bin");
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw InputError("cannot open output file '" + path + "'");
  if (binary) write_binary(out, mu);
  else write_csv(out, mu);
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace rectiscope
