/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================
*/

#include "olab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace olab {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return is;
}

bool next_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

void expect_header(std::istream& is, std::string_view expected) {
  std::string line;
  if (!next_line(is, line)) throw std::runtime_error("empty CSV, expected header '" + std::string(expected) + "'");
  if (line != expected)
    throw std::runtime_error("bad CSV header '" + line + "', expected '" + std::string(expected) + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("malformed number '" + std::string(s) + "'");
  return v;
}

long long parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  return v;
}

std::vector<double> parse_double_list(std::string_view s) {
  std::vector<double> out;
  for (const std::string& tok : split_csv_line(s)) out.push_back(parse_double(tok));
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

void write_profile_csv(const SpectralProfile& p, std::ostream& os) {
  os << "xi,re,im\n";
  for (std::size_t j = 0; j < p.size(); ++j)
    os << format_double(p.xi(j)) << ',' << format_double(p[j].real()) << ',' << format_double(p[j].imag())
       << '\n';
}

void write_profile_csv(const SpectralProfile& p, const std::string& path) {
  auto os = open_out(path);
  write_profile_csv(p, os);
}

SpectralProfile read_profile_csv(std::istream& is, double zero_cut) {
  expect_header(is, "xi,re,im");
  std::vector<double> xs;
  std::vector<cplx> amps;
  std::string line;
  std::size_t lineno = 1;
  while (next_line(is, line)) {
    ++lineno;
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw std::runtime_error("line " + std::to_string(lineno) + ": expected 3 columns");
    try {
      xs.push_back(parse_double(cells[0]));
      amps.emplace_back(parse_double(cells[1]), parse_double(cells[2]));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (xs.size() < 2) throw std::runtime_error("profile needs at least two rows");
  const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(step > 0.0)) throw std::runtime_error("xi must be strictly increasing");
  for (std::size_t j = 1; j < xs.size(); ++j) {
    const double d = xs[j] - xs[j - 1];
    if (!(d > 0.0)) throw std::runtime_error("xi must be strictly increasing");
    if (std::abs(d - step) > kUniformSpacingTol * step)
      throw std::runtime_error("non-uniform xi spacing at row " + std::to_string(j + 1));
  }
  return SpectralProfile(xs.front(), step, std::move(amps), zero_cut);
}

SpectralProfile read_profile_csv(const std::string& path, double zero_cut) {
  auto is = open_in(path);
  return read_profile_csv(is, zero_cut);
}

void write_field_csv(const SpaceField& u, std::ostream& os) {
  os << "x,re,im,abs\n";
  for (std::size_t j = 0; j < u.values.size(); ++j)
    os << format_double(u.grid.x(j)) << ',' << format_double(u.values[j].real()) << ','
       << format_double(u.values[j].imag()) << ',' << format_double(std::abs(u.values[j])) << '\n';
}

void write_field_csv(const SpaceField& u, const std::string& path) {
  auto os = open_out(path);
  write_field_csv(u, os);
}

SpaceField read_field_csv(std::istream& is) {
  expect_header(is, "x,re,im,abs");
  std::vector<double> xs;
  SpaceField u;
  std::string line;
  while (next_line(is, line)) {
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw std::runtime_error("field CSV: expected 4 columns");
    xs.push_back(parse_double(cells[0]));
    u.values.emplace_back(parse_double(cells[1]), parse_double(cells[2]));
  }
  u.grid.count = xs.size();
  u.grid.x_min = xs.empty() ? 0.0 : xs.front();
  u.grid.x_step = xs.size() < 2 ? 1.0 : (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  return u;
}

void CsvTable::write(std::ostream& os) const {
  auto emit = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
}

void CsvTable::write(const std::string& path) const {
  auto os = open_out(path);
  write(os);
}

CsvTable CsvTable::read(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!next_line(is, line)) throw std::runtime_error("empty CSV");
  t.header = split_csv_line(line);
  while (next_line(is, line)) {
    auto cells = split_csv_line(line);
    if (cells.size() != t.header.size()) throw std::runtime_error("CSV row width differs from header");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace olab
