#include "sigcrit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sigcrit::io {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    auto end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    std::string field = line.substr(pos, end - pos);
    field.erase(0, field.find_first_not_of(" \t\r"));
    field.erase(field.find_last_not_of(" \t\r") + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) return false;
    out.push_back(v);
    pos = end + 1;
  }
  return true;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

}  // namespace

std::vector<std::vector<double>> read_csv_columns(const std::filesystem::path& path,
                                                  std::size_t expected_columns) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> cols(expected_columns);
  std::string line;
  std::vector<double> row;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!parse_row(line, row)) {
      if (line_no == 1) continue;  // header
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": malformed row");
    }
    if (row.size() != expected_columns)
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(expected_columns) + " columns");
    for (std::size_t c = 0; c < expected_columns; ++c) cols[c].push_back(row[c]);
  }
  return cols;
}

void write_signal_csv(const std::filesystem::path& path, const SampledSignal& signal) {
  auto os = open_out(path);
  os << "t,value\n";
  for (std::size_t j = 0; j < signal.size(); ++j)
    os << format_real(signal.time(j)) << ',' << format_real(signal[j]) << '\n';
}

void write_signal_csv(const std::filesystem::path& path, const ComplexSignal& signal) {
  auto os = open_out(path);
  os << "t,re,im\n";
  for (std::size_t j = 0; j < signal.size(); ++j)
    os << format_real(signal.time(j)) << ',' << format_real(signal[j].real()) << ','
       << format_real(signal[j].imag()) << '\n';
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
  auto os = open_out(path);
  os << "omega,re,im\n";
  const auto n = spectrum.size();
  const double scale = std::exp(spectrum.log_scale);
  // negative half first: bins N/2 .. N-1, then 0 .. N/2-1
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = (i + n / 2) % n;
    const auto v = spectrum.values[b] * scale;
    os << format_real(spectrum.omega(b)) << ',' << format_real(v.real()) << ','
       << format_real(v.imag()) << '\n';
  }
}

SampledSignal read_signal_csv(const std::filesystem::path& path) {
  auto cols = read_csv_columns(path, 2);
  const auto& t = cols[0];
  if (t.size() < 2) throw ConfigError(path.string() + ": too few rows");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  return SampledSignal(t.front(), dt, std::move(cols[1]));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace sigcrit::io
