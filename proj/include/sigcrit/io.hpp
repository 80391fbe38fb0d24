#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sigcrit/signal.hpp"

namespace sigcrit::io {

/// Decimal rendering with 17 significant digits.
std::string format_real(double x);

/// Numeric columns of a CSV file. A first line that does not parse as numbers
/// is treated as a header and skipped.
std::vector<std::vector<double>> read_csv_columns(const std::filesystem::path& path,
                                                  std::size_t expected_columns);

/// `t,value`
void write_signal_csv(const std::filesystem::path& path, const SampledSignal& signal);
/// `t,re,im`
void write_signal_csv(const std::filesystem::path& path, const ComplexSignal& signal);
/// `omega,re,im` in increasing omega, true amplitudes (log_scale applied).
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);

SampledSignal read_signal_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace sigcrit::io
