#pragma once

#include <complex>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <vector>

#include "sigcrit/error.hpp"

namespace sigcrit {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Uniform time grid {t0 + j*dt : 0 <= j < N} with N a power of two, N >= 16.
template <std::floating_point R, class Sample>
class BasicGridSignal {
 public:
  using value_type = Sample;

  BasicGridSignal() = default;
  BasicGridSignal(R t0, R dt, std::vector<Sample> values)
      : t0_(t0), dt_(dt), values_(std::move(values)) {
    if (!(dt_ > R(0))) throw DomainError("signal grid step must be positive");
    if (values_.size() < 16 || !is_power_of_two(values_.size()))
      throw DomainError("signal length must be a power of two >= 16, got " +
                        std::to_string(values_.size()));
  }

  R t0() const { return t0_; }
  R dt() const { return dt_; }
  std::size_t size() const { return values_.size(); }
  R time(std::size_t j) const { return t0_ + static_cast<R>(j) * dt_; }

  const std::vector<Sample>& values() const { return values_; }
  std::vector<Sample>& values() { return values_; }
  const Sample& operator[](std::size_t j) const { return values_[j]; }

 private:
  R t0_{0};
  R dt_{1};
  std::vector<Sample> values_;
};

template <std::floating_point R>
using BasicSampledSignal = BasicGridSignal<R, R>;
template <std::floating_point R>
using BasicComplexSignal = BasicGridSignal<R, std::complex<R>>;

using SampledSignal = BasicSampledSignal<double>;
using ComplexSignal = BasicComplexSignal<double>;

/// Frequency-domain twin of a grid signal, indexed by FFT bin.
///
/// Bin b < N/2 carries omega = b*d_omega; bins b >= N/2 carry the negative
/// frequencies (b - N)*d_omega, so the Nyquist bin is signed negative.
/// The true amplitudes are values * exp(log_scale). When phase_referenced is
/// set, phases are referenced to absolute time t = 0 rather than the grid
/// origin t0.
template <std::floating_point R>
struct BasicSpectrum {
  R d_omega{1};
  R t0{0};
  std::vector<std::complex<R>> values;
  bool phase_referenced{true};
  R log_scale{0};
  /// Estimated absolute error per bin, in the units of `values`; zero for
  /// spectra sampled from a closed form.
  R noise{0};

  std::size_t size() const { return values.size(); }
  R dt() const {
    return R(2) * std::numbers::pi_v<R> / (static_cast<R>(values.size()) * d_omega);
  }
  R omega(std::size_t b) const {
    const auto n = values.size();
    return b < n / 2 ? static_cast<R>(b) * d_omega
                     : (static_cast<R>(b) - static_cast<R>(n)) * d_omega;
  }
  R nyquist() const { return static_cast<R>(values.size() / 2) * d_omega; }
};

using Spectrum = BasicSpectrum<double>;

}  // namespace sigcrit
