#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sigcrit/fft.hpp"
#include "sigcrit/models.hpp"
#include "sigcrit/signal.hpp"

namespace sigcrit::spectral {

/// Symmetric grid [-T, T) with N samples.
struct GridPlan {
  double half_span{0};
  std::size_t n{0};
  double tail_tolerance{0};
  int max_order{1};

  double dt() const { return 2.0 * half_span / static_cast<double>(n); }
  double t0() const { return -half_span; }
  double nyquist() const { return std::numbers::pi / dt(); }
};

struct PlanOptions {
  /// Inflation of the decay span.
  double safety_factor = 1.5;
  /// Nyquist frequency relative to the predicted peak of the top order.
  double nyquist_factor = 4.0;
  /// Relative size of |omega|^m |F| allowed at the Nyquist frequency, m <= max_order.
  double truncation_floor = 1e-22;
  std::size_t min_points = 256;
  std::optional<double> half_span;
  std::optional<std::size_t> points;
};

/// Chooses a grid on which f decays below `eps` at both ends and derivatives
/// up to `max_order` are resolved. Throws PlanningError when the model tails
/// do not decay within the available span.
GridPlan plan_grid(const models::SigmoidModel& model, double eps, int max_order,
                   const PlanOptions& options = {});

/// f = y' sampled on the plan grid.
SampledSignal sample_f(const models::SigmoidModel& model, const GridPlan& plan);

enum class PhaseReference {
  absolute_time,  // phases referenced to t = 0
  grid_origin,    // raw DFT phases, referenced to t0
};

namespace detail {

// exp(sign * i * omega_b * t0) with the angle reduced exactly in units of 2 pi.
template <std::floating_point R>
std::complex<R> origin_rotation(R t0, R dt, std::size_t n, std::size_t b, int sign) {
  const R signed_bin = b < n / 2 ? static_cast<R>(b) : static_cast<R>(b) - static_cast<R>(n);
  const R cycles = std::remainder(signed_bin * (t0 / (static_cast<R>(n) * dt)), R(1));
  return std::polar(R(1), static_cast<R>(sign) * R(2) * std::numbers::pi_v<R> * cycles);
}

template <std::floating_point R>
R inv_sqrt_2pi() {
  return R(1) / std::sqrt(R(2) * std::numbers::pi_v<R>);
}

}  // namespace detail

/// Discrete approximation of F(omega) = (2 pi)^(-1/2) int f(t) exp(-i omega t) dt.
template <std::floating_point R, class Sample>
BasicSpectrum<R> forward(const BasicGridSignal<R, Sample>& signal,
                         PhaseReference reference = PhaseReference::absolute_time) {
  const std::size_t n = signal.size();
  BasicSpectrum<R> out;
  out.d_omega = R(2) * std::numbers::pi_v<R> / (static_cast<R>(n) * signal.dt());
  out.t0 = signal.t0();
  out.phase_referenced = reference == PhaseReference::absolute_time;
  out.values.assign(signal.values().begin(), signal.values().end());
  fft::transform(std::span<std::complex<R>>(out.values));
  const R scale = signal.dt() * detail::inv_sqrt_2pi<R>();
  for (std::size_t b = 0; b < n; ++b) {
    out.values[b] *= scale;
    if (out.phase_referenced)
      out.values[b] *= detail::origin_rotation(signal.t0(), signal.dt(), n, b, -1);
  }
  return out;
}

/// Inverse transform; true amplitudes exp(log_scale) are restored.
template <std::floating_point R>
BasicComplexSignal<R> inverse(const BasicSpectrum<R>& spectrum) {
  const std::size_t n = spectrum.size();
  if (spectrum.log_scale > R(700))
    throw RangeError("spectrum log scale " + std::to_string(double(spectrum.log_scale)) +
                     " overflows the time domain; invert the normalized spectrum instead");
  const R dt = spectrum.dt();
  std::vector<std::complex<R>> v = spectrum.values;
  for (std::size_t b = 0; b < n; ++b)
    if (spectrum.phase_referenced) v[b] *= detail::origin_rotation(spectrum.t0, dt, n, b, +1);
  fft::transform(std::span<std::complex<R>>(v), true);
  const R scale = spectrum.d_omega * detail::inv_sqrt_2pi<R>() * std::exp(spectrum.log_scale);
  for (auto& x : v) x *= scale;
  return BasicComplexSignal<R>(spectrum.t0, dt, std::move(v));
}

/// Real part of the inverse transform.
template <std::floating_point R>
BasicSampledSignal<R> inverse_real(const BasicSpectrum<R>& spectrum) {
  const auto c = inverse(spectrum);
  std::vector<R> v(c.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = c[j].real();
  return BasicSampledSignal<R>(c.t0(), c.dt(), std::move(v));
}

inline constexpr double kAliasingGuard = 1e-12;

/// Bin-wise (i omega)^n F, renormalized to unit peak magnitude; the log of the
/// true peak is accumulated in log_scale. Throws AliasingError when the
/// result near the Nyquist frequency exceeds `guard` times its peak.
template <std::floating_point R>
BasicSpectrum<R> spectral_derivative(const BasicSpectrum<R>& spectrum, int n,
                                     R guard = R(kAliasingGuard)) {
  if (n < 0) throw DomainError("derivative order must be nonnegative");
  if (n == 0) return spectrum;
  const std::size_t size = spectrum.size();
  std::vector<R> log_mag(size, -std::numeric_limits<R>::infinity());
  R top = -std::numeric_limits<R>::infinity();
  for (std::size_t b = 1; b < size; ++b) {
    const R mag = std::abs(spectrum.values[b]);
    if (mag == R(0)) continue;
    log_mag[b] = std::log(mag) + static_cast<R>(n) * std::log(std::abs(spectrum.omega(b)));
    top = std::max(top, log_mag[b]);
  }
  BasicSpectrum<R> out = spectrum;
  if (top == -std::numeric_limits<R>::infinity()) {
    std::fill(out.values.begin(), out.values.end(), std::complex<R>{});
    return out;
  }
  // (i sgn(omega))^n
  static constexpr int kRe[4] = {1, 0, -1, 0};
  static constexpr int kIm[4] = {0, 1, 0, -1};
  out.values[0] = {};
  for (std::size_t b = 1; b < size; ++b) {
    if (log_mag[b] == -std::numeric_limits<R>::infinity()) {
      out.values[b] = {};
      continue;
    }
    const int q = ((spectrum.omega(b) > 0 ? n : -n) % 4 + 4) % 4;
    const auto unit = std::complex<R>(R(kRe[q]), R(kIm[q]));
    const auto dir = spectrum.values[b] / std::abs(spectrum.values[b]);
    out.values[b] = std::exp(log_mag[b] - top) * dir * unit;
  }
  out.log_scale = spectrum.log_scale + top;
  out.noise = R(0);

  const std::size_t h = size / 2;
  const R edge = std::max({std::abs(out.values[h - 1]), std::abs(out.values[h]),
                           std::abs(out.values[h + 1])});
  if (edge >= guard) {
    // Extrapolate the log-magnitude decay from just below Nyquist.
    const std::size_t back = std::min<std::size_t>(8, h - 1);
    const R slope = (log_mag[h - 1] - log_mag[h - 1 - back]) / (static_cast<R>(back) * spectrum.d_omega);
    const R needed = std::isfinite(slope) && slope < R(0) ? spectrum.nyquist() + (std::log(guard) - std::log(edge)) / slope
                                  : R(2) * spectrum.nyquist();
    throw AliasingError("order-" + std::to_string(n) + " derivative has relative magnitude " +
                        std::to_string(double(edge)) + " at the Nyquist frequency " +
                        std::to_string(double(spectrum.nyquist())) +
                        "; refine the grid to a Nyquist frequency of at least " +
                        std::to_string(double(needed)));
  }
  return out;
}

/// Relative tolerance on conjugate symmetry accepted by analytic_signal.
inline constexpr double kSymmetryTolerance = 1e-8;

/// f + i H[f]: DC and Nyquist bins kept, positive bins doubled, negative bins
/// dropped. Throws SymmetryError when the spectrum is not that of a real signal.
template <std::floating_point R>
BasicComplexSignal<R> analytic_signal(const BasicSpectrum<R>& spectrum) {
  const std::size_t n = spectrum.size();
  R peak = 0;
  for (const auto& v : spectrum.values) peak = std::max(peak, std::abs(v));
  R asym = std::abs(spectrum.values[0].imag());
  for (std::size_t b = 1; b < n; ++b)
    asym = std::max(asym, std::abs(spectrum.values[b] - std::conj(spectrum.values[n - b])));
  if (asym > R(kSymmetryTolerance) * peak)
    throw SymmetryError("spectrum is not conjugate symmetric (relative defect " +
                        std::to_string(double(peak > 0 ? asym / peak : asym)) +
                        "); the analytic signal needs a real input");
  BasicSpectrum<R> a = spectrum;
  for (std::size_t b = 1; b < n; ++b) {
    if (b < n / 2)
      a.values[b] *= R(2);
    else if (b > n / 2)
      a.values[b] = {};
  }
  return inverse(a);
}

/// |f_A| pointwise.
template <std::floating_point R>
BasicSampledSignal<R> envelope(const BasicComplexSignal<R>& analytic) {
  std::vector<R> v(analytic.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::abs(analytic[j]);
  return BasicSampledSignal<R>(analytic.t0(), analytic.dt(), std::move(v));
}

/// Multiplies by exp(-i alpha omega), which delays the signal by alpha.
template <std::floating_point R>
BasicSpectrum<R> shift_time(const BasicSpectrum<R>& spectrum, R alpha) {
  BasicSpectrum<R> out = spectrum;
  for (std::size_t b = 0; b < out.size(); ++b)
    out.values[b] *= std::polar(R(1), -alpha * spectrum.omega(b));
  return out;
}

/// Trigonometric interpolant of a spectrum's inverse transform, evaluated at
/// arbitrary t. Agrees with inverse() on the grid.
template <std::floating_point R>
class BandLimitedEvaluator {
 public:
  explicit BandLimitedEvaluator(const BasicSpectrum<R>& spectrum)
      : d_omega_(spectrum.d_omega), nyquist_(spectrum.nyquist()) {
    if (!spectrum.phase_referenced)
      throw ConventionError("band-limited evaluation needs a spectrum referenced to t = 0");
    const std::size_t half = spectrum.size() / 2;
    const R scale = spectrum.d_omega * detail::inv_sqrt_2pi<R>() * std::exp(spectrum.log_scale);
    coef_.resize(half + 1);
    for (std::size_t b = 0; b <= half; ++b) coef_[b] = spectrum.values[b] * scale;
  }

  /// Real part of the interpolant.
  R operator()(R t) const { return analytic_sum(t, false).real(); }

  /// Interpolant of the analytic signal (positive bins doubled).
  std::complex<R> analytic(R t) const { return analytic_sum(t, true); }

 private:
  std::complex<R> analytic_sum(R t, bool analytic) const {
    const std::size_t half = coef_.size() - 1;
    const auto step = std::polar(R(1), d_omega_ * t);
    std::complex<R> z = step;
    std::complex<R> acc{};
    for (std::size_t b = 1; b < half; ++b) {
      acc += coef_[b] * z;
      z *= step;
    }
    const auto nyq = coef_[half] * std::polar(R(1), -nyquist_ * t);
    if (analytic) return coef_[0] + R(2) * acc + nyq;
    return {coef_[0].real() + R(2) * acc.real() + nyq.real(), R(0)};
  }

  R d_omega_;
  R nyquist_;
  std::vector<std::complex<R>> coef_;
};

template <std::floating_point To, std::floating_point From>
BasicSpectrum<To> convert(const BasicSpectrum<From>& s) {
  BasicSpectrum<To> out;
  out.d_omega = static_cast<To>(s.d_omega);
  out.t0 = static_cast<To>(s.t0);
  out.phase_referenced = s.phase_referenced;
  out.log_scale = static_cast<To>(s.log_scale);
  out.noise = static_cast<To>(s.noise);
  out.values.reserve(s.size());
  for (const auto& v : s.values) out.values.emplace_back(static_cast<To>(v.real()), static_cast<To>(v.imag()));
  return out;
}

template <std::floating_point To, std::floating_point From, class Sample>
auto convert(const BasicGridSignal<From, Sample>& s) {
  if constexpr (std::is_same_v<Sample, From>) {
    std::vector<To> v(s.values().begin(), s.values().end());
    return BasicSampledSignal<To>(static_cast<To>(s.t0()), static_cast<To>(s.dt()), std::move(v));
  } else {
    std::vector<std::complex<To>> v;
    v.reserve(s.size());
    for (const auto& x : s.values()) v.emplace_back(static_cast<To>(x.real()), static_cast<To>(x.imag()));
    return BasicComplexSignal<To>(static_cast<To>(s.t0()), static_cast<To>(s.dt()), std::move(v));
  }
}

/// Closed-form spectrum sampled on the plan's frequency grid, normalized to a
/// unit peak. Only for analytic models.
template <std::floating_point R>
BasicSpectrum<R> closed_form_spectrum(const models::SigmoidModel& model, const GridPlan& plan);

/// FFT of the sampled f, cut off where the spectrum meets its noise floor.
/// The estimated floor is stored in `noise`.
Spectrum band_limited_spectrum(const SampledSignal& f);

/// Spectrum of f on the plan grid: the closed form for analytic models,
/// band_limited_spectrum of the spline-derived f otherwise.
template <std::floating_point R>
BasicSpectrum<R> model_spectrum(const models::SigmoidModel& model, const GridPlan& plan) {
  if (models::is_analytic(model)) return closed_form_spectrum<R>(model, plan);
  return convert<R>(band_limited_spectrum(sample_f(model, plan)));
}

}  // namespace sigcrit::spectral
