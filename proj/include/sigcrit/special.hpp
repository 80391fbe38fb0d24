#pragma once

#include <complex>
#include <concepts>
#include <filesystem>
#include <vector>

#include "sigcrit/models.hpp"
#include "sigcrit/signal.hpp"

namespace sigcrit::special {

using ComplexValue = std::complex<double>;

/// Gamma function via the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula for re(z) < 1/2. Throws PoleError at nonpositive integers.
ComplexValue complex_gamma(ComplexValue z);

/// Principal-branch log Gamma for re(z) > 0 by Stirling's series after an
/// upward shift; the imaginary part is the continuous argument of Gamma.
template <std::floating_point R>
std::complex<R> log_gamma(std::complex<R> z);

/// Digamma psi(z) for re(z) > 0.
template <std::floating_point R>
std::complex<R> digamma(std::complex<R> z);

/// Fourier transform of sech^2: sqrt(2/pi) (pi w/2) / sinh(pi w/2).
double closed_form_F_sech2(double omega);

/// Largest |omega/beta| accepted by closed_form_F_genlog.
inline constexpr double kGammaImagLimit = 100.0;

/// sqrt(2/pi) k^(-i w/beta) Gamma(1/nu - i w/beta) Gamma(1 + i w/beta) / Gamma(1/nu),
/// evaluated through complex_gamma. Throws RangeError past kGammaImagLimit.
ComplexValue closed_form_F_genlog(const models::GeneralizedLogisticParams& params, double omega);

/// Natural log of the transform of f for an analytic model, in precision R.
/// Unlike the direct closed forms it has no range limit.
template <std::floating_point R>
std::complex<R> log_spectrum(const models::SigmoidModel& model, R omega);

/// d/domega ln|F(omega)| for omega > 0.
double log_abs_spectrum_slope(const models::SigmoidModel& model, double omega);

/// Continuous phase of F with the pure time-shift part -(omega/beta) ln k removed.
double intrinsic_phase(const models::SigmoidModel& model, double omega);
/// The linear part -(omega/beta) ln k (zero for the standard model).
double linear_phase(const models::SigmoidModel& model, double omega);

/// Maximizer of n ln(omega) + ln|F(omega)| over omega > 0, i.e. the spectral
/// peak of the n-th derivative of f. Throws LandscapeError when the landscape
/// is not unimodal or the maximum cannot be bracketed.
double peak_frequency(const models::SigmoidModel& model, int n);
/// The same maximization over the bins of a computed spectrum.
double peak_frequency(const Spectrum& spectrum, int n);

/// Number of strict local maxima of n ln(omega) + ln|F(omega)| sampled at
/// `points` log-spaced frequencies in [omega_lo, omega_hi].
int count_spectral_peaks(const models::SigmoidModel& model, int n, double omega_lo,
                         double omega_hi, int points);

struct PhaseProfile {
  std::vector<double> omegas;       // increasing, > 0
  std::vector<double> phase;        // unwrapped arg F, linear part included
  std::vector<double> linear_part;  // -(omega/beta) ln k
  bool anchored_at_zero{true};      // phase(0+) = 0
};

/// Unwrapped phase of closed_form_F_genlog on (0, omega_max].
PhaseProfile phase_profile(const models::GeneralizedLogisticParams& params, double omega_max,
                           int n_points);

/// `omega,phase_unwrapped,phase_linear_part`
void write_phase_profile_csv(const std::filesystem::path& path, const PhaseProfile& profile);

/// Inverse transform of re F. Requires a spectrum phase-referenced to t = 0.
SampledSignal even_component(const Spectrum& spectrum);

}  // namespace sigcrit::special
