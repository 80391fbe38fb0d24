#include "sigcrit/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>

#include "sigcrit/detail/roots.hpp"
#include "sigcrit/io.hpp"
#include "sigcrit/spectral.hpp"

namespace sigcrit::special {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

// B_2k / (2k (2k - 1)) for k = 1..10.
template <class R>
constexpr std::array<R, 10> stirling_coefficients() {
  return {R(1) / R(12),           R(-1) / R(360),          R(1) / R(1260),
          R(-1) / R(1680),        R(1) / R(1188),          R(-691) / R(360360),
          R(1) / R(156),          R(-3617) / R(122400),    R(43867) / R(244188),
          R(-174611) / R(125400)};
}

// B_2k / (2k) for k = 1..10.
template <class R>
constexpr std::array<R, 10> digamma_coefficients() {
  return {R(1) / R(12),        R(-1) / R(120),        R(1) / R(252),
          R(-1) / R(240),      R(1) / R(132),         R(-691) / R(32760),
          R(1) / R(12),        R(-3617) / R(8160),    R(43867) / R(14364),
          R(-174611) / R(6600)};
}

template <class R>
constexpr R kShiftRadius = R(16);

const models::GeneralizedLogisticParams* genlog(const models::SigmoidModel& model) {
  return std::get_if<models::GeneralizedLogisticParams>(&model);
}

void require_analytic(const models::SigmoidModel& model, const char* what) {
  if (!models::is_analytic(model))
    throw DomainError(std::string(what) + " needs an analytic model");
}

// ln(x / sinh x), even in x.
template <class R>
R log_x_over_sinh(R x) {
  x = std::abs(x);
  if (x < R(1e-4)) return -x * x / R(6);
  return std::log(x) - (x + std::log1p(-std::exp(-R(2) * x)) - std::numbers::ln2_v<R>);
}

}  // namespace

ComplexValue complex_gamma(ComplexValue z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real())
    throw PoleError("gamma has a pole at z = " + io::format_real(z.real()));
  constexpr double pi = std::numbers::pi;
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));
  z -= 1.0;
  ComplexValue x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + double(i));
  const ComplexValue t = z + kLanczosG + 0.5;
  return std::exp((z + 0.5) * std::log(t) - t + std::log(std::sqrt(2.0 * pi) * x));
}

template <std::floating_point R>
std::complex<R> log_gamma(std::complex<R> z) {
  if (!(z.real() > R(0))) throw DomainError("log_gamma needs re(z) > 0");
  std::complex<R> shift_log{0};
  while (std::abs(z) < kShiftRadius<R>) {
    shift_log += std::log(z);
    z += R(1);
  }
  const auto inv = R(1) / z;
  const auto inv2 = inv * inv;
  std::complex<R> series{0};
  std::complex<R> power = inv;
  for (const R c : stirling_coefficients<R>()) {
    series += c * power;
    power *= inv2;
  }
  const R half_log_2pi = std::log(R(2) * std::numbers::pi_v<R>) / R(2);
  return (z - R(0.5)) * std::log(z) - z + half_log_2pi + series - shift_log;
}

template <std::floating_point R>
std::complex<R> digamma(std::complex<R> z) {
  if (!(z.real() > R(0))) throw DomainError("digamma needs re(z) > 0");
  std::complex<R> shift{0};
  while (std::abs(z) < kShiftRadius<R>) {
    shift += R(1) / z;
    z += R(1);
  }
  const auto inv = R(1) / z;
  const auto inv2 = inv * inv;
  std::complex<R> series{0};
  std::complex<R> power = inv2;
  for (const R c : digamma_coefficients<R>()) {
    series += c * power;
    power *= inv2;
  }
  return std::log(z) - inv / R(2) - series - shift;
}

template std::complex<double> log_gamma(std::complex<double>);
template std::complex<long double> log_gamma(std::complex<long double>);
template std::complex<double> digamma(std::complex<double>);
template std::complex<long double> digamma(std::complex<long double>);

double closed_form_F_sech2(double omega) {
  return std::sqrt(2.0 / std::numbers::pi) * std::exp(log_x_over_sinh(std::numbers::pi * omega / 2));
}

ComplexValue closed_form_F_genlog(const models::GeneralizedLogisticParams& params, double omega) {
  const double x = omega / params.beta();
  if (std::abs(x) > kGammaImagLimit)
    throw RangeError("|omega/beta| = " + io::format_real(std::abs(x)) + " exceeds " +
                     io::format_real(kGammaImagLimit));
  const double p = params.p();
  const ComplexValue ratio =
      complex_gamma({p, -x}) * complex_gamma({1.0, x}) / complex_gamma({p, 0.0}).real();
  return std::sqrt(2.0 / std::numbers::pi) * std::polar(1.0, -x * std::log(params.k())) * ratio;
}

template <std::floating_point R>
std::complex<R> log_spectrum(const models::SigmoidModel& model, R omega) {
  require_analytic(model, "log_spectrum");
  const R half_log_2_over_pi = std::log(R(2) / std::numbers::pi_v<R>) / R(2);
  if (const auto* g = genlog(model)) {
    const R x = omega / R(g->beta());
    const R p = R(1) / R(g->nu());
    const auto lg = log_gamma(std::complex<R>(p, -x)) + log_gamma(std::complex<R>(R(1), x)) -
                    log_gamma(std::complex<R>(p, R(0))).real();
    return half_log_2_over_pi + lg - std::complex<R>(R(0), x * std::log(R(g->k())));
  }
  return {half_log_2_over_pi + log_x_over_sinh(std::numbers::pi_v<R> * omega / R(2)), R(0)};
}

template std::complex<double> log_spectrum(const models::SigmoidModel&, double);
template std::complex<long double> log_spectrum(const models::SigmoidModel&, long double);

double log_abs_spectrum_slope(const models::SigmoidModel& model, double omega) {
  require_analytic(model, "log_abs_spectrum_slope");
  if (const auto* g = genlog(model)) {
    const double x = omega / g->beta();
    return (digamma<double>({g->p(), -x}).imag() - digamma<double>({1.0, x}).imag()) / g->beta();
  }
  constexpr double half_pi = std::numbers::pi / 2;
  const double x = half_pi * omega;
  if (std::abs(x) < 1e-4) return -half_pi * x / 3.0;
  return half_pi * (1.0 / x - 1.0 / std::tanh(x));
}

double intrinsic_phase(const models::SigmoidModel& model, double omega) {
  require_analytic(model, "intrinsic_phase");
  const auto* g = genlog(model);
  if (!g) return 0.0;
  const double x = omega / g->beta();
  return (log_gamma<double>({g->p(), -x}) + log_gamma<double>({1.0, x})).imag();
}

double linear_phase(const models::SigmoidModel& model, double omega) {
  require_analytic(model, "linear_phase");
  const auto* g = genlog(model);
  return g ? -omega / g->beta() * std::log(g->k()) : 0.0;
}

namespace {

struct PeakScan {
  std::vector<double> omegas;
  std::vector<double> values;
};

double beta_of(const models::SigmoidModel& model) {
  const auto* g = genlog(model);
  return g ? g->beta() : 2.0;
}

PeakScan scan_landscape(const models::SigmoidModel& model, int n, double lo, double hi, int points) {
  PeakScan s;
  s.omegas.resize(points);
  s.values.resize(points);
  const double ratio = std::log(hi / lo) / (points - 1);
  for (int j = 0; j < points; ++j) {
    const double w = lo * std::exp(ratio * j);
    s.omegas[j] = w;
    s.values[j] = n * std::log(w) + log_spectrum<double>(model, w).real();
  }
  return s;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j + 1 < v.size(); ++j)
    if (v[j] > v[j - 1] && v[j] >= v[j + 1]) out.push_back(j);
  return out;
}

}  // namespace

int count_spectral_peaks(const models::SigmoidModel& model, int n, double omega_lo,
                         double omega_hi, int points) {
  if (!(omega_lo > 0.0 && omega_hi > omega_lo) || points < 3)
    throw DomainError("count_spectral_peaks needs 0 < omega_lo < omega_hi and points >= 3");
  return static_cast<int>(local_maxima(scan_landscape(model, n, omega_lo, omega_hi, points).values).size());
}

double peak_frequency(const models::SigmoidModel& model, int n) {
  require_analytic(model, "peak_frequency");
  if (n < 1) throw DomainError("peak_frequency needs n >= 1");
  const auto* g = genlog(model);
  const double beta = beta_of(model);
  const double p = g ? g->p() : 1.0;
  const double lo = 1e-4 * beta;
  const double hi = beta * std::max(50.0, 2.0 * (n + p) + 20.0);
  const auto scan = scan_landscape(model, n, lo, hi, 2000);
  const auto peaks = local_maxima(scan.values);
  if (peaks.empty())
    throw LandscapeError("no interior maximum of the order-" + std::to_string(n) +
                         " spectral landscape in [" + io::format_real(lo) + ", " +
                         io::format_real(hi) + "]");
  if (peaks.size() > 1)
    throw LandscapeError("order-" + std::to_string(n) + " spectral landscape has " +
                         std::to_string(peaks.size()) + " local maxima");
  const std::size_t j = peaks.front();
  auto slope = [&](double w) { return n / w + log_abs_spectrum_slope(model, w); };
  const double a = scan.omegas[j - 1];
  const double b = scan.omegas[j + 1];
  return detail::bracketed_root(slope, a, b, 1e-14 * b, "spectral peak");
}

double peak_frequency(const Spectrum& spectrum, int n) {
  if (n < 1) throw DomainError("peak_frequency needs n >= 1");
  const std::size_t half = spectrum.size() / 2;
  std::vector<double> g(half, -std::numeric_limits<double>::infinity());
  for (std::size_t b = 1; b < half; ++b) {
    const double mag = std::abs(spectrum.values[b]);
    if (mag > 0.0) g[b] = n * std::log(spectrum.omega(b)) + std::log(mag);
  }
  const auto best = static_cast<std::size_t>(std::max_element(g.begin(), g.end()) - g.begin());
  if (best < 2 || best + 1 >= half)
    throw LandscapeError("spectral maximum of order " + std::to_string(n) +
                         " sits at the edge of the band");
  const double gm = g[best - 1], g0 = g[best], gp = g[best + 1];
  const double denom = gm - 2.0 * g0 + gp;
  const double shift = denom < 0.0 ? 0.5 * (gm - gp) / denom : 0.0;
  return (static_cast<double>(best) + std::clamp(shift, -0.5, 0.5)) * spectrum.d_omega;
}

PhaseProfile phase_profile(const models::GeneralizedLogisticParams& params, double omega_max,
                           int n_points) {
  if (n_points < 64) throw DomainError("phase profile needs at least 64 points");
  if (!(omega_max > 0.0)) throw DomainError("phase profile needs omega_max > 0");
  if (omega_max / params.beta() > kGammaImagLimit)
    throw RangeError("omega_max/beta = " + io::format_real(omega_max / params.beta()) +
                     " exceeds " + io::format_real(kGammaImagLimit));
  PhaseProfile out;
  out.omegas.resize(n_points);
  out.phase.resize(n_points);
  out.linear_part.resize(n_points);
  const double log_k = std::log(params.k());
  double previous_raw = 0.0;
  double unwrapped = 0.0;
  for (int j = 0; j < n_points; ++j) {
    const double w = omega_max * (j + 1) / n_points;
    const double x = w / params.beta();
    const double raw = std::arg(closed_form_F_genlog(params, w) * std::polar(1.0, x * log_k));
    const double jump = std::remainder(raw - previous_raw, 2.0 * std::numbers::pi);
    unwrapped += jump;
    previous_raw = raw;
    out.omegas[j] = w;
    out.linear_part[j] = -x * log_k;
    out.phase[j] = unwrapped + out.linear_part[j];
  }
  return out;
}

void write_phase_profile_csv(const std::filesystem::path& path, const PhaseProfile& profile) {
  std::string text = "omega,phase_unwrapped,phase_linear_part\n";
  for (std::size_t j = 0; j < profile.omegas.size(); ++j)
    text += io::format_real(profile.omegas[j]) + "," + io::format_real(profile.phase[j]) + "," +
            io::format_real(profile.linear_part[j]) + "\n";
  io::write_text(path, text);
}

SampledSignal even_component(const Spectrum& spectrum) {
  if (!spectrum.phase_referenced)
    throw ConventionError("even component needs a spectrum phase-referenced to t = 0");
  Spectrum real_part = spectrum;
  for (auto& v : real_part.values) v = {v.real(), 0.0};
  return spectral::inverse_real(real_part);
}

}  // namespace sigcrit::special
