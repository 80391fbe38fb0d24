#include "sigcrit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "sigcrit/detail/roots.hpp"
#include "sigcrit/io.hpp"
#include "sigcrit/special.hpp"

namespace sigcrit::analysis {

namespace {

// Multiple of the rounding floor a lobe must clear to count as signal.
constexpr double kNoiseSafety = 16.0;
constexpr double kRoundingSafety = 4.0;
// Relative magnitude difference under which two extrema count as tied.
constexpr double kTieTolerance = 1e-9;
// Absolute time tolerance of zero refinement.
constexpr double kZeroTolerance = 1e-14;

template <class R>
struct Run {
  std::size_t first;
  std::size_t last;
  bool positive;
  R peak;
};

// Sign changes of v that separate lobes rising above `floor`, refined on the
// band-limited interpolant.
template <class R>
std::vector<double> significant_zeros(const std::vector<R>& v, R t0, R dt, R floor,
                                      const spectral::BandLimitedEvaluator<R>& eval) {
  std::vector<Run<R>> runs;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const bool pos = v[j] >= R(0);
    if (runs.empty() || runs.back().positive != pos)
      runs.push_back({j, j, pos, std::abs(v[j])});
    else {
      runs.back().last = j;
      runs.back().peak = std::max(runs.back().peak, std::abs(v[j]));
    }
  }
  std::vector<std::size_t> lobes;
  for (std::size_t r = 0; r < runs.size(); ++r)
    if (runs[r].peak > floor) lobes.push_back(r);

  std::vector<double> zeros;
  for (std::size_t i = 0; i + 1 < lobes.size(); ++i) {
    const auto& a = runs[lobes[i]];
    const auto& b = runs[lobes[i + 1]];
    if (a.positive == b.positive) continue;
    // Steepest sign change in the stretch between the two lobes.
    std::size_t best = a.last;
    R steep = R(-1);
    for (std::size_t j = a.last; j < b.first; ++j) {
      if ((v[j] >= R(0)) == (v[j + 1] >= R(0))) continue;
      const R d = std::abs(v[j + 1] - v[j]);
      if (d > steep) {
        steep = d;
        best = j;
      }
    }
    const R lo = t0 + static_cast<R>(best) * dt;
    const R hi = lo + dt;
    const R flo = eval(lo);
    const R fhi = eval(hi);
    R root;
    if ((flo < R(0)) != (fhi < R(0)))
      root = sigcrit::detail::bisect_sign<R>(eval, lo, hi, R(kZeroTolerance));
    else
      root = lo + dt * v[best] / (v[best] - v[best + 1]);
    zeros.push_back(static_cast<double>(root));
  }
  return zeros;
}

template <class R>
R max_abs_imag(const BasicComplexSignal<R>& s) {
  R m = 0;
  for (const auto& x : s.values()) m = std::max(m, std::abs(x.imag()));
  return m;
}

// A priori bound on the rounding error of one inverse-transform sample:
// eps log2 N times the l1 norm of the spectrum.
template <class R>
R rounding_bound(const BasicSpectrum<R>& s) {
  R l1 = 0;
  for (const auto& v : s.values) l1 += std::abs(v);
  return std::numeric_limits<R>::epsilon() * std::log2(static_cast<R>(s.size())) * l1 * s.d_omega /
         std::sqrt(R(2) * std::numbers::pi_v<R>);
}

template <class R>
R max_abs(const std::vector<R>& v) {
  R m = 0;
  for (const R x : v) m = std::max(m, std::abs(x));
  return m;
}

// L-infinity bound on the time-domain effect of per-bin data noise after an
// order-m derivative, in units of the renormalized derivative spectrum.
template <class R>
R data_noise_bound(const BasicSpectrum<R>& base, R log_scale, int m) {
  if (base.noise == R(0)) return R(0);
  R sum = 0;
  for (std::size_t b = 0; b < base.size(); ++b) {
    if (base.values[b] == std::complex<R>{}) continue;  // outside the retained band
    const R w = std::abs(base.omega(b));
    if (m == 0 || w > R(0)) sum += m == 0 ? R(1) : std::exp(static_cast<R>(m) * std::log(w));
  }
  return base.noise * sum * base.d_omega / std::sqrt(R(2) * std::numbers::pi_v<R>) *
         std::exp(base.log_scale - log_scale);
}

template <class R>
std::vector<R> real_parts(const BasicComplexSignal<R>& s) {
  std::vector<R> v(s.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = s[j].real();
  return v;
}

SampledSignal to_double_signal(const std::vector<long double>& v, double t0, double dt) {
  return SampledSignal(t0, dt, std::vector<double>(v.begin(), v.end()));
}
SampledSignal to_double_signal(const std::vector<double>& v, double t0, double dt) {
  return SampledSignal(t0, dt, v);
}

template <class R>
DerivativeReport landscape(const BasicSpectrum<R>& base, int n) {
  DerivativeReport rep;
  rep.order = n;

  auto deriv = spectral::spectral_derivative(base, n - 1);
  const R deriv_log_scale = deriv.log_scale;
  auto unit = deriv;
  unit.log_scale = R(0);
  auto slope = spectral::spectral_derivative(unit, 1);
  const R slope_log_scale = slope.log_scale;
  auto slope_unit = slope;
  slope_unit.log_scale = R(0);

  const auto plain = spectral::inverse(unit);
  const auto plain_slope = spectral::inverse(slope_unit);
  const auto analytic = spectral::analytic_signal(unit);
  const std::vector<R> y = real_parts(plain);
  const std::vector<R> yp = real_parts(plain_slope);

  const R floor_y = std::max({R(kNoiseSafety) * max_abs_imag(plain),
                              R(kRoundingSafety) * rounding_bound(unit),
                              R(2) * data_noise_bound(base, deriv_log_scale, n - 1)});
  const R floor_yp =
      std::max({R(kNoiseSafety) * max_abs_imag(plain_slope),
                R(kRoundingSafety) * rounding_bound(slope_unit),
                R(2) * data_noise_bound(base, deriv_log_scale + slope_log_scale, n)});

  const spectral::BandLimitedEvaluator<R> eval_y(unit);
  const spectral::BandLimitedEvaluator<R> eval_yp(slope_unit);
  const R t0 = plain.t0();
  const R dt = plain.dt();

  rep.zeros = significant_zeros(y, t0, dt, floor_y, eval_y);
  const auto extremum_times = significant_zeros(yp, t0, dt, floor_yp, eval_yp);
  if (extremum_times.empty())
    throw LandscapeError("no extremum found for derivative order " + std::to_string(n));

  std::vector<R> raw_values;
  for (double t : extremum_times) raw_values.push_back(eval_y(static_cast<R>(t)));

  std::size_t g = 0;
  for (std::size_t i = 1; i < raw_values.size(); ++i) {
    const R a = std::abs(raw_values[i]);
    const R b = std::abs(raw_values[g]);
    if (a > b * R(1 + kTieTolerance)) {
      g = i;
    } else if (a >= b * R(1 - kTieTolerance)) {
      const double ti = extremum_times[i], tg = extremum_times[g];
      const bool prefer = (ti >= 0.0) != (tg >= 0.0) ? ti >= 0.0 : std::abs(ti) < std::abs(tg);
      if (prefer) g = i;
    }
  }
  const R peak = std::abs(raw_values[g]);
  rep.global_extremum_time = extremum_times[g];
  rep.global_extremum_value = static_cast<double>(raw_values[g] / peak);
  for (std::size_t i = 0; i < extremum_times.size(); ++i)
    rep.extrema.push_back({extremum_times[i], static_cast<double>(raw_values[i] / peak)});
  rep.log_scale = static_cast<double>(deriv_log_scale + std::log(peak));
  rep.noise_floor = static_cast<double>(floor_y / peak);

  // Envelope peak: largest sample, polished by golden-section search.
  std::vector<R> env(analytic.size());
  std::vector<R> hil(analytic.size());
  std::vector<R> sig(analytic.size());
  for (std::size_t j = 0; j < env.size(); ++j) {
    env[j] = std::abs(analytic[j]) / peak;
    hil[j] = analytic[j].imag() / peak;
    sig[j] = y[j] / peak;
  }
  const auto jmax = static_cast<std::size_t>(std::max_element(env.begin(), env.end()) - env.begin());
  {
    auto neg = [&](R t) { return -std::abs(eval_y.analytic(t)); };
    R a = t0 + static_cast<R>(jmax == 0 ? 0 : jmax - 1) * dt;
    R b = t0 + static_cast<R>(std::min(jmax + 1, env.size() - 1)) * dt;
    const R phi = (std::sqrt(R(5)) - R(1)) / R(2);
    R c = b - phi * (b - a), d = a + phi * (b - a);
    R fc = neg(c), fd = neg(d);
    while (b - a > R(1e-9)) {
      if (fc < fd) {
        b = d; d = c; fd = fc; c = b - phi * (b - a); fc = neg(c);
      } else {
        a = c; c = d; fc = fd; d = a + phi * (b - a); fd = neg(d);
      }
    }
    rep.envelope_peak_time = static_cast<double>((a + b) / R(2));
  }
  const double td0 = static_cast<double>(t0), tdd = static_cast<double>(dt);
  rep.signal = to_double_signal(sig, td0, tdd);
  rep.hilbert = to_double_signal(hil, td0, tdd);
  rep.envelope = to_double_signal(env, td0, tdd);
  return rep;
}

}  // namespace

SpectralPeak locate_omega_n(const models::SigmoidModel& model, int n) {
  const double w = special::peak_frequency(model, n);
  const double phi = special::intrinsic_phase(model, w);
  return {w, phi, -phi / w};
}

SpectralPeak locate_omega_n(const Spectrum& spectrum, int n) {
  const double w = special::peak_frequency(spectrum, n);
  const auto top = static_cast<std::size_t>(std::floor(w / spectrum.d_omega)) + 1;
  if (top >= spectrum.size() / 2) throw LandscapeError("spectral peak beyond the band");
  double unwrapped = 0.0;
  double previous = std::arg(spectrum.values[0]);
  unwrapped = previous;
  std::vector<double> phase(top + 1);
  phase[0] = unwrapped;
  for (std::size_t b = 1; b <= top; ++b) {
    const double raw = std::arg(spectrum.values[b]);
    unwrapped += std::remainder(raw - previous, 2.0 * std::numbers::pi);
    previous = raw;
    phase[b] = unwrapped;
  }
  const double x = w / spectrum.d_omega;
  const auto b0 = static_cast<std::size_t>(std::floor(x));
  const double frac = x - static_cast<double>(b0);
  const double phi = phase[b0] * (1.0 - frac) + phase[b0 + 1] * frac;
  return {w, phi, -phi / w};
}

BaseSpectrum base_spectrum(const models::SigmoidModel& model, const spectral::GridPlan& plan) {
  BaseSpectrum out;
  if (models::is_analytic(model)) {
    out.extended = spectral::closed_form_spectrum<long double>(model, plan);
    out.is_extended = true;
  } else {
    out.standard = spectral::band_limited_spectrum(spectral::sample_f(model, plan));
  }
  return out;
}

DerivativeReport derivative_landscape(const models::SigmoidModel& model,
                                      const spectral::GridPlan& plan, int n) {
  return derivative_landscape(model, plan, base_spectrum(model, plan), n);
}

DerivativeReport derivative_landscape(const models::SigmoidModel& model,
                                      const spectral::GridPlan& plan, const BaseSpectrum& base,
                                      int n) {
  if (n < 1) throw DomainError("derivative order must be at least 1");
  if (n > kMaxOrder)
    throw RangeError("derivative order " + std::to_string(n) + " exceeds the supported maximum " +
                     std::to_string(kMaxOrder));
  if (n > plan.max_order)
    throw DomainError("grid was planned for orders up to " + std::to_string(plan.max_order));
  DerivativeReport rep = base.is_extended ? landscape(base.extended, n) : landscape(base.standard, n);
  const SpectralPeak peak =
      base.is_extended ? locate_omega_n(model, n) : locate_omega_n(base.standard, n);
  rep.omega_n = peak.omega;
  rep.phi_at_omega_n = peak.phi;
  rep.alpha_n = peak.alpha;
  return rep;
}

int count_zeros(const DerivativeReport& report) { return static_cast<int>(report.zeros.size()); }

bool envelope_monotonicity_check(const SampledSignal& envelope, double t_star) {
  const auto& v = envelope.values();
  const double slack = 1e-9 * *std::max_element(v.begin(), v.end());
  bool started = false;
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    if (envelope.time(j) < t_star) continue;
    started = true;
    if (v[j + 1] > v[j] + slack) return false;
  }
  return started;
}

bool envelope_monotonicity_check(const DerivativeReport& report, double t_star) {
  return envelope_monotonicity_check(report.envelope, t_star);
}

bool global_extremum_bound_check(const DerivativeReport& report) {
  const auto& v = report.signal.values();
  for (double x : v)
    if (std::abs(x) > 1.0 + 1e-9) return false;
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& e : report.extrema)
    nearest = std::min(nearest, std::abs(e.time - report.envelope_peak_time));
  return std::abs(report.global_extremum_time - report.envelope_peak_time) <= nearest + 1e-9;
}

bool envelope_dominates(const DerivativeReport& report, double slack) {
  const auto& y = report.signal.values();
  const auto& e = report.envelope.values();
  const double bound = slack * *std::max_element(e.begin(), e.end());
  for (std::size_t j = 0; j < y.size(); ++j)
    if (std::abs(y[j]) > e[j] + bound) return false;
  return true;
}

AlternationResult zero_alternation(const DerivativeReport& report, double threshold) {
  const auto& y = report.signal.values();
  const auto& h = report.hilbert.values();
  const auto& e = report.envelope.values();
  const double level = threshold * *std::max_element(e.begin(), e.end());
  // The live region spans the lobes of y that clear both the threshold and
  // the noise floor; |f_A| alone stays large in tails where y is rounding noise.
  const double lobe = std::max(threshold, report.noise_floor);
  std::size_t first = y.size(), last = 0;
  {
    std::size_t run_start = 0;
    double run_peak = 0.0;
    for (std::size_t j = 0; j <= y.size(); ++j) {
      if (j == y.size() || (j > run_start && (y[j] < 0.0) != (y[run_start] < 0.0))) {
        if (run_peak > lobe) {
          first = std::min(first, run_start);
          last = std::max(last, j - 1);
        }
        if (j == y.size()) break;
        run_start = j;
        run_peak = 0.0;
      }
      run_peak = std::max(run_peak, std::abs(y[j]));
    }
  }
  AlternationResult out;
  if (first >= last) {
    out.alternates = true;
    return out;
  }
  const double t_first = report.signal.time(first);
  const double t_last = report.signal.time(last);

  // Events: +1 for a zero of y, -1 for a sign change of h.
  std::vector<std::pair<double, int>> events;
  for (double z : report.zeros)
    if (z >= t_first && z <= t_last) {
      events.emplace_back(z, 1);
      ++out.signal_zeros;
    }
  for (std::size_t j = first; j < last; ++j) {
    if (!(e[j] > level && e[j + 1] > level)) continue;
    if ((h[j] < 0.0) == (h[j + 1] < 0.0)) continue;
    const double frac = h[j] / (h[j] - h[j + 1]);
    events.emplace_back(report.signal.time(j) + frac * report.signal.dt(), -1);
    ++out.hilbert_zeros;
  }
  std::sort(events.begin(), events.end());
  out.alternates = true;
  for (std::size_t i = 1; i < events.size(); ++i)
    if (events[i].second == events[i - 1].second) out.alternates = false;
  return out;
}

bool zeros_interleave(const std::vector<double>& lower, const std::vector<double>& higher) {
  if (higher.size() != lower.size() + 1) return false;
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(higher[i] < lower[i] && lower[i] < higher[i + 1])) return false;
  return true;
}

double extrapolate_tail(const std::vector<int>& orders, const std::vector<double>& values) {
  if (orders.size() != values.size() || values.empty())
    throw DomainError("tail extrapolation needs matching, nonempty sequences");
  const std::size_t k = std::min<std::size_t>(kTailPoints, values.size());
  const std::size_t off = values.size() - k;
  // Lagrange interpolation in x = 1/n evaluated at x = 0.
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double xi = 1.0 / orders[off + i];
    double w = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const double xj = 1.0 / orders[off + j];
      w *= (0.0 - xj) / (xi - xj);
    }
    sum += w * values[off + i];
  }
  return sum;
}

bool increments_shrink(const std::vector<double>& values, double settled) {
  if (values.size() < 4) return false;
  const std::size_t m = values.size();
  const double d1 = std::abs(values[m - 3] - values[m - 4]);
  const double d2 = std::abs(values[m - 2] - values[m - 3]);
  const double d3 = std::abs(values[m - 1] - values[m - 2]);
  return d2 <= std::max(d1, settled) && d3 <= std::max(d2, settled);
}

CriticalPointReport critical_point(const models::SigmoidModel& model,
                                   const spectral::GridPlan& plan, int max_order, double tol) {
  if (max_order < 6) throw DomainError("critical point analysis needs max_order >= 6");
  if (max_order > kMaxOrder)
    throw RangeError("max_order " + std::to_string(max_order) + " exceeds the supported maximum " +
                     std::to_string(kMaxOrder));
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

  const BaseSpectrum base = base_spectrum(model, plan);
  std::vector<std::future<DerivativeReport>> jobs;
  for (int n = 1; n <= max_order; ++n)
    jobs.push_back(std::async(std::launch::async, [&, n] {
      return derivative_landscape(model, plan, base, n);
    }));

  CriticalPointReport out;
  out.convergence_radius = tol;
  std::vector<int> odd_orders, even_orders;
  for (int n = 1; n <= max_order; ++n) {
    out.orders.push_back(jobs[n - 1].get());
    const auto& r = out.orders.back();
    out.alpha_sequence.push_back(r.alpha_n);
    if (n % 2) {
      out.t_m_sequence.push_back(r.global_extremum_time);
      odd_orders.push_back(n);
    } else {
      out.t_a_sequence.push_back(r.global_extremum_time);
      even_orders.push_back(n);
    }
  }
  out.odd_limit = extrapolate_tail(odd_orders, out.t_m_sequence);
  out.even_limit = extrapolate_tail(even_orders, out.t_a_sequence);
  out.estimated_critical_point = 0.5 * (out.odd_limit + out.even_limit);

  const double settled = kSettledFraction * tol;
  const bool odd_ok = increments_shrink(out.t_m_sequence, settled);
  const bool even_ok = increments_shrink(out.t_a_sequence, settled);
  const double gap = std::abs(out.odd_limit - out.even_limit);
  if (!odd_ok) out.diagnostics.push_back("odd-order increments are not shrinking");
  if (!even_ok) out.diagnostics.push_back("even-order increments are not shrinking");
  if (gap > tol)
    out.diagnostics.push_back("odd and even limits differ by " + io::format_real(gap) +
                              ", more than the tolerance " + io::format_real(tol));
  out.converged = odd_ok && even_ok && gap <= tol;
  return out;
}

nlohmann::json to_json(const DerivativeReport& r) {
  nlohmann::json extrema = nlohmann::json::array();
  for (const auto& e : r.extrema) extrema.push_back({{"time", e.time}, {"value", e.value}});
  return {{"order", r.order},
          {"zeros", r.zeros},
          {"zero_count", r.zeros.size()},
          {"extrema", extrema},
          {"global_extremum_time", r.global_extremum_time},
          {"global_extremum_value", r.global_extremum_value},
          {"envelope_peak_time", r.envelope_peak_time},
          {"omega_n", r.omega_n},
          {"phi_at_omega_n", r.phi_at_omega_n},
          {"alpha_n", r.alpha_n},
          {"log_scale", r.log_scale},
          {"noise_floor", r.noise_floor}};
}

nlohmann::json to_json(const CriticalPointReport& r) {
  nlohmann::json orders = nlohmann::json::array();
  for (const auto& o : r.orders) orders.push_back(to_json(o));
  return {{"t_m_sequence", r.t_m_sequence},
          {"t_a_sequence", r.t_a_sequence},
          {"alpha_sequence", r.alpha_sequence},
          {"odd_limit", r.odd_limit},
          {"even_limit", r.even_limit},
          {"estimated_critical_point", r.estimated_critical_point},
          {"converged", r.converged},
          {"convergence_radius", r.convergence_radius},
          {"diagnostics", r.diagnostics},
          {"orders", orders}};
}

std::string orders_csv(const std::vector<DerivativeReport>& reports) {
  std::string text = "n,global_extremum_time,envelope_peak_time,omega_n,phi_n,alpha_n,zero_count\n";
  for (const auto& r : reports)
    text += std::to_string(r.order) + "," + io::format_real(r.global_extremum_time) + "," +
            io::format_real(r.envelope_peak_time) + "," + io::format_real(r.omega_n) + "," +
            io::format_real(r.phi_at_omega_n) + "," + io::format_real(r.alpha_n) + "," +
            std::to_string(r.zeros.size()) + "\n";
  return text;
}

}  // namespace sigcrit::analysis
