#include "sigcrit/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "sigcrit/detail/roots.hpp"
#include "sigcrit/io.hpp"
#include "sigcrit/special.hpp"

namespace sigcrit::spectral {

namespace {

std::size_t next_pow2(double x) {
  if (!(x < 1e18)) throw PlanningError("grid would need more than 1e18 points");
  return std::bit_ceil(static_cast<std::size_t>(std::ceil(std::max(x, 1.0))));
}

// Point where the unimodal f crosses eps, searching from `from` in `dir`.
double decay_point(const models::SigmoidModel& model, double from, double dir, double eps,
                   double scale) {
  auto f = [&](double t) { return models::eval_f(model, t) - eps; };
  if (f(from) <= 0.0) return from;
  double step = scale;
  double inner = from;
  double outer = from + dir * step;
  for (int i = 0; f(outer) > 0.0; ++i) {
    if (i > 60) throw PlanningError("f does not decay below " + io::format_real(eps));
    inner = outer;
    step *= 2.0;
    outer = from + dir * step;
  }
  return sigcrit::detail::bracketed_root(f, std::min(inner, outer), std::max(inner, outer), 1e-10,
                                "tail decay point");
}

// Smallest omega beyond the order-m peak where m ln w + ln|F| has dropped by
// -ln(floor) from its maximum.
double truncation_point(const models::SigmoidModel& model, int m, double log_floor, double beta) {
  auto g = [&](double w) {
    return (m > 0 ? m * std::log(w) : 0.0) + special::log_spectrum<double>(model, w).real();
  };
  const double start = m > 0 ? special::peak_frequency(model, m) : 1e-6 * beta;
  const double level = g(start) + log_floor;
  auto h = [&](double w) { return g(w) - level; };
  double lo = start;
  double hi = start * 1.25 + beta;
  while (h(hi) > 0.0) {
    lo = hi;
    hi *= 1.25;
  }
  return sigcrit::detail::bracketed_root(h, lo, hi, 1e-8 * hi, "truncation frequency");
}

GridPlan plan_analytic(const models::SigmoidModel& model, double eps, int max_order,
                       const PlanOptions& opt) {
  const auto* g = std::get_if<models::GeneralizedLogisticParams>(&model);
  const double beta = g ? g->beta() : 2.0;
  const double t_m = models::inflection_points_exact(model).t_m;
  GridPlan plan;
  plan.tail_tolerance = eps;
  plan.max_order = max_order;
  if (opt.half_span) {
    plan.half_span = *opt.half_span;
  } else {
    const double left = decay_point(model, t_m, -1.0, eps, 1.0 / beta);
    const double right = decay_point(model, t_m, 1.0, eps, 1.0 / beta);
    plan.half_span = opt.safety_factor * std::max(std::abs(left), std::abs(right));
  }
  if (!(plan.half_span > 0.0)) throw DomainError("grid half span must be positive");

  if (opt.points) {
    plan.n = *opt.points;
  } else {
    const double peak = special::peak_frequency(model, max_order);
    double target = opt.nyquist_factor * peak;
    const double log_floor = std::log(opt.truncation_floor);
    for (int m = 0; m <= max_order; ++m)
      target = std::max(target, truncation_point(model, m, log_floor, beta));
    plan.n = std::max(opt.min_points, next_pow2(2.0 * plan.half_span * target / std::numbers::pi));
  }
  if (plan.n < 16 || !is_power_of_two(plan.n))
    throw DomainError("grid size must be a power of two >= 16, got " + std::to_string(plan.n));

  for (double edge : {-plan.half_span, plan.half_span}) {
    const double fe = std::abs(models::eval_f(model, edge));
    if (!(fe < eps))
      throw PlanningError("|f(" + io::format_real(edge) + ")| = " + io::format_real(fe) +
                          " is not below the tail tolerance " + io::format_real(eps) +
                          "; enlarge the half span");
  }
  return plan;
}

GridPlan plan_tabulated(const models::TabulatedCurve& curve, double eps, int max_order,
                        const PlanOptions& opt) {
  const auto& t = curve.t();
  const double f_lo = std::abs(curve.derivative(t.front()));
  const double f_hi = std::abs(curve.derivative(t.back()));
  if (!(f_lo < eps) || !(f_hi < eps))
    throw PlanningError("tabulated tails do not decay: |f| = " +
                        io::format_real(std::max(f_lo, f_hi)) + " at the data boundary exceeds " +
                        io::format_real(eps) +
                        "; extend the samples until the curve is flat, smooth the data, or "
                        "raise the tail tolerance");
  if (!(t.front() < 0.0 && t.back() > 0.0))
    throw PlanningError("tabulated samples must straddle t = 0 for a grid symmetric about it; "
                        "shift the time axis");
  double reach = 0.0;
  for (double ti : t)
    if (std::abs(curve.derivative(ti)) >= eps) reach = std::max(reach, std::abs(ti));
  if (reach == 0.0)
    throw PlanningError("tabulated f never exceeds the tail tolerance " + io::format_real(eps));

  GridPlan plan;
  plan.tail_tolerance = eps;
  plan.max_order = max_order;
  const double spacing = curve.min_spacing();
  double span = opt.half_span ? *opt.half_span : opt.safety_factor * reach;
  std::size_t n = opt.points ? *opt.points : std::max(opt.min_points, next_pow2(2.0 * span / spacing));
  // The grid [-T, T - dt] has to fit inside the data.
  const double fit = std::min(-t.front(), t.back() / (1.0 - 2.0 / static_cast<double>(n)));
  if (!opt.half_span) span = std::min(span, fit);
  if (span < reach || span > fit * (1.0 + 1e-12))
    throw PlanningError("tabulated samples cover [" + io::format_real(t.front()) + ", " +
                        io::format_real(t.back()) + "] but the signal reaches |t| = " +
                        io::format_real(reach) +
                        "; extend the samples symmetrically about t = 0");
  if (!opt.points) n = std::max(opt.min_points, next_pow2(2.0 * span / spacing * (1.0 - 1e-9)));
  plan.half_span = span;
  plan.n = n;
  if (plan.n < 16 || !is_power_of_two(plan.n))
    throw DomainError("grid size must be a power of two >= 16, got " + std::to_string(plan.n));
  return plan;
}

}  // namespace

GridPlan plan_grid(const models::SigmoidModel& model, double eps, int max_order,
                   const PlanOptions& options) {
  if (!(eps > 0.0)) throw DomainError("tail tolerance must be positive");
  if (max_order < 1) throw DomainError("max_order must be at least 1");
  if (const auto* curve = std::get_if<models::TabulatedCurve>(&model))
    return plan_tabulated(*curve, eps, max_order, options);
  return plan_analytic(model, eps, max_order, options);
}

SampledSignal sample_f(const models::SigmoidModel& model, const GridPlan& plan) {
  std::vector<double> v(plan.n);
  const double dt = plan.dt();
  const double t0 = plan.t0();
  for (std::size_t j = 0; j < plan.n; ++j) {
    double t = t0 + static_cast<double>(j) * dt;
    if (const auto* curve = std::get_if<models::TabulatedCurve>(&model))
      t = std::clamp(t, curve->t_min(), curve->t_max());
    v[j] = models::eval_f(model, t);
  }
  return SampledSignal(t0, dt, std::move(v));
}

template <std::floating_point R>
BasicSpectrum<R> closed_form_spectrum(const models::SigmoidModel& model, const GridPlan& plan) {
  if (!models::is_analytic(model)) throw DomainError("closed-form spectrum needs an analytic model");
  const std::size_t n = plan.n;
  const R dt = R(2) * R(plan.half_span) / static_cast<R>(n);
  BasicSpectrum<R> out;
  out.d_omega = R(2) * std::numbers::pi_v<R> / (static_cast<R>(n) * dt);
  out.t0 = -R(plan.half_span);
  out.phase_referenced = true;
  std::vector<std::complex<R>> logs(n / 2 + 1);
  R top = -std::numeric_limits<R>::infinity();
  for (std::size_t b = 0; b <= n / 2; ++b) {
    logs[b] = special::log_spectrum<R>(model, static_cast<R>(b) * out.d_omega);
    top = std::max(top, logs[b].real());
  }
  out.values.resize(n);
  for (std::size_t b = 0; b <= n / 2; ++b) {
    const auto v = std::exp(logs[b] - top);
    if (b == 0 || b == n / 2) {
      out.values[b] = {v.real(), R(0)};
    } else {
      out.values[b] = v;
      out.values[n - b] = std::conj(v);
    }
  }
  out.log_scale = top;
  return out;
}

template BasicSpectrum<double> closed_form_spectrum(const models::SigmoidModel&, const GridPlan&);
template BasicSpectrum<long double> closed_form_spectrum(const models::SigmoidModel&,
                                                         const GridPlan&);

Spectrum band_limited_spectrum(const SampledSignal& f) {
  constexpr double kFloorMultiple = 30.0;
  Spectrum s = forward(f);
  const std::size_t n = s.size();
  const std::size_t half = n / 2;
  std::vector<double> upper;
  for (std::size_t b = half / 2; b < half; ++b) upper.push_back(std::abs(s.values[b]));
  std::nth_element(upper.begin(), upper.begin() + upper.size() / 2, upper.end());
  const double floor = upper[upper.size() / 2];
  double peak = 0.0;
  for (const auto& v : s.values) peak = std::max(peak, std::abs(v));
  const double level = std::max(kFloorMultiple * floor, 1e-15 * peak);

  std::size_t cut = half;
  for (std::size_t b = 1; b + 2 < half; ++b) {
    if (std::abs(s.values[b]) < level && std::abs(s.values[b + 1]) < level &&
        std::abs(s.values[b + 2]) < level) {
      cut = b;
      break;
    }
  }
  for (std::size_t b = cut; b <= n - cut; ++b) s.values[b] = {};
  s.noise = level;
  return s;
}

}  // namespace sigcrit::spectral
