#pragma once
// Reference computations used only by the tests. Nothing here calls into the
// library, so agreement is evidence rather than tautology.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;
using mpc = boost::multiprecision::cpp_complex_50;

/// log Gamma(z), re(z) > 0, by Stirling's series after shifting re(z) past 60.
inline mpc log_gamma(mpc z) {
  mpc shift = 0;
  while (z.real() < 60) {
    shift += log(z);
    z += 1;
  }
  const mp half_log_2pi = log(2 * boost::math::constants::pi<mp>()) / 2;
  mpc sum = (z - mp(0.5)) * log(z) - z + half_log_2pi;
  const mpc inv2 = mpc(1) / (z * z);
  mpc power = mpc(1) / z;
  for (int k = 1; k <= 30; ++k) {
    const mp b = boost::math::bernoulli_b2n<mp>(k);
    sum += b / mp(2 * k * (2 * k - 1)) * power;
    power *= inv2;
  }
  return sum - shift;
}

inline std::complex<double> gamma(std::complex<double> z) {
  const mpc v = exp(log_gamma(mpc(z.real(), z.imag())));
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

/// (2 pi)^(-1/2) int_a^b f(t) exp(-i w t) dt by panelwise Gauss-Kronrod.
inline std::complex<long double> fourier_quadrature(const std::function<long double(long double)>& f,
                                                    long double w, long double a, long double b,
                                                    long double panel = 0.5L) {
  using GK = boost::math::quadrature::gauss_kronrod<long double, 61>;
  long double re = 0, im = 0;
  const int panels = static_cast<int>(std::ceil((b - a) / panel));
  const long double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const long double lo = a + i * h, hi = lo + h;
    re += GK::integrate([&](long double t) { return f(t) * std::cos(w * t); }, lo, hi, 6, 1e-17L);
    im -= GK::integrate([&](long double t) { return f(t) * std::sin(w * t); }, lo, hi, 6, 1e-17L);
  }
  const long double s = 1.0L / std::sqrt(2.0L * std::numbers::pi_v<long double>);
  return {re * s, im * s};
}

/// (2 k beta / nu) e^(-beta t) (1 + k e^(-beta t))^(-1/nu - 1), evaluated in logs.
inline long double genlog_f(long double k, long double beta, long double nu, long double t) {
  const long double log_u = std::log(k) - beta * t;
  const long double log1pu = log_u > 40 ? log_u + std::log1p(std::exp(-log_u)) : std::log1p(std::exp(log_u));
  return std::exp(std::log(2 * k * beta / nu) - beta * t - (1 / nu + 1) * log1pu);
}

/// Exact y^(n) of y = -1 + 2 (1 + k e^(-beta t))^(-p): with s = 1/(1 + k e^(-beta t)),
/// y^(n) = s^p Q_n(s), Q_1 = 2 p beta (1 - s), Q_{n+1} = beta (1 - s)(p Q_n + s Q_n').
class DerivativeRecurrence {
 public:
  DerivativeRecurrence(double k, double beta, double p, int max_order)
      : k_(k), beta_(beta), p_(p) {
    std::vector<mp> q = {2 * p_ * beta_, -2 * p_ * beta_};
    polys_.push_back(q);
    for (int n = 1; n < max_order; ++n) {
      // r = p q + s q'
      std::vector<mp> r(q.size());
      for (std::size_t i = 0; i < q.size(); ++i) r[i] = p_ * q[i] + mp(static_cast<int>(i)) * q[i];
      // beta (1 - s) r
      std::vector<mp> next(r.size() + 1, mp(0));
      for (std::size_t i = 0; i < r.size(); ++i) {
        next[i] += beta_ * r[i];
        next[i + 1] -= beta_ * r[i];
      }
      polys_.push_back(next);
      q = next;
    }
  }

  mp value(int n, const mp& t) const {
    const mp s = 1 / (1 + k_ * exp(-beta_ * t));
    const auto& q = polys_.at(n - 1);
    mp acc = 0;
    for (auto it = q.rbegin(); it != q.rend(); ++it) acc = acc * s + *it;
    return pow(s, p_) * acc;
  }
  double operator()(int n, double t) const { return static_cast<double>(value(n, mp(t))); }

 private:
  mp k_, beta_, p_;
  std::vector<std::vector<mp>> polys_;
};

/// Sign changes of the exact y^(n) on a dense grid over [a, b].
inline std::vector<double> dense_zeros(const DerivativeRecurrence& rec, int n, double a, double b,
                                       int samples) {
  std::vector<double> out;
  const double h = (b - a) / samples;
  mp prev = rec.value(n, mp(a));
  for (int i = 1; i <= samples; ++i) {
    const double t = a + i * h;
    const mp cur = rec.value(n, mp(t));
    if ((prev < 0) != (cur < 0)) {
      mp lo = t - h, hi = t;
      const bool neg = prev < 0;
      for (int it = 0; it < 60; ++it) {
        const mp mid = (lo + hi) / 2;
        if ((rec.value(n, mid) < 0) == neg)
          lo = mid;
        else
          hi = mid;
      }
      out.push_back(static_cast<double>((lo + hi) / 2));
    }
    prev = cur;
  }
  return out;
}

template <class F>
double bisect(F&& f, double lo, double hi, int iters = 200) {
  const bool neg = f(lo) < 0;
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < 0) == neg)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

template <class F>
double golden_max(F&& f, double a, double b, double tol = 1e-13) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = b - g * (b - a), d = a + g * (b - a);
  while (b - a > tol * (1 + std::abs(a))) {
    if (f(c) > f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return 0.5 * (a + b);
}

/// Root of (n + 1)/w = (pi/2) coth(pi w / 2): the peak of w^n sech^2-transform.
inline double coth_root(int n) {
  const double h = std::numbers::pi / 2;
  return bisect([&](double w) { return (n + 1) / w - h / std::tanh(h * w); }, 1e-6, 4.0 * (n + 2));
}

/// Zeros of y''' for the generalized logistic: u = k e^(-beta t) solves
/// p^2 u^2 - (3p + 1) u + 1 = 0.
inline std::pair<double, double> third_derivative_zeros(double k, double beta, double p) {
  const double b = 3 * p + 1;
  const double disc = std::sqrt(b * b - 4 * p * p);
  const double u1 = (b + disc) / (2 * p * p), u2 = (b - disc) / (2 * p * p);
  const double t1 = -std::log(u1 / k) / beta, t2 = -std::log(u2 / k) / beta;
  return {std::min(t1, t2), std::max(t1, t2)};
}

}  // namespace oracle
