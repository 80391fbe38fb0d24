#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "sigcrit/error.hpp"

namespace sigcrit::detail {

/// Root of a continuous function on [lo, hi] with f(lo), f(hi) of opposite
/// sign, converged until the bracket width falls below `xtol`.
template <class Real, class F>
Real bracketed_root(F&& f, Real lo, Real hi, Real xtol, const char* what) {
  Real flo = f(lo);
  Real fhi = f(hi);
  if (flo == Real(0)) return lo;
  if (fhi == Real(0)) return hi;
  if ((flo < 0) == (fhi < 0))
    throw BracketError(std::string(what) + ": no sign change on [" + std::to_string(double(lo)) +
                       ", " + std::to_string(double(hi)) + "]");
  std::uintmax_t max_iter = 200;
  auto tol = [xtol](Real a, Real b) { return std::abs(b - a) <= xtol; };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return (r.first + r.second) / 2;
}

/// Plain bisection on a sign change. Used where only the sign of f is
/// trustworthy (values near the rounding floor).
template <class Real, class F>
Real bisect_sign(F&& f, Real lo, Real hi, Real xtol) {
  const bool neg_lo = f(lo) < Real(0);
  for (int it = 0; it < 200 && (hi - lo) > xtol; ++it) {
    const Real mid = (lo + hi) / 2;
    if ((f(mid) < Real(0)) == neg_lo)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace sigcrit::detail
