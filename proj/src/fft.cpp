#include "sigcrit/fft.hpp"

#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

#include "sigcrit/error.hpp"
#include "sigcrit/signal.hpp"

namespace sigcrit::fft {

namespace {

// Planning is not thread-safe in FFTW; executing a finished plan on new
// arrays is. Plans are made once per (length, direction) and kept.
std::mutex planner_mutex;

struct DoubleApi {
  using plan = fftw_plan;
  using cpx = fftw_complex;
  static plan make(int n, bool inverse) {
    return fftw_plan_dft_1d(n, nullptr, nullptr, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  static void run(plan p, cpx* x) { fftw_execute_dft(p, x, x); }
};

struct LongDoubleApi {
  using plan = fftwl_plan;
  using cpx = fftwl_complex;
  static plan make(int n, bool inverse) {
    return fftwl_plan_dft_1d(n, nullptr, nullptr, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  static void run(plan p, cpx* x) { fftwl_execute_dft(p, x, x); }
};

template <class Api, class R>
void execute(std::span<std::complex<R>> x, bool inverse) {
  const std::size_t n = x.size();
  if (!is_power_of_two(n)) throw DomainError("fft length must be a power of two");
  if (n < 2) return;
  typename Api::plan p;
  {
    static std::map<std::pair<std::size_t, bool>, typename Api::plan> plans;
    std::lock_guard lock(planner_mutex);
    auto& slot = plans[{n, inverse}];
    if (!slot) slot = Api::make(static_cast<int>(n), inverse);
    if (!slot) throw DomainError("fftw could not plan a transform of length " + std::to_string(n));
    p = slot;
  }
  Api::run(p, reinterpret_cast<typename Api::cpx*>(x.data()));
}

}  // namespace

void transform(std::span<std::complex<double>> x, bool inverse) {
  execute<DoubleApi>(x, inverse);
}

void transform(std::span<std::complex<long double>> x, bool inverse) {
  execute<LongDoubleApi>(x, inverse);
}

}  // namespace sigcrit::fft
