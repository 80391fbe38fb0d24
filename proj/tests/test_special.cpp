#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sigcrit/io.hpp"
#include "sigcrit/special.hpp"
#include "sigcrit/spectral.hpp"

using namespace sigcrit;
using namespace sigcrit::special;
using C = std::complex<double>;

namespace {

double rel(C a, C b) { return std::abs(a - b) / std::abs(b); }

double sech2_quadrature(double w) {
  auto f = [](long double t) {
    const long double c = std::cosh(t);
    return 1.0L / (c * c);
  };
  return static_cast<double>(oracle::fourier_quadrature(f, w, -40.0L, 40.0L).real());
}

}  // namespace

TEST_SUITE("special") {

TEST_CASE("gamma at classical points") {
  CHECK(std::abs(complex_gamma({0.5, 0.0}) - std::sqrt(std::numbers::pi)) < 1e-12);
  CHECK(std::abs(complex_gamma({5.0, 0.0}) - 24.0) < 1e-11);
  const C g = complex_gamma({1.0, 1.0});
  CHECK(rel(g, oracle::gamma({1.0, 1.0})) < 1e-12);
  CHECK(g.real() == doctest::Approx(0.4980156681).epsilon(1e-9));
  CHECK(g.imag() == doctest::Approx(-0.1549498283).epsilon(1e-9));
  const double mod2 = std::norm(complex_gamma({0.0, 1.0}));
  CHECK(mod2 == doctest::Approx(std::numbers::pi / std::sinh(std::numbers::pi)).epsilon(1e-12));
  CHECK(mod2 == doctest::Approx(0.2720290550).epsilon(1e-9));
}

TEST_CASE("gamma poles") {
  for (double z : {0.0, -1.0, -2.0, -7.0}) CHECK_THROWS_AS(complex_gamma({z, 0.0}), PoleError);
  CHECK_NOTHROW(complex_gamma({-1.5, 0.0}));
  CHECK_NOTHROW(complex_gamma({-1.0, 1e-3}));
}

TEST_CASE("gamma matches the multiprecision oracle on the strip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(0.5, 30.0), im(-100.0, 100.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const C z{re(rng), im(rng)};
    worst = std::max(worst, rel(complex_gamma(z), oracle::gamma(z)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("gamma reflection region") {
  for (C z : {C{-0.5, 0.3}, C{-2.7, -1.1}, C{0.2, 4.0}}) {
    const C ref = std::numbers::pi / (std::sin(std::numbers::pi * z) * oracle::gamma(1.0 - z));
    CHECK(rel(complex_gamma(z), ref) < 1e-12);
  }
}

TEST_CASE("gamma recurrence and conjugation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(0.5, 29.0), im(-100.0, 100.0);
  double rec = 0.0, conj = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const C z{re(rng), im(rng)};
    const C g1 = complex_gamma(1.0 + z);
    rec = std::max(rec, std::abs(g1 - z * complex_gamma(z)) / std::abs(g1));
    conj = std::max(conj, rel(complex_gamma(std::conj(z)), std::conj(complex_gamma(z))));
  }
  CHECK(rec < 1e-11);
  CHECK(conj < 1e-12);
}

TEST_CASE("extended log gamma and digamma") {
  for (C z : {C{1.0, 0.0}, C{0.2, 3.0}, C{5.0, -40.0}, C{1.0, 150.0}, C{2.5, 0.5}}) {
    const auto lg = log_gamma<long double>({z.real(), z.imag()});
    const auto ref = oracle::log_gamma(oracle::mpc(z.real(), z.imag()));
    const double scale = std::max(1.0, static_cast<double>(abs(ref)));
    CHECK(std::abs(static_cast<double>(lg.real() - static_cast<long double>(ref.real()))) < 1e-17 * scale);
    CHECK(std::abs(static_cast<double>(lg.imag() - static_cast<long double>(ref.imag()))) < 1e-17 * scale);

    const oracle::mp h("1e-20");
    const oracle::mpc zz(z.real(), z.imag());
    const auto d = (oracle::log_gamma(zz + h) - oracle::log_gamma(zz - h)) / (2 * h);
    const auto psi = digamma<double>(z);
    CHECK(std::abs(psi - C(static_cast<double>(d.real()), static_cast<double>(d.imag()))) <
          1e-14 * std::max(1.0, std::abs(psi)));
  }
  CHECK_THROWS_AS(log_gamma<double>({-1.0, 0.0}), DomainError);
}

TEST_CASE("sech^2 transform") {
  CHECK(closed_form_F_sech2(0.0) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-15));
  CHECK(closed_form_F_sech2(2.0) == doctest::Approx(sech2_quadrature(2.0)).epsilon(1e-10));
  CHECK(closed_form_F_sech2(2.0) ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi) * std::numbers::pi / std::sinh(std::numbers::pi))
            .epsilon(1e-14));
  for (double w : {0.5, 3.0, 7.0}) CHECK(closed_form_F_sech2(-w) == closed_form_F_sech2(w));
  for (double w : {1e-9, 1e-3, 50.0, 300.0}) CHECK(closed_form_F_sech2(w) > 0.0);
}

TEST_CASE("generalized transform") {
  for (auto [k, b, nu] : {std::tuple{1.0, 1.0, 0.2}, {3.0, 0.5, 2.0}}) {
    const C f0 = closed_form_F_genlog(models::GeneralizedLogisticParams(k, b, nu), 0.0);
    CHECK(std::abs(f0 - std::sqrt(2.0 / std::numbers::pi)) < 1e-14);
  }
  const models::GeneralizedLogisticParams std_equiv(1.0, 2.0, 1.0);
  for (double w : {0.5, 1.0, 4.0})
    CHECK(std::abs(closed_form_F_genlog(std_equiv, w) - closed_form_F_sech2(w)) < 1e-12 * closed_form_F_sech2(w));

  const models::GeneralizedLogisticParams asym(1.0, 1.0, 0.2);
  auto f = [](long double t) { return oracle::genlog_f(1.0L, 1.0L, 0.2L, t); };
  const auto q = oracle::fourier_quadrature(f, 3.0L, -20.0L, 80.0L);
  CHECK(rel(closed_form_F_genlog(asym, 3.0), C(double(q.real()), double(q.imag()))) < 1e-8);

  CHECK_THROWS_AS(closed_form_F_genlog(asym, 101.0), RangeError);
  CHECK_NOTHROW(closed_form_F_genlog(asym, 100.0));
}

TEST_CASE("generalized spectrum magnitude is even and decreasing") {
  for (auto [k, b, nu] : {std::tuple{1.0, 1.0, 0.2}, {0.5, 2.0, 0.5}, {2.0, 3.0, 1.0 / 3.0}, {1.0, 0.5, 2.0}}) {
    const models::GeneralizedLogisticParams p(k, b, nu);
    double prev = std::abs(closed_form_F_genlog(p, 0.0));
    for (double w = 0.05; w <= 60.0 * b; w += 0.05) {
      const double m = std::abs(closed_form_F_genlog(p, w));
      CHECK(std::abs(std::abs(closed_form_F_genlog(p, -w)) - m) <= 1e-13 * m);
      REQUIRE(m < prev);
      prev = m;
    }
  }
}

TEST_CASE("log spectrum agrees with the closed forms") {
  const models::SigmoidModel s = models::StandardLogistic{};
  const models::SigmoidModel g = models::GeneralizedLogisticParams(2.0, 1.5, 0.4);
  const auto& gp = std::get<models::GeneralizedLogisticParams>(g);
  for (double w : {0.0, 0.3, 2.0, 10.0, 40.0}) {
    CHECK(std::abs(std::exp(log_spectrum<double>(s, w)) - closed_form_F_sech2(w)) < 1e-13 * closed_form_F_sech2(w));
    const C ref = closed_form_F_genlog(gp, w);
    CHECK(rel(std::exp(log_spectrum<double>(g, w)), ref) < 1e-11);
    CHECK(rel(C(std::exp(log_spectrum<long double>(g, w))), ref) < 1e-11);
  }
  CHECK(std::isfinite(log_spectrum<double>(g, 600.0).real()));
  CHECK_THROWS_AS(log_spectrum<double>(models::TabulatedCurve({-2, -1, 1, 2}, {0, 1, 2, 3}), 1.0),
                  DomainError);
}

TEST_CASE("log magnitude slope") {
  for (const models::SigmoidModel& m :
       {models::SigmoidModel{models::StandardLogistic{}}, models::SigmoidModel{models::GeneralizedLogisticParams(1.0, 1.0, 0.2)}}) {
    for (double w : {0.2, 1.0, 7.0, 30.0}) {
      const double h = 1e-5;
      const double num = (log_spectrum<double>(m, w + h).real() - log_spectrum<double>(m, w - h).real()) / (2 * h);
      CHECK(log_abs_spectrum_slope(m, w) == doctest::Approx(num).epsilon(1e-7));
    }
  }
}

TEST_CASE("phase profile of the standard-equivalent curve vanishes") {
  const auto pr = phase_profile(models::GeneralizedLogisticParams(1.0, 2.0, 1.0), 100.0, 256);
  for (double ph : pr.phase) CHECK(std::abs(ph) < 1e-10);
}

TEST_CASE("phase profile equals the arctangent sum") {
  const models::GeneralizedLogisticParams p(1.0, 1.0, 0.2);
  const auto pr = phase_profile(p, 20.0, 80);
  for (std::size_t j = 0; j < pr.omegas.size(); ++j) {
    const double w = pr.omegas[j];
    double sum = 0.0;
    for (int m = 1; m <= 4; ++m) sum += std::atan(-w / m);
    CHECK(std::abs(pr.phase[j] - sum) < 1e-9);
    // direct argument of the Gamma product, multiprecision
    const auto lg = oracle::log_gamma(oracle::mpc(5.0, -w)) + oracle::log_gamma(oracle::mpc(1.0, w));
    CHECK(std::abs(pr.phase[j] - static_cast<double>(lg.imag())) < 1e-9);
  }
  CHECK(pr.anchored_at_zero);
  for (double w : {1.0, 5.0, 20.0}) {
    const auto it = std::find_if(pr.omegas.begin(), pr.omegas.end(), [&](double x) { return std::abs(x - w) < 1e-12; });
    REQUIRE(it != pr.omegas.end());
  }
}

TEST_CASE("phase tends to -2 pi monotonically") {
  const auto pr = phase_profile(models::GeneralizedLogisticParams(1.0, 1.0, 0.2), 100.0, 2000);
  double max_jump = 0.0;
  for (std::size_t j = 1; j < pr.phase.size(); ++j) {
    CHECK(pr.phase[j] < pr.phase[j - 1]);
    max_jump = std::max(max_jump, std::abs(pr.phase[j] - pr.phase[j - 1]));
  }
  CHECK(max_jump < std::numbers::pi / 2);
  CHECK(pr.phase.back() > -2 * std::numbers::pi);
  CHECK(pr.phase.back() + 2 * std::numbers::pi < 0.11);
}

TEST_CASE("linear phase is reported separately") {
  const models::GeneralizedLogisticParams p(4.0, 2.0, 0.5);
  const auto pr = phase_profile(p, 30.0, 128);
  const models::SigmoidModel m = p;
  for (std::size_t j = 0; j < pr.omegas.size(); ++j) {
    const double w = pr.omegas[j];
    CHECK(pr.linear_part[j] == doctest::Approx(-w / 2.0 * std::log(4.0)));
    CHECK(pr.phase[j] - pr.linear_part[j] == doctest::Approx(intrinsic_phase(m, w)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(phase_profile(p, 30.0, 32), DomainError);
  CHECK_THROWS_AS(phase_profile(p, 201.0 * 2.0, 128), RangeError);
}

TEST_CASE("phase profile csv") {
  const auto path = std::filesystem::temp_directory_path() / "sigcrit_phase.csv";
  write_phase_profile_csv(path, phase_profile(models::GeneralizedLogisticParams(1, 1, 0.2), 10.0, 64));
  std::ifstream is(path);
  std::string header;
  std::getline(is, header);
  CHECK(header == "omega,phase_unwrapped,phase_linear_part");
  std::filesystem::remove(path);
}

TEST_CASE("spectral peak of the standard logistic solves the coth equation") {
  const models::SigmoidModel s = models::StandardLogistic{};
  CHECK(peak_frequency(s, 4) == doctest::Approx(oracle::coth_root(4)).epsilon(1e-12));
  CHECK(peak_frequency(s, 4) == doctest::Approx(3.1832).epsilon(1e-4));
  for (int n : {1, 10, 50}) CHECK(peak_frequency(s, n) == doctest::Approx(oracle::coth_root(n)).epsilon(1e-12));
  CHECK_THROWS_AS(peak_frequency(s, 0), DomainError);
}

TEST_CASE("spectral peak of the generalized logistic") {
  const models::SigmoidModel g = models::GeneralizedLogisticParams(1.0, 1.0, 0.2);
  for (int n : {1, 5, 20, 50}) {
    const double w = peak_frequency(g, n);
    auto obj = [&](double x) { return n * std::log(x) + std::log(std::abs(oracle::gamma({5.0, -x}) * oracle::gamma({1.0, x}))); };
    CHECK(w == doctest::Approx(oracle::golden_max(obj, 0.01, 60.0)).epsilon(1e-7));
    CHECK(count_spectral_peaks(g, n, 1e-3, 100.0, 4000) == 1);
  }
}

TEST_CASE("even component") {
  const models::SigmoidModel s = models::StandardLogistic{};
  const auto plan = spectral::plan_grid(s, 1e-12, 4);
  const auto f = spectral::sample_f(s, plan);
  const auto spec = spectral::forward(f);
  const auto e = even_component(spec);
  for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(e[j] - f[j]) < 1e-9);

  auto raw = spectral::forward(f, spectral::PhaseReference::grid_origin);
  CHECK_THROWS_AS(even_component(raw), ConventionError);

  // A delayed even bell is not even until its phase is re-anchored.
  const auto delayed = spectral::shift_time(spec, 1.0);
  const auto ed = even_component(delayed);
  double diff = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) diff = std::max(diff, std::abs(ed[j] - f[j]));
  CHECK(diff > 1e-2);
  const auto re_anchored = even_component(spectral::shift_time(delayed, -1.0));
  for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(re_anchored[j] - f[j]) < 1e-9);
}

TEST_CASE("even component of the asymmetric curve is its symmetrized slope") {
  const models::SigmoidModel g = models::GeneralizedLogisticParams(1.0, 1.0, 0.2);
  const auto plan = spectral::plan_grid(g, 1e-12, 4);
  const auto e = even_component(spectral::forward(spectral::sample_f(g, plan)));
  const std::size_t n = e.size();
  double peak = 0.0;
  for (double v : e.values()) peak = std::max(peak, std::abs(v));
  for (std::size_t j = 1; j < n / 2; ++j) CHECK(std::abs(e[n / 2 + j] - e[n / 2 - j]) < 1e-8 * peak);
  for (std::size_t j = 0; j < n; ++j) {
    const long double t = e.time(j);
    const double ref = double((oracle::genlog_f(1, 1, 0.2L, t) + oracle::genlog_f(1, 1, 0.2L, -t)) / 2);
    CHECK(std::abs(e[j] - ref) < 1e-9 * peak);
  }
  // the skewed slope peaks at t = ln 5, so the symmetrized curve has twin maxima there
  const auto jmax = std::max_element(e.values().begin(), e.values().end()) - e.values().begin();
  CHECK(std::abs(std::abs(e.time(jmax)) - std::log(5.0)) <= e.dt());
  CHECK(e[n / 2] < 0.5 * peak);
}

}
