#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigcrit/models.hpp"
#include "sigcrit/signal.hpp"
#include "sigcrit/spectral.hpp"

namespace sigcrit::analysis {

/// Highest derivative order the pipeline accepts.
inline constexpr int kMaxOrder = 60;

struct Extremum {
  double time;
  double value;  // normalized by the global extremum magnitude
};

/// Landscape of y^(n): zeros, extrema, envelope and the spectral peak data.
struct DerivativeReport {
  int order{0};
  std::vector<double> zeros;
  std::vector<Extremum> extrema;
  double global_extremum_time{0};
  double global_extremum_value{0};
  double envelope_peak_time{0};
  double omega_n{0};
  double phi_at_omega_n{0};
  double alpha_n{0};
  /// ln of the true magnitude of y^(n) at its global extremum.
  double log_scale{0};
  /// Smallest lobe height, relative to the global extremum, that counts as signal.
  double noise_floor{0};

  SampledSignal signal;    // y^(n), normalized
  SampledSignal hilbert;   // its Hilbert transform, same normalization
  SampledSignal envelope;  // |analytic signal|
};

struct SpectralPeak {
  double omega;
  double phi;    // phase of F at omega, pure time shift removed
  double alpha;  // -phi / omega
};

/// Peak of |omega^n F| for an analytic model with its phase data.
SpectralPeak locate_omega_n(const models::SigmoidModel& model, int n);
/// Same from a computed spectrum; the phase is the unwrapped bin phase.
SpectralPeak locate_omega_n(const Spectrum& spectrum, int n);

/// Base spectrum of f the landscapes differentiate, in the precision used
/// for the model (extended for analytic models).
struct BaseSpectrum {
  BasicSpectrum<long double> extended;
  Spectrum standard;
  bool is_extended{false};
};
BaseSpectrum base_spectrum(const models::SigmoidModel& model, const spectral::GridPlan& plan);

DerivativeReport derivative_landscape(const models::SigmoidModel& model,
                                      const spectral::GridPlan& plan, int n);
DerivativeReport derivative_landscape(const models::SigmoidModel& model,
                                      const spectral::GridPlan& plan, const BaseSpectrum& base,
                                      int n);

int count_zeros(const DerivativeReport& report);

/// Envelope samples nonincreasing for t >= t_star up to 1e-9 of the maximum.
bool envelope_monotonicity_check(const SampledSignal& envelope, double t_star);
bool envelope_monotonicity_check(const DerivativeReport& report, double t_star);

/// No sample exceeds the reported global extremum, and that extremum is the
/// local extremum nearest the envelope peak.
bool global_extremum_bound_check(const DerivativeReport& report);

/// Pointwise |y^(n)| <= envelope + slack * max envelope.
bool envelope_dominates(const DerivativeReport& report, double slack = 1e-9);

struct AlternationResult {
  bool alternates{false};
  int signal_zeros{0};
  int hilbert_zeros{0};
};

/// Sign changes of y^(n) and of its Hilbert transform alternate where the
/// envelope exceeds `threshold` times its maximum.
AlternationResult zero_alternation(const DerivativeReport& report, double threshold = 1e-8);

/// True when the zeros of `lower` and `higher` strictly interleave.
bool zeros_interleave(const std::vector<double>& lower, const std::vector<double>& higher);

struct CriticalPointReport {
  std::vector<double> t_m_sequence;   // odd orders 1, 3, 5, ...
  std::vector<double> t_a_sequence;   // even orders 2, 4, 6, ...
  std::vector<double> alpha_sequence; // orders 1..max_order
  double odd_limit{0};
  double even_limit{0};
  double estimated_critical_point{0};
  bool converged{false};
  double convergence_radius{0};
  std::vector<std::string> diagnostics;
  std::vector<DerivativeReport> orders;
};

/// Number of trailing points used in the tail extrapolation.
inline constexpr int kTailPoints = 5;

/// Polynomial extrapolation in 1/n of the last kTailPoints entries of
/// `values` observed at `orders`.
double extrapolate_tail(const std::vector<int>& orders, const std::vector<double>& values);

/// Increments smaller than this fraction of the tolerance count as settled.
inline constexpr double kSettledFraction = 1e-3;

/// The last three increments shrink (weakly) in magnitude; increments below
/// `settled` never count as growth.
bool increments_shrink(const std::vector<double>& values, double settled = 0.0);

CriticalPointReport critical_point(const models::SigmoidModel& model,
                                   const spectral::GridPlan& plan, int max_order, double tol);

nlohmann::json to_json(const DerivativeReport& report);
nlohmann::json to_json(const CriticalPointReport& report);

/// One row per order: n, global_extremum_time, envelope_peak_time, omega_n,
/// phi_n, alpha_n, zero_count.
std::string orders_csv(const std::vector<DerivativeReport>& reports);

}  // namespace sigcrit::analysis
