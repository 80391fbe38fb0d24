#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sigcrit/signal.hpp"

namespace sigcrit::models {

/// (k, beta, nu) of y(t) = -1 + 2 [1 + k exp(-beta t)]^(-1/nu).
class GeneralizedLogisticParams {
 public:
  GeneralizedLogisticParams(double k, double beta, double nu);

  double k() const { return k_; }
  double beta() const { return beta_; }
  double nu() const { return nu_; }
  /// 1/nu, the exponent that appears throughout the closed forms.
  double p() const { return 1.0 / nu_; }

  friend bool operator==(const GeneralizedLogisticParams&,
                         const GeneralizedLogisticParams&) = default;

 private:
  double k_;
  double beta_;
  double nu_;
};

/// y(t) = tanh(t), f(t) = sech^2(t).
struct StandardLogistic {
  friend bool operator==(const StandardLogistic&, const StandardLogistic&) = default;
};

/// Natural cubic interpolant of monotone (t, y) samples; no extrapolation.
class TabulatedCurve {
 public:
  /// Relative slack allowed for decreasing steps, as a fraction of the y range.
  static constexpr double kDefaultMonotoneSlack = 1e-6;

  TabulatedCurve(std::vector<double> t, std::vector<double> y,
                 double monotone_slack = kDefaultMonotoneSlack);
  explicit TabulatedCurve(const SampledSignal& y,
                          double monotone_slack = kDefaultMonotoneSlack);

  double value(double t) const;
  double derivative(double t) const;

  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }
  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& y() const { return y_; }
  /// Smallest knot spacing.
  double min_spacing() const;

 private:
  std::size_t interval(double t) const;

  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

using SigmoidModel = std::variant<StandardLogistic, GeneralizedLogisticParams, TabulatedCurve>;

bool is_analytic(const SigmoidModel& model);
std::string describe(const SigmoidModel& model);

/// Sigmoid value y(t).
double eval_y(const SigmoidModel& model, double t);
/// First derivative f(t) = y'(t).
double eval_f(const SigmoidModel& model, double t);

/// Cubic interpolation of a tabulated signal; throws RangeError outside the span.
double eval_tabulated(const TabulatedCurve& curve, double t);
double eval_tabulated(const SampledSignal& signal, double t);

/// Zero of y'' (t_m, the maximum of f) and the adjacent zeros of y''' (t_a < t_m < t_b).
struct InflectionPoints {
  double t_a;
  double t_m;
  double t_b;

  std::vector<double> sorted() const { return {t_a, t_m, t_b}; }
};

InflectionPoints inflection_points_exact(const SigmoidModel& model);

/// Builds a model from a spec object with `family` in {"standard",
/// "generalized", "tabulated"}. Relative `samples_path` entries resolve
/// against `base_dir`.
SigmoidModel parse_model_spec(const nlohmann::json& spec,
                              const std::filesystem::path& base_dir = {});
SigmoidModel load_model_spec(const std::filesystem::path& path);

}  // namespace sigcrit::models
