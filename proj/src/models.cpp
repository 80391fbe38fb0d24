#include "sigcrit/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sigcrit/detail/roots.hpp"
#include "sigcrit/io.hpp"

namespace sigcrit::models {

GeneralizedLogisticParams::GeneralizedLogisticParams(double k, double beta, double nu)
    : k_(k), beta_(beta), nu_(nu) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("generalized logistic: k must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw DomainError("generalized logistic: beta must be > 0");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("generalized logistic: nu must be > 0");
}

// ---------------------------------------------------------------------------
// Tabulated curves

TabulatedCurve::TabulatedCurve(std::vector<double> t, std::vector<double> y,
                               double monotone_slack)
    : t_(std::move(t)), y_(std::move(y)) {
  const std::size_t n = t_.size();
  if (n != y_.size()) throw DomainError("tabulated curve: t and y lengths differ");
  if (n < 4) throw DomainError("tabulated curve: need at least 4 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(t_[i] > t_[i - 1])) throw DomainError("tabulated curve: t must be strictly increasing");
  const auto [lo, hi] = std::minmax_element(y_.begin(), y_.end());
  const double slack = monotone_slack * std::max(*hi - *lo, 1e-300);
  for (std::size_t i = 1; i < n; ++i)
    if (y_[i] < y_[i - 1] - slack)
      throw DomainError("tabulated curve: samples are not nondecreasing near t=" +
                        std::to_string(t_[i]));

  // natural spline: m_0 = m_{n-1} = 0, tridiagonal system for the interior
  m_.assign(n, 0.0);
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t_[i] - t_[i - 1];
    const double h1 = t_[i + 1] - t_[i];
    const double a = h0 / 6.0;
    const double b = (h0 + h1) / 3.0;
    const double cc = h1 / 6.0;
    const double rhs = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (rhs - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
    if (i == 1) break;
  }
}

TabulatedCurve::TabulatedCurve(const SampledSignal& y, double monotone_slack)
    : TabulatedCurve(
          [&] {
            std::vector<double> t(y.size());
            for (std::size_t j = 0; j < y.size(); ++j) t[j] = y.time(j);
            return t;
          }(),
          y.values(), monotone_slack) {}

std::size_t TabulatedCurve::interval(double t) const {
  if (!(t >= t_.front() && t <= t_.back()))
    throw RangeError("tabulated curve: t=" + std::to_string(t) + " outside [" +
                     std::to_string(t_.front()) + ", " + std::to_string(t_.back()) + "]");
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - t_.begin());
  if (i == 0) i = 1;
  if (i >= t_.size()) i = t_.size() - 1;
  return i - 1;
}

double TabulatedCurve::value(double t) const {
  const std::size_t i = interval(t);
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - t) / h;
  const double b = (t - t_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double TabulatedCurve::derivative(double t) const {
  const std::size_t i = interval(t);
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - t) / h;
  const double b = (t - t_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

double TabulatedCurve::min_spacing() const {
  double h = t_[1] - t_[0];
  for (std::size_t i = 2; i < t_.size(); ++i) h = std::min(h, t_[i] - t_[i - 1]);
  return h;
}

// ---------------------------------------------------------------------------
// Analytic evaluation

namespace {

// ln(1 + k e^{-beta t}) and ln(k e^{-beta t}), using the e^{beta t} branch
// once beta t drops below -30.
struct LogisticLogs {
  double log_u;
  double log1p_u;
};

LogisticLogs logistic_logs(const GeneralizedLogisticParams& p, double t) {
  const double bt = p.beta() * t;
  const double log_u = std::log(p.k()) - bt;
  if (bt < -30.0) return {log_u, log_u + std::log1p(std::exp(-log_u))};
  return {log_u, std::log1p(std::exp(log_u))};
}

double sech2(double t) {
  const double a = std::abs(t);
  if (a < 20.0) {
    const double c = std::cosh(t);
    return 1.0 / (c * c);
  }
  const double e = std::exp(-2.0 * a);
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

// f'/f and f''/f, sign-faithful and free of under/overflow.
double log_derivative_ratio(const SigmoidModel& model, double t, int order) {
  if (std::holds_alternative<StandardLogistic>(model)) {
    const double u = std::tanh(t);
    return order == 1 ? -2.0 * u : 6.0 * u * u - 2.0;
  }
  const auto& gp = std::get<GeneralizedLogisticParams>(model);
  const double p = gp.p();
  const double b = gp.beta();
  const auto logs = logistic_logs(gp, t);
  // w = u/(1+u), 1/(1+u) = 1-w
  const double w = std::exp(logs.log_u - logs.log1p_u);
  const double v = 1.0 - w;
  if (order == 1) return -b * (v - p * w);  // -b (1 - p u)/(1+u)
  // b^2 (p^2 u^2 - (3p+1) u + 1)/(1+u)^2
  return b * b * (p * p * w * w - (3.0 * p + 1.0) * w * v + v * v);
}

}  // namespace

bool is_analytic(const SigmoidModel& model) {
  return !std::holds_alternative<TabulatedCurve>(model);
}

std::string describe(const SigmoidModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, StandardLogistic>) {
          os << "standard logistic";
        } else if constexpr (std::is_same_v<T, GeneralizedLogisticParams>) {
          os << "generalized logistic (k=" << m.k() << ", beta=" << m.beta() << ", nu=" << m.nu()
             << ")";
        } else {
          os << "tabulated curve (" << m.t().size() << " samples on [" << m.t_min() << ", "
             << m.t_max() << "])";
        }
        return os.str();
      },
      model);
}

double eval_y(const SigmoidModel& model, double t) {
  return std::visit(
      [t](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StandardLogistic>) {
          return std::tanh(t);
        } else if constexpr (std::is_same_v<T, GeneralizedLogisticParams>) {
          const auto logs = logistic_logs(m, t);
          return -1.0 + 2.0 * std::exp(-m.p() * logs.log1p_u);
        } else {
          return m.value(t);
        }
      },
      model);
}

double eval_f(const SigmoidModel& model, double t) {
  return std::visit(
      [t](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StandardLogistic>) {
          return sech2(t);
        } else if constexpr (std::is_same_v<T, GeneralizedLogisticParams>) {
          const auto logs = logistic_logs(m, t);
          const double p = m.p();
          return 2.0 * m.beta() * p * std::exp(logs.log_u - (p + 1.0) * logs.log1p_u);
        } else {
          return m.derivative(t);
        }
      },
      model);
}

double eval_tabulated(const TabulatedCurve& curve, double t) { return curve.value(t); }

double eval_tabulated(const SampledSignal& signal, double t) {
  return TabulatedCurve(signal, std::numeric_limits<double>::infinity()).value(t);
}

InflectionPoints inflection_points_exact(const SigmoidModel& model) {
  if (!is_analytic(model))
    throw DomainError("inflection points need an analytic model, got " + describe(model));

  double scale = 1.0;
  if (const auto* gp = std::get_if<GeneralizedLogisticParams>(&model)) scale = 1.0 / gp->beta();
  const double xtol = 1e-14 * std::max(1.0, scale);

  auto ratio1 = [&](double t) { return log_derivative_ratio(model, t, 1); };
  auto ratio2 = [&](double t) { return log_derivative_ratio(model, t, 2); };

  // f' > 0 to the left of the peak and < 0 to the right; expand until it flips.
  auto expand = [&](auto&& fn, double from, double dir, const char* what) {
    const double f0 = fn(from);
    if (f0 == 0.0) return std::pair{from, from};
    double step = 0.25 * scale;
    for (int i = 0; i < 60; ++i) {
      const double to = from + dir * step;
      if ((fn(to) < 0.0) != (f0 < 0.0)) return std::pair{std::min(from, to), std::max(from, to)};
      step *= 1.5;
    }
    throw BracketError(std::string(what) + ": no sign change found from t=" +
                       std::to_string(from) + " for " + describe(model));
  };

  double center = 0.0;
  if (const auto* gp = std::get_if<GeneralizedLogisticParams>(&model))
    center = std::log(gp->k()) / gp->beta();
  const double dir = ratio1(center) > 0.0 ? 1.0 : -1.0;
  auto [lo, hi] = expand(ratio1, center, dir, "zero of y''");
  const double t_m = detail::bracketed_root(ratio1, lo, hi, xtol, "zero of y''");

  // f''/f is negative at the peak, positive far out on both sides.
  auto [la, ha] = expand(ratio2, t_m, -1.0, "left zero of y'''");
  auto [lb, hb] = expand(ratio2, t_m, 1.0, "right zero of y'''");
  const double t_a = detail::bracketed_root(ratio2, la, ha, xtol, "left zero of y'''");
  const double t_b = detail::bracketed_root(ratio2, lb, hb, xtol, "right zero of y'''");
  return {t_a, t_m, t_b};
}

// ---------------------------------------------------------------------------
// Spec files

SigmoidModel parse_model_spec(const nlohmann::json& spec, const std::filesystem::path& base_dir) {
  if (!spec.is_object() || !spec.contains("family"))
    throw ConfigError("model spec: missing 'family'");
  if (!spec.at("family").is_string()) throw ConfigError("model spec: 'family' must be a string");
  const auto family = spec.at("family").get<std::string>();
  auto number = [&](const char* key) {
    if (!spec.contains(key) || !spec.at(key).is_number())
      throw ConfigError(std::string("model spec: '") + key + "' must be a number");
    return spec.at(key).get<double>();
  };
  if (family == "standard") return StandardLogistic{};
  if (family == "generalized") {
    try {
      return GeneralizedLogisticParams(number("k"), number("beta"), number("nu"));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("model spec: ") + e.what());
    }
  }
  if (family == "tabulated") {
    if (!spec.contains("samples_path") || !spec.at("samples_path").is_string())
      throw ConfigError("model spec: tabulated family needs 'samples_path'");
    std::filesystem::path path = spec.at("samples_path").get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    auto cols = io::read_csv_columns(path, 2);
    try {
      return TabulatedCurve(std::move(cols[0]), std::move(cols[1]));
    } catch (const DomainError& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
  throw ConfigError("model spec: unknown family '" + family + "'");
}

SigmoidModel load_model_spec(const std::filesystem::path& path) {
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(io::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_model_spec(spec, path.parent_path());
}

}  // namespace sigcrit::models
