#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <vector>

#include "sigcrit/analysis.hpp"
#include "sigcrit/cli.hpp"
#include "sigcrit/io.hpp"
#include "sigcrit/special.hpp"

namespace sigcrit::cli {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (model_spec.is_null() || (model_spec.is_object() && model_spec.empty()))
    throw ConfigError("no model specified; pass --model, --family or --k/--beta/--nu");
  if (max_order < 1) throw ConfigError("max_order must be at least 1");
  if (max_order > analysis::kMaxOrder)
    throw ConfigError("max_order " + std::to_string(max_order) + " exceeds the supported maximum " +
                      std::to_string(analysis::kMaxOrder));
  if (command == Command::analyze && max_order < 6)
    throw ConfigError("analyze needs max_order >= 6");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (half_span && !(*half_span > 0.0)) throw ConfigError("grid T must be positive");
  if (points && (*points < 16 || !is_power_of_two(*points)))
    throw ConfigError("grid N must be a power of two >= 16");
  if (output_dir.empty()) throw ConfigError("output directory must not be empty");
}

models::SigmoidModel RunConfig::model() const {
  try {
    return models::parse_model_spec(model_spec, model_base_dir);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

spectral::GridPlan RunConfig::plan(const models::SigmoidModel& model) const {
  spectral::PlanOptions opt;
  opt.half_span = half_span;
  opt.points = points;
  return spectral::plan_grid(model, eps, max_order, opt);
}

namespace {

nlohmann::json read_json(const fs::path& path) {
  const std::string text = io::read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

template <class T>
T field(const nlohmann::json& obj, const char* key, const fs::path& path) {
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path.string() + ": field '" + key + "' has the wrong type");
  }
}

void prepare_output(const RunConfig& config) {
  const fs::path& dir = config.output_dir;
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) throw IoError("'" + dir.string() + "' is not a directory");
    if (!fs::is_empty(dir, ec) && !config.force)
      throw IoError("output directory '" + dir.string() +
                    "' is not empty; pass --force to overwrite");
  }
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

std::string indexed(const char* stem, int n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%02d.csv", stem, n);
  return buf;
}

nlohmann::json plan_json(const spectral::GridPlan& plan) {
  return {{"T", plan.half_span}, {"N", plan.n}, {"eps", plan.tail_tolerance},
          {"dt", plan.dt()},     {"nyquist", plan.nyquist()}};
}

void write_json(const fs::path& path, const nlohmann::json& j) { io::write_text(path, j.dump(2) + "\n"); }

std::string overlay_script(const std::string& title, const std::vector<std::string>& files,
                           const std::string& ylabel) {
  std::string s = "set datafile separator ','\nset key outside right\n";
  s += "set title '" + title + "'\nset xlabel 't'\nset ylabel '" + ylabel + "'\nplot \\\n";
  for (std::size_t i = 0; i < files.size(); ++i) {
    s += "  '" + files[i] + "' skip 1 using 1:2 with lines title '" + files[i] + "'";
    s += i + 1 < files.size() ? ", \\\n" : "\n";
  }
  return s;
}

std::vector<analysis::DerivativeReport> landscapes(const models::SigmoidModel& model,
                                                   const spectral::GridPlan& plan, int max_order) {
  const auto base = analysis::base_spectrum(model, plan);
  std::vector<std::future<analysis::DerivativeReport>> jobs;
  for (int n = 1; n <= max_order; ++n)
    jobs.push_back(std::async(std::launch::async, [&, n] {
      return analysis::derivative_landscape(model, plan, base, n);
    }));
  std::vector<analysis::DerivativeReport> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace

RunConfig load_run_config(const fs::path& path) {
  const auto j = read_json(path);
  if (!j.is_object()) throw ConfigError(path.string() + ": run file must hold an object");
  RunConfig c;
  const fs::path base = path.parent_path();
  if (j.contains("model")) {
    c.model_spec = j.at("model");
    c.model_base_dir = base;
  } else if (j.contains("model_path")) {
    const fs::path model_path = base / field<std::string>(j, "model_path", path);
    c.model_spec = read_json(model_path);
    c.model_base_dir = model_path.parent_path();
  }
  if (j.contains("max_order")) c.max_order = field<int>(j, "max_order", path);
  if (j.contains("tol")) c.tol = field<double>(j, "tol", path);
  if (j.contains("output_dir")) c.output_dir = base / field<std::string>(j, "output_dir", path);
  if (j.contains("plots")) c.emit_plots = field<bool>(j, "plots", path);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (!g.is_object()) throw ConfigError(path.string() + ": 'grid' must be an object");
    if (g.contains("T")) c.half_span = field<double>(g, "T", path);
    if (g.contains("N")) c.points = field<std::size_t>(g, "N", path);
    if (g.contains("eps")) c.eps = field<double>(g, "eps", path);
  }
  return c;
}

int cmd_transform(const RunConfig& config) {
  config.validate();
  const auto model = config.model();
  const auto plan = config.plan(model);
  prepare_output(config);

  const Spectrum fft = spectral::forward(spectral::sample_f(model, plan));
  io::write_spectrum_csv(config.output_dir / "spectrum.csv", fft);

  const std::size_t n = fft.size();
  const bool analytic = models::is_analytic(model);
  const auto* genlog = std::get_if<models::GeneralizedLogisticParams>(&model);
  auto closed = [&](double w) -> special::ComplexValue {
    if (!genlog) return special::closed_form_F_sech2(w);
    if (std::abs(w / genlog->beta()) <= special::kGammaImagLimit)
      return special::closed_form_F_genlog(*genlog, w);
    return std::exp(special::log_spectrum<double>(model, w));
  };

  std::string table = analytic ? "omega,fft_re,fft_im,closed_re,closed_im\n" : "omega,fft_re,fft_im\n";
  double max_rel = 0.0, max_abs = 0.0, band = 0.0;
  const double f0 = analytic ? std::abs(closed(0.0)) : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t b = (k + n / 2) % n;
    const double w = fft.omega(b);
    const auto v = fft.values[b];
    table += io::format_real(w) + "," + io::format_real(v.real()) + "," + io::format_real(v.imag());
    if (analytic) {
      const auto c = closed(w);
      table += "," + io::format_real(c.real()) + "," + io::format_real(c.imag());
      const double err = std::abs(v - c);
      max_abs = std::max(max_abs, err);
      if (std::abs(c) >= 1e-6 * f0) {
        max_rel = std::max(max_rel, err / std::abs(c));
        band = std::max(band, std::abs(w));
      }
    }
    table += "\n";
  }
  io::write_text(config.output_dir / "transform.csv", table);

  nlohmann::json summary = {{"model", models::describe(model)}, {"grid", plan_json(plan)}};
  if (analytic) {
    summary["max_relative_error"] = max_rel;
    summary["relative_error_band"] = band;
    summary["max_absolute_error"] = max_abs;
  }
  if (genlog) {
    const double w_max = std::min(plan.nyquist(), special::kGammaImagLimit * genlog->beta());
    const auto profile = special::phase_profile(*genlog, w_max, 512);
    special::write_phase_profile_csv(config.output_dir / "phase.csv", profile);
  }
  write_json(config.output_dir / "summary.json", summary);

  if (config.emit_plots) {
    std::string s = "set datafile separator ','\nset logscale y\nset xlabel 'omega'\n"
                    "set ylabel '|F(omega)|'\nplot 'transform.csv' skip 1 using 1:(sqrt($2**2+$3**2)) "
                    "with lines title 'fft'";
    if (analytic) s += ", \\\n  'transform.csv' skip 1 using 1:(sqrt($4**2+$5**2)) with lines title 'closed form'";
    io::write_text(config.output_dir / "transform.gp", s + "\n");
  }
  return 0;
}

int cmd_derivatives(const RunConfig& config) {
  config.validate();
  const auto model = config.model();
  const auto plan = config.plan(model);
  prepare_output(config);

  const auto reports = landscapes(model, plan, config.max_order);
  nlohmann::json all = nlohmann::json::array();
  std::vector<std::string> derivative_files, envelope_files;
  for (const auto& r : reports) {
    derivative_files.push_back(indexed("derivative", r.order));
    envelope_files.push_back(indexed("envelope", r.order));
    io::write_signal_csv(config.output_dir / derivative_files.back(), r.signal);
    io::write_signal_csv(config.output_dir / envelope_files.back(), r.envelope);
    all.push_back(analysis::to_json(r));
  }
  write_json(config.output_dir / "landscapes.json",
             {{"model", models::describe(model)}, {"grid", plan_json(plan)}, {"orders", all}});

  // y on the grid, loadable again as a tabulated model.
  std::vector<double> y(plan.n);
  const SampledSignal f = spectral::sample_f(model, plan);
  for (std::size_t j = 0; j < plan.n; ++j) {
    double t = f.time(j);
    if (const auto* curve = std::get_if<models::TabulatedCurve>(&model))
      t = std::clamp(t, curve->t_min(), curve->t_max());
    y[j] = models::eval_y(model, t);
  }
  io::write_signal_csv(config.output_dir / "y.csv", SampledSignal(plan.t0(), plan.dt(), std::move(y)));
  write_json(config.output_dir / "tabulated_model.json",
             {{"family", "tabulated"}, {"samples_path", "y.csv"}});

  if (config.emit_plots) {
    io::write_text(config.output_dir / "derivatives.gp",
                   overlay_script("normalized derivatives", derivative_files, "y^(n) / max"));
    io::write_text(config.output_dir / "envelopes.gp",
                   overlay_script("envelopes", envelope_files, "|y_A^(n)| / max"));
  }
  return 0;
}

int cmd_analyze(const RunConfig& config) {
  config.validate();
  const auto model = config.model();
  const auto plan = config.plan(model);
  prepare_output(config);

  const auto report = analysis::critical_point(model, plan, config.max_order, config.tol);
  auto j = analysis::to_json(report);
  j["model"] = models::describe(model);
  j["grid"] = plan_json(plan);
  write_json(config.output_dir / "report.json", j);
  io::write_text(config.output_dir / "orders.csv", analysis::orders_csv(report.orders));

  if (config.emit_plots) {
    io::write_text(config.output_dir / "convergence.gp",
                   "set datafile separator ','\nset xlabel 'n'\nset key top right\n"
                   "plot 'orders.csv' skip 1 using 1:(int($1) % 2 == 1 ? $2 : NaN) with linespoints "
                   "title 't_m (odd n)', \\\n"
                   "  'orders.csv' skip 1 using 1:(int($1) % 2 == 0 ? $2 : NaN) with linespoints "
                   "title 't_a (even n)', \\\n"
                   "  'orders.csv' skip 1 using 1:6 with linespoints title 'alpha_n'\n");
  }
  return 0;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::numeric: return 3;
    case ErrorKind::io: return 4;
  }
  return 3;
}

std::string error_json(const std::string& category, ErrorKind kind, const std::string& message) {
  const char* k = kind == ErrorKind::config ? "config" : kind == ErrorKind::io ? "io" : "numeric";
  return nlohmann::json{{"error", category}, {"kind", k}, {"message", message},
                        {"exit_code", exit_code(kind)}}
      .dump();
}

}  // namespace sigcrit::cli
