#include <iostream>

#include <CLI11.hpp>

#include "sigcrit/cli.hpp"
#include "sigcrit/io.hpp"

namespace sigcrit::cli {

namespace {

struct Flags {
  std::string config;
  std::string model;
  std::string family;
  std::optional<double> k, beta, nu;
  std::optional<int> max_order;
  std::optional<double> tol, eps, half_span;
  std::optional<std::size_t> points;
  std::string out;
  bool plots = false;
  bool force = false;
};

void add_flags(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config, "Run file (JSON)");
  sub.add_option("--model", f.model, "Model spec file (JSON)");
  sub.add_option("--family", f.family, "standard | generalized | tabulated");
  sub.add_option("--k", f.k, "Generalized logistic k");
  sub.add_option("--beta", f.beta, "Generalized logistic beta");
  sub.add_option("--nu", f.nu, "Generalized logistic nu");
  sub.add_option("--max-order", f.max_order, "Highest derivative order");
  sub.add_option("--tol", f.tol, "Convergence tolerance");
  sub.add_option("--eps", f.eps, "Tail tolerance of the grid");
  sub.add_option("--half-span", f.half_span, "Grid half span T");
  sub.add_option("--points", f.points, "Grid size N (power of two)");
  sub.add_option("--out", f.out, "Output directory");
  sub.add_flag("--plots", f.plots, "Write gnuplot scripts");
  sub.add_flag("--force", f.force, "Overwrite a non-empty output directory");
}

RunConfig build_config(const Flags& f, Command command) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  c.command = command;
  if (!f.model.empty()) {
    const std::filesystem::path path = f.model;
    try {
      c.model_spec = nlohmann::json::parse(io::read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    c.model_base_dir = path.parent_path();
  }
  if (!c.model_spec.is_object()) c.model_spec = nlohmann::json::object();
  if (!f.family.empty()) c.model_spec["family"] = f.family;
  if (f.k || f.beta || f.nu) {
    if (!c.model_spec.contains("family")) c.model_spec["family"] = "generalized";
    if (f.k) c.model_spec["k"] = *f.k;
    if (f.beta) c.model_spec["beta"] = *f.beta;
    if (f.nu) c.model_spec["nu"] = *f.nu;
  }
  if (f.max_order) c.max_order = *f.max_order;
  if (f.tol) c.tol = *f.tol;
  if (f.eps) c.eps = *f.eps;
  if (f.half_span) c.half_span = *f.half_span;
  if (f.points) c.points = *f.points;
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.plots) c.emit_plots = true;
  if (f.force) c.force = true;
  return c;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Critical points of sigmoidal curves from high-order derivative spectra"};
  app.require_subcommand(1);
  Flags flags;
  auto* transform = app.add_subcommand("transform", "Closed-form versus FFT spectra");
  auto* derivatives = app.add_subcommand("derivatives", "Normalized derivatives and envelopes");
  auto* analyze = app.add_subcommand("analyze", "Critical-point report");
  for (auto* sub : {transform, derivatives, analyze}) add_flags(*sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("usage", ErrorKind::config, e.what()) << std::endl;
    return exit_code(ErrorKind::config);
  }

  try {
    if (transform->parsed()) return cmd_transform(build_config(flags, Command::transform));
    if (derivatives->parsed()) return cmd_derivatives(build_config(flags, Command::derivatives));
    return cmd_analyze(build_config(flags, Command::analyze));
  } catch (const Error& e) {
    std::cerr << error_json(e.category(), e.kind(), e.what()) << std::endl;
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << error_json("io", ErrorKind::io, e.what()) << std::endl;
    return exit_code(ErrorKind::io);
  } catch (const std::exception& e) {
    std::cerr << error_json("internal", ErrorKind::numeric, e.what()) << std::endl;
    return exit_code(ErrorKind::numeric);
  }
}

}  // namespace sigcrit::cli
