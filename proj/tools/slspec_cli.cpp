// Command-line front end: parses flags into a RunConfig and hands over to slspec::run.
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "slspec/cli.hpp"
#include "slspec/parallel.hpp"

int main(int argc, char** argv) {
  using namespace slspec;
  CLI::App app{"Spectral asymptotics and reference eigenpairs for -y'' + u'y on [0,pi], y(0) = 0, y[1](pi) = 0"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.jobs = default_jobs();

  const std::map<std::string, Method> methods{{"asym", Method::asym}, {"shoot", Method::shoot}, {"both", Method::both}};
  const std::map<std::string, EigenKind> kinds{
      {"asym", EigenKind::asym}, {"biorth", EigenKind::biorth}, {"oracle", EigenKind::oracle}};
  const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};

  auto common = [&](CLI::App* sub) {
    sub->add_option("--potential", cfg.potential_path, "Potential JSON file")->required();
    sub->add_option("--grid", cfg.grid, "Grid points on [0,pi]");
    sub->add_option("--alpha", cfg.alpha, "Half-width of the admissible strip |Im sqrt(lambda)| < alpha");
    sub->add_option("--tol-root", cfg.tol_root, "Relative root tolerance on sqrt(lambda)");
    sub->add_option("--tol-quad", cfg.tol_quad, "Oracle integration tolerance");
    sub->add_option("--format", cfg.format, "csv or json")
        ->transform(CLI::CheckedTransformer(formats).description(""))
        ->option_text("csv|json");
    sub->add_option("--out", cfg.out_path, "Output file (default stdout)");
    sub->add_option("--jobs", cfg.jobs, "Worker threads (default SLSPEC_JOBS or core count)");
  };
  auto range = [&](CLI::App* sub) {
    sub->add_option("--n-min", cfg.n_min, "First index");
    sub->add_option("--n-max", cfg.n_max, "Last index");
  };

  auto* spectrum = app.add_subcommand("spectrum", "Asymptotic and/or numeric eigenvalues");
  common(spectrum);
  range(spectrum);
  spectrum->add_option("--method", cfg.method, "asym, shoot or both")
      ->transform(CLI::CheckedTransformer(methods).description(""))
      ->option_text("asym|shoot|both");

  auto* eigf = app.add_subcommand("eigenfunction", "Eigenfunction table x, Re y, Im y");
  common(eigf);
  eigf->add_option("--n", cfg.n, "Index")->required();
  eigf->add_option("--kind", cfg.kind, "asym, biorth or oracle")
      ->transform(CLI::CheckedTransformer(kinds).description(""))
      ->option_text("asym|biorth|oracle");

  auto* validate = app.add_subcommand("validate", "Remainder sweep report");
  common(validate);
  range(validate);

  auto* gamma = app.add_subcommand("gamma", "gamma(m^2) profile");
  common(gamma);
  range(gamma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (spectrum->parsed()) cfg.command = Command::spectrum;
  if (eigf->parsed()) cfg.command = Command::eigenfunction;
  if (validate->parsed()) cfg.command = Command::validate;
  if (gamma->parsed()) cfg.command = Command::gamma;

  return run(cfg, std::cout, std::cerr);
}
