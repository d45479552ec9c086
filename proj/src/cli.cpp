#include "slspec/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "slspec/errors.hpp"
#include "slspec/parallel.hpp"
#include "slspec/validation.hpp"

namespace slspec {

std::string to_string(Command c) {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::eigenfunction: return "eigenfunction";
    case Command::validate: return "validate";
    case Command::gamma: return "gamma";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::asym: return "asym";
    case Method::shoot: return "shoot";
    case Method::both: return "both";
  }
  return "?";
}

std::string to_string(EigenKind k) {
  switch (k) {
    case EigenKind::asym: return "asym";
    case EigenKind::biorth: return "biorth";
    case EigenKind::oracle: return "oracle";
  }
  return "?";
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

void RunConfig::validate() const {
  if (n_min < 1) throw ConfigError("--n-min must be >= 1");
  if (n_max < n_min) throw ConfigError("empty index range: n-max < n-min");
  if (command == Command::eigenfunction && n < 1) throw ConfigError("--n must be >= 1");
  if (command == Command::validate && n_max < 10) throw ConfigError("validate needs --n-max >= 10");
  if (grid < 16) throw ConfigError("--grid must be >= 16");
  if (!(tol_root > 0.0) || !(tol_quad > 0.0)) throw ConfigError("tolerances must be positive");
  if (!(alpha > 0.0)) throw ConfigError("--alpha must be positive");
  if (jobs < 1) throw ConfigError("--jobs must be >= 1");
}

std::string RunConfig::to_json() const {
  nlohmann::json j = {{"potential", potential_path},
                      {"command", to_string(command)},
                      {"n_min", n_min},
                      {"n_max", n_max},
                      {"n", n},
                      {"grid", grid},
                      {"method", to_string(method)},
                      {"kind", to_string(kind)},
                      {"alpha", alpha},
                      {"tol_root", tol_root},
                      {"tol_quad", tol_quad},
                      {"format", to_string(format)}};
  return j.dump();
}

namespace {

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.domain.alpha = cfg.alpha;
  o.tol = cfg.tol_root;
  if (cfg.tol_quad < 1e-10) {
    const double f = std::max(std::pow(cfg.tol_quad / 1e-10, 0.25), 1.0 / 16.0);
    o.policy.h_max *= f;
    o.policy.phase_step *= f;
    o.policy.prufer_phase_step *= f;
  }
  return o;
}

struct SpectrumRow {
  SpectralPoint sp;
  std::optional<SecularResult> res;
  std::string note;
};

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '"') c = ' ';
  return s;
}

nlohmann::json cplx_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

std::string wrap_json(const RunConfig& cfg, const PotentialSpec& p, nlohmann::json body) {
  body["schema"] = kReportSchema;
  body["config"] = nlohmann::json::parse(cfg.to_json());
  body["potential"] = p.describe();
  return body.dump(2) + "\n";
}

}  // namespace

std::string cmd_spectrum(const RunConfig& cfg, const PotentialSpec& p) {
  const auto count = static_cast<std::size_t>(cfg.n_max - cfg.n_min + 1);
  std::vector<SpectrumRow> rows(count);
  const SolveOptions opts = solve_options(cfg);
  parallel_for(count, cfg.jobs, [&](std::size_t i) {
    auto& row = rows[i];
    const int n = cfg.n_min + static_cast<int>(i);
    row.sp = eigenvalue_asym(p, n);
    if (cfg.method == Method::asym) return;
    try {
      row.res = solve_eigenvalue(p, n, row.sp, opts);
      row.sp.attach_numeric(row.res->sqrt_lambda);
    } catch (const std::exception& e) {
      row.note = one_line(e.what());
    }
  });

  const bool asym = cfg.method != Method::shoot;
  const bool num = cfg.method != Method::asym;
  if (cfg.format == OutputFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json j = {{"n", r.sp.n}, {"m", r.sp.m}};
      if (asym) {
        j["sqrt_lambda_asym"] = cplx_json(r.sp.sqrt_lambda_asym);
        j["phase_correction"] = cplx_json(r.sp.phase_correction);
        j["gamma_at_m2"] = r.sp.gamma_at_m2;
      }
      if (num) {
        j["status"] = r.res ? "ok" : "degraded";
        if (r.res) {
          j["sqrt_lambda_num"] = cplx_json(r.res->sqrt_lambda);
          j["lambda_num"] = cplx_json(r.res->lambda);
          j["residual"] = r.res->residual;
          j["multiplicity_hint"] = r.res->multiplicity_hint;
          if (asym) j["abs_rho"] = std::abs(*r.sp.remainder);
        } else {
          j["note"] = r.note;
        }
      }
      arr.push_back(j);
    }
    return wrap_json(cfg, p, {{"command", "spectrum"}, {"rows", arr}});
  }

  std::ostringstream os;
  os << "n,m";
  if (asym) os << ",sqrt_lambda_asym_re,sqrt_lambda_asym_im,gamma";
  if (num) os << ",sqrt_lambda_num_re,sqrt_lambda_num_im,residual";
  if (asym && num) os << ",abs_rho";
  if (num) os << ",status";
  os << '\n';
  const double nan = std::nan("");
  for (const auto& r : rows) {
    os << r.sp.n << ',' << format_number(r.sp.m);
    if (asym)
      os << ',' << format_number(r.sp.sqrt_lambda_asym.real()) << ',' << format_number(r.sp.sqrt_lambda_asym.imag())
         << ',' << format_number(r.sp.gamma_at_m2);
    if (num) {
      const cplx k = r.res ? r.res->sqrt_lambda : cplx(nan, nan);
      os << ',' << format_number(k.real()) << ',' << format_number(k.imag()) << ','
         << format_number(r.res ? r.res->residual : nan);
    }
    if (asym && num) os << ',' << format_number(r.res ? std::abs(*r.sp.remainder) : nan);
    if (num) os << ',' << (r.res ? "ok" : "degraded: " + r.note);
    os << '\n';
  }
  return os.str();
}

std::string cmd_eigenfunction(const RunConfig& cfg, const PotentialSpec& p) {
  const auto grid = uniform_grid(cfg.grid);
  EigenfunctionTable t;
  switch (cfg.kind) {
    case EigenKind::asym: t = eigenfunction_asym(p, cfg.n, grid); break;
    case EigenKind::biorth: t = biorthogonal_asym(p, cfg.n, grid); break;
    case EigenKind::oracle: {
      const SolveOptions opts = solve_options(cfg);
      const auto res = solve_eigenvalue(p, cfg.n, eigenvalue_asym(p, cfg.n), opts);
      const auto ref = eigenfunction_asym(p, cfg.n, grid);
      t = eigenfunction_numeric(p, res.lambda, grid, cfg.n, &ref, opts.policy);
      break;
    }
  }
  if (cfg.format == OutputFormat::json) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (const auto& v : t.values) {
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    return wrap_json(cfg, p,
                     {{"command", "eigenfunction"},
                      {"n", t.n},
                      {"normalization", t.normalization},
                      {"x", t.grid},
                      {"re", re},
                      {"im", im}});
  }
  std::ostringstream os;
  os << "x,re,im\n";
  for (std::size_t i = 0; i < t.grid.size(); ++i)
    os << format_number(t.grid[i]) << ',' << format_number(t.values[i].real()) << ','
       << format_number(t.values[i].imag()) << '\n';
  return os.str();
}

std::string cmd_validate(const RunConfig& cfg, const PotentialSpec& p) {
  SweepOptions opts;
  opts.n_min = cfg.n_min;
  opts.grid = cfg.grid;
  opts.jobs = cfg.jobs;
  opts.solve = solve_options(cfg);
  const auto rep = remainder_sweep(p, cfg.n_max, opts);
  if (cfg.format == OutputFormat::json) return report_to_json(rep, cfg.to_json());
  return report_to_csv(rep);
}

std::string cmd_gamma(const RunConfig& cfg, const PotentialSpec& p) {
  const auto count = static_cast<std::size_t>(cfg.n_max - cfg.n_min + 1);
  std::vector<GammaValue> gs(count);
  parallel_for(count, cfg.jobs, [&](std::size_t i) {
    const double m = cfg.n_min + static_cast<double>(i) - 0.5;
    gs[i] = eval_gamma_at(p, cplx(m, 0.0));
  });
  if (cfg.format == OutputFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < count; ++i) {
      const auto& g = gs[i];
      arr.push_back({{"n", cfg.n_min + static_cast<int>(i)},
                     {"gamma", g.value},
                     {"gamma_upper", g.upper_bound},
                     {"sup_sin", g.sup_sin},
                     {"sup_cos", g.sup_cos},
                     {"sup_double", g.sup_double},
                     {"sup_u2_cos", g.sup_u2_cos},
                     {"tail", g.tail}});
    }
    return wrap_json(cfg, p, {{"command", "gamma"}, {"rows", arr}});
  }
  std::ostringstream os;
  os << "n,m,gamma,gamma_sq,n_gamma,gamma_upper,sup_sin,sup_cos,sup_double,sup_u2_cos,tail\n";
  for (std::size_t i = 0; i < count; ++i) {
    const int n = cfg.n_min + static_cast<int>(i);
    const auto& g = gs[i];
    os << n << ',' << format_number(n - 0.5) << ',' << format_number(g.value) << ','
       << format_number(g.value * g.value) << ',' << format_number(n * g.value) << ','
       << format_number(g.upper_bound) << ',' << format_number(g.sup_sin) << ',' << format_number(g.sup_cos) << ','
       << format_number(g.sup_double) << ',' << format_number(g.sup_u2_cos) << ',' << format_number(g.tail)
       << '\n';
  }
  return os.str();
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  PotentialSpec p = PotentialSpec::zero();
  try {
    cfg.validate();
    p = load_potential(cfg.potential_path);
  } catch (const ConfigError& e) {
    err << "slspec: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "slspec: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "slspec: invalid potential: " << e.what() << '\n';
    return 2;
  }

  std::string text;
  try {
    switch (cfg.command) {
      case Command::spectrum: text = cmd_spectrum(cfg, p); break;
      case Command::eigenfunction: text = cmd_eigenfunction(cfg, p); break;
      case Command::validate: text = cmd_validate(cfg, p); break;
      case Command::gamma: text = cmd_gamma(cfg, p); break;
    }
  } catch (const std::exception& e) {
    err << "slspec: " << to_string(cfg.command) << " failed: " << e.what() << '\n';
    return 3;
  }

  if (cfg.out_path.empty()) {
    out << text;
    return 0;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) {
    err << "slspec: cannot write \"" << cfg.out_path << "\"\n";
    return 2;
  }
  f << text;
  return 0;
}

}  // namespace slspec
