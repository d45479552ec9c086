#include "slspec/validation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "slspec/errors.hpp"
#include "slspec/parallel.hpp"

namespace slspec {

namespace {

constexpr double kNoiseFloor = 1e-10;


double sum_over(const std::vector<RemainderRecord>& recs, int lo, int hi, double RemainderRecord::*field) {
  double s = 0.0;
  for (const auto& r : recs)
    if (!r.degraded && r.n >= lo && r.n <= hi) s += r.*field;
  return s;
}

Verdict cauchy_verdict(const std::string& name, const std::vector<RemainderRecord>& recs, int n_min, int n_max,
                       double RemainderRecord::*field, double fraction) {
  const int half = std::max(n_min, n_max / 2);
  const double head = sum_over(recs, n_min, half, field);
  const double incr = sum_over(recs, half + 1, n_max, field);
  Verdict v;
  v.name = name;
  v.observed = head > 0.0 ? incr / head : 0.0;
  v.threshold = fraction;
  v.pass = incr <= fraction * head + kNoiseFloor;
  std::ostringstream os;
  os << "sum over (" << half << "," << n_max << "] = " << incr << ", sum over [" << n_min << "," << half
     << "] = " << head;
  v.detail = os.str();
  return v;
}

Verdict decay_verdict(const std::string& name, const std::vector<RemainderRecord>& recs, int n_min, int n_max,
                      double RemainderRecord::*field, double factor) {
  const int q = std::max(n_min, n_max / 4);
  const int h = std::max(q, n_max / 2);
  const double d0 = sum_over(recs, q + 1, h, field);
  const double d1 = sum_over(recs, h + 1, n_max, field);
  Verdict v;
  v.name = name;
  v.observed = d1 > 0.0 ? d0 / d1 : INFINITY;
  v.threshold = factor;
  v.pass = d1 * factor <= d0 + kNoiseFloor;
  std::ostringstream os;
  os << "increment (" << q << "," << h << "] = " << d0 << ", increment (" << h << "," << n_max << "] = " << d1;
  v.detail = os.str();
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

bool tail_bounded(const std::vector<int>& ns, const std::vector<double>& values, int hi, double growth,
                  double* tail_max, double* mid_max) {
  double tail = 0.0;
  double mid = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] >= hi / 2 && ns[i] <= hi) tail = std::max(tail, values[i]);
    if (ns[i] >= hi / 4 && ns[i] <= hi / 2) mid = std::max(mid, values[i]);
  }
  if (tail_max) *tail_max = tail;
  if (mid_max) *mid_max = mid;
  return tail <= growth * mid + kNoiseFloor;
}

std::vector<int> ComparisonReport::degraded_indices() const {
  std::vector<int> out;
  for (const auto& r : records)
    if (r.degraded) out.push_back(r.n);
  return out;
}

bool ComparisonReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

ComparisonReport remainder_sweep(const PotentialSpec& p, int n_max, const SweepOptions& options) {
  if (n_max < 10) throw DomainError("remainder_sweep needs n_max >= 10");
  if (options.n_min < 1 || options.n_min > n_max) throw DomainError("remainder_sweep: empty index range");

  ComparisonReport rep;
  rep.potential = p.describe();
  rep.n_min = options.n_min;
  rep.n_max = n_max;
  rep.grid = options.grid;
  rep.thresholds = options.thresholds;
  const auto count = static_cast<std::size_t>(n_max - options.n_min + 1);
  rep.records.resize(count);
  const auto grid = uniform_grid(options.grid);

  parallel_for(count, options.jobs, [&](std::size_t i) {
    RemainderRecord& rec = rep.records[i];
    rec.n = options.n_min + static_cast<int>(i);
    const SpectralPoint sp = eigenvalue_asym(p, rec.n, options.gamma_grid);
    rec.m = sp.m;
    rec.sqrt_lambda_asym = sp.sqrt_lambda_asym;
    rec.gamma = sp.gamma_at_m2;
    try {
      const SecularResult res = solve_eigenvalue(p, rec.n, sp, options.solve);
      rec.sqrt_lambda_numeric = res.sqrt_lambda;
      rec.eig_error = std::abs(res.sqrt_lambda - sp.sqrt_lambda_asym);
      if (options.solve.domain.contains(res.lambda))
        rec.gamma = eval_gamma_at(p, res.sqrt_lambda, options.gamma_grid).value;
      else
        rec.note = "lambda_n outside the parabolic domain; gamma taken at m^2";
      if (options.eigenfunctions) {
        const auto asym = eigenfunction_asym(p, rec.n, grid);
        const auto oracle = eigenfunction_numeric(p, res.lambda, grid, rec.n, &asym, options.solve.policy);
        rec.eigfun_sup_error = sup_distance(asym, oracle);
      }
    } catch (const std::exception& e) {
      rec.degraded = true;
      rec.note = e.what();
    }
    rec.gamma_sq = rec.gamma * rec.gamma;
    rec.ratio = rec.gamma_sq > 0.0 ? rec.eig_error / rec.gamma_sq : 0.0;
  });

  double s_rho = 0.0;
  double s_fun = 0.0;
  double s_gam = 0.0;
  std::vector<int> ns;
  std::vector<double> ratios;
  for (const auto& r : rep.records) {
    if (!r.degraded) {
      s_rho += r.eig_error;
      s_fun += r.eigfun_sup_error;
      s_gam += r.gamma_sq;
      rep.max_ratio = std::max(rep.max_ratio, r.ratio);
      ns.push_back(r.n);
      ratios.push_back(r.ratio);
    }
    rep.partial_abs_rho.push_back(s_rho);
    rep.partial_eigfun_sup.push_back(s_fun);
    rep.partial_gamma_sq.push_back(s_gam);
  }

  if (options.biorthogonality) {
    const int hi = std::min(n_max, 20);
    if (rep.n_min <= hi) rep.biorthogonality = biorthogonality_check(p, hi, options.grid, rep.n_min);
  }

  const auto& th = rep.thresholds;
  {
    Verdict v;
    v.name = "eigenvalue_ratio_bounded";
    double tail = 0.0;
    double mid = 0.0;
    v.pass = tail_bounded(ns, ratios, n_max, th.ratio_growth, &tail, &mid);
    v.observed = mid > 0.0 ? tail / mid : 0.0;
    v.threshold = th.ratio_growth;
    std::ostringstream os;
    os << "max |rho|/gamma^2 over [" << n_max / 2 << "," << n_max << "] = " << tail << ", over [" << n_max / 4
       << "," << n_max / 2 << "] = " << mid;
    v.detail = os.str();
    rep.verdicts.push_back(v);
  }
  rep.verdicts.push_back(cauchy_verdict("abs_rho_cauchy", rep.records, rep.n_min, n_max,
                                        &RemainderRecord::eig_error, th.cauchy_fraction));
  rep.verdicts.push_back(cauchy_verdict("gamma_sq_cauchy", rep.records, rep.n_min, n_max,
                                        &RemainderRecord::gamma_sq, th.cauchy_fraction));
  if (options.eigenfunctions)
    rep.verdicts.push_back(decay_verdict("eigfun_sup_summable", rep.records, rep.n_min, n_max,
                                         &RemainderRecord::eigfun_sup_error, th.eigfun_decay));
  {
    Verdict v;
    v.name = "oracle_complete";
    v.observed = static_cast<double>(rep.degraded_indices().size());
    v.threshold = 0.0;
    v.pass = rep.degraded_indices().empty();
    v.detail = v.pass ? "all indices converged" : "degraded indices listed in report";
    rep.verdicts.push_back(v);
  }
  return rep;
}

BiorthogonalityResult biorthogonality_check(const PotentialSpec& p, int n_max, int grid, int n_min, double threshold,
                                            BiorthogonalConvention convention) {
  if (n_max > 20) throw DomainError("biorthogonality_check supports n_max <= 20");
  if (n_min < 1 || n_min > n_max) throw DomainError("biorthogonality_check: empty index range");
  const auto g = uniform_grid(grid);
  const auto count = static_cast<std::size_t>(n_max - n_min + 1);
  std::vector<EigenfunctionTable> ys;
  std::vector<EigenfunctionTable> ws;
  for (int n = n_min; n <= n_max; ++n) {
    ys.push_back(eigenfunction_asym(p, n, g));
    ws.push_back(biorthogonal_asym(p, n, g, convention));
  }
  BiorthogonalityResult out;
  out.n_min = n_min;
  out.n_max = n_max;
  out.threshold = threshold;
  out.matrix.assign(count, std::vector<cplx>(count));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      const cplx v = inner_product(ys[i], ws[j]);
      out.matrix[i][j] = v;
      if (i == j)
        out.max_diag_deviation = std::max(out.max_diag_deviation, std::abs(v - 1.0));
      else
        out.max_offdiag = std::max(out.max_offdiag, std::abs(v));
    }
  out.pass = out.max_offdiag <= threshold && out.max_diag_deviation <= threshold;
  return out;
}

std::vector<LemmaRatio> lemma_ratio_profile(const PotentialSpec& p, int n_max, const SweepOptions& options) {
  if (n_max < 10) throw DomainError("lemma_ratio_profile needs n_max >= 10");
  const auto count = static_cast<std::size_t>(n_max - options.n_min + 1);
  std::vector<LemmaRatio> out(count);
  const auto grid = uniform_grid(options.grid);
  parallel_for(count, options.jobs, [&](std::size_t i) {
    LemmaRatio& lr = out[i];
    lr.n = options.n_min + static_cast<int>(i);
    try {
      const SpectralPoint sp = eigenvalue_asym(p, lr.n, options.gamma_grid);
      const SecularResult res = solve_eigenvalue(p, lr.n, sp, options.solve);
      lr.sqrt_lambda = res.sqrt_lambda;
      const OscillatoryKernel kern(p, res.sqrt_lambda);
      const auto th_asym = theta_asym_profile(kern, grid);
      const auto r_as = r_asym_profile(kern, grid);
      const auto traj = integrate_prufer(p, res.lambda, grid, options.solve.policy);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        lr.theta_sup = std::max(lr.theta_sup, std::abs(traj[j].theta - th_asym[j]));
        lr.r_sup = std::max(lr.r_sup, std::abs(std::exp(traj[j].log_r) - r_as[j]));
      }
      const double g = options.solve.domain.contains(res.lambda)
                           ? eval_gamma_at(p, res.sqrt_lambda, options.gamma_grid).value
                           : sp.gamma_at_m2;
      lr.gamma_sq = g * g;
      lr.theta_ratio = lr.gamma_sq > 0.0 ? lr.theta_sup / lr.gamma_sq : 0.0;
      lr.r_ratio = lr.gamma_sq > 0.0 ? lr.r_sup / lr.gamma_sq : 0.0;
    } catch (const std::exception&) {
      lr.degraded = true;
    }
  });
  return out;
}

std::string report_to_json(const ComparisonReport& rep, const std::string& config_json) {
  using nlohmann::json;
  json doc;
  doc["schema"] = kReportSchema;
  doc["config"] = json::parse(config_json);
  doc["potential"] = rep.potential;
  doc["n_min"] = rep.n_min;
  doc["n_max"] = rep.n_max;
  doc["grid"] = rep.grid;
  doc["thresholds"] = {{"ratio_growth", rep.thresholds.ratio_growth},
                       {"cauchy_fraction", rep.thresholds.cauchy_fraction},
                       {"eigfun_decay", rep.thresholds.eigfun_decay},
                       {"noise_floor", kNoiseFloor}};
  json recs = json::array();
  for (const auto& r : rep.records) {
    json jr = {{"n", r.n},
               {"m", r.m},
               {"sqrt_lambda_asym", {r.sqrt_lambda_asym.real(), r.sqrt_lambda_asym.imag()}},
               {"gamma", r.gamma},
               {"gamma_sq", r.gamma_sq},
               {"abs_rho", r.eig_error},
               {"eigfun_sup_err", r.eigfun_sup_error},
               {"ratio", r.ratio},
               {"degraded", r.degraded}};
    if (r.sqrt_lambda_numeric)
      jr["sqrt_lambda_num"] = {r.sqrt_lambda_numeric->real(), r.sqrt_lambda_numeric->imag()};
    else
      jr["sqrt_lambda_num"] = nullptr;
    if (!r.note.empty()) jr["note"] = r.note;
    recs.push_back(jr);
  }
  doc["records"] = recs;
  doc["partial_sums"] = {{"abs_rho", rep.partial_abs_rho},
                         {"eigfun_sup_err", rep.partial_eigfun_sup},
                         {"gamma_sq", rep.partial_gamma_sq}};
  doc["max_ratio"] = rep.max_ratio;
  doc["degraded"] = rep.degraded_indices();
  json verdicts = json::array();
  for (const auto& v : rep.verdicts)
    verdicts.push_back({{"name", v.name},
                        {"pass", v.pass},
                        {"observed", std::isfinite(v.observed) ? json(v.observed) : json(nullptr)},
                        {"threshold", v.threshold},
                        {"detail", v.detail}});
  doc["verdicts"] = verdicts;
  if (rep.biorthogonality) {
    const auto& b = *rep.biorthogonality;
    json re = json::array();
    json im = json::array();
    for (const auto& row : b.matrix) {
      json r = json::array();
      json i = json::array();
      for (const auto& v : row) {
        r.push_back(v.real());
        i.push_back(v.imag());
      }
      re.push_back(r);
      im.push_back(i);
    }
    doc["biorthogonality"] = {{"n_min", b.n_min},         {"n_max", b.n_max},
                              {"matrix_re", re},          {"matrix_im", im},
                              {"max_offdiag", b.max_offdiag}, {"max_diag_deviation", b.max_diag_deviation},
                              {"threshold", b.threshold}, {"pass", b.pass}};
  }
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const ComparisonReport& rep) {
  std::ostringstream os;
  os << "n,m,sqrt_lambda_asym_re,sqrt_lambda_asym_im,sqrt_lambda_num_re,sqrt_lambda_num_im,abs_rho,gamma,gamma_sq,"
        "ratio,eigfun_sup_err\n";
  const double nan = std::nan("");
  for (const auto& r : rep.records) {
    const cplx num = r.sqrt_lambda_numeric.value_or(cplx(nan, nan));
    os << r.n << ',' << format_number(r.m) << ',' << format_number(r.sqrt_lambda_asym.real()) << ',' << format_number(r.sqrt_lambda_asym.imag())
       << ',' << format_number(num.real()) << ',' << format_number(num.imag()) << ',' << format_number(r.degraded ? nan : r.eig_error) << ','
       << format_number(r.gamma) << ',' << format_number(r.gamma_sq) << ',' << format_number(r.degraded ? nan : r.ratio) << ','
       << format_number(r.degraded ? nan : r.eigfun_sup_error) << '\n';
  }
  return os.str();
}

}  // namespace slspec
