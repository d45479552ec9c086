#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slspec/asymptotics.hpp"
#include "slspec/oracle.hpp"
#include "slspec/potential.hpp"

namespace slspec {

inline constexpr const char* kReportSchema = "slspec-report/1";

struct RemainderRecord {
  int n = 0;
  double m = 0.0;
  cplx sqrt_lambda_asym;
  std::optional<cplx> sqrt_lambda_numeric;
  double gamma = 0.0;
  double gamma_sq = 0.0;
  double eig_error = 0.0;         // |ρ_n|
  double eigfun_sup_error = 0.0;  // sup over grid of |y_n^asym − y_n^oracle|
  double ratio = 0.0;             // eig_error / gamma_sq, 0 when both vanish
  bool degraded = false;
  std::string note;
};

struct Verdict {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Thresholds the verdicts are derived from; serialised with the report.
struct VerdictThresholds {
  double ratio_growth = 2.0;      // tail max ≤ growth × mid-range max
  double cauchy_fraction = 0.1;   // S(N) − S(N/2) ≤ fraction × S(N/2)
  double eigfun_decay = 1.5;      // successive doubling increments shrink by this factor
};

struct BiorthogonalityResult {
  int n_min = 1;
  int n_max = 0;
  std::vector<std::vector<cplx>> matrix;  // matrix[i][j] = (y_{n_min+i}, w_{n_min+j})
  double max_offdiag = 0.0;
  double max_diag_deviation = 0.0;
  double threshold = 5e-3;
  bool pass = false;
};

struct ComparisonReport {
  std::string potential;
  int n_min = 1;
  int n_max = 0;
  int grid = 0;
  std::vector<RemainderRecord> records;  // ordered by n
  /// Cumulative sums over non-degraded records, aligned with `records`.
  std::vector<double> partial_abs_rho;
  std::vector<double> partial_eigfun_sup;
  std::vector<double> partial_gamma_sq;
  double max_ratio = 0.0;
  VerdictThresholds thresholds;
  std::vector<Verdict> verdicts;
  std::optional<BiorthogonalityResult> biorthogonality;  // indices n_min..min(n_max, 20)

  std::vector<int> degraded_indices() const;
  bool all_pass() const;
};

struct SweepOptions {
  int n_min = 1;
  int grid = 513;
  int gamma_grid = 2048;
  int jobs = 1;
  bool eigenfunctions = true;
  bool biorthogonality = true;
  SolveOptions solve{};
  VerdictThresholds thresholds{};
};

/// Asymptotic vs oracle eigenpairs for n in [n_min, n_max]. Oracle failures
/// mark the record degraded; the sweep always completes.
ComparisonReport remainder_sweep(const PotentialSpec& p, int n_max, const SweepOptions& options = {});


/// Pairings (y_n^asym, w_k^asym) by composite quadrature on a uniform grid.
BiorthogonalityResult biorthogonality_check(const PotentialSpec& p, int n_max, int grid, int n_min = 1,
                                            double threshold = 5e-3,
                                            BiorthogonalConvention convention = BiorthogonalConvention::sesquilinear);

struct LemmaRatio {
  int n = 0;
  cplx sqrt_lambda;
  double gamma_sq = 0.0;
  double theta_sup = 0.0;  // sup_x |θ_oracle − (√λ x + v)|
  double r_sup = 0.0;      // sup_x |r_oracle − r_asym|
  double theta_ratio = 0.0;
  double r_ratio = 0.0;
  bool degraded = false;
};

/// θ- and r-representation remainders at the numeric eigenvalues, scaled by γ².
std::vector<LemmaRatio> lemma_ratio_profile(const PotentialSpec& p, int n_max, const SweepOptions& options = {});

/// max over n ∈ [hi/2, hi] of f ≤ growth × max over [hi/4, hi/2].
bool tail_bounded(const std::vector<int>& ns, const std::vector<double>& values, int hi, double growth,
                  double* tail_max = nullptr, double* mid_max = nullptr);

/// Shortest round-trip decimal form; "nan"/"inf" for non-finite values.
std::string format_number(double v);

std::string report_to_json(const ComparisonReport& report, const std::string& config_json = "{}");
std::string report_to_csv(const ComparisonReport& report);

}  // namespace slspec
