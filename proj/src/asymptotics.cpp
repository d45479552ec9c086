#include "slspec/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slspec/errors.hpp"

namespace slspec {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_index(int n) {
  if (n < 1) throw DomainError("eigenvalue index must be >= 1, got " + std::to_string(n));
}

bool is_uniform(std::span<const double> grid) {
  const double h = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - grid[i - 1] - h) > 1e-12 * std::max(1.0, h * grid.size())) return false;
  return true;
}

template <typename F>
cplx integrate_table(std::span<const double> grid, F&& f) {
  const std::size_t n = grid.size();
  if (n < 2) return 0.0;
  if (n % 2 == 1 && is_uniform(grid)) {
    const double h = (grid.back() - grid.front()) / static_cast<double>(n - 1);
    cplx acc = f(0) + f(n - 1);
    for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i);
    return acc * h / 3.0;
  }
  cplx acc{};
  for (std::size_t i = 1; i < n; ++i) acc += 0.5 * (grid[i] - grid[i - 1]) * (f(i) + f(i - 1));
  return acc;
}

void require_same_grid(std::span<const double> grid, std::size_t a, std::size_t b) {
  if (a != grid.size() || b != grid.size()) throw DomainError("table values do not match the grid size");
}

// The shared bracket structure of the eigenfunction and biorthogonal formulas:
// kern carries the moments of u (or ū) at k = m; const_sin/const_u2 are the
// normalisation constants in the sin(mx) and sin(mx)/(2m) blocks.
std::vector<cplx> bracket_formula(const OscillatoryKernel& kern, double m, cplx const_sin, cplx const_u2,
                                  std::span<const double> grid) {
  const cplx s_pi = kern.sin_moment(kPi);
  const cplx d_pi = kern.double_term(kPi);
  const cplx u2_pi = kern.u2(kPi);
  const cplx u2c_pi = kern.u2_cos(kPi);
  const double scale = std::sqrt(2.0 / kPi);
  std::vector<cplx> out;
  out.reserve(grid.size());
  for (double x : grid) {
    const double X = x / kPi;
    const double sn = std::sin(m * x);
    const double cs = std::cos(m * x);
    const cplx sin_block = 1.0 + const_sin - kern.cos_moment(x);
    const cplx sin_u2_block = -kern.u2_sin(x) + const_u2;
    const cplx cos_block = kern.sin_moment(x) + kern.double_term(x) - X * s_pi - X * d_pi;
    const cplx cos_u2_block = kern.u2(x) - kern.u2_cos(x) - X * u2_pi + X * u2c_pi;
    const cplx y = sn * sin_block + sn / (2.0 * m) * sin_u2_block + cs * cos_block + cs / (2.0 * m) * cos_u2_block;
    out.push_back(scale * y);
  }
  return out;
}

}  // namespace

std::string to_string(TableKind kind) {
  switch (kind) {
    case TableKind::eigenfunction: return "asym";
    case TableKind::biorthogonal: return "biorth";
    case TableKind::oracle: return "oracle";
    case TableKind::oracle_biorthogonal: return "oracle-biorth";
  }
  return "?";
}

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw DomainError("grid needs at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = kPi * i / (points - 1);
  g.back() = kPi;
  return g;
}

void validate_grid(std::span<const double> grid) {
  if (grid.size() < 2) throw DomainError("grid needs at least 2 points");
  if (grid.front() != 0.0 || grid.back() != kPi) throw DomainError("grid must start at 0 and end at pi");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) {
      std::ostringstream os;
      os << "grid not strictly increasing at index " << i;
      throw DomainError(os.str());
    }
}

cplx inner_product(std::span<const double> grid, std::span<const cplx> f, std::span<const cplx> g) {
  require_same_grid(grid, f.size(), g.size());
  return integrate_table(grid, [&](std::size_t i) { return f[i] * std::conj(g[i]); });
}

cplx inner_product(const EigenfunctionTable& f, const EigenfunctionTable& g) {
  if (f.grid != g.grid) throw DomainError("inner product of tables on different grids");
  return inner_product(f.grid, f.values, g.values);
}

cplx bilinear_product(std::span<const double> grid, std::span<const cplx> f, std::span<const cplx> g) {
  require_same_grid(grid, f.size(), g.size());
  return integrate_table(grid, [&](std::size_t i) { return f[i] * g[i]; });
}

double sup_distance(const EigenfunctionTable& a, const EigenfunctionTable& b) {
  if (a.values.size() != b.values.size()) throw DomainError("sup distance of tables of different size");
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

void align_phase(EigenfunctionTable& t, const EigenfunctionTable& reference) {
  const cplx c = inner_product(t, reference);
  if (std::abs(c) == 0.0) return;
  cplx factor = std::conj(c) / std::abs(c);
  if (c.imag() == 0.0) factor = c.real() < 0.0 ? -1.0 : 1.0;
  for (auto& v : t.values) v *= factor;
}

SpectralPoint eigenvalue_asym(const PotentialSpec& p, int n, int gamma_grid) {
  require_index(n);
  SpectralPoint sp;
  sp.n = n;
  sp.m = n - 0.5;
  const OscillatoryKernel kern(p, sp.m);
  const cplx v = kern.v(kPi).total;
  sp.phase_correction = -v / kPi;
  sp.sqrt_lambda_asym = sp.m + sp.phase_correction;
  sp.gamma_at_m2 = eval_gamma_at(p, sp.m, gamma_grid).value;
  return sp;
}

cplx theta_asym(const PotentialSpec& p, double x, cplx lambda) {
  const OscillatoryKernel kern(p, principal_sqrt(lambda));
  return kern.sqrt_lambda() * x + kern.v(x).total;
}

cplx r_asym(const PotentialSpec& p, double x, cplx lambda) {
  const OscillatoryKernel kern(p, principal_sqrt(lambda));
  return 1.0 - kern.cos_moment(x) - kern.u2_sin(x) / (2.0 * kern.sqrt_lambda());
}

std::vector<cplx> theta_asym_profile(const OscillatoryKernel& kern, std::span<const double> grid) {
  std::vector<cplx> out;
  out.reserve(grid.size());
  for (double x : grid) out.push_back(kern.sqrt_lambda() * x + kern.v(x).total);
  return out;
}

std::vector<cplx> r_asym_profile(const OscillatoryKernel& kern, std::span<const double> grid) {
  std::vector<cplx> out;
  out.reserve(grid.size());
  for (double x : grid) out.push_back(1.0 - kern.cos_moment(x) - kern.u2_sin(x) / (2.0 * kern.sqrt_lambda()));
  return out;
}

EigenfunctionTable eigenfunction_asym(const PotentialSpec& p, int n, std::span<const double> grid) {
  require_index(n);
  validate_grid(grid);
  const double m = n - 0.5;
  const OscillatoryKernel kern(p, m);
  // (1/π)∫(π−t) u_R cos(2mt),  (1/π)∫(π−t)(u_R² − u_I²) sin(2mt)
  const cplx c_sin = weighted_trig_moment(real_part(p), m, 0.0, kPi, TrigWeight::cos) / kPi;
  const cplx c_u2 = weighted_trig_moment(real_part(square(p)), m, 0.0, kPi, TrigWeight::sin) / kPi;

  EigenfunctionTable t;
  t.n = n;
  t.grid.assign(grid.begin(), grid.end());
  t.values = bracket_formula(kern, m, c_sin, c_u2, grid);
  t.kind = TableKind::eigenfunction;
  t.normalization = "asymptotic, ||y_n|| = 1 + O(remainder)";
  return t;
}

EigenfunctionTable biorthogonal_asym(const PotentialSpec& p, int n, std::span<const double> grid,
                                     BiorthogonalConvention convention) {
  require_index(n);
  validate_grid(grid);
  const double m = n - 0.5;
  const PotentialSpec ubar = conjugate(p);
  const OscillatoryKernel kern(ubar, m);
  const double sign = convention == BiorthogonalConvention::literal ? 1.0 : -1.0;
  const PotentialSpec sq = square(p);
  // (1/π)∫(π−t)(u_R ∓ 2i u_I) cos(2mt),  (1/π)∫(π−t)(u_R² − u_I² ∓ 4i u_R u_I) sin(2mt)
  const cplx c_sin = (weighted_trig_moment(real_part(p), m, 0.0, kPi, TrigWeight::cos) +
                      sign * 2.0 * kI * weighted_trig_moment(imag_part(p), m, 0.0, kPi, TrigWeight::cos)) /
                     kPi;
  const cplx c_u2 = (weighted_trig_moment(real_part(sq), m, 0.0, kPi, TrigWeight::sin) +
                     sign * 2.0 * kI * weighted_trig_moment(imag_part(sq), m, 0.0, kPi, TrigWeight::sin)) /
                    kPi;

  EigenfunctionTable t;
  t.n = n;
  t.grid.assign(grid.begin(), grid.end());
  t.values = bracket_formula(kern, m, c_sin, c_u2, grid);
  t.kind = TableKind::biorthogonal;
  t.normalization = convention == BiorthogonalConvention::literal ? "asymptotic, literal pairing"
                                                                  : "asymptotic, (y_n, w_n) = 1 + O(remainder)";
  return t;
}

cplx normalization_factor(const PotentialSpec& p, int n) {
  require_index(n);
  const double m = n - 0.5;
  const cplx s = trig_moment(p, m, 0.0, kPi, TrigWeight::sin);
  const cplx wc = weighted_trig_moment(p, m, 0.0, kPi, TrigWeight::cos);
  const cplx wu2 = weighted_trig_moment(square(p), m, 0.0, kPi, TrigWeight::sin);
  const cplx f = kPi / 2.0 * (1.0 - s / (kPi * m) - 2.0 / kPi * wc - wu2 / (kPi * m));
  return p.is_real() ? cplx(f.real(), 0.0) : f;
}

}  // namespace slspec
