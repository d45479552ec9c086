#include "slspec/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "slspec/errors.hpp"

namespace slspec {

namespace {

constexpr cplx kI{0.0, 1.0};

// Trace-free 2×2 matrix [[a, b], [c, −a]].
struct TraceFree {
  cplx a, b, c;
};

struct Mat2 {
  cplx m00, m01, m10, m11;
  QuasiDerivState apply(const QuasiDerivState& s) const { return {m00 * s.y1 + m01 * s.y2, m10 * s.y1 + m11 * s.y2}; }
};

// exp(Ω) = cosh(s) I + sinh(s)/s Ω with s² = a² + bc.
Mat2 expm(const TraceFree& w) {
  const cplx s2 = w.a * w.a + w.b * w.c;
  cplx ch;
  cplx shs;
  if (std::abs(s2) < 1e-6) {
    ch = 1.0 + s2 / 2.0 + s2 * s2 / 24.0;
    shs = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
  } else {
    const cplx s = std::sqrt(s2);
    ch = std::cosh(s);
    shs = std::sinh(s) / s;
  }
  return {ch + shs * w.a, shs * w.b, shs * w.c, ch - shs * w.a};
}

TraceFree system_matrix(cplx u, cplx lambda) { return {u, 1.0, -lambda - u * u}; }

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double step_for(double span, double hmax) {
  return span / std::max(1.0, std::ceil(span / hmax - 1e-12));
}

// Ordered stops: requested nodes and breakpoints. `keep` marks requested nodes.
struct Stop {
  double x;
  bool keep;
};

std::vector<Stop> make_stops(const PotentialSpec& p, std::span<const double> grid) {
  std::vector<Stop> stops;
  stops.reserve(grid.size() + p.size() + 1);
  double prev = -1.0;
  for (double x : grid) {
    if (!(x >= 0.0 && x <= kPi)) {
      std::ostringstream os;
      os << "grid node " << x << " outside [0, pi]";
      throw DomainError(os.str());
    }
    if (!(x > prev)) throw DomainError("grid nodes must be strictly increasing");
    prev = x;
    stops.push_back({x, true});
  }
  for (double b : p.breakpoints()) stops.push_back({b, false});
  std::stable_sort(stops.begin(), stops.end(), [](const Stop& l, const Stop& r) { return l.x < r.x; });
  std::vector<Stop> merged;
  for (const auto& s : stops) {
    if (!merged.empty() && merged.back().x == s.x)
      merged.back().keep = merged.back().keep || s.keep;
    else
      merged.push_back(s);
  }
  return merged;
}

// Walks [0, last stop] segment by segment; each segment lies inside one piece.
template <typename State, typename Advance, typename Record>
void march(const PotentialSpec& p, std::span<const double> grid, State& state, Advance&& advance, Record&& record) {
  const auto stops = make_stops(p, grid);
  double x = 0.0;
  for (const auto& st : stops) {
    if (st.x > x) {
      const std::size_t piece = p.piece_index(x);
      advance(piece, x, st.x, state);
      x = st.x;
    }
    if (st.keep) record(state);
  }
}

void propagate_system(const PotentialSpec& p, cplx lambda, std::size_t piece, double a, double b, double hmax,
                      QuasiDerivState& s) {
  const auto& pc = p.pieces()[piece];
  const ExpPoly& u = p.local(piece);
  const double span = b - a;
  if (p.kind() == PotentialKind::step) {
    // constant u: exact exponential over the whole segment
    const TraceFree w = system_matrix(pc.coeffs[0], lambda);
    s = expm({span * w.a, span * w.b, span * w.c}).apply(s);
  } else {
    // 4th-order Magnus with two Gauss nodes
    const double h = step_for(span, hmax);
    const int steps = static_cast<int>(std::lround(span / h));
    const double g = std::sqrt(3.0) / 6.0;
    const double cc = std::sqrt(3.0) / 12.0 * h * h;
    for (int i = 0; i < steps; ++i) {
      const double x0 = a + i * h - pc.from;
      const TraceFree A1 = system_matrix(u(x0 + (0.5 - g) * h), lambda);
      const TraceFree A2 = system_matrix(u(x0 + (0.5 + g) * h), lambda);
      // [A2, A1] for trace-free matrices
      const cplx ca = A2.b * A1.c - A1.b * A2.c;
      const cplx cb = 2.0 * (A2.a * A1.b - A1.a * A2.b);
      const cplx cc2 = 2.0 * (A1.a * A2.c - A2.a * A1.c);
      const TraceFree omega{h / 2 * (A1.a + A2.a) + cc * ca, h / 2 * (A1.b + A2.b) + cc * cb,
                            h / 2 * (A1.c + A2.c) + cc * cc2};
      s = expm(omega).apply(s);
    }
  }
  if (!finite(s.y1) || !finite(s.y2)) {
    std::ostringstream os;
    os << "quasi-derivative system blew up near x = " << b;
    throw IntegrationBlowup(os.str(), b);
  }
}

struct PruferRhs {
  cplx k;
  std::array<cplx, 2> operator()(cplx u, cplx theta) const {
    const cplx s = std::sin(theta);
    const cplx s2 = std::sin(2.0 * theta);
    const cplx c2 = std::cos(2.0 * theta);
    return {k + u * u / k * s * s + u * s2, -(u * c2 + 0.5 * u * u / k * s2)};
  }
};

void propagate_prufer(const PotentialSpec& p, cplx k, std::size_t piece, double a, double b, double hmax,
                      PruferState& s) {
  const auto& pc = p.pieces()[piece];
  const ExpPoly& u = p.local(piece);
  const PruferRhs f{k};
  const double span = b - a;
  const double h = step_for(span, hmax);
  const int steps = static_cast<int>(std::lround(span / h));
  const bool constant = p.kind() == PotentialKind::step;
  const cplx uc = constant ? pc.coeffs[0] : cplx{};
  for (int i = 0; i < steps; ++i) {
    const double x0 = a + i * h - pc.from;
    const cplx ua = constant ? uc : u(x0);
    const cplx um = constant ? uc : u(x0 + h / 2);
    const cplx ub = constant ? uc : u(x0 + h);
    const auto k1 = f(ua, s.theta);
    const auto k2 = f(um, s.theta + h / 2 * k1[0]);
    const auto k3 = f(um, s.theta + h / 2 * k2[0]);
    const auto k4 = f(ub, s.theta + h * k3[0]);
    s.theta += h / 6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    s.log_r += h / 6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  }
  if (!finite(s.theta) || !finite(s.log_r)) {
    std::ostringstream os;
    os << "Prufer integration blew up near x = " << b;
    throw IntegrationBlowup(os.str(), b);
  }
}

// Classical Prüfer angle φ = arg(y2 + i y1) for real λ (any sign), real u.
// Shares the quarter-period crossings with θ, so it can stand in for θ when
// √λ is not real.
double sturm_angle(const PotentialSpec& p, double lambda, const StepPolicy& policy) {
  const double hmax = std::min(policy.h_max, policy.prufer_phase_step / std::max(1.0, std::sqrt(std::abs(lambda))));
  double phi = 0.0;
  const std::array<double, 1> end{kPi};
  auto rhs = [&](double u, double ph) {
    const double s = std::sin(ph);
    const double c = std::cos(ph);
    return c * c + 2.0 * u * s * c + (lambda + u * u) * s * s;
  };
  march(p, end, phi,
        [&](std::size_t piece, double a, double b, double& ph) {
          const auto& pc = p.pieces()[piece];
          const ExpPoly& u = p.local(piece);
          const double h = step_for(b - a, hmax);
          const int steps = static_cast<int>(std::lround((b - a) / h));
          for (int i = 0; i < steps; ++i) {
            const double x0 = a + i * h - pc.from;
            const double ua = u(x0).real();
            const double um = u(x0 + h / 2).real();
            const double ub = u(x0 + h).real();
            const double k1 = rhs(ua, ph);
            const double k2 = rhs(um, ph + h / 2 * k1);
            const double k3 = rhs(um, ph + h / 2 * k2);
            const double k4 = rhs(ub, ph + h * k3);
            ph += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
          }
        },
        [](double) {});
  return phi;
}

PruferState prufer_end(const PotentialSpec& p, cplx lambda, const StepPolicy& policy) {
  const std::array<double, 1> end{kPi};
  return integrate_prufer(p, lambda, end, policy).back();
}

// Phase at π used for indexing: θ for λ ≥ 1, the classical angle below.
double counting_phase(const PotentialSpec& p, double lambda, const StepPolicy& policy) {
  if (lambda >= 1.0) return prufer_end(p, lambda, policy).theta.real();
  return sturm_angle(p, lambda, policy);
}

SecularResult solve_real(const PotentialSpec& p, int n, const SpectralPoint& seed, const SolveOptions& opt) {
  const double m = n - 0.5;
  const double target = kPi * m;
  auto g = [&](double lam) { return counting_phase(p, lam, opt.policy) - target; };

  const double k0 = seed.sqrt_lambda_asym.real();
  double lo = k0 > 0.5 ? (k0 - 0.5) * (k0 - 0.5) : -1.0;
  double hi = (std::max(k0, 0.0) + 0.5) * (std::max(k0, 0.0) + 0.5);
  double glo = g(lo);
  double ghi = g(hi);
  int iterations = 2;
  for (int i = 0; glo >= 0.0; ++i) {
    if (i > 60) throw NonConvergence("could not bracket eigenvalue from below", seed.sqrt_lambda_asym, INFINITY);
    hi = lo;
    ghi = glo;
    lo -= std::max(1.0, std::abs(lo));
    glo = g(lo);
    ++iterations;
  }
  for (int i = 0; ghi <= 0.0; ++i) {
    if (i > 60) throw NonConvergence("could not bracket eigenvalue from above", seed.sqrt_lambda_asym, INFINITY);
    lo = hi;
    glo = ghi;
    hi += std::max(1.0, std::abs(hi));
    ghi = g(hi);
    ++iterations;
  }
  // Narrow until both ends lie within a quarter period of the target level,
  // where cos θ(π) has exactly one sign change.
  while (glo <= -kPi / 2 || ghi >= kPi / 2) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    ++iterations;
    if (gm == 0.0) {
      lo = hi = mid;
      break;
    }
    (gm < 0.0 ? lo : hi) = mid;
    (gm < 0.0 ? glo : ghi) = gm;
    if (iterations > opt.max_iter)
      throw NonConvergence("phase bisection exceeded budget", std::sqrt(cplx(0.5 * (lo + hi))), INFINITY);
  }

  double root = lo;
  if (hi > lo) {
    auto f = [&](double lam) { return characteristic_normalized(p, lam, opt.policy).real(); };
    boost::uintmax_t budget = static_cast<boost::uintmax_t>(opt.max_iter);
    const auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)); };
    double fa = f(lo);
    double fb = f(hi);
    if (fa == 0.0) {
      root = lo;
    } else if (fb == 0.0) {
      root = hi;
    } else {
      const auto r = boost::math::tools::toms748_solve(f, lo, hi, fa, fb, tol, budget);
      root = 0.5 * (r.first + r.second);
      iterations += static_cast<int>(budget);
    }
  }

  SecularResult res;
  res.lambda = root;
  res.sqrt_lambda = std::sqrt(cplx(root));
  res.residual = std::abs(characteristic(p, root, opt.policy));
  res.multiplicity_hint = 1;
  res.iterations = iterations;
  return res;
}

SecularResult solve_complex(const PotentialSpec& p, int n, const SpectralPoint& seed, const SolveOptions& opt) {
  const double alpha = opt.domain.alpha;
  auto F = [&](cplx k) { return characteristic_normalized(p, k * k, opt.policy); };
  auto clamp_domain = [&](cplx k) {
    const double lim = 0.999 * alpha;
    return cplx(k.real(), std::clamp(k.imag(), -lim, lim));
  };

  cplx k0 = clamp_domain(seed.sqrt_lambda_asym);
  cplx k1 = clamp_domain(k0 + cplx(1e-4, 1e-4));
  cplx f0 = F(k0);
  cplx f1 = F(k1);
  cplx best = std::abs(f0) < std::abs(f1) ? k0 : k1;
  double best_res = std::min(std::abs(f0), std::abs(f1));
  int it = 0;
  bool converged = false;
  for (; it < opt.max_iter; ++it) {
    if (f1 == f0) break;
    cplx delta = -f1 * (k1 - k0) / (f1 - f0);
    if (std::abs(delta) > 0.25) delta *= 0.25 / std::abs(delta);
    const cplx k2 = clamp_domain(k1 + delta);
    k0 = k1;
    f0 = f1;
    k1 = k2;
    f1 = F(k1);
    if (std::abs(f1) < best_res) {
      best_res = std::abs(f1);
      best = k1;
    }
    if (std::abs(k1 - k0) <= opt.tol * std::max(1.0, std::abs(k1)) || f1 == 0.0) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NonConvergence("secant iteration for eigenvalue " + std::to_string(n) + " did not converge", best,
                         std::abs(characteristic(p, best * best, opt.policy)));
  }

  // Index by the phase count θ(π) ≈ π(n − 1/2).
  const cplx theta = prufer_end(p, k1 * k1, opt.policy).theta;
  const int offset = static_cast<int>(std::lround((theta.real() - kPi * (n - 0.5)) / kPi));
  if (offset != 0) {
    throw IndexingError("root near seed belongs to index " + std::to_string(n + offset) + ", not " +
                            std::to_string(n),
                        n + offset);
  }

  // Multiplicity hint: winding number of Δ around a small circle (16-point trapezoid).
  const double radius = 0.1;
  double winding = 0.0;
  cplx prev = F(k1 + radius);
  for (int j = 1; j <= 16; ++j) {
    const cplx z = k1 + radius * std::exp(kI * (2.0 * kPi * j / 16.0));
    const cplx cur = F(z);
    winding += std::arg(cur / prev);
    prev = cur;
  }

  SecularResult res;
  res.sqrt_lambda = k1;
  res.lambda = k1 * k1;
  res.residual = std::abs(characteristic(p, res.lambda, opt.policy));
  res.multiplicity_hint = static_cast<int>(std::lround(winding / (2.0 * kPi)));
  res.iterations = it + 2;
  return res;
}

}  // namespace

double StepPolicy::system_step(cplx sqrt_lambda) const {
  return std::min(h_max, phase_step / std::max(1.0, std::abs(sqrt_lambda)));
}

double StepPolicy::prufer_step(cplx sqrt_lambda) const {
  return std::min(h_max, prufer_phase_step / std::max(1.0, std::abs(sqrt_lambda)));
}

std::vector<QuasiDerivState> integrate_system_from(const PotentialSpec& p, cplx lambda, QuasiDerivState initial,
                                                   std::span<const double> grid, const StepPolicy& policy) {
  const double hmax = policy.system_step(std::sqrt(lambda));
  std::vector<QuasiDerivState> out;
  out.reserve(grid.size());
  QuasiDerivState s = initial;
  march(
      p, grid, s,
      [&](std::size_t piece, double a, double b, QuasiDerivState& st) {
        propagate_system(p, lambda, piece, a, b, hmax, st);
      },
      [&](const QuasiDerivState& st) { out.push_back(st); });
  return out;
}

std::vector<QuasiDerivState> integrate_system(const PotentialSpec& p, cplx lambda, std::span<const double> grid,
                                              const StepPolicy& policy) {
  return integrate_system_from(p, lambda, {0.0, principal_sqrt(lambda)}, grid, policy);
}

std::vector<PruferState> integrate_prufer(const PotentialSpec& p, cplx lambda, std::span<const double> grid,
                                          const StepPolicy& policy) {
  const cplx k = principal_sqrt(lambda);
  const double hmax = policy.prufer_step(k);
  std::vector<PruferState> out;
  out.reserve(grid.size());
  PruferState s{0.0, 0.0};
  march(
      p, grid, s,
      [&](std::size_t piece, double a, double b, PruferState& st) { propagate_prufer(p, k, piece, a, b, hmax, st); },
      [&](const PruferState& st) { out.push_back(st); });
  return out;
}

cplx characteristic(const PotentialSpec& p, cplx lambda, const StepPolicy& policy) {
  const std::array<double, 1> end{kPi};
  return integrate_system(p, lambda, end, policy).back().y2;
}

cplx characteristic_normalized(const PotentialSpec& p, cplx lambda, const StepPolicy& policy) {
  const std::array<double, 1> end{kPi};
  return integrate_system_from(p, lambda, {0.0, 1.0}, end, policy).back().y2;
}

ClassicalState transfer_solution(const PotentialSpec& p, cplx lambda, double x) {
  if (p.kind() != PotentialKind::step) throw DomainError("transfer matrices need a piecewise-constant potential");
  if (!(x >= 0.0 && x <= kPi)) throw DomainError("transfer_solution: x outside [0, pi]");
  const cplx k = principal_sqrt(lambda);
  ClassicalState s{0.0, k};
  auto free = [&](double h) {
    const cplx c = std::cos(k * h);
    const cplx sn = std::sin(k * h);
    s = {c * s.y + sn / k * s.dy, -k * sn * s.y + c * s.dy};
  };
  double at = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const double b = p.pieces()[i].from;
    if (b > x) break;
    free(b - at);
    s.dy += (p.pieces()[i].coeffs[0] - p.pieces()[i - 1].coeffs[0]) * s.y;
    at = b;
  }
  free(x - at);
  return s;
}

cplx exact_secular_piecewise(const PotentialSpec& p, cplx lambda) {
  const ClassicalState s = transfer_solution(p, lambda, kPi);
  return s.dy - p.pieces().back().coeffs[0] * s.y;
}

SecularResult solve_eigenvalue(const PotentialSpec& p, int n, const SpectralPoint& seed, const SolveOptions& options) {
  if (n < 1) throw DomainError("eigenvalue index must be >= 1");
  return p.is_real() ? solve_real(p, n, seed, options) : solve_complex(p, n, seed, options);
}

EigenfunctionTable eigenfunction_numeric(const PotentialSpec& p, cplx lambda, std::span<const double> grid, int n,
                                         const EigenfunctionTable* align_to, const StepPolicy& policy) {
  validate_grid(grid);
  const cplx k = principal_sqrt(lambda);
  const double spacing = 0.02 / std::max(1.0, std::abs(k));

  // Dense nodes: every table interval split into an even number of parts.
  std::vector<double> dense{0.0};
  std::vector<std::size_t> table_at{0};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = grid[i - 1];
    const double b = grid[i];
    int parts = static_cast<int>(std::ceil((b - a) / spacing));
    parts += parts % 2;
    parts = std::max(parts, 2);
    for (int j = 1; j < parts; ++j) dense.push_back(a + (b - a) * j / parts);
    dense.push_back(b);
    table_at.push_back(dense.size() - 1);
  }
  const auto traj = integrate_system(p, lambda, dense, policy);

  double norm = 0.0;
  for (std::size_t i = 1; i < table_at.size(); ++i) {
    const std::size_t a = table_at[i - 1];
    const std::size_t b = table_at[i];
    const double h = (dense[b] - dense[a]) / static_cast<double>(b - a);
    double acc = std::norm(traj[a].y1) + std::norm(traj[b].y1);
    for (std::size_t j = a + 1; j < b; ++j) acc += ((j - a) % 2 ? 4.0 : 2.0) * std::norm(traj[j].y1);
    norm += acc * h / 3.0;
  }
  if (!(norm > 0.0)) throw std::logic_error("eigenfunction_numeric: zero-norm solution");

  EigenfunctionTable t;
  t.n = n;
  t.grid.assign(grid.begin(), grid.end());
  t.kind = TableKind::oracle;
  t.normalization = "int |y|^2 = 1";
  const double scale = 1.0 / std::sqrt(norm);
  for (std::size_t idx : table_at) t.values.push_back(traj[idx].y1 * scale);
  if (align_to != nullptr) align_phase(t, *align_to);
  return t;
}

EigenfunctionTable biorthogonal_numeric(const EigenfunctionTable& y) {
  const cplx pair = bilinear_product(y.grid, y.values, y.values);
  if (std::abs(pair) == 0.0) throw std::logic_error("biorthogonal_numeric: (y, conj y) vanishes");
  EigenfunctionTable w = y;
  w.kind = TableKind::oracle_biorthogonal;
  w.normalization = "(y, w) = 1";
  const cplx scale = 1.0 / std::conj(pair);
  for (auto& v : w.values) v = std::conj(v) * scale;
  return w;
}

}  // namespace slspec
