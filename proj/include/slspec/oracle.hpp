#pragma once

#include <span>
#include <vector>

#include "slspec/asymptotics.hpp"
#include "slspec/oscillatory.hpp"
#include "slspec/potential.hpp"

namespace slspec {

/// (y, y^[1]) with y^[1] = y′ − u·y, the quasi-derivative.
struct QuasiDerivState {
  cplx y1;
  cplx y2;
};

/// Modified Prüfer variables: y1 = e^{log_r} sinθ, y2 = √λ e^{log_r} cosθ.
struct PruferState {
  cplx theta;
  cplx log_r;
};

/// Fixed-step policy. Steps never straddle breakpoints or requested nodes.
/// The system integrator (4th-order Magnus) uses h ≤ min(h_max, phase_step/max(1,|√λ|)),
/// the Prüfer integrator (classical RK4) the same with prufer_phase_step.
struct StepPolicy {
  double h_max = 0.005;
  double phase_step = 0.05;
  double prufer_phase_step = 0.01;

  StepPolicy halved() const { return {h_max / 2, phase_step / 2, prufer_phase_step / 2}; }
  double system_step(cplx sqrt_lambda) const;
  double prufer_step(cplx sqrt_lambda) const;
};

/// Quasi-derivative system from (0, √λ) at x = 0, sampled at `grid`
/// (any increasing nodes in [0,π]; x = 0 may be omitted). Step pieces are
/// propagated exactly.
std::vector<QuasiDerivState> integrate_system(const PotentialSpec& p, cplx lambda, std::span<const double> grid,
                                              const StepPolicy& policy = {});

/// Same system from an arbitrary initial state at x = 0.
std::vector<QuasiDerivState> integrate_system_from(const PotentialSpec& p, cplx lambda, QuasiDerivState initial,
                                                   std::span<const double> grid, const StepPolicy& policy = {});

std::vector<PruferState> integrate_prufer(const PotentialSpec& p, cplx lambda, std::span<const double> grid,
                                          const StepPolicy& policy = {});

/// Δ(λ) = y2(π, λ) for the solution with y1(0) = 0, y2(0) = √λ.
cplx characteristic(const PotentialSpec& p, cplx lambda, const StepPolicy& policy = {});

/// Δ(λ)/√λ, i.e. y2(π) from (0, 1). Entire in λ and real for real u, λ.
cplx characteristic_normalized(const PotentialSpec& p, cplx lambda, const StepPolicy& policy = {});

/// Classical (y, y′) for a step potential by free 2×2 transfer matrices and
/// jumps y′ ↦ y′ + c·y at each breakpoint; y(0) = 0, y′(0) = √λ.
struct ClassicalState {
  cplx y;
  cplx dy;
};
ClassicalState transfer_solution(const PotentialSpec& p, cplx lambda, double x);

/// y′(π) − u(π) y(π) from the transfer-matrix solution. Requires kind step.
cplx exact_secular_piecewise(const PotentialSpec& p, cplx lambda);

struct SecularResult {
  cplx lambda;
  cplx sqrt_lambda;
  double residual = 0.0;  // |Δ(λ)|
  int multiplicity_hint = 1;
  int iterations = 0;
};

struct SolveOptions {
  SpectralDomain domain{};
  double tol = 1e-13;  // relative step tolerance on √λ
  int max_iter = 100;
  StepPolicy policy{};
};

/// Locates λ_n near the asymptotic seed. Real potentials: θ-bracketing then a
/// bracketed root of Δ(λ)/√λ. Complex potentials: trust-limited secant in √λ.
/// Throws NonConvergence or IndexingError.
SecularResult solve_eigenvalue(const PotentialSpec& p, int n, const SpectralPoint& seed,
                               const SolveOptions& options = {});

/// Quasi-derivative solution at λ normalised to ∫|y|² = 1 (on a dense internal
/// grid), optionally phase-aligned to `align_to`.
EigenfunctionTable eigenfunction_numeric(const PotentialSpec& p, cplx lambda, std::span<const double> grid, int n,
                                         const EigenfunctionTable* align_to = nullptr,
                                         const StepPolicy& policy = {});

/// w = ȳ / conj(∫ y²), so that (y, w) = 1 on the table quadrature.
EigenfunctionTable biorthogonal_numeric(const EigenfunctionTable& y);

}  // namespace slspec
