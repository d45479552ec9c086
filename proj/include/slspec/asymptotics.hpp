#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slspec/oscillatory.hpp"
#include "slspec/potential.hpp"

namespace slspec {

struct SpectralPoint {
  int n = 0;
  double m = 0.0;  // n − 1/2
  cplx sqrt_lambda_asym;
  cplx phase_correction;  // −v(π, m²)/π
  double gamma_at_m2 = 0.0;
  std::optional<cplx> sqrt_lambda_numeric;
  std::optional<cplx> remainder;  // numeric − asymptotic

  void attach_numeric(cplx sqrt_lambda) {
    sqrt_lambda_numeric = sqrt_lambda;
    remainder = sqrt_lambda - sqrt_lambda_asym;
  }
};

enum class TableKind { eigenfunction, biorthogonal, oracle, oracle_biorthogonal };

std::string to_string(TableKind kind);

/// Sampled y_n or w_n on a grid of [0,π].
struct EigenfunctionTable {
  int n = 0;
  std::vector<double> grid;
  std::vector<cplx> values;
  TableKind kind = TableKind::eigenfunction;
  std::string normalization;
};

/// How the biorthogonal normalisation constant is paired with y_n.
///   sesquilinear: w_n = ȳ_n / conj(∫ y_n²), so (y_n, w_n) = ∫ y_n w̄_n = 1
///   literal: w_n = ȳ_n / ∫ y_n², which leaves a unimodular phase on (y_n, w_n)
enum class BiorthogonalConvention { sesquilinear, literal };

/// Uniform grid of `points` nodes including 0 and π.
std::vector<double> uniform_grid(int points);
/// Throws DomainError unless the grid is strictly increasing from 0 to π.
void validate_grid(std::span<const double> grid);

/// ∫₀^π f ḡ over a shared table grid (composite Simpson on uniform odd grids,
/// trapezoid otherwise).
cplx inner_product(std::span<const double> grid, std::span<const cplx> f, std::span<const cplx> g);
cplx inner_product(const EigenfunctionTable& f, const EigenfunctionTable& g);
/// ∫₀^π f g (no conjugation).
cplx bilinear_product(std::span<const double> grid, std::span<const cplx> f, std::span<const cplx> g);

double sup_distance(const EigenfunctionTable& a, const EigenfunctionTable& b);
/// Multiply `t` by the unimodular factor that makes (t, reference) real and positive.
void align_phase(EigenfunctionTable& t, const EigenfunctionTable& reference);

/// √λ_n ≈ m − v(π, m²)/π together with γ(m²).
SpectralPoint eigenvalue_asym(const PotentialSpec& p, int n, int gamma_grid = 2048);

/// √λ·x + v(x, λ)
cplx theta_asym(const PotentialSpec& p, double x, cplx lambda);
/// 1 − ∫₀ˣ u cos(2√λ t) dt − (2√λ)^{-1} ∫₀ˣ u² sin(2√λ t) dt
cplx r_asym(const PotentialSpec& p, double x, cplx lambda);

/// Same as above for a whole grid, sharing one kernel.
std::vector<cplx> theta_asym_profile(const OscillatoryKernel& kern, std::span<const double> grid);
std::vector<cplx> r_asym_profile(const OscillatoryKernel& kern, std::span<const double> grid);

/// Asymptotic normalised eigenfunction y_n (the √(π/2) factor divided out).
EigenfunctionTable eigenfunction_asym(const PotentialSpec& p, int n, std::span<const double> grid);

/// Asymptotic biorthogonal partner w_n.
EigenfunctionTable biorthogonal_asym(const PotentialSpec& p, int n, std::span<const double> grid,
                                     BiorthogonalConvention convention = BiorthogonalConvention::sesquilinear);

/// Expanded ∫ y_n ȳ_n for the unnormalised solution r·sinθ:
/// π/2 · (1 − (πm)^{-1}∫u sin − (2/π)∫(π−t)u cos − (πm)^{-1}∫(π−t)u² sin), all at 2mt.
cplx normalization_factor(const PotentialSpec& p, int n);

}  // namespace slspec
