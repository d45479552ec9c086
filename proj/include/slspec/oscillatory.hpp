#pragma once

#include <vector>

#include "slspec/potential.hpp"

namespace slspec {

/// The four additive pieces of the phase correction v(x, λ).
struct VDecomposition {
  cplx term_single_sin;  // ∫₀ˣ u sin(2√λ t) dt
  cplx term_l2;          // ½ λ^{-1/2} ∫₀ˣ u² dt
  cplx term_double;      // 2 ∫₀ˣ ∫₀ᵗ u(t)u(s) cos(2√λ t) sin(2√λ s) ds dt
  cplx term_u2_cos;      // −½ λ^{-1/2} ∫₀ˣ u² cos(2√λ t) dt
  cplx total;
};

/// Sampled supremum gauge γ(λ) and its pieces.
struct GammaValue {
  double value = 0.0;  // sampled sup + tail (a lower estimate of the true sup)
  double upper_bound = 0.0;
  double sup_sin = 0.0;
  double sup_cos = 0.0;
  double sup_double = 0.0;
  double sup_u2_cos = 0.0;
  double tail = 0.0;  // |λ|^{-1/2} ‖u‖²
  int samples = 0;
};

/// Parabolic neighbourhood |Im √λ| < alpha of the positive axis, Re λ > mu.
struct SpectralDomain {
  double alpha = 2.0;
  double mu = 0.0;

  bool contains(cplx lambda) const;
};

/// √λ on the principal branch; throws SingularArgument for λ = 0.
cplx principal_sqrt(cplx lambda);

/// Closed-form cumulative moments of u against trig(2kt) for one fixed k.
/// Every accessor is an exact piecewise evaluation; building the kernel costs
/// O(pieces · terms²), each query O(terms).
class OscillatoryKernel {
 public:
  OscillatoryKernel(const PotentialSpec& p, cplx sqrt_lambda);

  cplx sqrt_lambda() const { return k_; }

  cplx sin_moment(double x) const;  // ∫₀ˣ u sin(2kt)
  cplx cos_moment(double x) const;  // ∫₀ˣ u cos(2kt)
  cplx u2(double x) const;          // ∫₀ˣ u²
  cplx u2_sin(double x) const;      // ∫₀ˣ u² sin(2kt)
  cplx u2_cos(double x) const;      // ∫₀ˣ u² cos(2kt)
  /// 2 ∫₀ˣ u(t) cos(2kt) ∫₀ᵗ u(s) sin(2ks) ds dt
  cplx double_term(double x) const;

  VDecomposition v(double x) const;

 private:
  struct Cumulative {
    std::vector<cplx> start;  // value at each piece's left end
    std::vector<ExpPoly> local;
  };
  cplx eval(const Cumulative& c, double x) const;

  const PotentialSpec* p_;
  cplx k_;
  Cumulative sin_, cos_, u2_, u2sin_, u2cos_, double_;
};

VDecomposition eval_v(const PotentialSpec& p, double x, cplx lambda);

/// γ(λ): sup over x of the four moment magnitudes plus the L² tail. The sup is
/// sampled on a uniform grid of `sup_grid` points plus breakpoints, then
/// refined around the largest samples.
GammaValue eval_gamma(const PotentialSpec& p, cplx lambda, int sup_grid = 2048);
GammaValue eval_gamma_at(const PotentialSpec& p, cplx sqrt_lambda, int sup_grid = 2048);

}  // namespace slspec
