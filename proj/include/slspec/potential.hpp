#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace slspec {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

/// One term c · s^power · exp(i·freq·s) in a local coordinate s ≥ 0.
struct ExpTerm {
  cplx coef;
  int power = 0;
  cplx freq;
};

/// Finite sum of exponential-polynomial terms. Closed under products and
/// antiderivatives, which is what makes every oscillatory moment of a
/// step/polynomial/trig potential exact.
class ExpPoly {
 public:
  ExpPoly() = default;
  explicit ExpPoly(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {}

  static ExpPoly constant(cplx c) { return ExpPoly({{c, 0, 0.0}}); }
  /// a·e^{iβs}
  static ExpPoly exponential(cplx a, cplx beta) { return ExpPoly({{a, 0, beta}}); }

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  cplx operator()(double s) const;

  ExpPoly& operator+=(const ExpPoly& rhs);
  ExpPoly& operator*=(cplx c);
  friend ExpPoly operator+(ExpPoly lhs, const ExpPoly& rhs) { return lhs += rhs; }
  friend ExpPoly operator*(ExpPoly lhs, cplx c) { return lhs *= c; }
  friend ExpPoly operator*(const ExpPoly& lhs, const ExpPoly& rhs);

  /// Pointwise complex conjugate (for real s).
  ExpPoly conj() const;

  /// F(s) = ∫₀ˢ f, valid on [0, span]. Terms with |freq|·span below
  /// power+1 use the power series, the rest the closed form.
  ExpPoly antiderivative(double span) const;

  /// Merge terms with equal power and frequency; drop exact zeros.
  void compact();

 private:
  std::vector<ExpTerm> terms_;
};

enum class PotentialKind { step, poly, trig };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& s);

/// Coefficient layout per kind:
///   step: [c]                      u = c
///   poly: [c0, c1, ...]            u = Σ c_j (t − from)^j
///   trig: [c0, a1, b1, a2, b2,...] u = c0 + Σ a_j cos(j t) + b_j sin(j t)
struct Piece {
  double from = 0.0;
  double to = 0.0;
  std::vector<cplx> coeffs;
};

/// Antiderivative potential u on [0,π], stored exactly as a partition into
/// pieces of a single kind. Immutable once constructed.
class PotentialSpec {
 public:
  /// Validates the partition; throws DomainError naming the offending breakpoint.
  PotentialSpec(PotentialKind kind, std::vector<Piece> pieces);

  static PotentialSpec zero();
  static PotentialSpec constant(cplx c);
  /// u = height·H(x − at)
  static PotentialSpec step(double at, cplx height);
  /// Single piece on [0,π] with the trig/poly coefficient layout below.
  static PotentialSpec trig(std::vector<cplx> coeffs);
  static PotentialSpec poly(std::vector<cplx> coeffs);

  PotentialKind kind() const { return kind_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  /// Interior breakpoints (strictly between 0 and π).
  std::vector<double> breakpoints() const;

  /// Piece containing x under right-continuity (π maps to the last piece).
  std::size_t piece_index(double x) const;
  /// u restricted to piece i, in the local coordinate s = t − from.
  const ExpPoly& local(std::size_t i) const { return local_[i]; }

  bool is_real() const;
  bool is_zero() const;
  double sup_abs() const;
  /// ∫₀^π |u|²
  double l2_norm_sq() const;

  std::string describe() const;

  friend bool operator==(const PotentialSpec& a, const PotentialSpec& b);

 private:
  PotentialKind kind_;
  std::vector<Piece> pieces_;
  std::vector<ExpPoly> local_;
};

cplx eval_u(const PotentialSpec& p, double x);

enum class TrigWeight { sin, cos };

/// Kernel trig(2ωt) on a piece starting at `origin`, written in s = t − origin.
ExpPoly trig_kernel(cplx omega, double origin, TrigWeight weight);

/// ∫ₐᵇ u(t)·trig(2ωt) dt, exact per piece.
cplx trig_moment(const PotentialSpec& p, cplx omega, double a, double b, TrigWeight weight);

/// ∫ₐᵇ (π − t)·u(t)·trig(2ωt) dt, exact per piece.
cplx weighted_trig_moment(const PotentialSpec& p, cplx omega, double a, double b, TrigWeight weight);

PotentialSpec conjugate(const PotentialSpec& p);
PotentialSpec real_part(const PotentialSpec& p);
PotentialSpec imag_part(const PotentialSpec& p);
PotentialSpec square(const PotentialSpec& p);

/// JSON potential file: { "kind": "step"|"poly"|"trig", "pieces": [ { "from", "to",
/// "coeffs_re", "coeffs_im" } ] }. Endpoints may also be strings such as "pi/2".
PotentialSpec parse_potential(const std::string& json_text);
PotentialSpec load_potential(const std::string& path);
std::string potential_to_json(const PotentialSpec& p);

}  // namespace slspec
