#pragma once

// Brute-force reference computations used by the tests. None of these touch
// the closed-form moment machinery; they only use eval_u and generic quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "slspec/oracle.hpp"
#include "slspec/potential.hpp"

namespace oracles {

using slspec::cplx;
using slspec::kPi;

/// Adaptive Gauss–Kronrod on [a, b], real and imaginary parts separately.
inline cplx gk(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-11, unsigned depth = 12) {
  if (b <= a) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double re = GK::integrate([&](double t) { return f(t).real(); }, a, b, depth, tol);
  const double im = GK::integrate([&](double t) { return f(t).imag(); }, a, b, depth, tol);
  return {re, im};
}

/// Sub-intervals of [a, b] cut at the potential's breakpoints and at spacing `h`,
/// so that each panel holds a smooth integrand with few oscillations.
inline std::vector<double> panels(const slspec::PotentialSpec& p, double a, double b, double h) {
  std::vector<double> cuts{a};
  for (double bp : p.breakpoints())
    if (bp > a && bp < b) cuts.push_back(bp);
  cuts.push_back(b);
  std::vector<double> out{a};
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const int k = std::max(1, static_cast<int>(std::ceil((cuts[i] - cuts[i - 1]) / h)));
    for (int j = 1; j <= k; ++j) out.push_back(cuts[i - 1] + (cuts[i] - cuts[i - 1]) * j / k);
  }
  return out;
}

inline cplx integrate(const slspec::PotentialSpec& p, const std::function<cplx(double)>& f, double a, double b,
                      double h) {
  const auto cuts = panels(p, a, b, h);
  cplx acc = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) acc += gk(f, cuts[i - 1], cuts[i]);
  return acc;
}

struct BruteV {
  cplx single_sin, l2, dbl, u2_cos;
  cplx total() const { return single_sin + l2 + dbl + u2_cos; }
};

/// The four terms of v(x, λ) by direct quadrature; the double term is a genuine
/// nested 1-D ∘ 1-D integral (the inner integral is re-evaluated at every outer node).
inline BruteV brute_v(const slspec::PotentialSpec& p, double x, cplx k) {
  const double h = std::min(0.5, 2.0 / std::max(1.0, std::abs(k)));
  auto u = [&](double t) { return slspec::eval_u(p, t); };
  BruteV r;
  r.single_sin = integrate(p, [&](double t) { return u(t) * std::sin(2.0 * k * t); }, 0.0, x, h);
  const cplx l2 = integrate(p, [&](double t) { return u(t) * u(t); }, 0.0, x, h);
  r.l2 = 0.5 / k * l2;
  r.u2_cos = -0.5 / k * integrate(p, [&](double t) { return u(t) * u(t) * std::cos(2.0 * k * t); }, 0.0, x, h);

  // Inner integral S(t), accumulated panel by panel; inside a panel both levels
  // use fixed 20-point Gauss–Legendre, so each outer node re-integrates [a, t].
  using GL = boost::math::quadrature::gauss<double, 20>;
  auto gl = [](const std::function<cplx(double)>& f, double a, double b) {
    return cplx(GL::integrate([&](double t) { return f(t).real(); }, a, b),
                GL::integrate([&](double t) { return f(t).imag(); }, a, b));
  };
  const auto cuts = panels(p, 0.0, x, std::min(h, 0.25));
  auto inner = [&](double s) { return u(s) * std::sin(2.0 * k * s); };
  cplx base = 0.0;
  cplx dbl = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double a = cuts[i - 1];
    dbl += gl([&](double t) { return u(t) * std::cos(2.0 * k * t) * (base + gl(inner, a, t)); }, a, cuts[i]);
    base += gl(inner, a, cuts[i]);
  }
  r.dbl = 2.0 * dbl;
  return r;
}

/// Root of s·cos(sπ) − a·sin(sπ) in (n − 1, n − 1/2) by plain bisection (u ≡ a > 0, n ≥ 2).
inline double robin_root(int n, double a) {
  auto f = [a](double s) { return s * std::cos(s * kPi) - a * std::sin(s * kPi); };
  double lo = n - 1.0 + 1e-12;
  double hi = n - 0.5;
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Secular function of a single jump u = c·H(x − x0): y = sin(kx) continued
/// through y′ ↦ y′ + c·y at x0, boundary value y′(π) − c·y(π).
inline double single_step_secular(double k, double c, double x0) {
  const double a = std::sin(k * x0);
  const double tail = kPi - x0;
  const double y = std::sin(k * kPi) + c / k * a * std::sin(k * tail);
  const double dy = k * std::cos(k * kPi) + c * a * std::cos(k * tail);
  return dy - c * y;
}

/// Root of single_step_secular in [m − 0.45, m + 0.45], m = n − 1/2 (n large enough
/// that exactly one root lies there).
inline double single_step_root(int n, double c, double x0) {
  const double m = n - 0.5;
  auto f = [&](double k) { return single_step_secular(k, c, x0); };
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, m - 0.45, m + 0.45, tol, iters);
  return 0.5 * (r.first + r.second);
}

/// Deterministic random test potentials of every kind (real and complex).
inline slspec::PotentialSpec random_potential(std::mt19937_64& rng, int which) {
  std::uniform_real_distribution<double> c(-1.5, 1.5);
  std::uniform_real_distribution<double> cut(0.4, 2.7);
  const bool complex = which % 2 == 1;
  auto coef = [&] { return cplx(c(rng), complex ? c(rng) : 0.0); };
  switch (which % 3) {
    case 0: {
      const double b = cut(rng);
      std::vector<slspec::Piece> ps{{0.0, b, {coef()}}, {b, kPi, {coef()}}};
      return {slspec::PotentialKind::step, ps};
    }
    case 1: {
      const double b = cut(rng);
      std::vector<slspec::Piece> ps{{0.0, b, {coef(), coef(), 0.3 * coef()}}, {b, kPi, {coef(), coef()}}};
      return {slspec::PotentialKind::poly, ps};
    }
    default:
      return slspec::PotentialSpec::trig({coef(), coef(), coef(), 0.5 * coef(), 0.5 * coef()});
  }
}

}  // namespace oracles
