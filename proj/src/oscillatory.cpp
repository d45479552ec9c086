#include "slspec/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slspec/errors.hpp"

namespace slspec {

bool SpectralDomain::contains(cplx lambda) const {
  return lambda.real() > mu && std::abs(std::sqrt(lambda).imag()) < alpha;
}

cplx principal_sqrt(cplx lambda) {
  if (lambda == 0.0) throw SingularArgument("lambda = 0: asymptotic formulas are singular there");
  return std::sqrt(lambda);
}

OscillatoryKernel::OscillatoryKernel(const PotentialSpec& p, cplx sqrt_lambda) : p_(&p), k_(sqrt_lambda) {
  if (k_ == 0.0) throw SingularArgument("sqrt(lambda) = 0: asymptotic formulas are singular there");
  const std::size_t n = p.size();
  for (auto* c : {&sin_, &cos_, &u2_, &u2sin_, &u2cos_, &double_}) {
    c->start.assign(n + 1, cplx{});
    c->local.resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pc = p.pieces()[i];
    const double span = pc.to - pc.from;
    const ExpPoly& u = p.local(i);
    const ExpPoly sk = trig_kernel(k_, pc.from, TrigWeight::sin);
    const ExpPoly ck = trig_kernel(k_, pc.from, TrigWeight::cos);
    const ExpPoly uu = u * u;

    sin_.local[i] = (u * sk).antiderivative(span);
    cos_.local[i] = (u * ck).antiderivative(span);
    u2_.local[i] = uu.antiderivative(span);
    u2sin_.local[i] = (uu * sk).antiderivative(span);
    u2cos_.local[i] = (uu * ck).antiderivative(span);
    // inner antiderivative S(t) = S(from) + sin_.local[i](s)
    const ExpPoly inner = sin_.local[i] + ExpPoly::constant(sin_.start[i]);
    double_.local[i] = (u * ck * inner).antiderivative(span) * cplx(2.0);

    for (auto* c : {&sin_, &cos_, &u2_, &u2sin_, &u2cos_, &double_})
      c->start[i + 1] = c->start[i] + c->local[i](span);
  }
}

cplx OscillatoryKernel::eval(const Cumulative& c, double x) const {
  if (!(x >= 0.0 && x <= kPi)) {
    std::ostringstream os;
    os << "x = " << x << " outside [0, pi]";
    throw DomainError(os.str());
  }
  const std::size_t i = p_->piece_index(x);
  return c.start[i] + c.local[i](x - p_->pieces()[i].from);
}

cplx OscillatoryKernel::sin_moment(double x) const { return eval(sin_, x); }
cplx OscillatoryKernel::cos_moment(double x) const { return eval(cos_, x); }
cplx OscillatoryKernel::u2(double x) const { return eval(u2_, x); }
cplx OscillatoryKernel::u2_sin(double x) const { return eval(u2sin_, x); }
cplx OscillatoryKernel::u2_cos(double x) const { return eval(u2cos_, x); }
cplx OscillatoryKernel::double_term(double x) const { return eval(double_, x); }

VDecomposition OscillatoryKernel::v(double x) const {
  VDecomposition d;
  d.term_single_sin = sin_moment(x);
  d.term_l2 = 0.5 * u2(x) / k_;
  d.term_double = double_term(x);
  d.term_u2_cos = -0.5 * u2_cos(x) / k_;
  d.total = d.term_single_sin + d.term_l2 + d.term_double + d.term_u2_cos;
  return d;
}

VDecomposition eval_v(const PotentialSpec& p, double x, cplx lambda) {
  return OscillatoryKernel(p, principal_sqrt(lambda)).v(x);
}

namespace {

struct GammaSample {
  double sin, cos, dbl, u2c;
  double sum() const { return sin + cos + dbl + u2c; }
};

}  // namespace

GammaValue eval_gamma_at(const PotentialSpec& p, cplx k, int sup_grid) {
  GammaValue g;
  if (k == 0.0) throw SingularArgument("sqrt(lambda) = 0: gamma is singular there");
  g.tail = p.l2_norm_sq() / std::abs(k);
  if (p.is_zero()) return g;

  const OscillatoryKernel kern(p, k);
  auto sample = [&](double x) {
    return GammaSample{std::abs(kern.sin_moment(x)), std::abs(kern.cos_moment(x)), std::abs(kern.double_term(x)),
                       0.5 * std::abs(kern.u2_cos(x) / k)};
  };

  const int n = std::max(sup_grid, 16);
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n) + p.size());
  for (int i = 0; i < n; ++i) xs.push_back(kPi * i / (n - 1));
  for (double b : p.breakpoints()) xs.push_back(b);
  std::sort(xs.begin(), xs.end());

  std::vector<double> vals(xs.size());
  auto absorb = [&](const GammaSample& s) {
    g.sup_sin = std::max(g.sup_sin, s.sin);
    g.sup_cos = std::max(g.sup_cos, s.cos);
    g.sup_double = std::max(g.sup_double, s.dbl);
    g.sup_u2_cos = std::max(g.sup_u2_cos, s.u2c);
    ++g.samples;
    return s.sum();
  };
  double best = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    vals[i] = absorb(sample(xs[i]));
    best = std::max(best, vals[i]);
  }

  // Local refinement around the largest sampled local maxima.
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool left = i == 0 || vals[i] >= vals[i - 1];
    const bool right = i + 1 == xs.size() || vals[i] >= vals[i + 1];
    if (left && right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  if (peaks.size() > 8) peaks.resize(8);
  for (std::size_t pk : peaks) {
    double lo = xs[pk == 0 ? 0 : pk - 1];
    double hi = xs[std::min(pk + 1, xs.size() - 1)];
    for (int round = 0; round < 3; ++round) {
      constexpr int m = 32;
      double arg = lo;
      double local_best = -1.0;
      for (int j = 0; j <= m; ++j) {
        const double x = lo + (hi - lo) * j / m;
        const double v = absorb(sample(x));
        if (v > local_best) {
          local_best = v;
          arg = x;
        }
      }
      best = std::max(best, local_best);
      const double h = (hi - lo) / m;
      lo = std::max(0.0, arg - h);
      hi = std::min(kPi, arg + h);
    }
  }

  // Modulus of continuity of the sampled function on the coarse grid.
  const double usup = p.sup_abs();
  const double growth = std::cosh(2.0 * std::abs(k.imag()) * kPi);
  const double lip = usup * growth * (2.0 + 2.0 * g.sup_sin) + 0.5 * usup * usup * growth / std::abs(k);
  const double h = kPi / (n - 1);
  g.value = best + g.tail;
  g.upper_bound = g.value + lip * h / 2.0;
  return g;
}

GammaValue eval_gamma(const PotentialSpec& p, cplx lambda, int sup_grid) {
  return eval_gamma_at(p, principal_sqrt(lambda), sup_grid);
}

}  // namespace slspec
