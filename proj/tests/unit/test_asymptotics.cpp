#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "slspec/asymptotics.hpp"
#include "slspec/errors.hpp"
#include "slspec/oracle.hpp"

using namespace slspec;

namespace {

double sup_sine_error(const EigenfunctionTable& t, double m) {
  double e = 0.0;
  for (std::size_t i = 0; i < t.grid.size(); ++i)
    e = std::max(e, std::abs(t.values[i] - std::sqrt(2.0 / kPi) * std::sin(m * t.grid[i])));
  return e;
}

}  // namespace

TEST_SUITE("asymptotics") {
  TEST_CASE("eigenvalue formula: free, constant and single jump") {
    const auto sp = eigenvalue_asym(PotentialSpec::zero(), 7);
    CHECK(sp.m == 6.5);
    CHECK(sp.sqrt_lambda_asym == cplx(6.5));
    CHECK(sp.gamma_at_m2 == 0.0);
    CHECK_FALSE(sp.remainder.has_value());

    const auto c = eigenvalue_asym(PotentialSpec::constant(1.0), 5);
    CHECK(std::abs(c.sqrt_lambda_asym - (4.5 - 1.0 / (4.5 * kPi))) < 1e-14);
    CHECK(std::abs(c.sqrt_lambda_asym.real() - 4.429264) < 1e-6);
    CHECK(std::abs(c.sqrt_lambda_asym - oracles::robin_root(5, 1.0)) < 1e-3);

    const auto s = eigenvalue_asym(PotentialSpec::step(kPi / 2, 2.0), 10);
    const double exact = oracles::single_step_root(10, 2.0, kPi / 2);
    CHECK(std::abs(s.sqrt_lambda_asym - exact) < s.gamma_at_m2 * s.gamma_at_m2);
    CHECK(std::abs(s.sqrt_lambda_asym.real() - (9.5 - 1.0 / (9.5 * kPi))) < 0.02);

    SpectralPoint q = s;
    q.attach_numeric(exact);
    REQUIRE(q.remainder.has_value());
    CHECK(std::abs(*q.remainder - (exact - s.sqrt_lambda_asym)) < 1e-15);
    CHECK_THROWS_AS(eigenvalue_asym(PotentialSpec::zero(), 0), DomainError);
  }

  TEST_CASE("theta and r representations: basic identities") {
    const auto z = PotentialSpec::zero();
    CHECK(std::abs(theta_asym(z, 1.3, 49.0) - 7.0 * 1.3) < 1e-15);
    CHECK(r_asym(z, 2.0, 49.0) == cplx(1.0));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 6; ++i) {
      const auto p = oracles::random_potential(rng, i);
      CHECK(std::abs(theta_asym(p, 0.0, 30.0)) < 1e-15);
      CHECK(std::abs(r_asym(p, 0.0, 30.0) - 1.0) < 1e-15);
    }
    const auto c = PotentialSpec::constant(1.0);
    for (int n : {3, 8, 20}) {
      const double m = n - 0.5;
      CHECK(std::abs(theta_asym(c, kPi, m * m) - (m * kPi + 1.0 / m)) < 1e-12);
      // cos moment vanishes, ∫u² sin(2mt) = 1/m
      CHECK(std::abs(r_asym(c, kPi, m * m) - (1.0 - 1.0 / (2 * m * m))) < 1e-12);
    }
    CHECK_THROWS_AS(theta_asym(c, 1.0, 0.0), SingularArgument);
    CHECK_THROWS_AS(r_asym(c, 1.0, 0.0), SingularArgument);
  }

  TEST_CASE("profiles agree with pointwise evaluation") {
    const auto p = PotentialSpec::trig({0.2, 1.0, cplx(0.0, 0.5)});
    const cplx k(12.3, 0.1);
    const OscillatoryKernel kern(p, k);
    const auto grid = uniform_grid(17);
    const auto th = theta_asym_profile(kern, grid);
    const auto r = r_asym_profile(kern, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(th[i] - theta_asym(p, grid[i], k * k)) < 1e-12);
      CHECK(std::abs(r[i] - r_asym(p, grid[i], k * k)) < 1e-12);
    }
  }

  TEST_CASE("free potential: tables are the normalised sines") {
    const auto grid = uniform_grid(101);
    for (int n : {1, 2, 9, 30}) {
      CHECK(sup_sine_error(eigenfunction_asym(PotentialSpec::zero(), n, grid), n - 0.5) == 0.0);
      CHECK(sup_sine_error(biorthogonal_asym(PotentialSpec::zero(), n, grid), n - 0.5) == 0.0);
    }
    const auto g5 = uniform_grid(5);
    const auto t = eigenfunction_asym(PotentialSpec::zero(), 1, g5);
    for (std::size_t i = 0; i < g5.size(); ++i)
      CHECK(std::abs(t.values[i] - std::sqrt(2.0 / kPi) * std::sin(g5[i] / 2)) < 1e-16);
  }

  TEST_CASE("tables vanish at x = 0") {
    std::mt19937_64 rng(2);
    const auto grid = uniform_grid(33);
    for (int i = 0; i < 6; ++i) {
      const auto p = oracles::random_potential(rng, i);
      for (int n : {1, 6, 15}) {
        CHECK(std::abs(eigenfunction_asym(p, n, grid).values[0]) < 1e-15);
        CHECK(std::abs(biorthogonal_asym(p, n, grid).values[0]) < 1e-15);
      }
    }
  }

  TEST_CASE("real potentials: partner formula reduces to the eigenfunction formula") {
    const auto grid = uniform_grid(257);
    for (const auto& p : {PotentialSpec::step(kPi / 2, 2.0), PotentialSpec::poly({0.5, -0.2, 0.1})}) {
      for (int n = 1; n <= 12; ++n) {
        const auto y = eigenfunction_asym(p, n, grid);
        const auto w = biorthogonal_asym(p, n, grid);
        const auto wl = biorthogonal_asym(p, n, grid, BiorthogonalConvention::literal);
        CHECK(sup_distance(y, w) <= 1e-14);
        CHECK(sup_distance(y, wl) <= 1e-14);
      }
    }
  }

  TEST_CASE("step potential: asymptotic eigenfunction close to the oracle") {
    const auto p = PotentialSpec::step(kPi / 2, 2.0);
    const auto grid = uniform_grid(513);
    const auto ya = eigenfunction_asym(p, 10, grid);
    const auto res = solve_eigenvalue(p, 10, eigenvalue_asym(p, 10));
    const auto yo = eigenfunction_numeric(p, res.lambda, grid, 10, &ya);
    CHECK(sup_distance(ya, yo) <= 0.05);
  }

  TEST_CASE("complex sin potential: pairings against oracle pairs") {
    const auto p = PotentialSpec::trig({0.0, 0.0, cplx(1.0, 1.0)});
    const auto grid = uniform_grid(1025);
    const auto w8 = biorthogonal_asym(p, 8, grid);
    const auto res8 = solve_eigenvalue(p, 8, eigenvalue_asym(p, 8));
    const auto y8o = eigenfunction_numeric(p, res8.lambda, grid, 8);
    const auto w8o = biorthogonal_numeric(y8o);
    CHECK(std::abs(inner_product(y8o, w8o) - 1.0) < 1e-12);
    for (int k = 5; k <= 12; ++k) {
      CAPTURE(k);
      const auto yk = eigenfunction_asym(p, k, grid);
      const cplx pair = inner_product(yk, w8);
      if (k == 8) {
        CHECK(std::abs(pair - 1.0) < 0.02);
      } else {
        CHECK(std::abs(pair) < 0.01);
        // oracle pairs are biorthogonal up to quadrature error
        const auto rk = solve_eigenvalue(p, k, eigenvalue_asym(p, k));
        const auto yko = eigenfunction_numeric(p, rk.lambda, grid, k);
        CHECK(std::abs(inner_product(yko, w8o)) < 1e-6);
      }
    }
  }

  TEST_CASE("sesquilinear pairing improves on the literal one for complex u") {
    const auto p = PotentialSpec::trig({0.0, 0.0, cplx(1.0, 1.0)});
    const auto grid = uniform_grid(1025);
    for (int n = 5; n <= 8; ++n) {
      const auto y = eigenfunction_asym(p, n, grid);
      const cplx s = inner_product(y, biorthogonal_asym(p, n, grid));
      const cplx l = inner_product(y, biorthogonal_asym(p, n, grid, BiorthogonalConvention::literal));
      CHECK(std::abs(s - 1.0) < std::abs(l - 1.0));
      CHECK(std::abs(std::abs(l) - 1.0) < 0.03);
    }
  }

  TEST_CASE("normalization factor") {
    CHECK(normalization_factor(PotentialSpec::zero(), 4) == cplx(kPi / 2));
    CHECK(normalization_factor(PotentialSpec::step(1.0, 0.7), 6).imag() == 0.0);
    // u ≡ 1 against the oracle ∫|r sin θ|², agreement to O(γ²)
    const auto c = PotentialSpec::constant(1.0);
    for (int n : {5, 10, 20}) {
      const double m = n - 0.5;
      const auto res = solve_eigenvalue(c, n, eigenvalue_asym(c, n));
      const auto dense = uniform_grid(4001);
      const auto traj = integrate_system(c, res.lambda, dense);
      std::vector<cplx> y;
      for (const auto& s : traj) y.push_back(s.y1);
      const cplx direct = inner_product(dense, y, y);
      const double g = eval_gamma_at(c, m).value;
      CAPTURE(n);
      CHECK(std::abs(normalization_factor(c, n) - direct) <= g * g);
      CHECK(std::abs(normalization_factor(c, n) - direct) * m * m <= 3.0);
    }
  }

  TEST_CASE("table helpers") {
    const auto grid = uniform_grid(201);
    EigenfunctionTable s;
    s.grid = grid;
    for (double x : grid) s.values.push_back(std::sin(2.5 * x));
    CHECK(std::abs(inner_product(s, s) - kPi / 2) < 1e-8);
    auto neg = s;
    for (auto& v : neg.values) v = -v;
    align_phase(neg, s);
    CHECK(sup_distance(neg, s) == 0.0);
    auto rot = s;
    for (auto& v : rot.values) v *= cplx(0.6, 0.8);
    align_phase(rot, s);
    CHECK(sup_distance(rot, s) < 1e-15);

    CHECK_THROWS_AS(validate_grid(std::vector<double>{0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate_grid(std::vector<double>{0.0, 2.0, 1.0, kPi}), DomainError);
    CHECK_THROWS_AS(uniform_grid(1), DomainError);
    CHECK_THROWS_AS(eigenfunction_asym(PotentialSpec::zero(), 1, std::vector<double>{0.5, kPi}), DomainError);
    EigenfunctionTable other;
    other.grid = uniform_grid(11);
    other.values.assign(11, 1.0);
    CHECK_THROWS_AS(inner_product(s, other), DomainError);
  }

  TEST_CASE("half-integer moment identity") {
    const auto x = PotentialSpec::poly({0.0, 1.0});
    for (int n = 1; n <= 100; ++n) {
      const double m = n - 0.5;
      CHECK(std::abs(trig_moment(x, m, 0.0, kPi, TrigWeight::sin) - kPi / (2 * m)) <= 1e-12);
    }
  }
}
