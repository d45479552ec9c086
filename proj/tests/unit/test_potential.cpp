#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "slspec/errors.hpp"
#include "slspec/potential.hpp"

using namespace slspec;

TEST_SUITE("potential") {
  TEST_CASE("eval_u on the basic potentials") {
    CHECK(eval_u(PotentialSpec::zero(), 1.0) == cplx(0.0));
    const auto s = PotentialSpec::step(kPi / 2, 2.0);
    CHECK(eval_u(s, kPi / 4) == cplx(0.0));
    CHECK(eval_u(s, 3.0) == cplx(2.0));
    // right-continuous at the jump
    CHECK(eval_u(s, kPi / 2) == cplx(2.0));
    const auto t = PotentialSpec::trig({0.0, 0.0, cplx(1.0, 1.0)});
    CHECK(std::abs(eval_u(t, kPi / 2) - cplx(1.0, 1.0)) < 1e-15);
    CHECK(eval_u(s, kPi) == cplx(2.0));
    CHECK(eval_u(s, 0.0) == cplx(0.0));
  }

  TEST_CASE("eval_u rejects points outside [0, pi]") {
    const auto s = PotentialSpec::step(1.0, 1.0);
    CHECK_THROWS_AS(eval_u(s, -1e-3), DomainError);
    CHECK_THROWS_AS(eval_u(s, kPi + 1e-3), DomainError);
  }

  TEST_CASE("partition validation names the offending breakpoint") {
    std::vector<Piece> gap{{0.0, 1.0, {1.0}}, {1.2, kPi, {2.0}}};
    try {
      PotentialSpec bad(PotentialKind::step, gap);
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("1.2") != std::string::npos);
    }
    std::vector<Piece> overlap{{0.0, 1.5, {1.0}}, {1.0, kPi, {2.0}}};
    CHECK_THROWS_AS(PotentialSpec(PotentialKind::step, overlap), DomainError);
    std::vector<Piece> short_end{{0.0, 3.0, {1.0}}};
    CHECK_THROWS_AS(PotentialSpec(PotentialKind::step, short_end), DomainError);
    std::vector<Piece> two_coeffs{{0.0, kPi, {1.0, 2.0}}};
    CHECK_THROWS_AS(PotentialSpec(PotentialKind::step, two_coeffs), DomainError);
    CHECK_THROWS_AS(PotentialSpec(PotentialKind::poly, {}), DomainError);
    std::vector<Piece> nan_coef{{0.0, kPi, {std::nan("")}}};
    CHECK_THROWS_AS(PotentialSpec(PotentialKind::step, nan_coef), DomainError);
  }

  TEST_CASE("conjugate, real and imaginary parts, square") {
    const auto c = PotentialSpec::constant(cplx(1.0, 1.0));
    CHECK(eval_u(conjugate(c), 2.0) == cplx(1.0, -1.0));
    const auto s = PotentialSpec::step(kPi / 2, 2.0);
    CHECK(imag_part(s).is_zero());
    CHECK(eval_u(square(s), 3.0) == cplx(4.0));
    CHECK(eval_u(square(s), 1.0) == cplx(0.0));
    CHECK(square(s).kind() == PotentialKind::step);

    std::mt19937_64 rng(7);
    for (int which = 0; which < 6; ++which) {
      const auto p = oracles::random_potential(rng, which);
      CHECK(conjugate(conjugate(p)) == p);
      const auto re = real_part(p);
      const auto im = imag_part(p);
      const auto sq = square(p);
      CHECK(re.is_real());
      for (double x : {0.0, 0.3, 1.1, 2.0, 2.9, kPi}) {
        const cplx u = eval_u(p, x);
        CHECK(std::abs(eval_u(re, x) + cplx(0, 1) * eval_u(im, x) - u) < 1e-14);
        CHECK(std::abs(eval_u(sq, x) - u * u) < 1e-12 * (1.0 + std::norm(u)));
        CHECK(std::abs(eval_u(conjugate(p), x) - std::conj(u)) < 1e-14);
      }
    }
  }

  TEST_CASE("trig moments match the closed forms at half-integer frequencies") {
    const double a = 1.7;
    const auto c = PotentialSpec::constant(a);
    for (int n = 1; n <= 40; ++n) {
      const double m = n - 0.5;
      CHECK(std::abs(trig_moment(c, m, 0.0, kPi, TrigWeight::sin) - a / m) < 1e-13);
      CHECK(std::abs(trig_moment(c, m, 0.0, kPi, TrigWeight::cos)) < 1e-13);
    }
    // ω → 0: the sin kernel vanishes, the cos kernel gives ∫u
    CHECK(std::abs(trig_moment(c, 0.0, 0.0, kPi, TrigWeight::sin)) == 0.0);
    CHECK(std::abs(trig_moment(c, 1e-9, 0.0, kPi, TrigWeight::cos) - a * kPi) < 1e-12);
  }

  TEST_CASE("trig moments agree with adaptive quadrature on random samples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> om(0.5, 60.0);
    std::uniform_real_distribution<double> pos(0.0, kPi);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto p = oracles::random_potential(rng, i);
      double a = pos(rng), b = pos(rng);
      if (a > b) std::swap(a, b);
      const double w = om(rng);
      const auto weight = i % 2 ? TrigWeight::sin : TrigWeight::cos;
      const cplx exact = trig_moment(p, w, a, b, weight);
      const cplx brute = oracles::integrate(
          p,
          [&](double t) {
            const double ph = 2.0 * w * t;
            return eval_u(p, t) * (weight == TrigWeight::sin ? std::sin(ph) : std::cos(ph));
          },
          a, b, 0.1);
      const double scale = std::max(1.0, std::abs(brute));
      worst = std::max(worst, std::abs(exact - brute) / scale);
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("weighted moments and the L2 norm") {
    std::mt19937_64 rng(3);
    for (int which = 0; which < 6; ++which) {
      const auto p = oracles::random_potential(rng, which);
      const double w = 3.5;
      const cplx exact = weighted_trig_moment(p, w, 0.0, kPi, TrigWeight::cos);
      const cplx brute = oracles::integrate(
          p, [&](double t) { return (kPi - t) * eval_u(p, t) * std::cos(2.0 * w * t); }, 0.0, kPi, 0.1);
      CHECK(std::abs(exact - brute) < 1e-10);

      const double l2 = p.l2_norm_sq();
      const cplx via_moment = trig_moment(square(p), 0.0, 0.0, kPi, TrigWeight::cos);
      const cplx direct = oracles::integrate(p, [&](double t) { return std::norm(eval_u(p, t)); }, 0.0, kPi, 0.1);
      CHECK(std::abs(l2 - direct.real()) < 1e-10);
      if (p.is_real()) CHECK(std::abs(via_moment - l2) < 1e-10);
    }
  }

  TEST_CASE("ExpPoly antiderivative: series and closed form agree") {
    for (double beta : {0.0, 1e-6, 0.3, 2.0, 40.0}) {
      ExpPoly f({{1.0, 2, beta}, {cplx(0.5, -1.0), 0, beta}});
      const auto F = f.antiderivative(1.0);
      for (double s : {0.25, 0.5, 1.0}) {
        const cplx brute = oracles::gk([&](double t) { return f(t); }, 0.0, s);
        CHECK(std::abs(F(s) - brute) < 1e-12);
      }
    }
    ExpPoly g = ExpPoly::exponential(2.0, 1.0) * ExpPoly::exponential(1.0, -1.0);
    g.compact();
    REQUIRE(g.terms().size() == 1);
    CHECK(std::abs(g.terms()[0].coef - 2.0) < 1e-15);
  }

  TEST_CASE("JSON round trip and diagnostics") {
    const auto p = parse_potential(R"({"kind":"step","pieces":[
        {"from":0,"to":"pi/2","coeffs_re":[0]},
        {"from":"pi/2","to":"pi","coeffs_re":[2],"coeffs_im":[0.5]}]})");
    CHECK(p.size() == 2);
    CHECK(std::abs(p.pieces()[1].from - kPi / 2) < 1e-15);
    CHECK(eval_u(p, 3.0) == cplx(2.0, 0.5));
    CHECK(parse_potential(potential_to_json(p)) == p);

    CHECK_THROWS_AS(parse_potential("{"), ParseError);
    CHECK_THROWS_AS(parse_potential(R"({"kind":"wave","pieces":[]})"), ParseError);
    CHECK_THROWS_AS(parse_potential(R"({"kind":"step","pieces":[{"from":0,"to":"tau","coeffs_re":[1]}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_potential(R"({"kind":"step","pieces":[{"from":0,"to":"pi","coeffs_re":["x"]}]})"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_potential(R"({"kind":"step","pieces":[{"from":0,"to":"pi","coeffs_re":[1],"coeffs_im":[1,2]}]})"),
        ParseError);
    CHECK_THROWS_AS(parse_potential(R"({"kind":"step","pieces":[
        {"from":0,"to":2,"coeffs_re":[1]},{"from":1.5,"to":"pi","coeffs_re":[1]}]})"),
                    DomainError);
    CHECK_THROWS_AS(load_potential("/nonexistent/potential.json"), ParseError);
  }

  TEST_CASE("shipped potential files load") {
    for (const char* f : {"zero", "constant", "step", "complex_sin", "two_steps", "poly_complex"}) {
      CAPTURE(f);
      CHECK_NOTHROW(load_potential(std::string(SLSPEC_DATA_DIR) + "/" + f + ".json"));
    }
    CHECK(load_potential(std::string(SLSPEC_DATA_DIR) + "/step.json") == PotentialSpec::step(kPi / 2, 2.0));
  }
}
