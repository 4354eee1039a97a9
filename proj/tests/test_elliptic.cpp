#include <doctest.h>

#include <cmath>

#include "heun/elliptic.hpp"
#include "heun/errors.hpp"
#include "heun/models.hpp"
#include "heun/verification.hpp"
#include "support.hpp"

using namespace heun;

namespace {

double ode_residual(double z, const EllipticInvariants& inv) {
  const auto w = weierstrass_p(z, inv);
  const double rhs = 4.0 * w.p * w.p * w.p - inv.g2 * w.p - inv.g3;
  const double scale = std::max({1.0, 4.0 * std::pow(std::abs(w.p), 3), w.p_prime * w.p_prime});
  return std::abs(w.p_prime * w.p_prime - rhs) / scale;
}

}  // namespace

TEST_CASE("invariants of the Weierstrass normal form") {
  const QuarticPolynomial f{{-0.2, -1.0, 0.0, 4.0, 0.0}};  // 4x^3 - x - 0.2
  const auto inv = quartic_invariants(f);
  CHECK(inv.g2 == doctest::Approx(1.0));
  CHECK(inv.g3 == doctest::Approx(0.2));

  const auto x4 = quartic_invariants(QuarticPolynomial{{0, 0, 0, 0, 1}});
  CHECK(x4.g2 == 0.0);
  CHECK(x4.g3 == 0.0);

  // 1 - x^4 gives g2 = -1, g3 = 0 (lemniscatic up to sign).
  const auto lem = quartic_invariants(QuarticPolynomial{{1, 0, 0, 0, -1}});
  CHECK(lem.g2 == doctest::Approx(-1.0));
  CHECK(lem.g3 == doctest::Approx(0.0));
}

TEST_CASE("invariants are unchanged by a shift of x") {
  Rng rng(8);
  for (int n = 0; n < 20; ++n) {
    QuarticPolynomial f;
    for (double& c : f.c) c = rng.uniform(-2, 2);
    const double lam = rng.uniform(-1, 1);
    // f(x + lam) by Taylor expansion
    QuarticPolynomial g;
    const double binom[5][5] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}};
    for (int k = 0; k <= 4; ++k)
      for (int j = 0; j <= k; ++j) g.c[j] += f.c[k] * binom[k][j] * std::pow(lam, k - j);
    const auto a = quartic_invariants(f), b = quartic_invariants(g);
    CHECK(a.g2 == doctest::Approx(b.g2).epsilon(1e-11));
    CHECK(a.g3 == doctest::Approx(b.g3).epsilon(1e-11));
  }
}

TEST_CASE("weierstrass p basic values") {
  const auto w = weierstrass_p(0.1, {0.0, 0.0});
  CHECK(w.p == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(w.p_prime == doctest::Approx(-2000.0).epsilon(1e-14));
  CHECK(ode_residual(0.3, {1.0, 0.2}) < 1e-10);
  CHECK_THROWS_AS(weierstrass_p(0.0, {1.0, 0.2}), DomainError);
  // even and odd
  const auto a = weierstrass_p(0.7, {3.0, 0.5}), b = weierstrass_p(-0.7, {3.0, 0.5});
  CHECK(a.p == doctest::Approx(b.p));
  CHECK(a.p_prime == doctest::Approx(-b.p_prime));
}

TEST_CASE("weierstrass p against high-precision references") {
  struct Ref {
    double g2, g3, z, p, dp;
  };
  // Computed independently through Jacobi functions at 40 digits.
  const Ref refs[] = {
      {4, 0, 0.3, 11.129120833534211443, -73.953879593296364605},
      {4, 0, 0.9, 1.4037996383188625765, -2.3346116818932182724},
      {4, 0, 1.4, 1.0159578776240067756, 0.36157312155583975632},
      {3, 0.5, 0.3, 11.124761270577663472, -73.982034835104887485},
      {3, 0.5, 0.9, 1.3721613104060379467, -2.3911678457894810494},
      {3, 0.5, 1.4, 0.94792508453075768416, 0.25159979385811069079},
      {10, -3, 0.3, 11.155303087612782982, -73.784454662616292302},
      {10, -3, 0.9, 1.6094723980293301319, -1.8926157117308667538},
      {10, -3, 1.4, 1.6599029821059657116, 2.166782466314400714},
  };
  for (const auto& r : refs) {
    const auto w = weierstrass_p(r.z, {r.g2, r.g3});
    CHECK(std::abs(w.p - r.p) < 1e-11 * std::max(1.0, std::abs(r.p)));
    CHECK(std::abs(w.p_prime - r.dp) < 1e-10 * std::max(1.0, std::abs(r.dp)));
  }
}

TEST_CASE("laurent expansion is correct to sixth order") {
  // p(z) - 1/z^2 - g2 z^2/20 - g3 z^4/28 = (g2^2/1200) z^6 + O(z^8).
  const EllipticInvariants inv{1000.0, 500.0};
  auto diff = [&](double z) {
    const double p = weierstrass_p(z, inv).p;
    return p - 1.0 / (z * z) - inv.g2 * z * z / 20.0 - inv.g3 * std::pow(z, 4) / 28.0;
  };
  const double c6 = inv.g2 * inv.g2 / 1200.0;
  CHECK(diff(0.01) / std::pow(0.01, 6) == doctest::Approx(c6).epsilon(1e-3));
  CHECK(diff(0.02) / diff(0.01) == doctest::Approx(64.0).epsilon(1e-2));
}

TEST_CASE("ode residual across a grid") {
  for (double g2 : {-2.0, 0.0, 1.0, 2.0})
    for (double g3 : {-1.0, 0.0, 0.5, 1.0})
      for (double z : {0.05, 0.4, 0.8, 1.2, 1.5}) CHECK(ode_residual(z, {g2, g3}) < 1e-10);
}

TEST_CASE("closed form for 4x^3 - 4x from x0 = 1") {
  const QuarticPolynomial f{{0.0, -4.0, 0.0, 4.0, 0.0}};
  // f'(1) = 8, f''(1) = 24, invariants (4, 0).
  for (double t : {0.2, 0.5, 1.0}) {
    const double expect = 1.0 + 8.0 / (4.0 * weierstrass_p(t, {4.0, 0.0}).p - 4.0);
    CHECK(closed_form_solution(f, 1.0, t) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK(closed_form_solution(f, 1.0, 0.0) == 1.0);
  // x'^2 = f(x) by a five-point difference
  const double h = 1e-3;
  auto x = [&](double t) { return closed_form_solution(f, 1.0, t); };
  for (double t = 0.2; t <= 1.0; t += 0.1) {
    const double dx = (x(t - 2 * h) - 8 * x(t - h) + 8 * x(t + h) - x(t + 2 * h)) / (12 * h);
    // the difference quotient itself is good to a few 1e-9 near t = 1
    CHECK(std::abs(dx * dx - f(x(t))) < 1e-8 * std::max(1.0, std::abs(f(x(t)))));
  }
}

TEST_CASE("closed form rejects bad seeds") {
  const QuarticPolynomial f{{0.0, -4.0, 0.0, 4.0, 0.0}};
  CHECK_THROWS_AS(closed_form_solution(f, 0.5, 0.3), PreconditionError);
  // 4(x - 1)^2 (x + 1): double root at 1
  const QuarticPolynomial g{{4.0, -4.0, -4.0, 4.0, 0.0}};
  CHECK_THROWS_AS(closed_form_solution(g, 1.0, 0.3), DomainError);
}

TEST_CASE("polish_root") {
  const QuarticPolynomial f{{-2.0, 0.0, 1.0, 0.0, 0.0}};
  CHECK(polish_root(f, 1.41421) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // a guess that has to travel far is returned unchanged
  CHECK(polish_root(f, 1.0) == 1.0);
}

TEST_CASE("dynamics classification") {
  auto cls = classify_dynamics(QuarticPolynomial{{4.0, -4.0, 1.0, 0.0, 0.0}});  // (x-2)^2
  CHECK(cls.kind == DynamicsClass::Kind::Elementary);
  CHECK(cls.effective_degree == 2);
  CHECK(cls.repeated_root);

  cls = classify_dynamics(QuarticPolynomial{{0.0, -4.0, 0.0, 4.0, 0.0}});
  CHECK(cls.kind == DynamicsClass::Kind::Elliptic);
  CHECK(cls.effective_degree == 3);
  CHECK_FALSE(cls.repeated_root);

  cls = classify_dynamics(QuarticPolynomial{{4.0, -4.0, -4.0, 4.0, 0.0}});
  CHECK(cls.kind == DynamicsClass::Kind::DegeneratePolynomial);

  cls = classify_dynamics(QuarticPolynomial{{1.0, -1.0, 0.0, 0.0, 0.0}});
  CHECK(cls.kind == DynamicsClass::Kind::Elementary);
  CHECK(cls.effective_degree == 1);
}

TEST_CASE("pure Y pencils are elementary on every model") {
  const heun::ModelSpec models[] = {
      heun::test::poeschl_teller({0.3, 0, 0, 0, 1}), heun::test::gyrostat({0.3, 0, 0, 0, 1}),
      heun::test::a1({0.3, 0, 0, 0, 1})};
  for (const auto& m : models) {
    const auto f = assemble_quartic(pi_polynomials(m.tau, m.phi, Variable::X), 0.9);
    CHECK(classify_dynamics(f).kind == DynamicsClass::Kind::Elementary);
  }
}

TEST_CASE("laurent remainder scales as z^6") {
  const EllipticInvariants inv{1000.0, 500.0};
  auto diff = [&](double z) {
    return weierstrass_p(z, inv).p - 1.0 / (z * z) - inv.g2 * z * z / 20.0 -
           inv.g3 * std::pow(z, 4) / 28.0;
  };
  const double d1 = diff(0.01), d2 = diff(0.02), d4 = diff(0.04);
  CHECK(std::log2(d2 / d1) == doctest::Approx(6.0).epsilon(0.01));
  CHECK(std::log2(d4 / d2) == doctest::Approx(6.0).epsilon(0.02));
}
