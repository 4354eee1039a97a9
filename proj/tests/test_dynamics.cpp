#include <doctest.h>

#include <cmath>

#include "heun/dynamics.hpp"
#include "heun/errors.hpp"
#include "heun/models.hpp"
#include "support.hpp"

using namespace heun;

namespace {

IntegratorConfig run(double t_end, double dt_out = 0.01) {
  IntegratorConfig cfg;
  cfg.t_end = t_end;
  cfg.dt_out = dt_out;
  return cfg;
}

}  // namespace

TEST_CASE("integrator config validation") {
  IntegratorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.sample_count() == 5001);
  cfg.rtol = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("rtol"), PreconditionError);
  cfg = IntegratorConfig{};
  cfg.dt_out = 100.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("dt_out"), PreconditionError);
  cfg = IntegratorConfig{};
  cfg.t_end = -1.0;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
}

TEST_CASE("free Euler top conserves energy and casimir") {
  const auto m = heun::test::gyrostat({0, 1, 0, 0, 0});
  const auto traj = integrate_flow(m, heun::test::gyrostat_start(), IntegratorConfig{});
  CHECK(traj.size() == 5001);
  CHECK(traj.times.back() == doctest::Approx(50.0));
  CHECK(traj.drift.at("W") < 1e-9);
  CHECK(traj.drift.at("S2") < 1e-9);
  CHECK(traj.drift.at("Q") < 1e-9);
}

TEST_CASE("simple flows follow the bracket relations") {
  const auto x0 = heun::test::gyrostat_start();
  const auto cfg = run(1e-4, 1e-4);
  // W = Y: dX/dt = {X, Y} = Z
  const auto my = heun::test::gyrostat({0, 0, 0, 0, 1});
  const auto ty = integrate_flow(my, x0, cfg);
  const double dx = (ty.at("X")[1] - ty.at("X")[0]) / 1e-4;
  CHECK(dx == doctest::Approx(my.z(x0)).epsilon(1e-3));
  CHECK(bracket_series(ty, my.x, my)[0] == doctest::Approx(my.z(x0)));
  // W = X: dY/dt = {Y, X} = -Z
  const auto mx = heun::test::gyrostat({0, 0, 0, 1, 0});
  const auto tx = integrate_flow(mx, x0, cfg);
  const double dy = (tx.at("Y")[1] - tx.at("Y")[0]) / 1e-4;
  CHECK(dy == doctest::Approx(-mx.z(x0)).epsilon(1e-3));
  // and X is constant under its own flow
  CHECK(std::abs(tx.at("X")[1] - tx.at("X")[0]) < 1e-12);
}

TEST_CASE("tighter tolerances converge") {
  const auto m = heun::test::gyrostat();
  const auto x0 = heun::test::gyrostat_start();
  auto at = [&](double rtol) {
    IntegratorConfig cfg = run(10.0, 10.0);
    cfg.rtol = rtol;
    cfg.atol = rtol * 1e-2;
    return propagate(m.w, x0, 0.0, 10.0, cfg);
  };
  const auto a = at(1e-8), b = at(1e-10), c = at(1e-12);
  double dab = 0.0, dbc = 0.0;
  for (int i = 0; i < 3; ++i) {
    dab = std::max(dab, std::abs(a[i] - c[i]));
    dbc = std::max(dbc, std::abs(b[i] - c[i]));
  }
  CHECK(dab < 1e-5);
  CHECK(dbc < 1e-7);
  CHECK(dbc < dab);
}

TEST_CASE("time reversal for momentum-even hamiltonians") {
  // With tau2 = 0 both canonical Hamiltonians are even in p, so from p = 0
  // the motion satisfies q(-t) = q(t), p(-t) = -p(t).
  const heun::ModelSpec models[] = {heun::test::poeschl_teller({0.5, 0, 0, 0.2, 1}),
                                    heun::test::a1({0.1, 1, 0, 0.2, 0.5})};
  for (const auto& m : models) {
    const auto x0 = PhasePoint::canonical(0.9, 0.0);
    const IntegratorConfig cfg = run(3.0);
    const auto fwd = propagate(m.w, x0, 0.0, 3.0, cfg, m.guard);
    const auto bwd = propagate(m.w, x0, 0.0, -3.0, cfg, m.guard);
    CHECK(std::abs(fwd.q() - bwd.q()) < 1e-8);
    CHECK(std::abs(fwd.p() + bwd.p()) < 1e-8);
    // and going back recovers the start
    const auto back = propagate(m.w, fwd, 3.0, 0.0, cfg, m.guard);
    CHECK(std::abs(back.q() - x0.q()) < 1e-8);
    CHECK(std::abs(back.p()) < 1e-8);
  }
}

TEST_CASE("bracket series") {
  const auto m = heun::test::a1();
  const auto traj = integrate_flow(m, heun::test::a1_start(), run(5.0));
  for (double v : bracket_series(traj, m.w, m)) CHECK(std::abs(v) < 1e-12);

  const auto d = bracket_series(traj, m.x, m);
  const auto& xs = traj.at("X");
  const double h = 0.01;
  double worst = 0.0, scale = 1.0;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    worst = std::max(worst, std::abs((xs[i + 1] - xs[i - 1]) / (2 * h) - d[i]));
    scale = std::max(scale, std::abs(d[i]));
  }
  CHECK(worst / scale < 1e-3);
}

TEST_CASE("integration failures") {
  const auto m = heun::test::gyrostat();
  IntegratorConfig cfg = run(10.0);
  cfg.max_steps = 10;
  CHECK_THROWS_AS(integrate_flow(m, heun::test::gyrostat_start(), cfg), IntegrationError);

  // u^2 = 1/sinh^2 q - 1 vanishes at q = asinh(1); an outward start hits it.
  const auto a = build_a1(-1.0, 1.0, 0.0, {0, 0, 0, 0, 1}, 0.1, 0.5);
  try {
    integrate_flow(a, PhasePoint::canonical(0.5, 1.0), run(10.0));
    FAIL("expected an integration failure");
  } catch (const IntegrationError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() < 10.0);
  }
  CHECK_THROWS_AS(integrate_flow(a, PhasePoint::canonical(1.0, 0.0), run(1.0)),
                  PreconditionError);
  CHECK_THROWS_AS(integrate_flow(m, PhasePoint::canonical(1.0, 0.0), run(1.0)),
                  StructuralError);
}

TEST_CASE("trajectory layout") {
  const auto m = heun::test::a1();
  const auto traj = integrate_flow(m, heun::test::a1_start(), run(2.0, 0.1));
  REQUIRE(traj.size() == 21);
  CHECK(traj.states.size() == traj.size());
  for (const auto& [label, v] : traj.series) CHECK(v.size() == traj.size());
  for (std::size_t i = 1; i < traj.size(); ++i) {
    CHECK(traj.times[i] > traj.times[i - 1]);
    CHECK(traj.times[i] == doctest::Approx(0.1 * static_cast<double>(i)));
  }
  CHECK(traj.drift.count("S2") == 0);
  CHECK_THROWS_AS(traj.at("S2"), StructuralError);
}

TEST_CASE("halving tolerances moves the endpoint by less than ten tolerances") {
  const auto m = heun::test::gyrostat();
  IntegratorConfig a = run(5.0, 5.0);
  IntegratorConfig b = a;
  b.rtol /= 2.0;
  b.atol /= 2.0;
  const auto xa = propagate(m.w, heun::test::gyrostat_start(), 0.0, 5.0, a);
  const auto xb = propagate(m.w, heun::test::gyrostat_start(), 0.0, 5.0, b);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(xa[i] - xb[i]) < 10.0 * (a.atol + a.rtol * std::abs(xa[i])));
}

TEST_CASE("under W = Y the X velocity is Z on every model") {
  const heun::ModelSpec models[] = {heun::test::poeschl_teller({0.2, 0, 0, 0, 1}),
                                    heun::test::gyrostat({0.2, 0, 0, 0, 1}),
                                    heun::test::a1({0.2, 0, 0, 0, 1})};
  const PhasePoint starts[] = {heun::test::poeschl_teller_start(), heun::test::gyrostat_start(),
                               PhasePoint::canonical(0.8, 0.1)};
  for (int k = 0; k < 3; ++k) {
    const auto traj = integrate_flow(models[k], starts[k], run(1.0));
    const auto d = bracket_series(traj, models[k].x, models[k]);
    const auto& z = traj.at("Z");
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(d[i] - z[i]) < 1e-9 * std::max(1.0, std::abs(z[i])));
  }
}
