#pragma once

// Test-only oracles and fixtures. Nothing here calls into the code paths the
// tests check, except to build inputs.

#include <cmath>
#include <functional>

#include "heun/models.hpp"
#include "heun/pencil_algebra.hpp"
#include "heun/phase_space.hpp"
#include "heun/verification.hpp"

namespace heun::test {

// Central difference of a scalar function of one variable.
inline double central_difference(const std::function<double(double)>& f, double x,
                                 double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Phi(x, y) by explicit double sum, independent of phi_eval.
inline double phi_double_sum(const BiQuadratic& phi, double x, double y) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) acc += phi.alpha[i][j] * std::pow(x, i) * std::pow(y, j);
  }
  return acc;
}

// pi_4 exactly as printed, without the U2 (tau3 x + tau0)^2 term. Kept only
// as a negative control for the elimination identity.
inline QuarticPolynomial printed_pi4(const PencilCoefficients& tau, const BiQuadratic& phi) {
  const UVPolynomials uv = extract_uv(phi);
  const Polynomial<1> a{{tau.tau4, tau.tau1}};
  const Polynomial<1> b{{tau.tau0, tau.tau3}};
  const auto& u = uv.u;
  return u[0] * (a * a) + (-1.0) * (u[1] * (a * b)) +
         (0.25 * tau.tau2 * tau.tau2) * (u[1] * u[1] + (-4.0) * (u[0] * u[2]));
}

// Standard fixtures used across suites.
inline PencilCoefficients generic_tau() { return {0.0, 1.0, 0.3, 0.2, 0.5}; }

inline ModelSpec gyrostat(const PencilCoefficients& tau = generic_tau(), double beta = 0.7) {
  return build_zv_gyrostat(beta, tau, PhasePoint::su2(0.6, 0.8, 0.3));
}
inline PhasePoint gyrostat_start() { return PhasePoint::su2(0.6, 0.8, 0.3); }

inline ModelSpec a1(const PencilCoefficients& tau = generic_tau()) {
  return build_a1(1.0, 0.5, 0.3, tau);
}
inline PhasePoint a1_start() { return PhasePoint::canonical(0.8, 0.3); }

// Poeschl-Teller with a potential well: 1/sinh^2 q - 3/cosh^2 q.
inline ModelSpec poeschl_teller(const PencilCoefficients& tau = {0.5, 0.0, 0.05, 0.2, 1.0}) {
  return build_poeschl_teller(0.0, 1.0, -3.0, tau);
}
inline PhasePoint poeschl_teller_start() { return PhasePoint::canonical(1.5, 0.0); }

}  // namespace heun::test
