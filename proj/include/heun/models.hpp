#pragma once

#include <map>
#include <string>

#include "heun/model_spec.hpp"

namespace heun {

inline constexpr const char* kPoeschlTeller = "poeschl_teller";
inline constexpr const char* kGyrostat = "zv_gyrostat";
inline constexpr const char* kA1 = "a1";

// W = tau1 X Y + tau2 Z + tau3 X + tau4 Y + tau0 with the gradient carried
// through the chain rule.
Observable heun_observable(const PencilCoefficients& tau, const Observable& x,
                           const Observable& y, const Observable& z);

// Extended Poeschl-Teller pencil on (q, p):
//   X = sinh^2 q,  Y = p^2 + b1/sinh^2 q + b2/cosh^2 q + b0,  Z = 2 p phi'(q)
// with U2 = 0, U1 = 16x(1+x), U0 = -16[b0 x^2 + (b0+b1+b2) x + b1].
// Requires tau1 = 0.
ModelSpec build_poeschl_teller(double beta0, double beta1, double beta2,
                               const PencilCoefficients& tau);

// W = p^2 + b1/sinh^2 q + b2/cosh^2 q + b3 sinh^2 q + b4 sinh^2 q cosh^2 q + b0.
// A real pencil with tau4 = 1, tau1 = 0 maps onto this form with
// b3 = tau3, b4 = -4 tau2^2 and momentum p + tau2 phi'(q).
Observable pt_direct_hamiltonian(double beta0, double beta1, double beta2,
                                 double beta3, double beta4);

// Zhukovsky-Volterra gyrostat on su(2)*: X = s1 + b s2, Y = s1 - b s2,
// Z = -2 b s3 and
//   Phi = 4 S^2 b^2 - (b^2 + 1)(X^2 + Y^2) + 2(1 - b^2) X Y,
// with S^2 taken from `reference`.
ModelSpec build_zv_gyrostat(double beta, const PencilCoefficients& tau,
                            const PhasePoint& reference);

// The gyrostat Hamiltonian written out in the generators:
//   tau1(s1^2 - b^2 s2^2) - 2 b tau2 s3 + (tau3 + tau4) s1 + b(tau3 - tau4) s2 + tau0
Observable zv_explicit_hamiltonian(double beta, const PencilCoefficients& tau);

// Relativistic A1 pencil: X = sinh^2 q, Y = u(q) cosh p,
// Z = u(q) phi'(q) sinh p, u^2 = b1/sinh^2 q + b2/cosh^2 q + b0, with
// U2 = 4x(1+x), U0 = -4[b0 x^2 + (b0+b1+b2) x + b1]. Positivity of u^2 is
// checked on q in [q_min, q_max].
ModelSpec build_a1(double beta0, double beta1, double beta2,
                   const PencilCoefficients& tau, double q_min = 0.1,
                   double q_max = 3.0);

// W = Phi1(q) cosh p + Phi0(q) with Phi0 = tau3 sinh^2 q + tau0 and
// Phi1 = sign(a) u(q) sqrt(a^2 - b^2), a = tau1 sinh^2 q + tau4,
// b = tau2 sinh 2q. Throws DomainError where a^2 <= b^2.
Observable a1_direct_hamiltonian(const ModelSpec& model);

// Momentum shift taking the A1 pencil onto its direct form:
// p_direct = p + atanh(b / a).
double a1_momentum_shift(const ModelSpec& model, double q);

// Dispatch on model name. `params` holds beta0/beta1/beta2 for the canonical
// models and beta for the gyrostat.
ModelSpec build_model(const std::string& name,
                      const std::map<std::string, double>& params,
                      const PencilCoefficients& tau, const PhasePoint& reference);

// Same model with a different pencil.
ModelSpec with_tau(const ModelSpec& model, const PencilCoefficients& tau);

}  // namespace heun
