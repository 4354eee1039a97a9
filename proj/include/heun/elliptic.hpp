#pragma once

#include <string>

#include "heun/pencil_algebra.hpp"

namespace heun {

struct EllipticInvariants {
  double g2 = 0.0;
  double g3 = 0.0;

  double discriminant() const { return g2 * g2 * g2 - 27.0 * g3 * g3; }
};

// Classical invariants of the binary quartic
//   f = c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0,
// normalised so that 4x^3 - g2 x - g3 returns (g2, g3). Unchanged under
// x -> x + lambda.
EllipticInvariants quartic_invariants(const QuarticPolynomial& f);

struct WeierstrassValue {
  double p = 0.0;
  double p_prime = 0.0;
};

// Weierstrass p(z; g2, g3) and its derivative for real z.
//
// The argument is halved until the Laurent series about the origin converges
// to double precision, then the duplication formulas
//   p(2z)  = (p''/(2p'))^2 - 2p
//   p'(2z) = -p' - (p''/p') (p(2z) - p)
// walk back to z. Throws DomainError at z = 0 or when duplication runs into a
// lattice pole.
WeierstrassValue weierstrass_p(double z, const EllipticInvariants& inv);

// Solution of x'^2 = f(x) with x(0) = x0, a simple root of f:
//   x(t) = x0 + f'(x0) / (4 p(t) - f''(x0) / 6).
// Throws PreconditionError if x0 is not a root and DomainError if it is a
// repeated root.
double closed_form_solution(const QuarticPolynomial& f, double x0, double t);

// Newton iteration from `guess` onto a real root of f. Returns guess unchanged
// if the iteration does not settle.
double polish_root(const QuarticPolynomial& f, double guess);

struct DynamicsClass {
  enum class Kind { Elliptic, Elementary, DegeneratePolynomial };
  Kind kind = Kind::Elementary;
  int effective_degree = 0;
  bool repeated_root = false;
};

const char* to_string(DynamicsClass::Kind kind);

// Elliptic: effective degree >= 3 with simple roots. Elementary: effective
// degree <= 2. DegeneratePolynomial: degree >= 3 with a repeated root.
DynamicsClass classify_dynamics(const QuarticPolynomial& f);

}  // namespace heun
