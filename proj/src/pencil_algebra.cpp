#include "heun/pencil_algebra.hpp"

#include <cmath>

#include "heun/errors.hpp"

namespace heun {

UVPolynomials extract_uv(const BiQuadratic& phi) {
  const auto& a = phi.alpha;
  UVPolynomials out;
  for (std::size_t i = 0; i < 3; ++i) {
    out.u[i].c = {a[0][i], a[1][i], a[2][i]};
    out.v[i].c = {a[i][0], a[i][1], a[i][2]};
  }
  return out;
}

PhiValue phi_eval(const BiQuadratic& phi, double x, double y) {
  const std::array<double, 3> xp{1.0, x, x * x};
  const std::array<double, 3> yp{1.0, y, y * y};
  const std::array<double, 3> dxp{0.0, 1.0, 2.0 * x};
  const std::array<double, 3> dyp{0.0, 1.0, 2.0 * y};
  PhiValue r;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double a = phi.alpha[i][j];
      r.value += a * xp[i] * yp[j];
      r.dx += a * dxp[i] * yp[j];
      r.dy += a * xp[i] * dyp[j];
    }
  }
  return r;
}

void PencilCoefficients::validate() const {
  for (double t : as_array()) {
    if (!std::isfinite(t)) throw PreconditionError("tau entries must be finite");
  }
  if (tau1 == 0.0 && tau2 == 0.0 && tau3 == 0.0 && tau4 == 0.0) {
    throw PreconditionError(
        "tau1..tau4 all zero: a constant Hamiltonian generates no flow");
  }
}

double heun_value(const PencilCoefficients& tau, double x, double y, double z) {
  return tau.tau1 * x * y + tau.tau2 * z + tau.tau3 * x + tau.tau4 * y +
         tau.tau0;
}

double casimir_q(const BiQuadratic& phi, double x, double y, double z) {
  return z * z - phi_eval(phi, x, y).value;
}

const char* to_string(Variable v) { return v == Variable::X ? "X" : "Y"; }

PiPolynomials pi_polynomials(const PencilCoefficients& tau,
                             const BiQuadratic& phi, Variable which) {
  const UVPolynomials uv = extract_uv(phi);
  const bool tilde = which == Variable::Y;
  const auto& p = tilde ? uv.v : uv.u;
  const double own = tilde ? tau.tau4 : tau.tau3;    // coefficient of the variable itself
  const double other = tilde ? tau.tau3 : tau.tau4;  // coefficient of its partner

  const Polynomial<1> a{{other, tau.tau1}};
  const Polynomial<1> b{{tau.tau0, own}};
  const QuadraticPolynomial& p0 = p[0];
  const QuadraticPolynomial& p1 = p[1];
  const QuadraticPolynomial& p2 = p[2];

  PiPolynomials out;
  out.pi2 = p2;
  out.pi3 = a * p1 + (-2.0) * (b * p2);
  const double t2sq = 0.25 * tau.tau2 * tau.tau2;
  out.pi4 = p2 * (b * b) + (-1.0) * (p1 * (a * b)) + p0 * (a * a) +
            t2sq * (p1 * p1 + (-4.0) * (p0 * p2));
  return out;
}

QuarticPolynomial assemble_quartic(const PiPolynomials& pis, double w) {
  QuarticPolynomial out = pis.pi4;
  for (std::size_t k = 0; k < 3; ++k) out.c[k] += pis.pi2.c[k] * w * w;
  for (std::size_t k = 0; k < 4; ++k) out.c[k] += pis.pi3.c[k] * w;
  return out;
}

}  // namespace heun
