#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace heun {

// Dense polynomial of fixed maximum degree; c[k] multiplies x^k. Everything
// in this library lives at degree four or below.
template <std::size_t Degree>
struct Polynomial {
  static_assert(Degree <= 4, "polynomials are capped at degree four");
  std::array<double, Degree + 1> c{};

  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t k = Degree + 1; k-- > 0;) acc = acc * x + c[k];
    return acc;
  }

  double derivative(double x) const {
    double acc = 0.0;
    for (std::size_t k = Degree; k >= 1; --k) {
      acc = acc * x + static_cast<double>(k) * c[k];
    }
    return acc;
  }

  double second_derivative(double x) const {
    double acc = 0.0;
    for (std::size_t k = Degree; k >= 2; --k) {
      acc = acc * x + static_cast<double>(k * (k - 1)) * c[k];
    }
    return acc;
  }

  // max |c_k|
  double scale() const {
    double s = 0.0;
    for (double ck : c) s = std::max(s, std::abs(ck));
    return s;
  }

  template <std::size_t Other>
  operator Polynomial<Other>() const
    requires(Other > Degree)
  {
    Polynomial<Other> out;
    std::copy(c.begin(), c.end(), out.c.begin());
    return out;
  }
};

using QuadraticPolynomial = Polynomial<2>;
using CubicPolynomial = Polynomial<3>;
using QuarticPolynomial = Polynomial<4>;

template <std::size_t A, std::size_t B>
Polynomial<std::max(A, B)> operator+(const Polynomial<A>& a,
                                     const Polynomial<B>& b) {
  Polynomial<std::max(A, B)> out;
  for (std::size_t k = 0; k <= A; ++k) out.c[k] += a.c[k];
  for (std::size_t k = 0; k <= B; ++k) out.c[k] += b.c[k];
  return out;
}

template <std::size_t A, std::size_t B>
Polynomial<A + B> operator*(const Polynomial<A>& a, const Polynomial<B>& b) {
  Polynomial<A + B> out;
  for (std::size_t i = 0; i <= A; ++i) {
    for (std::size_t j = 0; j <= B; ++j) out.c[i + j] += a.c[i] * b.c[j];
  }
  return out;
}

template <std::size_t A>
Polynomial<A> operator*(double s, Polynomial<A> a) {
  for (double& ck : a.c) ck *= s;
  return a;
}

// Structure constants of Phi(X, Y) = sum alpha[i][j] X^i Y^j.
struct BiQuadratic {
  std::array<std::array<double, 3>, 3> alpha{};
};

// Phi read as a polynomial in Y (u) or in X (v):
//   Phi = U2(X) Y^2 + U1(X) Y + U0(X) = V2(Y) X^2 + V1(Y) X + V0(Y).
struct UVPolynomials {
  std::array<QuadraticPolynomial, 3> u;
  std::array<QuadraticPolynomial, 3> v;
};

UVPolynomials extract_uv(const BiQuadratic& phi);

struct PhiValue {
  double value = 0.0;
  double dx = 0.0;
  double dy = 0.0;
};

PhiValue phi_eval(const BiQuadratic& phi, double x, double y);

// W = tau1 XY + tau2 Z + tau3 X + tau4 Y + tau0.
struct PencilCoefficients {
  double tau0 = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau3 = 0.0;
  double tau4 = 0.0;

  std::array<double, 5> as_array() const { return {tau0, tau1, tau2, tau3, tau4}; }
  static PencilCoefficients from_array(const std::array<double, 5>& t) {
    return {t[0], t[1], t[2], t[3], t[4]};
  }
  // Throws PreconditionError if an entry is non-finite or tau1..tau4 all vanish.
  void validate() const;
};

double heun_value(const PencilCoefficients& tau, double x, double y, double z);

// Z^2 - Phi(X, Y).
double casimir_q(const BiQuadratic& phi, double x, double y, double z);

// Which observable the elimination targets. Variable::Y gives the tilde
// polynomials: U -> V and tau3 <-> tau4.
enum class Variable { X, Y };

const char* to_string(Variable v);

struct PiPolynomials {
  QuadraticPolynomial pi2;
  CubicPolynomial pi3;
  QuarticPolynomial pi4;
};

// {X, W}^2 = pi2(X) W^2 + pi3(X) W + pi4(X), with A = tau1 x + tau4 and
// B = tau3 x + tau0:
//   pi2 = U2
//   pi3 = A U1 - 2 B U2
//   pi4 = U2 B^2 - U1 A B + U0 A^2 + (tau2^2 / 4)(U1^2 - 4 U0 U2)
PiPolynomials pi_polynomials(const PencilCoefficients& tau,
                             const BiQuadratic& phi, Variable which);

// P4(x) = pi2(x) w^2 + pi3(x) w + pi4(x).
QuarticPolynomial assemble_quartic(const PiPolynomials& pis, double w);

}  // namespace heun
