#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>

namespace heun {

// The two supported geometries: canonical (q, p) with {q, p} = 1, and the
// Lie-Poisson structure on su(2)* with {s_i, s_k} = eps_ikl s_l.
enum class PhaseKind { Canonical, SU2 };

const char* to_string(PhaseKind kind);
std::size_t dimension(PhaseKind kind);

// Coordinate storage large enough for either geometry. Canonical points only
// use the first two slots; the third is kept at zero.
using Coords = std::array<double, 3>;

class PhasePoint {
 public:
  static PhasePoint canonical(double q, double p);
  static PhasePoint su2(double s1, double s2, double s3);
  // Throws DomainError on non-finite coordinates.
  static PhasePoint from_coords(PhaseKind kind, const Coords& c);

  PhaseKind kind() const { return kind_; }
  std::size_t dim() const { return dimension(kind_); }
  const Coords& coords() const { return c_; }
  double operator[](std::size_t i) const { return c_[i]; }

  double q() const;
  double p() const;
  double s1() const;
  double s2() const;
  double s3() const;

 private:
  PhasePoint(PhaseKind kind, const Coords& c) : kind_(kind), c_(c) {}

  PhaseKind kind_;
  Coords c_;
};

// A scalar function on phase space together with its analytic gradient.
struct Observable {
  PhaseKind kind = PhaseKind::Canonical;
  std::string label;
  std::function<double(const PhasePoint&)> eval;
  std::function<Coords(const PhasePoint&)> grad;

  double operator()(const PhasePoint& x) const { return eval(x); }
};

// Coordinate function x -> x[index].
Observable coordinate(PhaseKind kind, std::size_t index, std::string label);
Observable constant(PhaseKind kind, double value);

Observable operator+(const Observable& a, const Observable& b);
Observable operator-(const Observable& a, const Observable& b);
Observable operator*(const Observable& a, const Observable& b);
Observable operator*(double s, const Observable& a);

struct TangentVector {
  PhaseKind kind = PhaseKind::Canonical;
  Coords components{};

  double operator[](std::size_t i) const { return components[i]; }
};

// Bracket of two gradients at x. Canonical: F_q G_p - F_p G_q.
// SU2: s . (gradF x gradG).
double bracket_from_gradients(const PhasePoint& x, const Coords& grad_f,
                              const Coords& grad_g);

// Throws StructuralError when F, G and x do not share a kind.
double poisson_bracket(const Observable& f, const Observable& g,
                       const PhasePoint& x);

// Field whose flow satisfies dF/dt = {F, H} for every F.
// Canonical: (dH/dp, -dH/dq). SU2: gradH x s.
TangentVector hamiltonian_vector_field(const Observable& h,
                                       const PhasePoint& x);

// Max over coordinates of |analytic gradient - central difference|. The step
// for coordinate i is h * max(1, |x_i|).
double gradient_check(const Observable& f, const PhasePoint& x, double h);

// s1^2 + s2^2 + s3^2. Throws StructuralError for canonical points.
double su2_casimir(const PhasePoint& x);

// su2_casimir as an observable, for bracket and conservation checks.
Observable su2_casimir_observable();

}  // namespace heun
