#include "heun/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "heun/errors.hpp"

namespace heun {

namespace {

void require_same_kind(PhaseKind a, PhaseKind b, const char* where) {
  if (a != b) {
    throw StructuralError(std::string(where) + ": phase-space kind mismatch (" +
                          to_string(a) + " vs " + to_string(b) + ")");
  }
}

Coords cross(const Coords& a, const Coords& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

const char* to_string(PhaseKind kind) {
  return kind == PhaseKind::Canonical ? "canonical" : "su2";
}

std::size_t dimension(PhaseKind kind) {
  return kind == PhaseKind::Canonical ? 2 : 3;
}

PhasePoint PhasePoint::canonical(double q, double p) {
  return from_coords(PhaseKind::Canonical, {q, p, 0.0});
}

PhasePoint PhasePoint::su2(double s1, double s2, double s3) {
  return from_coords(PhaseKind::SU2, {s1, s2, s3});
}

PhasePoint PhasePoint::from_coords(PhaseKind kind, const Coords& c) {
  Coords stored = c;
  if (kind == PhaseKind::Canonical) stored[2] = 0.0;
  for (std::size_t i = 0; i < dimension(kind); ++i) {
    if (!std::isfinite(stored[i])) {
      throw DomainError("phase point has a non-finite coordinate");
    }
  }
  return PhasePoint(kind, stored);
}

double PhasePoint::q() const {
  require_same_kind(kind_, PhaseKind::Canonical, "PhasePoint::q");
  return c_[0];
}
double PhasePoint::p() const {
  require_same_kind(kind_, PhaseKind::Canonical, "PhasePoint::p");
  return c_[1];
}
double PhasePoint::s1() const {
  require_same_kind(kind_, PhaseKind::SU2, "PhasePoint::s1");
  return c_[0];
}
double PhasePoint::s2() const {
  require_same_kind(kind_, PhaseKind::SU2, "PhasePoint::s2");
  return c_[1];
}
double PhasePoint::s3() const {
  require_same_kind(kind_, PhaseKind::SU2, "PhasePoint::s3");
  return c_[2];
}

Observable coordinate(PhaseKind kind, std::size_t index, std::string label) {
  if (index >= dimension(kind)) {
    throw StructuralError("coordinate index out of range for " +
                          std::string(to_string(kind)));
  }
  Observable o;
  o.kind = kind;
  o.label = std::move(label);
  o.eval = [index](const PhasePoint& x) { return x[index]; };
  o.grad = [index](const PhasePoint&) {
    Coords g{};
    g[index] = 1.0;
    return g;
  };
  return o;
}

Observable constant(PhaseKind kind, double value) {
  Observable o;
  o.kind = kind;
  o.label = std::to_string(value);
  o.eval = [value](const PhasePoint&) { return value; };
  o.grad = [](const PhasePoint&) { return Coords{}; };
  return o;
}

Observable operator+(const Observable& a, const Observable& b) {
  require_same_kind(a.kind, b.kind, "Observable +");
  Observable o;
  o.kind = a.kind;
  o.label = "(" + a.label + " + " + b.label + ")";
  o.eval = [a, b](const PhasePoint& x) { return a.eval(x) + b.eval(x); };
  o.grad = [a, b](const PhasePoint& x) {
    Coords ga = a.grad(x);
    const Coords gb = b.grad(x);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += gb[i];
    return ga;
  };
  return o;
}

Observable operator-(const Observable& a, const Observable& b) {
  return a + (-1.0) * b;
}

Observable operator*(const Observable& a, const Observable& b) {
  require_same_kind(a.kind, b.kind, "Observable *");
  Observable o;
  o.kind = a.kind;
  o.label = a.label + "*" + b.label;
  o.eval = [a, b](const PhasePoint& x) { return a.eval(x) * b.eval(x); };
  o.grad = [a, b](const PhasePoint& x) {
    const double va = a.eval(x);
    const double vb = b.eval(x);
    const Coords ga = a.grad(x);
    const Coords gb = b.grad(x);
    Coords g{};
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = ga[i] * vb + va * gb[i];
    return g;
  };
  return o;
}

Observable operator*(double s, const Observable& a) {
  Observable o;
  o.kind = a.kind;
  o.label = std::to_string(s) + "*" + a.label;
  o.eval = [s, a](const PhasePoint& x) { return s * a.eval(x); };
  o.grad = [s, a](const PhasePoint& x) {
    Coords g = a.grad(x);
    for (double& gi : g) gi *= s;
    return g;
  };
  return o;
}

double bracket_from_gradients(const PhasePoint& x, const Coords& grad_f,
                              const Coords& grad_g) {
  if (x.kind() == PhaseKind::Canonical) {
    return grad_f[0] * grad_g[1] - grad_f[1] * grad_g[0];
  }
  const Coords c = cross(grad_f, grad_g);
  const Coords& s = x.coords();
  return s[0] * c[0] + s[1] * c[1] + s[2] * c[2];
}

double poisson_bracket(const Observable& f, const Observable& g,
                       const PhasePoint& x) {
  require_same_kind(f.kind, g.kind, "poisson_bracket");
  require_same_kind(f.kind, x.kind(), "poisson_bracket");
  return bracket_from_gradients(x, f.grad(x), g.grad(x));
}

TangentVector hamiltonian_vector_field(const Observable& h,
                                       const PhasePoint& x) {
  require_same_kind(h.kind, x.kind(), "hamiltonian_vector_field");
  const Coords gh = h.grad(x);
  TangentVector v;
  v.kind = x.kind();
  if (x.kind() == PhaseKind::Canonical) {
    v.components = {gh[1], -gh[0], 0.0};
  } else {
    v.components = cross(gh, x.coords());
  }
  return v;
}

double gradient_check(const Observable& f, const PhasePoint& x, double h) {
  if (!(h > 0.0)) throw PreconditionError("gradient_check: step must be > 0");
  require_same_kind(f.kind, x.kind(), "gradient_check");
  const Coords analytic = f.grad(x);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double step = h * std::max(1.0, std::abs(x[i]));
    Coords plus = x.coords();
    Coords minus = x.coords();
    plus[i] += step;
    minus[i] -= step;
    const double fd =
        (f.eval(PhasePoint::from_coords(x.kind(), plus)) -
         f.eval(PhasePoint::from_coords(x.kind(), minus))) /
        (2.0 * step);
    worst = std::max(worst, std::abs(analytic[i] - fd));
  }
  return worst;
}

double su2_casimir(const PhasePoint& x) {
  require_same_kind(x.kind(), PhaseKind::SU2, "su2_casimir");
  const Coords& s = x.coords();
  return s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
}

Observable su2_casimir_observable() {
  Observable o;
  o.kind = PhaseKind::SU2;
  o.label = "S2";
  o.eval = [](const PhasePoint& x) { return su2_casimir(x); };
  o.grad = [](const PhasePoint& x) {
    const Coords& s = x.coords();
    return Coords{2.0 * s[0], 2.0 * s[1], 2.0 * s[2]};
  };
  return o;
}

}  // namespace heun
