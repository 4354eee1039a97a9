#include "heun/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "heun/errors.hpp"

namespace heun {

namespace {

constexpr std::size_t kMaxLaurentTerms = 120;
constexpr double kLaurentCutoff = 1e-17;
constexpr double kPoleMagnitude = 1e32;

// p and p' from the Laurent series about the origin. Requires |z| small
// compared with the nearest nonzero lattice point.
WeierstrassValue laurent(double z, const EllipticInvariants& inv) {
  const double z2 = z * z;
  // c[k] multiplies z^(2k-2); c[0], c[1] unused.
  std::vector<double> c(kMaxLaurentTerms + 1, 0.0);
  c[2] = inv.g2 / 20.0;
  c[3] = inv.g3 / 28.0;

  double p = 1.0 / z2;
  double dp = -2.0 / (z2 * z);
  double zpow = z2;  // z^(2k-2) for k = 2
  const double lead = std::abs(p);
  int small_run = 0;
  for (std::size_t k = 2; k <= kMaxLaurentTerms; ++k) {
    if (k >= 4) {
      double acc = 0.0;
      for (std::size_t m = 2; m <= k - 2; ++m) acc += c[m] * c[k - m];
      c[k] = 3.0 / static_cast<double>((2 * k + 1) * (k - 3)) * acc;
    }
    const double term = c[k] * zpow;
    p += term;
    dp += static_cast<double>(2 * k - 2) * term / z;
    // With g2 = 0 or g3 = 0 only every second or third coefficient is
    // nonzero, so require three consecutive negligible terms.
    small_run = std::abs(term) < kLaurentCutoff * lead ? small_run + 1 : 0;
    if (k >= 4 && small_run >= 3) return {p, dp};
    zpow *= z2;
  }
  throw DomainError("weierstrass_p: Laurent series did not converge");
}

}  // namespace

EllipticInvariants quartic_invariants(const QuarticPolynomial& f) {
  const double c0 = f.c[0], c1 = f.c[1], c2 = f.c[2], c3 = f.c[3], c4 = f.c[4];
  EllipticInvariants inv;
  inv.g2 = c4 * c0 - c3 * c1 / 4.0 + c2 * c2 / 12.0;
  inv.g3 = c4 * c2 * c0 / 6.0 + c3 * c2 * c1 / 48.0 - c2 * c2 * c2 / 216.0 -
           c4 * c1 * c1 / 16.0 - c3 * c3 * c0 / 16.0;
  return inv;
}

WeierstrassValue weierstrass_p(double z, const EllipticInvariants& inv) {
  if (!std::isfinite(z) || z == 0.0) {
    throw DomainError("weierstrass_p: z = 0 is a pole");
  }
  const double lattice_scale =
      std::max({1.0, std::pow(std::abs(inv.g2), 0.25),
                std::pow(std::abs(inv.g3), 1.0 / 6.0)});
  int doublings = 0;
  double reduced = z;
  while (std::abs(reduced) * lattice_scale > 0.5) {
    reduced *= 0.5;
    ++doublings;
  }

  WeierstrassValue w = laurent(reduced, inv);
  for (int i = 0; i < doublings; ++i) {
    if (std::abs(w.p_prime) < std::numeric_limits<double>::min() * 1e10) {
      std::ostringstream msg;
      msg << "weierstrass_p: z = " << z
          << " lies on a lattice pole (p' vanished at z/2)";
      throw DomainError(msg.str());
    }
    const double p2 = 6.0 * w.p * w.p - inv.g2 / 2.0;
    const double ratio = p2 / w.p_prime;
    const double p_next = 0.25 * ratio * ratio - 2.0 * w.p;
    const double dp_next = -w.p_prime - ratio * (p_next - w.p);
    w = {p_next, dp_next};
    if (!std::isfinite(w.p) || std::abs(w.p) > kPoleMagnitude) {
      std::ostringstream msg;
      msg << "weierstrass_p: z = " << z
          << " is within roughly |p|^(-1/2) = "
          << (std::isfinite(w.p) ? 1.0 / std::sqrt(std::abs(w.p)) : 0.0)
          << " of a lattice pole";
      throw DomainError(msg.str());
    }
  }
  return w;
}

double closed_form_solution(const QuarticPolynomial& f, double x0, double t) {
  const double xs = std::max(1.0, std::abs(x0));
  const double scale = std::max(f.scale(), std::numeric_limits<double>::min());
  if (std::abs(f(x0)) > 1e-10 * scale * xs * xs * xs * xs) {
    std::ostringstream msg;
    msg << "closed_form_solution: x0 = " << x0
        << " is not a root of the quartic (f(x0) = " << f(x0) << ")";
    throw PreconditionError(msg.str());
  }
  const double df = f.derivative(x0);
  if (std::abs(df) <= 1e-10 * scale * xs * xs * xs) {
    throw DomainError(
        "closed_form_solution: x0 is a repeated root; dynamics is elementary");
  }
  if (t == 0.0) return x0;
  const WeierstrassValue w = weierstrass_p(t, quartic_invariants(f));
  return x0 + df / (4.0 * w.p - f.second_derivative(x0) / 6.0);
}

double polish_root(const QuarticPolynomial& f, double guess) {
  double x = guess;
  for (int it = 0; it < 60; ++it) {
    const double d = f.derivative(x);
    if (d == 0.0) break;
    const double step = f(x) / d;
    x -= step;
    if (!std::isfinite(x)) return guess;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() *
                              std::max(1.0, std::abs(x))) {
      break;
    }
  }
  // A wandering iterate means the guess was not near a simple root.
  if (std::abs(x - guess) > 1e-3 * std::max(1.0, std::abs(guess))) return guess;
  return x;
}

const char* to_string(DynamicsClass::Kind kind) {
  switch (kind) {
    case DynamicsClass::Kind::Elliptic:
      return "Elliptic";
    case DynamicsClass::Kind::Elementary:
      return "Elementary";
    case DynamicsClass::Kind::DegeneratePolynomial:
      return "DegeneratePolynomial";
  }
  return "unknown";
}

DynamicsClass classify_dynamics(const QuarticPolynomial& f) {
  const double s = f.scale();
  DynamicsClass out;
  if (s == 0.0) return out;

  QuarticPolynomial eff = f;
  int degree = 4;
  while (degree > 0 && std::abs(eff.c[degree]) < 1e-12 * s) {
    eff.c[degree] = 0.0;
    --degree;
  }
  out.effective_degree = degree;

  if (degree <= 2) {
    out.kind = DynamicsClass::Kind::Elementary;
    if (degree == 2) {
      const double disc = eff.c[1] * eff.c[1] - 4.0 * eff.c[2] * eff.c[0];
      out.repeated_root = std::abs(disc) < 1e-10 * s * s;
    }
    return out;
  }

  const double delta = quartic_invariants(eff).discriminant();
  out.repeated_root = std::abs(delta) < 1e-10 * std::pow(s, 6);
  out.kind = out.repeated_root ? DynamicsClass::Kind::DegeneratePolynomial
                               : DynamicsClass::Kind::Elliptic;
  return out;
}

}  // namespace heun
