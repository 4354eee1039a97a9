#include "heun/models.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "heun/errors.hpp"

namespace heun {

namespace {

// The canonical models share X = sinh^2 q and the potential
// b1/sinh^2 q + b2/cosh^2 q + b0 (with its q-derivative).
struct Potential {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;

  double value(double q) const {
    const double sh = std::sinh(q);
    const double ch = std::cosh(q);
    return beta1 / (sh * sh) + beta2 / (ch * ch) + beta0;
  }
  double derivative(double q) const {
    const double sh = std::sinh(q);
    const double ch = std::cosh(q);
    return -2.0 * beta1 * ch / (sh * sh * sh) - 2.0 * beta2 * sh / (ch * ch * ch);
  }
};

Observable sinh_squared() {
  Observable o;
  o.kind = PhaseKind::Canonical;
  o.label = "X";
  o.eval = [](const PhasePoint& x) {
    const double sh = std::sinh(x[0]);
    return sh * sh;
  };
  o.grad = [](const PhasePoint& x) { return Coords{std::sinh(2.0 * x[0]), 0.0, 0.0}; };
  return o;
}

// Fills U0..U2 into alpha: alpha[i][j] is the x^i coefficient of U_j.
void set_u(BiQuadratic& phi, std::size_t j, const QuadraticPolynomial& u) {
  for (std::size_t i = 0; i < 3; ++i) phi.alpha[i][j] = u.c[i];
}

void require_finite(const std::map<std::string, double>& params) {
  for (const auto& [key, value] : params) {
    if (!std::isfinite(value)) {
      throw PreconditionError("model parameter " + key + " must be finite");
    }
  }
}

double param(const std::map<std::string, double>& params, const char* key) {
  const auto it = params.find(key);
  return it == params.end() ? 0.0 : it->second;
}

}  // namespace

Observable heun_observable(const PencilCoefficients& tau, const Observable& x,
                           const Observable& y, const Observable& z) {
  Observable o;
  o.kind = x.kind;
  o.label = "W";
  o.eval = [tau, x, y, z](const PhasePoint& pt) {
    return heun_value(tau, x.eval(pt), y.eval(pt), z.eval(pt));
  };
  o.grad = [tau, x, y, z](const PhasePoint& pt) {
    const double xv = x.eval(pt);
    const double yv = y.eval(pt);
    const Coords gx = x.grad(pt);
    const Coords gy = y.grad(pt);
    const Coords gz = z.grad(pt);
    Coords g{};
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = tau.tau1 * (yv * gx[i] + xv * gy[i]) + tau.tau2 * gz[i] +
             tau.tau3 * gx[i] + tau.tau4 * gy[i];
    }
    return g;
  };
  return o;
}

ModelSpec build_poeschl_teller(double beta0, double beta1, double beta2,
                               const PencilCoefficients& tau) {
  tau.validate();
  if (tau.tau1 != 0.0) {
    throw PreconditionError(
        "poeschl_teller: tau1 must be 0 for the Poeschl-Teller pencil");
  }
  ModelSpec m;
  m.name = kPoeschlTeller;
  m.kind = PhaseKind::Canonical;
  m.tau = tau;
  m.params = {{"beta0", beta0}, {"beta1", beta1}, {"beta2", beta2}};
  require_finite(m.params);
  const Potential pot{beta0, beta1, beta2};

  m.x = sinh_squared();

  m.y.kind = PhaseKind::Canonical;
  m.y.label = "Y";
  m.y.eval = [pot](const PhasePoint& pt) {
    return pt[1] * pt[1] + pot.value(pt[0]);
  };
  m.y.grad = [pot](const PhasePoint& pt) {
    return Coords{pot.derivative(pt[0]), 2.0 * pt[1], 0.0};
  };

  m.z.kind = PhaseKind::Canonical;
  m.z.label = "Z";
  m.z.eval = [](const PhasePoint& pt) { return 2.0 * pt[1] * std::sinh(2.0 * pt[0]); };
  m.z.grad = [](const PhasePoint& pt) {
    return Coords{4.0 * pt[1] * std::cosh(2.0 * pt[0]), 2.0 * std::sinh(2.0 * pt[0]),
                  0.0};
  };

  set_u(m.phi, 1, QuadraticPolynomial{{0.0, 16.0, 16.0}});
  set_u(m.phi, 0,
        QuadraticPolynomial{{-16.0 * beta1, -16.0 * (beta0 + beta1 + beta2),
                             -16.0 * beta0}});

  m.w = heun_observable(tau, m.x, m.y, m.z);
  if (beta1 != 0.0) {
    m.guard = [](const PhasePoint& pt) -> std::string {
      if (std::abs(std::sinh(pt[0])) < 1e-12) {
        return "q = 0 is singular for beta1 != 0";
      }
      return {};
    };
  }
  return m;
}

Observable pt_direct_hamiltonian(double beta0, double beta1, double beta2,
                                 double beta3, double beta4) {
  const Potential pot{beta0, beta1, beta2};
  Observable o;
  o.kind = PhaseKind::Canonical;
  o.label = "W_PTE";
  o.eval = [=](const PhasePoint& pt) {
    const double sh = std::sinh(pt[0]);
    const double ch = std::cosh(pt[0]);
    return pt[1] * pt[1] + pot.value(pt[0]) + beta3 * sh * sh +
           beta4 * sh * sh * ch * ch;
  };
  o.grad = [=](const PhasePoint& pt) {
    const double s2q = std::sinh(2.0 * pt[0]);
    const double c2q = std::cosh(2.0 * pt[0]);
    // sinh^2 q cosh^2 q = sinh^2(2q) / 4
    return Coords{pot.derivative(pt[0]) + beta3 * s2q + beta4 * s2q * c2q,
                  2.0 * pt[1], 0.0};
  };
  return o;
}

ModelSpec build_zv_gyrostat(double beta, const PencilCoefficients& tau,
                            const PhasePoint& reference) {
  tau.validate();
  if (beta == 0.0 || !std::isfinite(beta)) {
    throw PreconditionError("zv_gyrostat: beta must be nonzero (X = Y otherwise)");
  }
  const double s2 = su2_casimir(reference);
  if (!(s2 > 0.0)) {
    throw PreconditionError("zv_gyrostat: reference point must have S^2 > 0");
  }

  ModelSpec m;
  m.name = kGyrostat;
  m.kind = PhaseKind::SU2;
  m.tau = tau;
  m.params = {{"beta", beta}, {"S2", s2}};

  const Observable s1 = coordinate(PhaseKind::SU2, 0, "s1");
  const Observable s2o = coordinate(PhaseKind::SU2, 1, "s2");
  const Observable s3 = coordinate(PhaseKind::SU2, 2, "s3");
  m.x = s1 + beta * s2o;
  m.x.label = "X";
  m.y = s1 - beta * s2o;
  m.y.label = "Y";
  m.z = (-2.0 * beta) * s3;
  m.z.label = "Z";

  const double b2 = beta * beta;
  m.phi.alpha[0][0] = 4.0 * s2 * b2;
  m.phi.alpha[2][0] = -(b2 + 1.0);
  m.phi.alpha[0][2] = -(b2 + 1.0);
  m.phi.alpha[1][1] = 2.0 * (1.0 - b2);

  m.w = heun_observable(tau, m.x, m.y, m.z);
  return m;
}

Observable zv_explicit_hamiltonian(double beta, const PencilCoefficients& tau) {
  Observable o;
  o.kind = PhaseKind::SU2;
  o.label = "W_su2";
  const double b2 = beta * beta;
  o.eval = [=](const PhasePoint& pt) {
    const double s1 = pt[0], s2 = pt[1], s3 = pt[2];
    return tau.tau1 * (s1 * s1 - b2 * s2 * s2) - 2.0 * beta * tau.tau2 * s3 +
           (tau.tau3 + tau.tau4) * s1 + beta * (tau.tau3 - tau.tau4) * s2 + tau.tau0;
  };
  o.grad = [=](const PhasePoint& pt) {
    return Coords{2.0 * tau.tau1 * pt[0] + tau.tau3 + tau.tau4,
                  -2.0 * tau.tau1 * b2 * pt[1] + beta * (tau.tau3 - tau.tau4),
                  -2.0 * beta * tau.tau2};
  };
  return o;
}

ModelSpec build_a1(double beta0, double beta1, double beta2,
                   const PencilCoefficients& tau, double q_min, double q_max) {
  tau.validate();
  const Potential u2{beta0, beta1, beta2};

  constexpr int kGrid = 200;
  for (int i = 0; i <= kGrid; ++i) {
    const double q = q_min + (q_max - q_min) * i / kGrid;
    const double v = u2.value(q);
    if (!(v > 0.0)) {
      std::ostringstream msg;
      msg << "a1: u^2(q) = " << v << " <= 0 at q = " << q;
      throw PreconditionError(msg.str());
    }
  }

  ModelSpec m;
  m.name = kA1;
  m.kind = PhaseKind::Canonical;
  m.tau = tau;
  m.params = {{"beta0", beta0}, {"beta1", beta1}, {"beta2", beta2}};
  require_finite(m.params);

  m.x = sinh_squared();

  m.y.kind = PhaseKind::Canonical;
  m.y.label = "Y";
  m.y.eval = [u2](const PhasePoint& pt) {
    return std::sqrt(u2.value(pt[0])) * std::cosh(pt[1]);
  };
  m.y.grad = [u2](const PhasePoint& pt) {
    const double u = std::sqrt(u2.value(pt[0]));
    const double du = u2.derivative(pt[0]) / (2.0 * u);
    return Coords{du * std::cosh(pt[1]), u * std::sinh(pt[1]), 0.0};
  };

  m.z.kind = PhaseKind::Canonical;
  m.z.label = "Z";
  m.z.eval = [u2](const PhasePoint& pt) {
    return std::sqrt(u2.value(pt[0])) * std::sinh(2.0 * pt[0]) * std::sinh(pt[1]);
  };
  m.z.grad = [u2](const PhasePoint& pt) {
    const double u = std::sqrt(u2.value(pt[0]));
    const double du = u2.derivative(pt[0]) / (2.0 * u);
    const double dphi = std::sinh(2.0 * pt[0]);
    const double ddphi = 2.0 * std::cosh(2.0 * pt[0]);
    return Coords{(du * dphi + u * ddphi) * std::sinh(pt[1]),
                  u * dphi * std::cosh(pt[1]), 0.0};
  };

  set_u(m.phi, 2, QuadraticPolynomial{{0.0, 4.0, 4.0}});
  set_u(m.phi, 0,
        QuadraticPolynomial{{-4.0 * beta1, -4.0 * (beta0 + beta1 + beta2),
                             -4.0 * beta0}});

  m.w = heun_observable(tau, m.x, m.y, m.z);
  m.guard = [u2](const PhasePoint& pt) -> std::string {
    const double v = u2.value(pt[0]);
    if (v > 0.0) return {};
    std::ostringstream msg;
    msg << "u^2(q) = " << v << " <= 0 at q = " << pt[0];
    return msg.str();
  };
  return m;
}

namespace {

struct A1Shift {
  double a;
  double b;
  double da;
  double db;
};

A1Shift a1_shift_terms(const PencilCoefficients& tau, double q) {
  const double sh = std::sinh(q);
  return {tau.tau1 * sh * sh + tau.tau4, tau.tau2 * std::sinh(2.0 * q),
          tau.tau1 * std::sinh(2.0 * q), 2.0 * tau.tau2 * std::cosh(2.0 * q)};
}

double root_of_difference(const A1Shift& s, double q) {
  const double d = s.a * s.a - s.b * s.b;
  if (!(d > 0.0)) {
    std::ostringstream msg;
    msg << "a1 direct form: (tau1 sinh^2 q + tau4)^2 - tau2^2 sinh^2 2q = " << d
        << " <= 0 at q = " << q;
    throw DomainError(msg.str());
  }
  return std::sqrt(d);
}

}  // namespace

Observable a1_direct_hamiltonian(const ModelSpec& model) {
  if (model.name != kA1) {
    throw StructuralError("a1_direct_hamiltonian: model is " + model.name);
  }
  const Potential u2{param(model.params, "beta0"), param(model.params, "beta1"),
                     param(model.params, "beta2")};
  const PencilCoefficients tau = model.tau;
  Observable o;
  o.kind = PhaseKind::Canonical;
  o.label = "W_Phi";
  o.eval = [u2, tau](const PhasePoint& pt) {
    const double q = pt[0];
    const A1Shift s = a1_shift_terms(tau, q);
    const double r = root_of_difference(s, q);
    const double phi1 = std::copysign(1.0, s.a) * std::sqrt(u2.value(q)) * r;
    const double sh = std::sinh(q);
    return phi1 * std::cosh(pt[1]) + tau.tau3 * sh * sh + tau.tau0;
  };
  o.grad = [u2, tau](const PhasePoint& pt) {
    const double q = pt[0];
    const A1Shift s = a1_shift_terms(tau, q);
    const double r = root_of_difference(s, q);
    const double dr = (s.a * s.da - s.b * s.db) / r;
    const double u = std::sqrt(u2.value(q));
    const double du = u2.derivative(q) / (2.0 * u);
    const double sign = std::copysign(1.0, s.a);
    const double phi1 = sign * u * r;
    const double dphi1 = sign * (du * r + u * dr);
    return Coords{dphi1 * std::cosh(pt[1]) + tau.tau3 * std::sinh(2.0 * q),
                  phi1 * std::sinh(pt[1]), 0.0};
  };
  return o;
}

double a1_momentum_shift(const ModelSpec& model, double q) {
  const A1Shift s = a1_shift_terms(model.tau, q);
  root_of_difference(s, q);
  return std::atanh(s.b / s.a);
}

ModelSpec build_model(const std::string& name,
                      const std::map<std::string, double>& params,
                      const PencilCoefficients& tau, const PhasePoint& reference) {
  if (name == kPoeschlTeller) {
    return build_poeschl_teller(param(params, "beta0"), param(params, "beta1"),
                                param(params, "beta2"), tau);
  }
  if (name == kA1) {
    return build_a1(param(params, "beta0"), param(params, "beta1"),
                    param(params, "beta2"), tau);
  }
  if (name == kGyrostat) {
    return build_zv_gyrostat(param(params, "beta"), tau, reference);
  }
  throw PreconditionError("unknown model '" + name + "'");
}

ModelSpec with_tau(const ModelSpec& model, const PencilCoefficients& tau) {
  tau.validate();
  if (model.name == kPoeschlTeller && tau.tau1 != 0.0) {
    throw PreconditionError(
        "poeschl_teller: tau1 must be 0 for the Poeschl-Teller pencil");
  }
  ModelSpec out = model;
  out.tau = tau;
  out.w = heun_observable(tau, model.x, model.y, model.z);
  return out;
}

}  // namespace heun
