#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "heun/dynamics.hpp"
#include "heun/elliptic.hpp"
#include "heun/model_spec.hpp"

namespace heun {

struct Tolerances {
  double algebra = 1e-9;
  double trajectory = 1e-7;
  double fit = 1e-6;
  double invariant = 1e-8;
  double closed_form = 1e-6;
  double elementary = 1e-6;
  double conservation = 1e-9;
};

struct CheckResult {
  std::string name;
  double max_residual = 0.0;  // NaN when skipped
  double tolerance = 0.0;
  bool pass = false;
  std::string status = "ok";  // "ok" or "skipped: <reason>"

  bool skipped() const { return status != "ok"; }
};

// pass = (residual <= tolerance); a NaN residual fails.
CheckResult make_check(std::string name, double residual, double tolerance);
CheckResult skipped_check(std::string name, double tolerance,
                          const std::string& reason);

struct VerificationReport {
  std::string model;
  PencilCoefficients tau;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  // True when every non-skipped check passes.
  bool passed() const;
};

// Portable seeded sampling; the same seed yields the same draws everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

// Canonical: q in [0.2, 2], p in [-2, 2]. SU2: uniform on the sphere of
// radius sqrt(params["S2"]).
PhasePoint random_phase_point(const ModelSpec& model, Rng& rng);

// Entries uniform in [-1, 1]; tau1 = 0 for the Poeschl-Teller model.
PencilCoefficients random_tau(const ModelSpec& model, Rng& rng);

// Scaled |{F, W}^2 - (pi2 W^2 + pi3 W + pi4)| at one point, for F = X or Y.
double elimination_residual(const ModelSpec& model, const PiPolynomials& pis,
                            Variable which, const PhasePoint& point);

// CLP relations, Z^2 = Phi and both elimination identities at n_points seeded
// random points. Each residual is scaled by max(1, |terms|).
std::vector<CheckResult> check_algebra(const ModelSpec& model, int n_points,
                                       std::uint64_t seed,
                                       const Tolerances& tol = {});

struct QuarticFit {
  QuarticPolynomial coeffs;
  double condition = 0.0;  // of the column-scaled normal matrix
  bool ok = false;
  std::string reason;
};

// Least-squares fit ys ~ c0 + c1 x + ... + c4 x^4 through the normal
// equations, columns scaled by max|x|^k. Declines (ok = false) on fewer than
// ten distinct abscissae or a condition number above 1e12.
QuarticFit fit_quartic(std::span<const double> xs, std::span<const double> ys);

struct QuarticTrajectoryCheck {
  CheckResult residual;
  CheckResult fit;
  QuarticPolynomial assembled;
  QuarticFit fitted;
};

// Compares (dF/dt)^2, with dF/dt = {F, W} on the stored states, against the
// assembled quartic at the initial energy, and refits the quartic from the
// series.
QuarticTrajectoryCheck check_quartic_trajectory(const Trajectory& traj,
                                                const ModelSpec& model,
                                                Variable which,
                                                const Tolerances& tol = {});

// Relative agreement of (g2, g3) between the X and Y quartics at energy w0,
// measured in units of the lattice scale max(|g2|^(1/2), |g3|^(1/3)).
CheckResult check_invariant_match(const ModelSpec& model, double w0,
                                  const Tolerances& tol = {});

struct ExponentialFit {
  enum class Branch { Constant, Hyperbolic, Trigonometric, Polynomial };
  Branch branch = Branch::Constant;
  // Hyperbolic: x = xi1 e^(w t) + xi2 e^(-w t) + xi0.
  // Trigonometric: x = xi1 cos(w t) + xi2 sin(w t) + xi0.
  // Polynomial: x = xi2 t^2 + xi1 t + xi0 (omega = 0).
  double xi1 = 0.0;
  double xi2 = 0.0;
  double xi0 = 0.0;
  double omega = 0.0;
  // sup |series - fit| / max(1, sup |series|)
  double residual = 0.0;
};

const char* to_string(ExponentialFit::Branch branch);

// Fits the elementary solution to the X or Y series. The rate comes from a
// quadratic fit of {F, W}^2 against F (the second derivative of F is affine
// in F); if the exponential branch does not represent the series the
// quadratic-in-time branch is tried, and FitError is thrown if both fail.
ExponentialFit fit_elementary(const Trajectory& traj, const ModelSpec& model,
                              Variable which);

// Seeds the Weierstrass closed form at a turning point located by bisection
// on the sign change of {F, W} and compares it with the stored series over
// one detected period.
CheckResult compare_closed_form(const Trajectory& traj, const ModelSpec& model,
                                Variable which, const IntegratorConfig& cfg,
                                const Tolerances& tol = {});

// One check per recorded drift (W, Q, S2).
std::vector<CheckResult> check_conservation(const Trajectory& traj,
                                            const Tolerances& tol = {});

}  // namespace heun
