#include "heun/verification.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "heun/errors.hpp"

namespace heun {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_abs(std::initializer_list<double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

struct LeastSquares {
  Eigen::VectorXd coeffs;
  double condition = 0.0;
};

// Normal-equation solve of min |A c - b| with A already column-scaled.
LeastSquares solve_normal(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::MatrixXd n = a.transpose() * a;
  const Eigen::VectorXd rhs = a.transpose() * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(n, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  LeastSquares out;
  out.condition = ev.minCoeff() > 0.0 ? ev.maxCoeff() / ev.minCoeff()
                                      : std::numeric_limits<double>::infinity();
  out.coeffs = n.ldlt().solve(rhs);
  return out;
}

std::size_t distinct_count(std::span<const double> xs) {
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  double scale = 0.0;
  for (double v : sorted) scale = std::max(scale, std::abs(v));
  const double eps = 1e-12 * std::max(1.0, scale);
  std::size_t count = sorted.empty() ? 0 : 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] > eps) ++count;
  }
  return count;
}

const std::vector<double>& series_of(const Trajectory& traj, Variable which) {
  return traj.at(to_string(which));
}

std::string check_name(const char* base, Variable which) {
  return std::string(base) + "_" + (which == Variable::X ? "x" : "y");
}

// Value of {F, W} at time t, reached by integrating from a stored sample.
double bracket_at(const ModelSpec& model, const Observable& f,
                  const PhasePoint& from, double t_from, double t,
                  const IntegratorConfig& cfg) {
  const PhasePoint s = propagate(model.w, from, t_from, t, cfg, model.guard);
  return poisson_bracket(f, model.w, s);
}

// Bisection on a sign change of {F, W} inside [times[i], times[i+1]].
double locate_turning_time(const Trajectory& traj, const ModelSpec& model,
                           const Observable& f, const std::vector<double>& d,
                           std::size_t i, const IntegratorConfig& cfg) {
  if (d[i] == 0.0) return traj.times[i];
  double lo = traj.times[i];
  double hi = traj.times[i + 1];
  double f_lo = d[i];
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = bracket_at(model, f, traj.states[i], traj.times[i], mid, cfg);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CheckResult make_check(std::string name, double residual, double tolerance) {
  CheckResult r;
  r.name = std::move(name);
  r.max_residual = residual;
  r.tolerance = tolerance;
  r.pass = residual <= tolerance;
  r.status = "ok";
  return r;
}

CheckResult skipped_check(std::string name, double tolerance,
                          const std::string& reason) {
  CheckResult r;
  r.name = std::move(name);
  r.max_residual = kNaN;
  r.tolerance = tolerance;
  r.pass = false;
  r.status = "skipped: " + reason;
  return r;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.skipped() || c.pass; });
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

PhasePoint random_phase_point(const ModelSpec& model, Rng& rng) {
  if (model.kind == PhaseKind::Canonical) {
    const double q = rng.uniform(0.2, 2.0);
    const double p = rng.uniform(-2.0, 2.0);
    return PhasePoint::canonical(q, p);
  }
  const auto it = model.params.find("S2");
  const double radius = it == model.params.end() ? 1.0 : std::sqrt(it->second);
  const double z = rng.uniform(-1.0, 1.0);
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return PhasePoint::su2(radius * r * std::cos(angle), radius * r * std::sin(angle),
                         radius * z);
}

PencilCoefficients random_tau(const ModelSpec& model, Rng& rng) {
  PencilCoefficients t;
  t.tau0 = rng.uniform(-1.0, 1.0);
  t.tau1 = rng.uniform(-1.0, 1.0);
  t.tau2 = rng.uniform(-1.0, 1.0);
  t.tau3 = rng.uniform(-1.0, 1.0);
  t.tau4 = rng.uniform(-1.0, 1.0);
  if (model.name == "poeschl_teller") t.tau1 = 0.0;
  return t;
}

double elimination_residual(const ModelSpec& model, const PiPolynomials& pis,
                            Variable which, const PhasePoint& point) {
  const Observable& f = model.observable(which);
  const double v = f.eval(point);
  const double w = model.w.eval(point);
  const double d = poisson_bracket(f, model.w, point);
  const double t2 = pis.pi2(v) * w * w;
  const double t3 = pis.pi3(v) * w;
  const double t4 = pis.pi4(v);
  const double lhs = d * d;
  return std::abs(lhs - (t2 + t3 + t4)) / std::max(1.0, max_abs({lhs, t2, t3, t4}));
}

std::vector<CheckResult> check_algebra(const ModelSpec& model, int n_points,
                                       std::uint64_t seed, const Tolerances& tol) {
  if (n_points < 1) throw PreconditionError("check_algebra: n_points must be >= 1");
  Rng rng(seed);
  const PiPolynomials pis_x = pi_polynomials(model.tau, model.phi, Variable::X);
  const PiPolynomials pis_y = pi_polynomials(model.tau, model.phi, Variable::Y);

  double xz = 0.0, zy = 0.0, cas = 0.0, elim_x = 0.0, elim_y = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const PhasePoint pt = random_phase_point(model, rng);
    const double x = model.x.eval(pt);
    const double y = model.y.eval(pt);
    const double z = model.z.eval(pt);
    const PhiValue phi = phi_eval(model.phi, x, y);

    const double b_xz = poisson_bracket(model.x, model.z, pt);
    const double b_zy = poisson_bracket(model.z, model.y, pt);
    xz = std::max(xz, std::abs(b_xz - 0.5 * phi.dy) /
                          std::max(1.0, max_abs({b_xz, 0.5 * phi.dy})));
    zy = std::max(zy, std::abs(b_zy - 0.5 * phi.dx) /
                          std::max(1.0, max_abs({b_zy, 0.5 * phi.dx})));
    cas = std::max(cas, std::abs(z * z - phi.value) /
                            std::max(1.0, max_abs({z * z, phi.value})));
    elim_x = std::max(elim_x, elimination_residual(model, pis_x, Variable::X, pt));
    elim_y = std::max(elim_y, elimination_residual(model, pis_y, Variable::Y, pt));
  }
  return {make_check("algebra.x_z_bracket", xz, tol.algebra),
          make_check("algebra.z_y_bracket", zy, tol.algebra),
          make_check("algebra.casimir", cas, tol.algebra),
          make_check("algebra.elimination_x", elim_x, tol.algebra),
          make_check("algebra.elimination_y", elim_y, tol.algebra)};
}

QuarticFit fit_quartic(std::span<const double> xs, std::span<const double> ys) {
  QuarticFit out;
  if (xs.size() != ys.size()) throw PreconditionError("fit_quartic: size mismatch");
  if (distinct_count(xs) < 10) {
    out.reason = "insufficient-excitation";
    return out;
  }
  double s = 0.0;
  for (double x : xs) s = std::max(s, std::abs(x));
  if (s == 0.0) s = 1.0;

  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd a(n, 5);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = xs[static_cast<std::size_t>(i)] / s;
    double pw = 1.0;
    for (Eigen::Index k = 0; k < 5; ++k) {
      a(i, k) = pw;
      pw *= u;
    }
    b(i) = ys[static_cast<std::size_t>(i)];
  }
  const LeastSquares ls = solve_normal(a, b);
  out.condition = ls.condition;
  if (!(ls.condition <= 1e12)) {
    out.reason = "ill-conditioned";
    return out;
  }
  double sk = 1.0;
  for (std::size_t k = 0; k < 5; ++k) {
    out.coeffs.c[k] = ls.coeffs(static_cast<Eigen::Index>(k)) / sk;
    sk *= s;
  }
  out.ok = true;
  return out;
}

QuarticTrajectoryCheck check_quartic_trajectory(const Trajectory& traj,
                                                const ModelSpec& model,
                                                Variable which,
                                                const Tolerances& tol) {
  const std::vector<double>& v = series_of(traj, which);
  const std::vector<double> d = bracket_series(traj, model.observable(which), model);
  const double w0 = traj.at("W").front();

  QuarticTrajectoryCheck out;
  out.assembled = assemble_quartic(pi_polynomials(model.tau, model.phi, which), w0);

  double worst = 0.0;
  std::vector<double> d2(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d2[i] = d[i] * d[i];
    double term_scale = std::abs(d2[i]);
    double pw = 1.0;
    for (double ck : out.assembled.c) {
      term_scale = std::max(term_scale, std::abs(ck * pw));
      pw *= v[i];
    }
    worst = std::max(worst, std::abs(d2[i] - out.assembled(v[i])) /
                                std::max(1.0, term_scale));
  }
  out.residual = make_check(check_name("quartic", which) + ".residual", worst,
                            tol.trajectory);

  out.fitted = fit_quartic(v, d2);
  const std::string fit_name = check_name("quartic", which) + ".fit";
  if (!out.fitted.ok) {
    out.fit = skipped_check(fit_name, tol.fit, out.fitted.reason);
    return out;
  }
  const double ref = std::max(out.assembled.scale(), out.fitted.coeffs.scale());
  double diff = 0.0;
  for (std::size_t k = 0; k < 5; ++k) {
    diff = std::max(diff, std::abs(out.fitted.coeffs.c[k] - out.assembled.c[k]));
  }
  out.fit = make_check(fit_name, ref > 0.0 ? diff / ref : diff, tol.fit);
  return out;
}

CheckResult check_invariant_match(const ModelSpec& model, double w0,
                                  const Tolerances& tol) {
  const QuarticPolynomial fx =
      assemble_quartic(pi_polynomials(model.tau, model.phi, Variable::X), w0);
  const QuarticPolynomial fy =
      assemble_quartic(pi_polynomials(model.tau, model.phi, Variable::Y), w0);
  const DynamicsClass cx = classify_dynamics(fx);
  const DynamicsClass cy = classify_dynamics(fy);
  if (cx.kind != DynamicsClass::Kind::Elliptic ||
      cy.kind != DynamicsClass::Kind::Elliptic) {
    return skipped_check("invariant_match", tol.invariant,
                         std::string("not-elliptic (X: ") + to_string(cx.kind) +
                             ", Y: " + to_string(cy.kind) + ")");
  }
  const EllipticInvariants ix = quartic_invariants(fx);
  const EllipticInvariants iy = quartic_invariants(fy);
  const double lattice =
      std::max({std::sqrt(std::abs(ix.g2)), std::sqrt(std::abs(iy.g2)),
                std::cbrt(std::abs(ix.g3)), std::cbrt(std::abs(iy.g3))});
  const double rel2 = std::abs(ix.g2 - iy.g2) / (lattice * lattice);
  const double rel3 = std::abs(ix.g3 - iy.g3) / (lattice * lattice * lattice);
  return make_check("invariant_match", std::max(rel2, rel3), tol.invariant);
}

const char* to_string(ExponentialFit::Branch branch) {
  switch (branch) {
    case ExponentialFit::Branch::Constant:
      return "constant";
    case ExponentialFit::Branch::Hyperbolic:
      return "hyperbolic";
    case ExponentialFit::Branch::Trigonometric:
      return "trigonometric";
    case ExponentialFit::Branch::Polynomial:
      return "polynomial";
  }
  return "unknown";
}

namespace {

double sup_residual(const std::vector<double>& ts, const std::vector<double>& v,
                    const Eigen::MatrixXd& basis, const Eigen::VectorXd& coeffs) {
  double worst = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double fit = basis.row(static_cast<Eigen::Index>(i)).dot(coeffs);
    worst = std::max(worst, std::abs(v[i] - fit));
    scale = std::max(scale, std::abs(v[i]));
  }
  return worst / scale;
}

ExponentialFit fit_in_time(const std::vector<double>& ts, const std::vector<double>& v,
                           ExponentialFit::Branch branch, double omega) {
  const auto n = static_cast<Eigen::Index>(ts.size());
  const double t_mid = 0.5 * (ts.front() + ts.back());
  const double t_half = std::max(1e-300, 0.5 * (ts.back() - ts.front()));
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = ts[static_cast<std::size_t>(i)];
    a(i, 0) = 1.0;
    switch (branch) {
      case ExponentialFit::Branch::Hyperbolic:
        a(i, 1) = std::cosh(omega * (t - t_mid));
        a(i, 2) = std::sinh(omega * (t - t_mid));
        break;
      case ExponentialFit::Branch::Trigonometric:
        a(i, 1) = std::cos(omega * t);
        a(i, 2) = std::sin(omega * t);
        break;
      default: {
        const double u = (t - t_mid) / t_half;
        a(i, 1) = u;
        a(i, 2) = u * u;
        break;
      }
    }
    b(i) = v[static_cast<std::size_t>(i)];
  }
  const LeastSquares ls = solve_normal(a, b);
  ExponentialFit fit;
  fit.branch = branch;
  fit.omega = branch == ExponentialFit::Branch::Polynomial ? 0.0 : omega;
  fit.residual = sup_residual(ts, v, a, ls.coeffs);
  const double k0 = ls.coeffs(0), k1 = ls.coeffs(1), k2 = ls.coeffs(2);
  switch (branch) {
    case ExponentialFit::Branch::Hyperbolic:
      fit.xi0 = k0;
      fit.xi1 = 0.5 * (k1 + k2) * std::exp(-omega * t_mid);
      fit.xi2 = 0.5 * (k1 - k2) * std::exp(omega * t_mid);
      break;
    case ExponentialFit::Branch::Trigonometric:
      fit.xi0 = k0;
      fit.xi1 = k1;
      fit.xi2 = k2;
      break;
    default: {
      // k0 + k1 u + k2 u^2 with u = (t - t_mid) / t_half, expanded in t.
      const double c2 = k2 / (t_half * t_half);
      const double c1 = k1 / t_half - 2.0 * c2 * t_mid;
      fit.xi2 = c2;
      fit.xi1 = c1;
      fit.xi0 = k0 - k1 * t_mid / t_half + c2 * t_mid * t_mid;
      break;
    }
  }
  return fit;
}

}  // namespace

ExponentialFit fit_elementary(const Trajectory& traj, const ModelSpec& model,
                              Variable which) {
  constexpr double kAcceptable = 1e-3;
  const std::vector<double>& v = series_of(traj, which);
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double spread = *hi - *lo;
  double vmax = 1.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));

  if (spread <= 1e-12 * vmax) {
    ExponentialFit fit;
    fit.branch = ExponentialFit::Branch::Constant;
    fit.xi0 = v.front();
    fit.residual = spread / vmax;
    return fit;
  }

  // (dF/dt)^2 = a F^2 + b F + c, so d^2F/dt^2 = a F + b/2 and omega^2 = a.
  const std::vector<double> d = bracket_series(traj, model.observable(which), model);
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = v[static_cast<std::size_t>(i)] / vmax;
    a(i, 0) = 1.0;
    a(i, 1) = u;
    a(i, 2) = u * u;
    const double di = d[static_cast<std::size_t>(i)];
    b(i) = di * di;
  }
  const LeastSquares quad = solve_normal(a, b);
  const double a2 = quad.coeffs(2) / (vmax * vmax);
  const double rate_scale = std::max(
      {std::abs(a2), std::abs(quad.coeffs(1)) / (vmax * vmax),
       std::abs(quad.coeffs(0)) / (vmax * vmax)});

  ExponentialFit best;
  best.residual = std::numeric_limits<double>::infinity();
  if (std::abs(a2) > 1e-10 * rate_scale) {
    const auto branch = a2 > 0.0 ? ExponentialFit::Branch::Hyperbolic
                                 : ExponentialFit::Branch::Trigonometric;
    best = fit_in_time(traj.times, v, branch, std::sqrt(std::abs(a2)));
  }
  if (!(best.residual <= kAcceptable)) {
    const ExponentialFit poly =
        fit_in_time(traj.times, v, ExponentialFit::Branch::Polynomial, 0.0);
    if (poly.residual < best.residual) best = poly;
  }
  if (!(best.residual <= kAcceptable)) {
    throw FitError("fit_elementary: neither the exponential nor the polynomial "
                   "branch represents the " + std::string(to_string(which)) +
                   " series (residual " + std::to_string(best.residual) + ")");
  }
  return best;
}

CheckResult compare_closed_form(const Trajectory& traj, const ModelSpec& model,
                                Variable which, const IntegratorConfig& cfg,
                                const Tolerances& tol) {
  const std::string name = check_name("closed_form", which);
  const double w0 = traj.at("W").front();
  const QuarticPolynomial f =
      assemble_quartic(pi_polynomials(model.tau, model.phi, which), w0);
  const DynamicsClass cls = classify_dynamics(f);
  if (cls.kind != DynamicsClass::Kind::Elliptic) {
    return skipped_check(name, tol.closed_form,
                         std::string("not-elliptic (") + to_string(cls.kind) + ")");
  }

  const Observable& obs = model.observable(which);
  const std::vector<double>& v = series_of(traj, which);
  const std::vector<double> d = bracket_series(traj, obs, model);
  std::vector<std::size_t> crossings;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    if (d[i] == 0.0 || (d[i] < 0.0) != (d[i + 1] < 0.0)) {
      if (d[i] == 0.0 && d[i + 1] == 0.0) continue;
      crossings.push_back(i);
    }
  }
  if (crossings.empty()) {
    return skipped_check(name, tol.closed_form, "no-real-turning-point");
  }
  if (crossings.size() < 2) {
    return skipped_check(name, tol.closed_form, "period-not-resolved");
  }

  const double t_first = locate_turning_time(traj, model, obs, d, crossings[0], cfg);
  const double t_second = locate_turning_time(traj, model, obs, d, crossings[1], cfg);
  const double period = 2.0 * (t_second - t_first);
  const double t_end = traj.times.back();

  // Centre the comparison window on a turning point with a full half-period
  // of samples on both sides.
  double centre = -1.0;
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    const double tk = k == 0   ? t_first
                      : k == 1 ? t_second
                               : traj.times[crossings[k]];
    if (tk >= 0.5 * period && tk + 0.5 * period <= t_end) {
      centre = k < 2 ? tk : locate_turning_time(traj, model, obs, d, crossings[k], cfg);
      break;
    }
  }
  if (centre < 0.0) {
    return skipped_check(name, tol.closed_form, "period-longer-than-trajectory");
  }

  const PhasePoint at_centre = [&] {
    const auto it = std::upper_bound(traj.times.begin(), traj.times.end(), centre);
    const std::size_t j = static_cast<std::size_t>(it - traj.times.begin()) - 1;
    return propagate(model.w, traj.states[j], traj.times[j], centre, cfg, model.guard);
  }();
  const double x0 = polish_root(f, obs.eval(at_centre));

  double worst = 0.0;
  double scale = 1.0;
  try {
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double tau = traj.times[i] - centre;
      if (std::abs(tau) > 0.5 * period) continue;
      const double closed = closed_form_solution(f, x0, tau);
      worst = std::max(worst, std::abs(closed - v[i]));
      scale = std::max(scale, std::abs(v[i]));
    }
  } catch (const std::exception&) {
    // A turning point that is not a simple root, or a pole inside the window,
    // means the closed form disagrees with the trajectory.
    return make_check(name, std::numeric_limits<double>::infinity(), tol.closed_form);
  }
  return make_check(name, worst / scale, tol.closed_form);
}

std::vector<CheckResult> check_conservation(const Trajectory& traj,
                                            const Tolerances& tol) {
  std::vector<CheckResult> out;
  for (const auto& [label, drift] : traj.drift) {
    out.push_back(make_check("conservation." + label, drift, tol.conservation));
  }
  return out;
}

}  // namespace heun
