#include "heun/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heun/errors.hpp"

namespace heun {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// fifth-order weights minus the embedded fourth-order ones
constexpr double e1 = b1 - 5179.0 / 57600.0, e3 = b3 - 7571.0 / 16695.0,
                 e4 = b4 - 393.0 / 640.0, e5 = b5 + 92097.0 / 339200.0,
                 e6 = b6 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

class DormandPrince {
 public:
  DormandPrince(const Observable& h, const PhasePoint& x, double t,
                const IntegratorConfig& cfg, const DomainGuard& guard)
      : h_(h), kind_(x.kind()), dim_(x.dim()), y_(x.coords()), t_(t), cfg_(cfg),
        guard_(guard) {
    k1_ = rhs(y_);
  }

  double time() const { return t_; }
  PhasePoint state() const { return PhasePoint::from_coords(kind_, y_); }

  void advance_to(double target) {
    const double dir = target >= t_ ? 1.0 : -1.0;
    if (step_ == 0.0) step_ = dir * std::min(std::abs(target - t_), 1e-3);
    step_ = dir * std::abs(step_);
    while (dir * (target - t_) > 0.0) {
      const double remaining = target - t_;
      const bool clipped = std::abs(step_) >= std::abs(remaining);
      const double h = clipped ? remaining : step_;
      const double proposal = attempt(h);
      if (accepted_) {
        if (clipped) {
          t_ = target;
          // Keep the unclipped size unless the clipped step asked for less.
          step_ = dir * std::min(std::abs(step_), std::abs(proposal));
        } else {
          step_ = proposal;
        }
      } else {
        step_ = proposal;
      }
    }
  }

 private:
  Coords rhs(const Coords& y) const {
    return hamiltonian_vector_field(h_, PhasePoint::from_coords(kind_, y))
        .components;
  }

  // Evaluates the field, mapping coordinate or domain failures to NaN so the
  // step is rejected instead of aborting.
  Coords safe_rhs(const Coords& y) const {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!std::isfinite(y[i])) return nan_coords();
    }
    try {
      const Coords f = rhs(y);
      return f;
    } catch (const DomainError&) {
      return nan_coords();
    }
  }

  static Coords nan_coords() {
    const double nan = std::nan("");
    return {nan, nan, nan};
  }

  Coords combine(const Coords& base, double h,
                 std::initializer_list<std::pair<double, const Coords*>> terms) const {
    Coords out = base;
    for (std::size_t i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (const auto& [w, k] : terms) acc += w * (*k)[i];
      out[i] += h * acc;
    }
    return out;
  }

  // One trial step of size h. Returns the proposed next step size and sets
  // accepted_.
  double attempt(double h) {
    if (++attempts_ > cfg_.max_steps) {
      std::ostringstream msg;
      msg << "step budget of " << cfg_.max_steps << " exhausted at t = " << t_;
      throw IntegrationError(msg.str(), t_);
    }
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t_))) {
      std::ostringstream msg;
      msg << "step size underflow at t = " << t_;
      throw IntegrationError(msg.str(), t_);
    }

    const Coords& k1 = k1_;
    const Coords k2 = safe_rhs(combine(y_, h, {{a21, &k1}}));
    const Coords k3 = safe_rhs(combine(y_, h, {{a31, &k1}, {a32, &k2}}));
    const Coords k4 = safe_rhs(combine(y_, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Coords k5 = safe_rhs(
        combine(y_, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Coords k6 = safe_rhs(combine(
        y_, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Coords y_new = combine(
        y_, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const Coords k7 = safe_rhs(y_new);

    double err = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double sc =
          cfg_.atol + cfg_.rtol * std::max(std::abs(y_[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(ei) / sc);
    }

    if (!std::isfinite(err)) {
      accepted_ = false;
      return 0.2 * h;
    }
    const double factor =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err > 1.0) {
      accepted_ = false;
      return h * std::min(factor, 1.0);
    }

    accepted_ = true;
    y_ = y_new;
    k1_ = k7;
    t_ += h;
    if (guard_) {
      const std::string violation = guard_(PhasePoint::from_coords(kind_, y_));
      if (!violation.empty()) {
        std::ostringstream msg;
        msg << "domain violation at t = " << t_ << ": " << violation;
        throw IntegrationError(msg.str(), t_);
      }
    }
    return h * factor;
  }

  const Observable& h_;
  PhaseKind kind_;
  std::size_t dim_;
  Coords y_;
  Coords k1_{};
  double t_;
  double step_ = 0.0;
  bool accepted_ = false;
  std::int64_t attempts_ = 0;
  const IntegratorConfig& cfg_;
  const DomainGuard& guard_;
};

void check_start(const PhasePoint& x0, const Observable& h, const DomainGuard& guard) {
  if (x0.kind() != h.kind) {
    throw StructuralError("initial point kind does not match the Hamiltonian");
  }
  if (guard) {
    const std::string violation = guard(x0);
    if (!violation.empty()) {
      throw PreconditionError("initial point outside the model domain: " + violation);
    }
  }
}

double relative_drift(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double ref = std::max(1.0, std::abs(v.front()));
  double worst = 0.0;
  for (double vi : v) worst = std::max(worst, std::abs(vi - v.front()) / ref);
  return worst;
}

}  // namespace

void IntegratorConfig::validate() const {
  auto fail = [](const char* field, const char* what) {
    throw PreconditionError(std::string(field) + ": " + what);
  };
  if (!(rtol > 0.0)) fail("rtol", "must be > 0");
  if (!(atol > 0.0)) fail("atol", "must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("t_end", "must be finite and > 0");
  if (!(dt_out > 0.0) || dt_out > t_end) fail("dt_out", "must satisfy 0 < dt_out <= t_end");
  if (max_steps <= 0) fail("max_steps", "must be > 0");
}

std::size_t IntegratorConfig::sample_count() const {
  // Tolerate t_end / dt_out landing a hair below an integer.
  return static_cast<std::size_t>(std::floor(t_end / dt_out * (1.0 + 1e-12))) + 1;
}

const std::vector<double>& Trajectory::at(const std::string& label) const {
  const auto it = series.find(label);
  if (it == series.end()) {
    throw StructuralError("trajectory has no series '" + label + "'");
  }
  return it->second;
}

PhasePoint propagate(const Observable& h, const PhasePoint& x, double t0,
                     double t1, const IntegratorConfig& cfg,
                     const DomainGuard& guard) {
  check_start(x, h, guard);
  DormandPrince stepper(h, x, t0, cfg, guard);
  stepper.advance_to(t1);
  return stepper.state();
}

Trajectory integrate_hamiltonian(const Observable& h, const PhasePoint& x0,
                                 const IntegratorConfig& cfg,
                                 const DomainGuard& guard) {
  cfg.validate();
  check_start(x0, h, guard);
  const std::size_t n = cfg.sample_count();
  Trajectory traj;
  traj.times.reserve(n);
  traj.states.reserve(n);
  DormandPrince stepper(h, x0, 0.0, cfg, guard);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * cfg.dt_out;
    stepper.advance_to(t);
    traj.times.push_back(t);
    traj.states.push_back(stepper.state());
  }
  auto& w = traj.series["W"];
  w.reserve(n);
  for (const PhasePoint& s : traj.states) w.push_back(h.eval(s));
  traj.drift["W"] = relative_drift(w);
  return traj;
}

Trajectory integrate_flow(const ModelSpec& model, const PhasePoint& x0,
                          const IntegratorConfig& cfg) {
  Trajectory traj = integrate_hamiltonian(model.w, x0, cfg, model.guard);
  const std::size_t n = traj.size();
  auto& xs = traj.series["X"];
  auto& ys = traj.series["Y"];
  auto& zs = traj.series["Z"];
  auto& qs = traj.series["Q"];
  xs.reserve(n);
  ys.reserve(n);
  zs.reserve(n);
  qs.reserve(n);
  for (const PhasePoint& s : traj.states) {
    const double x = model.x.eval(s);
    const double y = model.y.eval(s);
    const double z = model.z.eval(s);
    xs.push_back(x);
    ys.push_back(y);
    zs.push_back(z);
    qs.push_back(casimir_q(model.phi, x, y, z));
  }
  traj.drift["Q"] = relative_drift(qs);
  if (model.kind == PhaseKind::SU2) {
    auto& s2 = traj.series["S2"];
    s2.reserve(n);
    for (const PhasePoint& s : traj.states) s2.push_back(su2_casimir(s));
    traj.drift["S2"] = relative_drift(s2);
  }
  return traj;
}

std::vector<double> bracket_series(const Trajectory& traj, const Observable& f,
                                   const ModelSpec& model) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const PhasePoint& s : traj.states) {
    out.push_back(poisson_bracket(f, model.w, s));
  }
  return out;
}

}  // namespace heun
