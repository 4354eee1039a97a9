#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "heun/model_spec.hpp"
#include "heun/phase_space.hpp"

namespace heun {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double t_end = 50.0;
  double dt_out = 0.01;
  std::int64_t max_steps = 50'000'000;

  // Throws PreconditionError naming the offending field.
  void validate() const;
  std::size_t sample_count() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> states;
  // X, Y, Z, W, Q and (su2) S2, one value per sample.
  std::map<std::string, std::vector<double>> series;
  // Largest |v(t) - v(0)| / max(1, |v(0)|) per conserved series.
  std::map<std::string, double> drift;

  std::size_t size() const { return times.size(); }
  const std::vector<double>& at(const std::string& label) const;
};

// Integrates dx/dt = hamiltonian_vector_field(h, x) from t0 to t1 (either
// direction) with an embedded Dormand-Prince 5(4) pair and returns the final
// state. The guard is evaluated on every accepted step.
PhasePoint propagate(const Observable& h, const PhasePoint& x, double t0,
                     double t1, const IntegratorConfig& cfg,
                     const DomainGuard& guard = {});

// Samples the flow of h on the grid 0, dt_out, ..., t_end, stepping exactly
// onto each grid time. Only the "W" series (values of h) is filled.
Trajectory integrate_hamiltonian(const Observable& h, const PhasePoint& x0,
                                 const IntegratorConfig& cfg,
                                 const DomainGuard& guard = {});

// Flow of model.w with every observable series and conservation drifts.
Trajectory integrate_flow(const ModelSpec& model, const PhasePoint& x0,
                          const IntegratorConfig& cfg);

// {F, W} at every stored state, i.e. dF/dt along the flow.
std::vector<double> bracket_series(const Trajectory& traj, const Observable& f,
                                   const ModelSpec& model);

}  // namespace heun
