#pragma once

#include <vector>

#include "phdg/assembly.hpp"

namespace phdg {

struct IntegratorConfig {
  double dt = 0.0;              // <= 0 selects the automatic step
  double t_final = 1.0;
  double cfl_coefficient = 0.1; // used by the automatic step

  /// dt = cfl * h / (2r+1)^2
  double auto_dt(double h, int r) const;
};

/// One classical RK4 step for a generic ODE y' = f(t, y) on a flat
/// vector. `f(t, y, dydt)` must fill dydt.
template <typename Rhs>
void rk4_step_generic(const Rhs& f, std::vector<double>& y, double t, double dt) {
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  f(t, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  f(t + 0.5 * dt, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  f(t + 0.5 * dt, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  f(t + dt, tmp, k4);
  for (std::size_t i = 0; i < n; ++i)
    y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

/// One RK4 step of the semi-discrete system; boundary data is sampled at
/// t, t + dt/2 and t + dt. Throws on non-finite state.
void rk4_step(const SemiDiscreteSystem& sys, StateVector& x, double t, double dt);

struct EnergyTraceRow {
  double t;
  double energy;
  double boundary_power;
};

struct IntegrationResult {
  StateVector state;
  std::vector<EnergyTraceRow> trace;
  double t_final = 0.0;
  long steps = 0;
};

/// Integrate to t_final; the last step is shortened to land exactly on
/// t_final. Aborts when the energy grows beyond 1e6 times its initial
/// value or the state stops being finite.
IntegrationResult integrate(const SemiDiscreteSystem& sys, const StateVector& x0,
                            const IntegratorConfig& cfg, int r);

}  // namespace phdg
