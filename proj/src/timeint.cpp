#include "phdg/timeint.hpp"

#include <cmath>
#include <stdexcept>

namespace phdg {

double IntegratorConfig::auto_dt(double h, int r) const {
  double k = 2.0 * r + 1.0;
  return cfl_coefficient * h / (k * k);
}

namespace {

void axpy(double a, const StateVector& x, StateVector& y) {
  for (std::size_t i = 0; i < x.v.size(); ++i) y.v[i] += a * x.v[i];
  for (std::size_t i = 0; i < x.s.size(); ++i) y.s[i] += a * x.s[i];
}

bool finite(const StateVector& x) {
  for (double v : x.v)
    if (!std::isfinite(v)) return false;
  for (double v : x.s)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

void rk4_step(const SemiDiscreteSystem& sys, StateVector& x, double t, double dt) {
  StateVector k1 = sys.zero_state(), k2 = sys.zero_state(), k3 = sys.zero_state(),
              k4 = sys.zero_state(), tmp = x;
  sys.residual(x, t, k1);
  tmp = x;
  axpy(0.5 * dt, k1, tmp);
  sys.residual(tmp, t + 0.5 * dt, k2);
  tmp = x;
  axpy(0.5 * dt, k2, tmp);
  sys.residual(tmp, t + 0.5 * dt, k3);
  tmp = x;
  axpy(dt, k3, tmp);
  sys.residual(tmp, t + dt, k4);
  double c = dt / 6.0;
  for (std::size_t i = 0; i < x.v.size(); ++i)
    x.v[i] += c * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
  for (std::size_t i = 0; i < x.s.size(); ++i)
    x.s[i] += c * (k1.s[i] + 2.0 * k2.s[i] + 2.0 * k3.s[i] + k4.s[i]);
  if (!finite(x)) throw std::runtime_error("rk4_step: non-finite state");
}

IntegrationResult integrate(const SemiDiscreteSystem& sys, const StateVector& x0,
                            const IntegratorConfig& cfg, int r) {
  if (cfg.t_final <= 0.0) throw std::invalid_argument("integrate: t_final must be > 0");
  double dt = cfg.dt > 0.0 ? cfg.dt : cfg.auto_dt(sys.mesh().h, r);
  IntegrationResult res;
  res.state = x0;
  double t = 0.0;
  double e0 = sys.discrete_energy(res.state);
  res.trace.push_back({0.0, e0, sys.boundary_power(res.state, 0.0)});

  // stage buffers reused across steps
  StateVector k1 = sys.zero_state(), k2 = k1, k3 = k1, k4 = k1, tmp = k1;
  auto stage = [&](const StateVector& base, double a, const StateVector& k,
                   double ts, StateVector& out) {
    for (std::size_t i = 0; i < base.v.size(); ++i) tmp.v[i] = base.v[i] + a * k.v[i];
    for (std::size_t i = 0; i < base.s.size(); ++i) tmp.s[i] = base.s[i] + a * k.s[i];
    sys.residual(tmp, ts, out);
  };

  while (t < cfg.t_final - 1e-14) {
    double step = std::min(dt, cfg.t_final - t);
    StateVector& x = res.state;
    sys.residual(x, t, k1);
    stage(x, 0.5 * step, k1, t + 0.5 * step, k2);
    stage(x, 0.5 * step, k2, t + 0.5 * step, k3);
    stage(x, step, k3, t + step, k4);
    double c = step / 6.0;
    for (std::size_t i = 0; i < x.v.size(); ++i)
      x.v[i] += c * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
    for (std::size_t i = 0; i < x.s.size(); ++i)
      x.s[i] += c * (k1.s[i] + 2.0 * k2.s[i] + 2.0 * k3.s[i] + k4.s[i]);
    t += step;
    ++res.steps;
    double e = sys.discrete_energy(res.state);
    res.trace.push_back({t, e, sys.boundary_power(res.state, t)});
    if (!finite(res.state)) throw std::runtime_error("integrate: non-finite state");
    if (e0 > 0.0 && e > 1e6 * e0)
      throw std::runtime_error("integrate: instability detected (energy growth)");
  }
  res.t_final = t;
  return res;
}

}  // namespace phdg
