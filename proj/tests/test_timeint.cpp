#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "phdg/harness.hpp"
#include "phdg/timeint.hpp"

using namespace phdg;

TEST_CASE("generic RK4 on y' = -y") {
  std::vector<double> y{1.0};
  auto rhs = [](double, const std::vector<double>& v, std::vector<double>& out) {
    out[0] = -v[0];
  };
  rk4_step_generic(rhs, y, 0.0, 0.1);
  // 4-term Taylor: 1 - 0.1 + 0.005 - 1.666667e-4 + 4.166667e-6
  CHECK(y[0] == doctest::Approx(0.90483750).epsilon(1e-9));
}

TEST_CASE("zero state and zero data stay zero") {
  Mesh mesh = build_structured_mesh(2);
  auto [ep, eq] = make_spaces(mesh, 1);
  SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0),
                         BoundaryData::homogeneous(), 0.5, BcMode::data);
  StateVector x = sys.zero_state();
  rk4_step(sys, x, 0.0, 0.01);
  for (double v : x.v) CHECK(v == 0.0);
  for (double v : x.s) CHECK(v == 0.0);
}

TEST_CASE("one step equals the degree-4 truncated matrix exponential") {
  Mesh mesh = build_structured_mesh(1);
  auto [ep, eq] = make_spaces(mesh, 1);
  SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0),
                         BoundaryData::homogeneous(), 0.3, BcMode::data);
  long np = ep.total_dofs, nq = eq.total_dofs, n = np + nq;
  // dense A = M^-1 K via unit vectors
  Eigen::MatrixXd A(n, n);
  for (long j = 0; j < n; ++j) {
    StateVector e = sys.zero_state(), de = sys.zero_state();
    if (j < np)
      e.v[j] = 1.0;
    else
      e.s[j - np] = 1.0;
    sys.residual(e, 0.0, de);
    for (long i = 0; i < np; ++i) A(i, j) = de.v[i];
    for (long i = 0; i < nq; ++i) A(np + i, j) = de.s[i];
  }
  double dt = 0.01;
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 4; ++k) {
    P = (P * A * dt) / k;
    E += P;
  }
  StateVector x = sys.zero_state();
  Eigen::VectorXd x0(n);
  for (long i = 0; i < n; ++i) x0(i) = std::sin(0.7 * i + 0.1);
  for (long i = 0; i < np; ++i) x.v[i] = x0(i);
  for (long i = 0; i < nq; ++i) x.s[i] = x0(np + i);
  rk4_step(sys, x, 0.0, dt);
  Eigen::VectorXd want = E * x0;
  for (long i = 0; i < np; ++i) CHECK(x.v[i] == doctest::Approx(want(i)).epsilon(1e-12));
  for (long i = 0; i < nq; ++i)
    CHECK(x.s[i] == doctest::Approx(want(np + i)).epsilon(1e-12));
}

TEST_CASE("integrate lands exactly on t_final; t_final = dt is one step") {
  Mesh mesh = build_structured_mesh(2);
  auto [ep, eq] = make_spaces(mesh, 0);
  SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0),
                         BoundaryData::homogeneous(), 0.5, BcMode::data);
  StateVector x0;
  x0.v = project_field(ep, exact_velocity_field(), 0.0).x;
  x0.s = project_field(eq, exact_stress_field(), 0.0).x;
  IntegratorConfig cfg;
  cfg.dt = 0.013;
  cfg.t_final = 0.013;
  auto res = integrate(sys, x0, cfg, 0);
  CHECK(res.steps == 1);
  CHECK(res.t_final == doctest::Approx(0.013));

  cfg.dt = 0.01;
  cfg.t_final = 0.035;  // not a multiple: shortened last step
  auto res2 = integrate(sys, x0, cfg, 0);
  CHECK(res2.steps == 4);
  CHECK(res2.t_final == doctest::Approx(0.035).epsilon(1e-14));
  CHECK(res2.trace.size() == 5);
}

TEST_CASE("config validation and auto dt") {
  IntegratorConfig cfg;
  CHECK(cfg.auto_dt(0.25, 1) == doctest::Approx(0.1 * 0.25 / 9.0));
  cfg.t_final = -1.0;
  Mesh mesh = build_structured_mesh(1);
  auto [ep, eq] = make_spaces(mesh, 0);
  SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0),
                         BoundaryData::homogeneous(), 0.5, BcMode::data);
  CHECK_THROWS(integrate(sys, sys.zero_state(), cfg, 0));
}

TEST_CASE("energy drift with homogeneous data scales as the fifth power of dt") {
  // frozen two-run oracle: skew operator + classical RK4 damps each mode
  // by |R(iy)|^2 = 1 - y^6/72 + y^8/576 per step, so the drift over a
  // fixed horizon scales as dt^5 and halving dt divides it by 32 (not 16)
  Mesh mesh = build_structured_mesh(8);
  auto [ep, eq] = make_spaces(mesh, 1);
  SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0),
                         BoundaryData::homogeneous(), 0.5, BcMode::data);
  StateVector x0;
  x0.v = project_field(ep, exact_velocity_field(), 0.0).x;
  x0.s = project_field(eq, exact_stress_field(), 0.0).x;
  double e0 = sys.discrete_energy(x0);
  IntegratorConfig cfg;
  cfg.t_final = 1.0;
  double drift[2];
  for (int k = 0; k < 2; ++k) {
    cfg.dt = cfg.auto_dt(mesh.h, 1) / (k + 1.0);
    auto res = integrate(sys, x0, cfg, 1);
    drift[k] = std::abs(res.trace.back().energy - e0) / e0;
  }
  double ratio = drift[0] / drift[1];
  CHECK(ratio == doctest::Approx(32.0).epsilon(0.15));
  // the drift itself is far below the dt^4 bound
  CHECK(drift[0] < 1e-6);
}

TEST_CASE("energy drift under the flux-relabeling symmetry") {
  // the drift constant does depend on theta (the operator spectrum
  // does), but theta and 1-theta give the same operator up to relabeling
  // and must drift identically; every theta stays within the dt^4 bound
  Mesh mesh = build_structured_mesh(4);
  auto [ep, eq] = make_spaces(mesh, 1);
  StateVector x0;
  x0.v = project_field(ep, exact_velocity_field(), 0.0).x;
  x0.s = project_field(eq, exact_stress_field(), 0.0).x;
  IntegratorConfig cfg;
  cfg.t_final = 0.5;
  std::vector<double> drifts;
  for (double th : {0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0}) {
    SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0),
                           BoundaryData::homogeneous(), th, BcMode::data);
    double e0 = sys.discrete_energy(x0);
    auto res = integrate(sys, x0, cfg, 1);
    drifts.push_back(std::abs(res.trace.back().energy - e0) / e0);
  }
  CHECK(drifts[0] == doctest::Approx(drifts[4]).epsilon(1e-9));
  CHECK(drifts[1] == doctest::Approx(drifts[3]).epsilon(1e-9));
  double dt = cfg.auto_dt(mesh.h, 1);
  for (double d : drifts) CHECK(d < 1e4 * dt * dt * dt * dt);
}

TEST_CASE("instability detection aborts") {
  // an unstable dt far beyond the RK4 imaginary-axis limit must trigger
  // the energy-growth abort rather than returning garbage
  Mesh mesh = build_structured_mesh(4);
  auto [ep, eq] = make_spaces(mesh, 2);
  SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0),
                         BoundaryData::homogeneous(), 0.5, BcMode::data);
  StateVector x0;
  x0.v = project_field(ep, exact_velocity_field(), 0.0).x;
  x0.s = project_field(eq, exact_stress_field(), 0.0).x;
  IntegratorConfig cfg;
  cfg.dt = 0.5;  // far beyond stability for r=2 on h=0.5
  cfg.t_final = 50.0;
  CHECK_THROWS(integrate(sys, x0, cfg, 2));
}
