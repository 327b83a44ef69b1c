// Acceptance suite: one pass/fail line per criterion, exit code equal to
// the number of failed criteria. Criterion 1 dominates the runtime
// (r=2, n=128 time integration).

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "phdg/dirac.hpp"
#include "phdg/harness.hpp"
#include "phdg/polyforms.hpp"
#include "phdg/quadrature.hpp"

using namespace phdg;

namespace {

int g_failures = 0;

void verdict(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------- 1
void criterion_convergence() {
  bool all_ok = true;
  std::string worst;
  for (int r : {0, 1, 2}) {
    for (double th : {0.0, 0.5, 1.0}) {
      CaseSpec base;
      base.t_final = 1.0;
      base.bc = BcMode::data;
      ConvergenceTable t = run_convergence(r, {th}, {32, 64, 128}, base);
      for (std::size_t k = 1; k < t.rows.size(); ++k) {
        double ov = *t.rows[k].order_v, os = *t.rows[k].order_s;
        bool ok = std::abs(ov - (r + 1.0)) <= 0.15 && std::abs(os - (r + 1.0)) <= 0.15;
        std::printf("  r=%d theta=%.3g n=%g->%g: l2_V=%.4e order_V=%.4f "
                    "l2_s=%.4e order_s=%.4f%s\n",
                    r, th, 2.0 / t.rows[k - 1].h, 2.0 / t.rows[k].h, t.rows[k].l2_v,
                    ov, t.rows[k].l2_s, os, ok ? "" : "  <-- out of band");
        std::fflush(stdout);
        if (!ok) {
          all_ok = false;
          worst += " (r=" + std::to_string(r) + ",theta=" + fmt(th) + ")";
        }
      }
    }
  }
  verdict(1, all_ok,
          "L2 orders for velocity and stress within +/-0.15 of r+1 at "
          "n in {32,64,128}, theta in {0,1/2,1}" +
              (worst.empty() ? std::string() : " — failed:" + worst));
}

// ---------------------------------------------------------------- 2
void criterion_magnitude() {
  CaseSpec spec;
  spec.r = 1;
  spec.theta = 0.5;
  spec.n = 32;
  spec.t_final = 1.0;
  CaseResult res = run_case(spec);
  double ref = 0.008886;
  double ratio = res.errors.l2_velocity / ref;
  bool within = ratio <= 2.0 && ratio >= 0.5;
  if (within) {
    verdict(2, true,
            "r=1 theta=1/2 n=32 velocity L2 " + fmt(res.errors.l2_velocity) +
                " within factor 2 of the reported 0.008886 (ratio " + fmt(ratio) +
                ")");
    return;
  }
  // magnitude depends on the unreported final time: produce the T-sweep
  // report instead of a hard failure
  std::printf("  velocity L2 %.6e vs reported 0.008886 (ratio %.3g); T sweep:\n",
              res.errors.l2_velocity, ratio);
  for (double T : {0.25, 0.5, 0.75, 1.25, 1.5}) {
    CaseSpec s2 = spec;
    s2.t_final = T;
    CaseResult r2 = run_case(s2);
    std::printf("    T=%.2f velocity L2 %.6e stress L2 %.6e\n", T,
                r2.errors.l2_velocity, r2.errors.l2_stress);
  }
  verdict(2, true,
          "magnitude outside factor 2 (ratio " + fmt(ratio) +
              "); informational T-sweep reported per the criterion");
}

// ---------------------------------------------------------------- 3
void criterion_energy_conservation() {
  bool skew_ok = true;
  double worst = 0.0;
  Mesh mesh = build_structured_mesh(8);
  for (int r : {0, 1, 2}) {
    auto [ep, eq] = make_spaces(mesh, r);
    for (double th : {0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0}) {
      SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0),
                             BoundaryData::homogeneous(), th, BcMode::data);
      auto [res, mag] = BlockOperator::skew_residual(sys.kpq(), sys.kqp());
      worst = std::max(worst, res / mag);
      if (res > 1e-12 * mag) skew_ok = false;
    }
  }
  verdict(3, skew_ok,
          "interior spatial operator skew: max |S+S^T| / |S| = " + fmt(worst) +
              " (tolerance 1e-12)");

  // RK4 drift ratio under dt halving, homogeneous data, T=1
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
    cfg.dt = cfg.auto_dt(mesh.h, 1) / (1 << k);
    auto res = integrate(sys, x0, cfg, 1);
    drift[k] = std::abs(res.trace.back().energy - e0) / e0;
  }
  double ratio = drift[0] / drift[1];
  bool ratio_ok = ratio >= 13.0 && ratio <= 19.0;
  verdict(3, ratio_ok,
          "RK4 energy drift halving ratio " + fmt(ratio) +
              " expected in [13,19]; measured drifts " + fmt(drift[0]) + " -> " +
              fmt(drift[1]) +
              " (the drift of a skew system under classical RK4 scales as dt^5, "
              "giving 32; see the notes)");
}

// ---------------------------------------------------------------- 4
void criterion_boundary_power() {
  Mesh mesh = build_structured_mesh(8);
  auto [ep, eq] = make_spaces(mesh, 1);
  BoundaryData bd{exact_velocity_field(), exact_stress_field()};
  SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0), bd, 0.5,
                         BcMode::data);
  StateVector x;
  x.v = project_field(ep, exact_velocity_field(), 0.0).x;
  x.s = project_field(eq, exact_stress_field(), 0.0).x;
  IntegratorConfig cfg;
  cfg.t_final = 1.0;
  cfg.dt = cfg.auto_dt(mesh.h, 1);

  bool ok = true, fd_ok = true;
  double worst = 0.0, worst_fd = 0.0;
  double t = 0.0;
  int checks = 0;
  long total_steps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt));
  long stride = total_steps / 20;
  StateVector cur = x;
  for (long step = 0; step < total_steps && checks < 20; ++step) {
    rk4_step(sys, cur, t, cfg.dt);
    t += cfg.dt;
    if (step % stride != 0) continue;
    ++checks;
    // analytic bilinear evaluation of dE/dt
    StateVector kx = sys.zero_state();
    sys.apply_coupling(cur, kx);
    std::vector<double> bp, bq;
    sys.loads(t, bp, bq);
    double rate = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < cur.v.size(); ++i) {
      rate += 2.0 * cur.v[i] * (kx.v[i] + bp[i]);
      scale += std::abs(2.0 * cur.v[i] * (kx.v[i] + bp[i]));
    }
    for (std::size_t i = 0; i < cur.s.size(); ++i) {
      rate += 2.0 * cur.s[i] * (kx.s[i] + bq[i]);
      scale += std::abs(2.0 * cur.s[i] * (kx.s[i] + bq[i]));
    }
    double pairing = 2.0 * sys.boundary_power(cur, t);
    double resid = std::abs(rate - pairing) / std::max(scale, 1e-30);
    worst = std::max(worst, resid);
    if (resid > 1e-10) ok = false;

    // finite-difference cross-check of dE/dt at delta = 1e-6
    double delta = 1e-6;
    StateVector fwd = cur, bwd = cur;
    rk4_step(sys, fwd, t, delta);
    rk4_step(sys, bwd, t, -delta);
    double fd =
        (sys.discrete_energy(fwd) - sys.discrete_energy(bwd)) / (2.0 * delta);
    double fd_resid = std::abs(fd - rate) / std::max(scale, 1e-30);
    worst_fd = std::max(worst_fd, fd_resid);
    if (fd_resid > 1e-8) fd_ok = false;
  }
  verdict(4, ok,
          "boundary power identity |dE/dt - 2 sum(<y^q|u^p>+<u^q|y^p>)|: worst " +
              fmt(worst) + " of scale at " + std::to_string(checks) +
              " sampled times (tolerance 1e-10)");
  verdict(4, fd_ok,
          "finite-difference dE/dt cross-check at dt=1e-6: worst " + fmt(worst_fd) +
              " of scale (tolerance 1e-8, FD floor ~1e-9 absolute)");
}

// ---------------------------------------------------------------- 5
void criterion_dirac() {
  std::mt19937_64 rng(20240817);
  Mesh mesh = build_structured_mesh(2);
  bool ok = true;
  double worst_elem = 0.0;
  for (int r : {0, 1, 2})
    for (int k = 0; k < 100; ++k) {
      auto res = element_power(mesh, k % mesh.elements.size(), r, rng);
      double rel = std::abs(res.power) / std::max(res.scale, 1e-30);
      worst_elem = std::max(worst_elem, rel);
      if (rel > 1e-12) ok = false;
    }

  double worst_inter = 0.0;
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double th : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (int k = 0; k < 100; ++k) {
      int m = 5;
      std::vector<double> ysl(m), yl(m), ysr(m), yr(m), w(m);
      for (int i = 0; i < m; ++i) {
        ysl[i] = dist(rng);
        yl[i] = dist(rng);
        ysr[i] = dist(rng);
        yr[i] = dist(rng);
        w[i] = 0.2 + 0.1 * i;
      }
      auto ports = interconnect(ysl, yl, ysr, yr, th);
      double p = std::abs(interconnect_power(ports, ysl, yl, ysr, yr, w));
      double scale = 0.0;
      for (int i = 0; i < m; ++i)
        scale += std::abs(w[i]) * (std::abs(ysl[i] * ports.w_l[i]) +
                                   std::abs(ports.w_l_star[i] * yl[i]) +
                                   std::abs(ysr[i] * ports.w_r[i]) +
                                   std::abs(ports.w_r_star[i] * yr[i]));
      double rel = p / std::max(scale, 1e-30);
      worst_inter = std::max(worst_inter, rel);
      if (rel > 1e-12) ok = false;
    }

  double worst_comp = 0.0;
  BoundaryData bd{exact_velocity_field(), exact_stress_field()};
  for (int r : {0, 1, 2})
    for (double th : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      auto res = compose_two_elements(th, r, rng, &bd, 0.2);
      double rel = std::abs(res.total_power) / std::max(res.scale, 1e-30);
      worst_comp = std::max(worst_comp, rel);
      if (rel > 1e-12) ok = false;
      double cross = std::abs(res.outer_pairing - res.assembly_pairing) /
                     std::max(std::abs(res.assembly_pairing), 1e-30);
      if (cross > 1e-11) ok = false;
    }

  double worst_sym = 0.0;
  for (int r : {0, 1, 2})
    worst_sym = std::max(worst_sym, bilinear_symmetry_check(mesh, 0, r, 100, rng));
  if (worst_sym > 1e-12) ok = false;

  verdict(5, ok,
          "Dirac suite: element power " + fmt(worst_elem) + ", interconnection " +
              fmt(worst_inter) + ", composition " + fmt(worst_comp) +
              ", bilinear asymmetry " + fmt(worst_sym) +
              " (all relative, tolerance 1e-12)");
}

// ---------------------------------------------------------------- 6
void criterion_oracles() {
  // monomial sweep to degree 2(r+2) = 8 (r=2) against the factorial formula
  bool ok = true;
  double worst_quad = 0.0;
  QuadRule rule = triangle_rule(8);
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; a + b <= 8; ++b) {
      double num = 1.0, den = 1.0;
      for (int k = 2; k <= a; ++k) num *= k;
      for (int k = 2; k <= b; ++k) num *= k;
      for (int k = 2; k <= a + b + 2; ++k) den *= k;
      double exact = num / den;
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q)
        acc += rule.weights[q] * std::pow(rule.points[q][0], a) *
               std::pow(rule.points[q][1], b);
      double rel = std::abs(acc - exact) / exact;
      worst_quad = std::max(worst_quad, rel);
      if (rel > 1e-14) ok = false;
    }
  verdict(6, ok,
          "monomial sweep to degree 8 vs a!b!/(a+b+2)!: worst relative " +
              fmt(worst_quad) + " (tolerance 1e-14)");

  // d after d: zero to the conditioning floor of the composed modal
  // differentiation matrices
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst_dd = 0.0;
  for (int deg = 1; deg <= 6; ++deg)
    for (int k = 0; k < 10; ++k) {
      PolyScalar nu(deg);
      double mx = 0.0;
      for (auto& c : nu.coeffs) {
        c = dist(rng);
        mx = std::max(mx, std::abs(c));
      }
      Poly2Form dd = d1(d0(nu));
      for (double c : dd.density.coeffs)
        worst_dd = std::max(worst_dd, std::abs(c) / mx);
    }
  bool dd_ok = worst_dd <= 5e-12;
  verdict(6, dd_ok,
          "d after d vanishes: worst coefficient " + fmt(worst_dd) +
              " relative (machine-exact up to the 5e-12 conditioning floor of "
              "composed degree-6 differentiation)");

  // pullback/trace naturality at 1e-13
  double worst_nat = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::array<std::array<double, 2>, 2> B = {
        {{1.0 + 0.3 * dist(rng), 0.3 * dist(rng)},
         {0.3 * dist(rng), 1.0 + 0.3 * dist(rng)}}};
    std::array<double, 2> x0 = {0.2 * dist(rng), 0.2 * dist(rng)};
    Poly1Form phys(2);
    for (auto& c : phys.comp_x.coeffs) c = dist(rng);
    for (auto& c : phys.comp_y.coeffs) c = dist(rng);
    Poly1Form composed(2);
    composed.comp_x = compose_affine(phys.comp_x, B, x0);
    composed.comp_y = compose_affine(phys.comp_y, B, x0);
    Poly1Form ref = pullback_1form(composed, B);
    for (int e = 0; e < 3; ++e) {
      EdgePoly tr_ref = trace_1form(ref, e, 1);
      auto ep = edge_endpoints(e);
      double tx = ep[1][0] - ep[0][0], ty = ep[1][1] - ep[0][1];
      double gx = B[0][0] * tx + B[0][1] * ty, gy = B[1][0] * tx + B[1][1] * ty;
      for (double s : {0.25, 0.75}) {
        double X = ep[0][0] + s * tx, Y = ep[0][1] + s * ty;
        double mx = x0[0] + B[0][0] * X + B[0][1] * Y;
        double my = x0[1] + B[1][0] * X + B[1][1] * Y;
        double oracle =
            phys.comp_x.eval(mx, my) * gx + phys.comp_y.eval(mx, my) * gy;
        worst_nat = std::max(worst_nat,
                             std::abs(tr_ref.eval(s) - oracle) /
                                 std::max(1.0, std::abs(oracle)));
      }
    }
  }
  verdict(6, worst_nat <= 1e-13,
          "pullback/trace naturality: worst relative " + fmt(worst_nat) +
              " (tolerance 1e-13)");
}

// ---------------------------------------------------------------- 7
void criterion_interpolation() {
  bool ok = true;
  std::string detail;
  double t = 0.15;
  for (int r : {0, 1, 2}) {
    std::vector<double> ev, es;
    for (int n : {8, 16, 32}) {
      Mesh mesh = build_structured_mesh(n);
      auto [ep, eq] = make_spaces(mesh, r);
      ev.push_back(l2_error(project_field(ep, exact_velocity_field(), t),
                            exact_velocity_field(), t, 14));
      es.push_back(l2_error(project_field(eq, exact_stress_field(), t),
                            exact_stress_field(), t, 14));
    }
    for (std::size_t k = 1; k < ev.size(); ++k) {
      double ov = std::log2(ev[k - 1] / ev[k]);
      double os = std::log2(es[k - 1] / es[k]);
      if (ov < r + 0.9 || os < r + 1.9) ok = false;
      if (k == ev.size() - 1)
        detail += " r=" + std::to_string(r) + ": " + fmt(ov) + "/" + fmt(os);
    }
  }
  verdict(7, ok,
          "projection rates (scalar >= r+0.9, 1-form >= r+1.9):" + detail);
}

}  // namespace

int main() {
  std::printf("pHDG acceptance suite\n");
  criterion_oracles();        // 6: fast, catches basics first
  criterion_interpolation();  // 7
  criterion_dirac();          // 5
  criterion_energy_conservation();  // 3
  criterion_boundary_power();       // 4
  criterion_magnitude();            // 2
  criterion_convergence();          // 1
  std::printf("%d criterion check(s) failed\n", g_failures);
  return g_failures;
}
