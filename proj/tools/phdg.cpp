// Command-line driver: single runs, convergence sweeps and the
// Dirac-structure verification table.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <random>

#include "phdg/dirac.hpp"
#include "phdg/harness.hpp"

namespace {

int cmd_solve(const phdg::CaseSpec& spec, const std::string& out_csv,
              const std::string& energy_csv, const std::string& vtk) {
  phdg::CaseResult res = phdg::run_case(spec);
  std::printf("r=%d theta=%g n=%d t_final=%g dt=%g steps=%ld\n", spec.r, spec.theta,
              spec.n, spec.t_final, res.dt, res.steps);
  std::printf("L2  velocity %.6e  stress %.6e\n", res.errors.l2_velocity,
              res.errors.l2_stress);
  std::printf("Linf velocity %.6e  stress %.6e\n", res.errors.linf_velocity,
              res.errors.linf_stress);
  if (!out_csv.empty()) {
    phdg::ConvergenceTable t;
    t.r = spec.r;
    t.rows.push_back({spec.theta, 2.0 / spec.n, res.errors.l2_velocity,
                      res.errors.l2_stress, res.errors.linf_velocity,
                      res.errors.linf_stress, std::nullopt, std::nullopt});
    phdg::write_convergence_csv(t, out_csv);
  }
  if (!energy_csv.empty()) phdg::write_energy_csv(res.energy_trace, energy_csv);
  if (!vtk.empty()) {
    phdg::Mesh mesh = phdg::build_structured_mesh(spec.n);
    phdg::write_vtk(mesh, vtk);
  }
  return 0;
}

int cmd_convergence(int r, const std::vector<double>& thetas,
                    const std::vector<int>& levels, const phdg::CaseSpec& base,
                    const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  phdg::ConvergenceTable table = phdg::run_convergence(r, thetas, levels, base);
  std::string stem = out_dir + "/convergence_r" + std::to_string(r);
  phdg::write_convergence_csv(table, stem + ".csv");
  phdg::write_convergence_svg(table, stem + ".svg");
  std::printf("theta      h        l2_V       order_V   l2_sigma   order_sigma\n");
  for (const auto& row : table.rows)
    std::printf("%-8g %-8g %-10.4e %-9s %-10.4e %-9s\n", row.theta, row.h, row.l2_v,
                row.order_v ? std::to_string(*row.order_v).substr(0, 6).c_str() : "--",
                row.l2_s,
                row.order_s ? std::to_string(*row.order_s).substr(0, 6).c_str() : "--");
  std::printf("wrote %s.csv and %s.svg\n", stem.c_str(), stem.c_str());
  return 0;
}

int cmd_verify_dirac(int r, const std::vector<double>& thetas, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  phdg::Mesh mesh = phdg::build_structured_mesh(2);
  int fails = 0;
  std::printf("%-34s %-10s %-12s %s\n", "check", "theta", "residual", "status");
  auto report = [&](const std::string& name, double theta, double resid, double tol) {
    bool ok = resid <= tol;
    fails += ok ? 0 : 1;
    std::printf("%-34s %-10g %-12.3e %s\n", name.c_str(), theta, resid,
                ok ? "pass" : "FAIL");
  };

  for (int k = 0; k < 100; ++k) {
    auto res = phdg::element_power(mesh, k % mesh.elements.size(), r, rng);
    if (k == 0 || std::abs(res.power) > 1e-12 * res.scale)
      report("element power (Thm 4.9)", -1.0, std::abs(res.power) / res.scale, 1e-12);
  }
  for (double th : thetas) {
    std::vector<double> yl(8), yr(8), ysl(8), ysr(8), w(8, 0.125);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 8; ++i) {
      yl[i] = dist(rng);
      yr[i] = dist(rng);
      ysl[i] = dist(rng);
      ysr[i] = dist(rng);
    }
    auto ports = phdg::interconnect(ysl, yl, ysr, yr, th);
    double p = phdg::interconnect_power(ports, ysl, yl, ysr, yr, w);
    report("interconnection power (Thm 4.11)", th, std::abs(p), 1e-13);

    auto comp = phdg::compose_two_elements(th, r, rng);
    report("two-element composition (Lem 5.2)", th,
           std::abs(comp.total_power) / std::max(comp.scale, 1e-300), 1e-12);
  }
  double asym = phdg::bilinear_symmetry_check(mesh, 0, r, 100, rng);
  report("extended bilinear symmetry", -1.0, asym, 1e-13);

  auto dims = phdg::dimension_check(mesh, 0, r);
  std::printf("dimension check: flow dim %d, solution dim %d, trace dims (p=%d, q=%d), "
              "pairing rank %d\n",
              dims.flow_dim, dims.solution_dim, dims.trace_dim_p, dims.trace_dim_q,
              dims.boundary_pairing_rank);
  if (dims.flow_dim != dims.solution_dim ||
      dims.boundary_pairing_rank != dims.trace_dim_p)
    ++fails;
  std::printf(fails == 0 ? "all Dirac checks passed\n"
                         : "%d Dirac checks FAILED\n",
              fails);
  return fails == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structure-preserving DG solver for the 2D wave system"};
  app.require_subcommand(1);

  phdg::CaseSpec spec;
  std::string config, out_csv, energy_csv, vtk, bc = "data", dt_str = "auto";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--r", spec.r, "polynomial order (0..2)");
    cmd->add_option("--theta", spec.theta, "flux parameter in [0,1]");
    cmd->add_option("--t-final", spec.t_final, "final time");
    cmd->add_option("--dt", dt_str, "time step or 'auto'");
    cmd->add_option("--cfl", spec.cfl, "cfl coefficient for auto dt");
    cmd->add_option("--bc", bc, "boundary mode: data|trace");
    cmd->add_option("--config", config, "key=value config file");
  };

  auto* solve = app.add_subcommand("solve", "run a single case");
  add_common(solve);
  solve->add_option("--n", spec.n, "cells per axis");
  solve->add_option("--out", out_csv, "results CSV path");
  solve->add_option("--energy-out", energy_csv, "energy trace CSV path");
  solve->add_option("--vtk", vtk, "optional VTK mesh dump");

  auto* conv = app.add_subcommand("convergence", "run a convergence sweep");
  add_common(conv);
  std::vector<int> r_list{1};
  std::vector<double> theta_list{0.5};
  std::vector<int> levels{8, 16, 32};
  std::string out_dir = ".";
  conv->add_option("--r-list", r_list, "polynomial orders");
  conv->add_option("--theta-list", theta_list, "flux parameters");
  conv->add_option("--levels", levels, "mesh levels (cells per axis)");
  conv->add_option("--out-dir", out_dir, "output directory");

  auto* dirac = app.add_subcommand("verify-dirac", "Dirac structure residual table");
  std::uint64_t seed = 42;
  int dirac_r = 1;
  std::vector<double> dirac_thetas{0.0, 0.25, 0.5, 0.75, 1.0};
  dirac->add_option("--r", dirac_r, "polynomial order");
  dirac->add_option("--theta", dirac_thetas, "flux parameters to test");
  dirac->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config.empty()) spec = phdg::parse_config(config, spec);
    spec.bc = (bc == "trace") ? phdg::BcMode::trace : phdg::BcMode::data;
    spec.dt = (dt_str == "auto") ? 0.0 : std::stod(dt_str);

    if (solve->parsed()) return cmd_solve(spec, out_csv, energy_csv, vtk);
    if (conv->parsed()) {
      int rc = 0;
      for (int r : r_list) rc |= cmd_convergence(r, theta_list, levels, spec, out_dir);
      return rc;
    }
    if (dirac->parsed()) return cmd_verify_dirac(dirac_r, dirac_thetas, seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
