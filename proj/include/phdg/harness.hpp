#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phdg/assembly.hpp"
#include "phdg/timeint.hpp"

namespace phdg {

/// Exact standing-wave solution of the unit-coefficient wave system on
/// [-1,1]^2: V is the velocity, (sigma_x, sigma_y) the stress components.
struct ExactSolution {
  double u, v, sigma_x, sigma_y;
};
ExactSolution exact_solution(double t, double x, double y);

ScalarField exact_velocity_field();
VectorField exact_stress_field();

struct CaseSpec {
  int r = 0;
  double theta = 0.5;
  int n = 8;
  double t_final = 1.0;
  double dt = 0.0;  // <= 0: automatic
  double cfl = 0.1;
  BcMode bc = BcMode::data;
};

struct ErrorReport {
  double l2_velocity = 0.0;
  double l2_stress = 0.0;
  double linf_velocity = 0.0;
  double linf_stress = 0.0;
};

ErrorReport compute_errors(const StateVector& x, double t, const BrokenSpace& ep,
                           const BrokenSpace& eq);

struct CaseResult {
  ErrorReport errors;
  std::vector<EnergyTraceRow> energy_trace;
  long steps = 0;
  double dt = 0.0;
};

CaseResult run_case(const CaseSpec& spec);

struct ConvergenceRow {
  double theta;
  double h;
  double l2_v, l2_s, linf_v, linf_s;
  std::optional<double> order_v, order_s;
};

struct ConvergenceTable {
  int r;
  std::vector<ConvergenceRow> rows;
};

/// Sweep over mesh levels for each theta; rows are ordered by (theta,
/// level) and orders computed between consecutive levels.
ConvergenceTable run_convergence(int r, const std::vector<double>& thetas,
                                 const std::vector<int>& levels, const CaseSpec& base);

void write_convergence_csv(const ConvergenceTable& table, const std::string& path);
void write_convergence_svg(const ConvergenceTable& table, const std::string& path);
void write_energy_csv(const std::vector<EnergyTraceRow>& trace, const std::string& path);

/// Plain-text key=value configuration; unknown keys are rejected.
CaseSpec parse_config(const std::string& path, const CaseSpec& defaults);

}  // namespace phdg
