#include "phdg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "phdg/polyforms.hpp"
#include "phdg/quadrature.hpp"

namespace phdg {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

ExactSolution exact_solution(double t, double x, double y) {
  double st = std::sin(kTwoPi * t), ct = std::cos(kTwoPi * t);
  double sx = std::sin(kTwoPi * x), sy = std::sin(kTwoPi * y);
  double cx = std::cos(kTwoPi * x), cy = std::cos(kTwoPi * y);
  ExactSolution e;
  e.u = st * (sx + sy) / kTwoPi;
  e.v = ct * (sx + sy);
  e.sigma_x = st * cx;
  e.sigma_y = st * cy;
  return e;
}

ScalarField exact_velocity_field() {
  return [](double t, double x, double y) { return exact_solution(t, x, y).v; };
}

VectorField exact_stress_field() {
  return [](double t, double x, double y) {
    ExactSolution e = exact_solution(t, x, y);
    return std::array<double, 2>{e.sigma_x, e.sigma_y};
  };
}

ErrorReport compute_errors(const StateVector& x, double t, const BrokenSpace& ep,
                           const BrokenSpace& eq) {
  const Mesh& mesh = *ep.mesh;
  QuadRule rule = triangle_rule(12);
  int np = ep.scalar_block(), nqb = eq.scalar_block();
  std::vector<double> pv(np), qv(nqb);
  ErrorReport rep;
  double acc_v = 0.0, acc_s = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    double det = mesh.elements[e].jacobian_det;
    const double* vc = x.v.data() + ep.offset(e);
    const double* sc = x.s.data() + eq.offset(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double X = rule.points[q][0], Y = rule.points[q][1];
      modal::eval(ep.poly_degree, X, Y, pv.data());
      modal::eval(eq.poly_degree, X, Y, qv.data());
      double vh = 0.0, s1 = 0.0, s2 = 0.0;
      for (int i = 0; i < np; ++i) vh += vc[i] * pv[i];
      for (int i = 0; i < nqb; ++i) {
        s1 += sc[i] * qv[i];
        s2 += sc[nqb + i] * qv[i];
      }
      Point2 p = mesh.map_point(e, X, Y);
      ExactSolution ex = exact_solution(t, p.x, p.y);
      double dv = vh - ex.v;
      double ds1 = s1 - ex.sigma_x, ds2 = s2 - ex.sigma_y;
      double w = rule.weights[q] * det;
      acc_v += dv * dv * w;
      acc_s += (ds1 * ds1 + ds2 * ds2) * w;
      rep.linf_velocity = std::max(rep.linf_velocity, std::abs(dv));
      rep.linf_stress =
          std::max(rep.linf_stress, std::sqrt(ds1 * ds1 + ds2 * ds2));
    }
  }
  rep.l2_velocity = std::sqrt(acc_v);
  rep.l2_stress = std::sqrt(acc_s);
  return rep;
}

CaseResult run_case(const CaseSpec& spec) {
  Mesh mesh = build_structured_mesh(spec.n);
  auto [ep, eq] = make_spaces(mesh, spec.r);
  BoundaryData bd{exact_velocity_field(), exact_stress_field()};
  SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0), bd, spec.theta,
                         spec.bc);

  StateVector x0;
  x0.v = project_field(ep, exact_velocity_field(), 0.0).x;
  x0.s = project_field(eq, exact_stress_field(), 0.0).x;

  IntegratorConfig cfg;
  cfg.dt = spec.dt;
  cfg.t_final = spec.t_final;
  cfg.cfl_coefficient = spec.cfl;
  IntegrationResult res = integrate(sys, x0, cfg, spec.r);

  CaseResult out;
  out.errors = compute_errors(res.state, res.t_final, ep, eq);
  out.energy_trace = std::move(res.trace);
  out.steps = res.steps;
  out.dt = spec.dt > 0.0 ? spec.dt : cfg.auto_dt(mesh.h, spec.r);
  return out;
}

ConvergenceTable run_convergence(int r, const std::vector<double>& thetas,
                                 const std::vector<int>& levels,
                                 const CaseSpec& base) {
  ConvergenceTable table;
  table.r = r;
  for (double th : thetas) {
    std::optional<double> prev_v, prev_s;
    for (int n : levels) {
      CaseSpec spec = base;
      spec.r = r;
      spec.theta = th;
      spec.n = n;
      CaseResult cr = run_case(spec);
      ConvergenceRow row;
      row.theta = th;
      row.h = 2.0 / n;
      row.l2_v = cr.errors.l2_velocity;
      row.l2_s = cr.errors.l2_stress;
      row.linf_v = cr.errors.linf_velocity;
      row.linf_s = cr.errors.linf_stress;
      if (prev_v) {
        row.order_v = std::log2(*prev_v / row.l2_v);
        row.order_s = std::log2(*prev_s / row.l2_s);
      }
      prev_v = row.l2_v;
      prev_s = row.l2_s;
      table.rows.push_back(row);
    }
  }
  return table;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

}  // namespace

void write_convergence_csv(const ConvergenceTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "theta,h,l2_V,order_V,l2_sigma,order_sigma,linf_V,linf_sigma\n";
  for (const auto& r : table.rows) {
    out << fmt(r.theta) << "," << fmt(r.h) << "," << fmt(r.l2_v) << ",";
    if (r.order_v) out << fmt(*r.order_v);
    out << "," << fmt(r.l2_s) << ",";
    if (r.order_s) out << fmt(*r.order_s);
    out << "," << fmt(r.linf_v) << "," << fmt(r.linf_s) << "\n";
  }
}

void write_energy_csv(const std::vector<EnergyTraceRow>& trace,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,E_h,boundary_power\n";
  for (const auto& row : trace)
    out << fmt(row.t) << "," << fmt(row.energy) << "," << fmt(row.boundary_power)
        << "\n";
}

void write_convergence_svg(const ConvergenceTable& table, const std::string& path) {
  // log-log plot of L2 errors vs h with an r+1 reference slope
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  const double W = 640, H = 480, ml = 70, mr = 20, mt = 30, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& r : table.rows) {
    xmin = std::min(xmin, r.h);
    xmax = std::max(xmax, r.h);
    for (double v : {r.l2_v, r.l2_s}) {
      if (v <= 0.0) continue;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!(xmin < xmax)) xmax = xmin * 2.0;
  if (!(ymin < ymax)) ymax = ymin * 2.0 + 1e-300;
  double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  double ly0 = std::log10(ymin) - 0.2, ly1 = std::log10(ymax) + 0.2;
  auto px = [&](double h) {
    return ml + (std::log10(h) - lx0) / (lx1 - lx0) * (W - ml - mr);
  };
  auto py = [&](double e) {
    return H - mb - (std::log10(e) - ly0) / (ly1 - ly0) * (H - mt - mb);
  };
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='14'>"
      << "L2 error vs h (r=" << table.r << ")</text>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  // group rows by theta
  std::vector<double> thetas;
  for (const auto& r : table.rows)
    if (thetas.empty() || std::abs(thetas.back() - r.theta) > 1e-15)
      thetas.push_back(r.theta);
  int ci = 0;
  for (double th : thetas) {
    for (int field = 0; field < 2; ++field) {
      std::ostringstream pts;
      for (const auto& r : table.rows) {
        if (std::abs(r.theta - th) > 1e-15) continue;
        double e = field == 0 ? r.l2_v : r.l2_s;
        pts << px(r.h) << "," << py(e) << " ";
      }
      out << "<polyline fill='none' stroke='" << colors[ci % 5]
          << "' stroke-width='1.5'" << (field ? " stroke-dasharray='5,3'" : "")
          << " points='" << pts.str() << "'/>\n";
    }
    out << "<text x='" << W - mr - 150 << "' y='" << mt + 16 * (ci + 1)
        << "' font-size='12' fill='" << colors[ci % 5] << "'>theta=" << th
        << " (solid V, dashed sigma)</text>\n";
    ++ci;
  }
  // reference slope r+1 through the last point
  if (!table.rows.empty()) {
    const auto& last = table.rows.back();
    double p = table.r + 1.0;
    double e0 = last.l2_v * std::pow(xmax / last.h, p);
    out << "<line x1='" << px(xmax) << "' y1='" << py(e0) << "' x2='" << px(xmin)
        << "' y2='" << py(e0 * std::pow(xmin / xmax, p))
        << "' stroke='gray' stroke-dasharray='2,4'/>\n";
    out << "<text x='" << ml + 6 << "' y='" << mt + 14
        << "' font-size='12' fill='gray'>slope " << p << "</text>\n";
  }
  out << "<text x='" << W / 2 << "' y='" << H - 12
      << "' text-anchor='middle' font-size='12'>h (log)</text>\n";
  out << "</svg>\n";
}

CaseSpec parse_config(const std::string& path, const CaseSpec& defaults) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  CaseSpec spec = defaults;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "r")
      spec.r = std::stoi(val);
    else if (key == "theta")
      spec.theta = std::stod(val);
    else if (key == "n")
      spec.n = std::stoi(val);
    else if (key == "t_final")
      spec.t_final = std::stod(val);
    else if (key == "dt")
      spec.dt = (val == "auto") ? 0.0 : std::stod(val);
    else if (key == "cfl")
      spec.cfl = std::stod(val);
    else if (key == "bc")
      spec.bc = (val == "trace") ? BcMode::trace : BcMode::data;
    else
      throw std::runtime_error("unknown config key: " + key);
  }
  return spec;
}

}  // namespace phdg
