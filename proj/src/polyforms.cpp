#include "phdg/polyforms.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "phdg/quadrature.hpp"

namespace phdg {

namespace {

constexpr int kMaxDegree = 24;

// Jacobi polynomial P_n^{(a,b)} via the standard three-term recurrence.
double jacobi(int n, double a, double b, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = 0.5 * ((a - b) + (a + b + 2.0) * x);
  for (int k = 2; k <= n; ++k) {
    double s = 2.0 * k + a + b;
    double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    double c2 = (s - 1.0) * (a * a - b * b);
    double c3 = (s - 2.0) * (s - 1.0) * s;
    double c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double jacobi_deriv(int n, double a, double b, double x) {
  if (n == 0) return 0.0;
  return 0.5 * (n + a + b + 1.0) * jacobi(n - 1, a + 1.0, b + 1.0, x);
}

inline int tri_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

// Basis enumeration: total-degree blocks d = 0..degree, within a block
// m = d..0 (m indexes the Legendre factor in the collapsed coordinate a).
struct ModeIndex {
  int m, k;  // phi_{m,k}, total degree m + k
};

std::vector<ModeIndex> mode_table(int degree) {
  std::vector<ModeIndex> t;
  t.reserve(tri_dim(degree));
  for (int d = 0; d <= degree; ++d)
    for (int m = d; m >= 0; --m) t.push_back({m, d - m});
  return t;
}

double mode_norm(int m, int k) {
  return std::sqrt(2.0 * (2.0 * m + 1.0) * (k + m + 1.0));
}

// phi_{m,k}(x,y) = N P_m(a) (1-y)^m P_k^{(2m+1,0)}(b),
// a = 2x/(1-y) - 1, b = 2y - 1.
void eval_modes(int degree, double x, double y, double* out) {
  const auto modes = mode_table(degree);
  double oney = 1.0 - y;
  if (oney < 1e-14) oney = 1e-14;  // top vertex: (1-y)^m factor controls the limit
  double a = 2.0 * x / oney - 1.0;
  double b = 2.0 * y - 1.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    int m = modes[i].m, k = modes[i].k;
    out[i] = mode_norm(m, k) * jacobi(m, 0.0, 0.0, a) * std::pow(oney, m) *
             jacobi(k, 2.0 * m + 1.0, 0.0, b);
  }
}

void grad_modes(int degree, double x, double y, double* out_dx, double* out_dy) {
  const auto modes = mode_table(degree);
  double oney = 1.0 - y;
  if (oney < 1e-14) oney = 1e-14;
  double a = 2.0 * x / oney - 1.0;
  double b = 2.0 * y - 1.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    int m = modes[i].m, k = modes[i].k;
    double N = mode_norm(m, k);
    double Pm = jacobi(m, 0.0, 0.0, a);
    double dPm = jacobi_deriv(m, 0.0, 0.0, a);
    double Pk = jacobi(k, 2.0 * m + 1.0, 0.0, b);
    double dPk = jacobi_deriv(k, 2.0 * m + 1.0, 0.0, b);
    double pm1 = (m >= 1) ? std::pow(oney, m - 1) : 0.0;
    double pw = std::pow(oney, m);
    out_dx[i] = N * 2.0 * dPm * pm1 * Pk;
    out_dy[i] = N * (dPm * (1.0 + a) * pm1 * Pk - m * Pm * pm1 * Pk +
                     2.0 * Pm * pw * dPk);
  }
}

// exact projection of (derivative of basis j) onto basis i
std::vector<double> build_diff(int degree, bool x_dir) {
  int n = tri_dim(degree);
  std::vector<double> D(static_cast<std::size_t>(n) * n, 0.0);
  QuadRule rule = triangle_rule(std::min(2 * degree, 20));
  std::vector<double> vals(n), dx(n), dy(n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    double X = rule.points[q][0], Y = rule.points[q][1];
    eval_modes(degree, X, Y, vals.data());
    grad_modes(degree, X, Y, dx.data(), dy.data());
    const double* d = x_dir ? dx.data() : dy.data();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        D[static_cast<std::size_t>(i) * n + j] += rule.weights[q] * vals[i] * d[j];
  }
  // snap quadrature noise in the structural zeros
  double mx = 0.0;
  for (double v : D) mx = std::max(mx, std::abs(v));
  for (double& v : D)
    if (std::abs(v) < 1e-13 * mx) v = 0.0;
  return D;
}

const std::vector<double>& diff_cache(int degree, bool x_dir) {
  if (degree < 0 || degree > kMaxDegree)
    throw std::invalid_argument("modal: degree out of range");
  static std::map<std::pair<int, bool>, std::vector<double>> cache;
  auto key = std::make_pair(degree, x_dir);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_diff(degree, x_dir)).first;
  return it->second;
}

}  // namespace

namespace modal {

int space_dim(int degree) { return tri_dim(degree); }

void eval(int degree, double x, double y, double* out) {
  eval_modes(degree, x, y, out);
}

void grad(int degree, double x, double y, double* out_dx, double* out_dy) {
  grad_modes(degree, x, y, out_dx, out_dy);
}

const std::vector<double>& diff_x(int degree) { return diff_cache(degree, true); }
const std::vector<double>& diff_y(int degree) { return diff_cache(degree, false); }

}  // namespace modal

PolyScalar::PolyScalar(int deg) : degree(deg), coeffs(tri_dim(deg), 0.0) {
  if (deg < 0 || deg > kMaxDegree)
    throw std::invalid_argument("PolyScalar: degree out of range");
}

double PolyScalar::eval(double x, double y) const {
  std::vector<double> vals(coeffs.size());
  eval_modes(degree, x, y, vals.data());
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc += coeffs[i] * vals[i];
  return acc;
}

EdgePoly::EdgePoly(int deg) : degree(deg), coeffs(deg + 1, 0.0) {}

namespace edge_modal {

int space_dim(int degree) { return degree + 1; }

// orthonormal shifted Legendre on [0,1]
void eval(int degree, double s, double* out) {
  double x = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 0; k <= degree; ++k) {
    double pk;
    if (k == 0)
      pk = p0;
    else if (k == 1)
      pk = p1;
    else {
      pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    out[k] = std::sqrt(2.0 * k + 1.0) * pk;
  }
}

}  // namespace edge_modal

double EdgePoly::eval(double s) const {
  std::vector<double> vals(coeffs.size());
  edge_modal::eval(degree, s, vals.data());
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc += coeffs[i] * vals[i];
  return acc;
}

Poly1Form d0(const PolyScalar& nu) {
  int out_deg = std::max(nu.degree - 1, 0);
  Poly1Form res(out_deg);
  const auto& Dx = modal::diff_x(nu.degree);
  const auto& Dy = modal::diff_y(nu.degree);
  int n = tri_dim(nu.degree);
  int nout = tri_dim(out_deg);
  for (int i = 0; i < nout; ++i) {
    double ax = 0.0, ay = 0.0;
    for (int j = 0; j < n; ++j) {
      ax += Dx[static_cast<std::size_t>(i) * n + j] * nu.coeffs[j];
      ay += Dy[static_cast<std::size_t>(i) * n + j] * nu.coeffs[j];
    }
    res.comp_x.coeffs[i] = ax;
    res.comp_y.coeffs[i] = ay;
  }
  return res;
}

Poly2Form d1(const Poly1Form& sigma) {
  int deg = sigma.degree();
  int out_deg = std::max(deg - 1, 0);
  Poly2Form res;
  res.density = PolyScalar(out_deg);
  const auto& Dx = modal::diff_x(deg);
  const auto& Dy = modal::diff_y(deg);
  int n = tri_dim(deg);
  int nout = tri_dim(out_deg);
  for (int i = 0; i < nout; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      acc += Dx[static_cast<std::size_t>(i) * n + j] * sigma.comp_y.coeffs[j] -
             Dy[static_cast<std::size_t>(i) * n + j] * sigma.comp_x.coeffs[j];
    res.density.coeffs[i] = acc;
  }
  return res;
}

PolyScalar multiply(const PolyScalar& a, const PolyScalar& b) {
  int deg = a.degree + b.degree;
  if (deg > kMaxDegree) throw std::invalid_argument("multiply: degree too large");
  PolyScalar res(deg);
  QuadRule rule = triangle_rule(std::min(2 * deg, 20));
  int n = tri_dim(deg);
  std::vector<double> vals(n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    double X = rule.points[q][0], Y = rule.points[q][1];
    eval_modes(deg, X, Y, vals.data());
    double f = a.eval(X, Y) * b.eval(X, Y) * rule.weights[q];
    for (int i = 0; i < n; ++i) res.coeffs[i] += f * vals[i];
  }
  return res;
}

Poly2Form wedge11(const Poly1Form& lambda, const Poly1Form& mu) {
  PolyScalar xy = multiply(lambda.comp_x, mu.comp_y);
  PolyScalar yx = multiply(lambda.comp_y, mu.comp_x);
  Poly2Form res;
  res.density = xy;
  for (std::size_t i = 0; i < res.density.coeffs.size(); ++i)
    res.density.coeffs[i] -= yx.coeffs[i];
  return res;
}

double integrate(const Poly2Form& omega) {
  // first modal function is the constant sqrt(2); integral of phi_0 is
  // sqrt(2) * area = sqrt(2)/2
  return omega.density.coeffs[0] * std::sqrt(2.0) / 2.0;
}

std::array<std::array<double, 2>, 2> edge_endpoints(int edge) {
  switch (edge) {
    case 0: return {{{0.0, 0.0}, {1.0, 0.0}}};
    case 1: return {{{1.0, 0.0}, {0.0, 1.0}}};
    case 2: return {{{0.0, 1.0}, {0.0, 0.0}}};
    default: throw std::invalid_argument("edge index must be 0, 1 or 2");
  }
}

namespace {

template <typename F>
EdgePoly project_edge_fn(int degree, F&& f) {
  EdgePoly res(degree);
  QuadRule rule = edge_rule(2 * degree + 2);
  std::vector<double> vals(degree + 1);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    double s = rule.points[q][0];
    edge_modal::eval(degree, s, vals.data());
    double fv = f(s) * rule.weights[q];
    for (int i = 0; i <= degree; ++i) res.coeffs[i] += fv * vals[i];
  }
  return res;
}

}  // namespace

EdgePoly trace_1form(const Poly1Form& sigma, int edge, int direction) {
  auto ep = edge_endpoints(edge);
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("trace direction must be +1 or -1");
  std::array<double, 2> a = ep[0], b = ep[1];
  if (direction == -1) std::swap(a, b);
  double tx = b[0] - a[0], ty = b[1] - a[1];
  return project_edge_fn(sigma.degree(), [&](double s) {
    double X = a[0] + s * tx, Y = a[1] + s * ty;
    return sigma.comp_x.eval(X, Y) * tx + sigma.comp_y.eval(X, Y) * ty;
  });
}

EdgePoly trace_0form(const PolyScalar& nu, int edge, int direction) {
  auto ep = edge_endpoints(edge);
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("trace direction must be +1 or -1");
  std::array<double, 2> a = ep[0], b = ep[1];
  if (direction == -1) std::swap(a, b);
  double tx = b[0] - a[0], ty = b[1] - a[1];
  return project_edge_fn(nu.degree, [&](double s) {
    return nu.eval(a[0] + s * tx, a[1] + s * ty);
  });
}

EdgePoly edge_d(const EdgePoly& p) {
  int out_deg = std::max(p.degree - 1, 0);
  // project d/ds by quadrature against the orthonormal edge basis
  EdgePoly res(out_deg);
  QuadRule rule = edge_rule(2 * p.degree + 2);
  std::vector<double> vals(out_deg + 1);
  // derivative via finite modal relation: evaluate d/ds by differentiating
  // the Legendre recurrence is overkill; use exact quadrature of p'(s)
  // computed from the chain rule on shifted Legendre derivatives.
  auto deriv = [&](double s) {
    double x = 2.0 * s - 1.0;
    double acc = 0.0;
    for (int k = 1; k <= p.degree; ++k)
      acc += p.coeffs[k] * std::sqrt(2.0 * k + 1.0) *
             jacobi_deriv(k, 0.0, 0.0, x) * 2.0;
    return acc;
  };
  for (std::size_t q = 0; q < rule.size(); ++q) {
    double s = rule.points[q][0];
    edge_modal::eval(out_deg, s, vals.data());
    double fv = deriv(s) * rule.weights[q];
    for (int i = 0; i <= out_deg; ++i) res.coeffs[i] += fv * vals[i];
  }
  return res;
}

Poly1Form pullback_1form(const Poly1Form& sigma_at_mapped,
                         const std::array<std::array<double, 2>, 2>& B) {
  double det = B[0][0] * B[1][1] - B[0][1] * B[1][0];
  if (std::abs(det) < 1e-300)
    throw std::invalid_argument("pullback_1form: singular Jacobian");
  Poly1Form res(sigma_at_mapped.degree());
  const auto& sx = sigma_at_mapped.comp_x.coeffs;
  const auto& sy = sigma_at_mapped.comp_y.coeffs;
  for (std::size_t i = 0; i < sx.size(); ++i) {
    res.comp_x.coeffs[i] = B[0][0] * sx[i] + B[1][0] * sy[i];
    res.comp_y.coeffs[i] = B[0][1] * sx[i] + B[1][1] * sy[i];
  }
  return res;
}

PolyScalar compose_affine(const PolyScalar& p,
                          const std::array<std::array<double, 2>, 2>& B,
                          const std::array<double, 2>& x0) {
  PolyScalar res(p.degree);
  QuadRule rule = triangle_rule(std::min(2 * p.degree, 20));
  int n = tri_dim(p.degree);
  std::vector<double> vals(n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    double X = rule.points[q][0], Y = rule.points[q][1];
    double mx = x0[0] + B[0][0] * X + B[0][1] * Y;
    double my = x0[1] + B[1][0] * X + B[1][1] * Y;
    eval_modes(p.degree, X, Y, vals.data());
    double f = p.eval(mx, my) * rule.weights[q];
    for (int i = 0; i < n; ++i) res.coeffs[i] += f * vals[i];
  }
  return res;
}

}  // namespace phdg
