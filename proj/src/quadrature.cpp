#include "phdg/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <stdexcept>

namespace phdg {

namespace {

// Golub-Welsch nodes/weights for the Jacobi weight (1-x)^a (1+x)^b on [-1,1].
void gauss_jacobi(int n, double a, double b, std::vector<double>& x,
                  std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double s = 2.0 * k + a + b;
    double diag;
    if (k == 0)
      diag = (b - a) / (a + b + 2.0);
    else
      diag = (b * b - a * a) / (s * (s + 2.0));
    J(k, k) = diag;
    if (k == 1) {
      double beta = 4.0 * (1.0 + a) * (1.0 + b) /
                    ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
      J(1, 0) = J(0, 1) = std::sqrt(beta);
    } else if (k >= 2) {
      double beta = 4.0 * k * (k + a) * (k + b) * (k + a + b) /
                    (s * s * (s + 1.0) * (s - 1.0));
      J(k, k - 1) = J(k - 1, k) = std::sqrt(beta);
    }
  }
  double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) *
               std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(n);
  w.resize(n);
  for (int k = 0; k < n; ++k) {
    x[k] = es.eigenvalues()(k);
    double v = es.eigenvectors()(0, k);
    w[k] = mu0 * v * v;
  }
}

QuadRule build_triangle(int deg) {
  // collapsed (Duffy) product rule: x = u(1-v), y = v with
  // u from Gauss-Legendre and v from Gauss-Jacobi(1,0); the Jacobi
  // weight absorbs the (1-v) area factor exactly.
  int n = deg / 2 + 1;
  std::vector<double> xg, wg, xj, wj;
  gauss_jacobi(n, 0.0, 0.0, xg, wg);
  gauss_jacobi(n, 1.0, 0.0, xj, wj);

  std::vector<std::array<double, 2>> pts;
  std::vector<double> wts;
  for (int i = 0; i < n; ++i) {
    double u = 0.5 * (xg[i] + 1.0), wu = 0.5 * wg[i];
    for (int j = 0; j < n; ++j) {
      double v = 0.5 * (xj[j] + 1.0), wv = 0.25 * wj[j];
      pts.push_back({u * (1.0 - v), v});
      wts.push_back(wu * wv);
    }
  }

  // average over the six barycentric permutations; each permuted rule is
  // exact, so the symmetrized rule is exact and fully symmetric.
  QuadRule rule;
  rule.exact_degree = deg;
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (std::size_t q = 0; q < pts.size(); ++q) {
    double l[3] = {1.0 - pts[q][0] - pts[q][1], pts[q][0], pts[q][1]};
    for (auto& p : perms) {
      // vertices (0,0),(1,0),(0,1): x = lambda_1, y = lambda_2
      rule.points.push_back({l[p[1]], l[p[2]]});
      rule.weights.push_back(wts[q] / 6.0);
    }
  }
  return rule;
}

QuadRule build_edge(int deg) {
  int n = deg / 2 + 1;
  std::vector<double> x, w;
  gauss_jacobi(n, 0.0, 0.0, x, w);
  QuadRule rule;
  rule.exact_degree = deg;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back({0.5 * (x[i] + 1.0), 0.0});
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

}  // namespace

QuadRule triangle_rule(int exact_degree) {
  if (exact_degree < 0 || exact_degree > 20)
    throw std::invalid_argument("triangle_rule: unsupported degree");
  static std::map<int, QuadRule> cache;
  auto it = cache.find(exact_degree);
  if (it == cache.end())
    it = cache.emplace(exact_degree, build_triangle(exact_degree)).first;
  return it->second;
}

QuadRule edge_rule(int exact_degree) {
  if (exact_degree < 0 || exact_degree > 41)
    throw std::invalid_argument("edge_rule: unsupported degree");
  static std::map<int, QuadRule> cache;
  auto it = cache.find(exact_degree);
  if (it == cache.end())
    it = cache.emplace(exact_degree, build_edge(exact_degree)).first;
  return it->second;
}

}  // namespace phdg
