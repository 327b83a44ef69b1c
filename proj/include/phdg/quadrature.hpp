#pragma once

#include <array>
#include <vector>

namespace phdg {

/// Quadrature rule on a reference domain. Triangle rules store (x,y)
/// reference coordinates on the unit triangle (0,0),(1,0),(0,1); edge
/// rules store the parameter s on [0,1] in point[0].
struct QuadRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return points.size(); }
};

/// Symmetric positive rule on the reference triangle, exact for all
/// polynomials up to `exact_degree`. Built from a collapsed-coordinate
/// Gauss product rule averaged over the six vertex permutations, so the
/// point set is invariant under the symmetry group of the triangle.
/// Throws std::invalid_argument for degrees outside [0, 20].
QuadRule triangle_rule(int exact_degree);

/// Gauss-Legendre rule on [0,1], exact up to `exact_degree`.
QuadRule edge_rule(int exact_degree);

}  // namespace phdg
