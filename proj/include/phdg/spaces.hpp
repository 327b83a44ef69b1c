#pragma once

#include <array>
#include <functional>
#include <vector>

#include "phdg/mesh.hpp"

namespace phdg {

using ScalarField = std::function<double(double t, double x, double y)>;
using VectorField = std::function<std::array<double, 2>(double t, double x, double y)>;

/// Elementwise polynomial space with no inter-element continuity.
/// form_rank 0: scalars of degree poly_degree (modal basis).
/// form_rank 1: 1-forms stored componentwise in physical coordinates;
/// dof layout per element is [x-component coeffs, y-component coeffs].
struct BrokenSpace {
  int form_rank = 0;
  int poly_degree = 0;
  int dofs_per_element = 0;
  long total_dofs = 0;
  const Mesh* mesh = nullptr;

  int scalar_block() const;  // modal dimension of one component
  long offset(int element) const {
    return static_cast<long>(element) * dofs_per_element;
  }
};

struct FieldCoeffs {
  const BrokenSpace* space = nullptr;
  std::vector<double> x;

  explicit FieldCoeffs(const BrokenSpace& s)
      : space(&s), x(static_cast<std::size_t>(s.total_dofs), 0.0) {}
};

/// Case 1 spaces for the wave configuration (n=2, p=2, q=1):
/// E_p = broken scalars of degree r, E_q = broken 1-forms of degree r+1.
/// Throws for r < 0 or r > 4.
std::pair<BrokenSpace, BrokenSpace> make_spaces(const Mesh& mesh, int r);

/// Elementwise L2-orthogonal projection at time t.
FieldCoeffs project_field(const BrokenSpace& space, const ScalarField& f, double t);
FieldCoeffs project_field(const BrokenSpace& space, const VectorField& f, double t);

/// Basis expansion value at a reference point of an element. For 1-forms
/// the two physical components are returned.
double eval_field_scalar(const FieldCoeffs& c, int element, double xhat, double yhat);
std::array<double, 2> eval_field_vector(const FieldCoeffs& c, int element,
                                        double xhat, double yhat);

/// L2 norm of the difference between a coefficient field and an analytic
/// field, by elementwise quadrature of the stated exactness degree.
double l2_error(const FieldCoeffs& c, const ScalarField& f, double t, int quad_degree);
double l2_error(const FieldCoeffs& c, const VectorField& f, double t, int quad_degree);

}  // namespace phdg
