#pragma once

#include <array>
#include <vector>

namespace phdg {

/// Orthonormal modal (Dubiner) basis on the reference triangle with
/// vertices (0,0), (1,0), (0,1). Basis functions are indexed by total
/// degree blocks; size(degree) = (degree+1)(degree+2)/2.
namespace modal {

int space_dim(int degree);

/// Values of all basis functions of the degree-`degree` space at (x,y).
void eval(int degree, double x, double y, double* out);

/// Gradients (d/dx, d/dy) of all basis functions at (x,y).
void grad(int degree, double x, double y, double* out_dx, double* out_dy);

/// Differentiation matrices in the modal basis: coefficients of the
/// x- (resp. y-) derivative of a degree-`degree` expansion, expressed in
/// the same basis. Row-major, size n*n with n = space_dim(degree).
const std::vector<double>& diff_x(int degree);
const std::vector<double>& diff_y(int degree);

}  // namespace modal

/// Polynomial 0-form on the reference triangle, coefficients in the
/// orthonormal modal basis.
struct PolyScalar {
  int degree = 0;
  std::vector<double> coeffs;

  PolyScalar() : coeffs(1, 0.0) {}
  explicit PolyScalar(int deg);
  double eval(double x, double y) const;
};

/// Polynomial 1-form sigma_x dx + sigma_y dy; both components share the
/// same degree bound.
struct Poly1Form {
  PolyScalar comp_x, comp_y;

  Poly1Form() = default;
  explicit Poly1Form(int deg) : comp_x(deg), comp_y(deg) {}
  int degree() const { return comp_x.degree; }
};

/// Polynomial 2-form (density) rho dx^dy.
struct Poly2Form {
  PolyScalar density;
};

/// Polynomial on the reference edge [0,1], coefficients in the
/// orthonormal shifted Legendre basis.
struct EdgePoly {
  int degree = 0;
  std::vector<double> coeffs;

  EdgePoly() : coeffs(1, 0.0) {}
  explicit EdgePoly(int deg);
  double eval(double s) const;
};

namespace edge_modal {
int space_dim(int degree);
void eval(int degree, double s, double* out);
}  // namespace edge_modal

/// Exterior derivative of a 0-form: d nu = (d nu/dx) dx + (d nu/dy) dy.
Poly1Form d0(const PolyScalar& nu);

/// Exterior derivative of a 1-form: density = d sigma_y/dx - d sigma_x/dy.
Poly2Form d1(const Poly1Form& sigma);

/// Wedge of two 1-forms: density = lambda_x mu_y - lambda_y mu_x.
Poly2Form wedge11(const Poly1Form& lambda, const Poly1Form& mu);

/// Product of two scalars (exact, degree adds).
PolyScalar multiply(const PolyScalar& a, const PolyScalar& b);

double integrate(const Poly2Form& omega);

/// Reference edges: 0: (0,0)->(1,0), 1: (1,0)->(0,1), 2: (0,1)->(0,0).
/// Edge parametrization gamma(s) = a + s (b - a), s in [0,1].
std::array<std::array<double, 2>, 2> edge_endpoints(int edge);

/// Pullback of a 1-form along the (possibly reversed) edge
/// parametrization: result(s) = sigma(gamma(s)) . gamma'(s). Reversing
/// the direction both reverses the parameter and flips the sign.
EdgePoly trace_1form(const Poly1Form& sigma, int edge, int direction);

/// Restriction of a 0-form to an edge; reversing the direction only
/// reverses the parameter.
EdgePoly trace_0form(const PolyScalar& nu, int edge, int direction);

/// Tangential derivative of an edge polynomial, d/ds.
EdgePoly edge_d(const EdgePoly& p);

/// Covariant transform of 1-form components under an affine map with
/// Jacobian B: reference components = B^T . physical components. The
/// input holds the physical components already composed with the map
/// (i.e. expressed on the reference triangle).
Poly1Form pullback_1form(const Poly1Form& sigma_at_mapped, const std::array<std::array<double, 2>, 2>& B);

/// Composition p(F(x)) for the affine map F(x) = x0 + B x, as an exact
/// coefficient operation.
PolyScalar compose_affine(const PolyScalar& p, const std::array<std::array<double, 2>, 2>& B,
                          const std::array<double, 2>& x0);

}  // namespace phdg
