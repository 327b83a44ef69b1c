#include "phdg/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "phdg/polyforms.hpp"
#include "phdg/quadrature.hpp"

namespace phdg {

int BrokenSpace::scalar_block() const {
  return modal::space_dim(poly_degree);
}

std::pair<BrokenSpace, BrokenSpace> make_spaces(const Mesh& mesh, int r) {
  if (r < 0) throw std::invalid_argument("make_spaces: r must be >= 0");
  if (r > 4) throw std::invalid_argument("make_spaces: r > 4 unsupported");
  BrokenSpace ep, eq;
  ep.form_rank = 0;
  ep.poly_degree = r;
  ep.dofs_per_element = modal::space_dim(r);
  ep.total_dofs = static_cast<long>(ep.dofs_per_element) * mesh.elements.size();
  ep.mesh = &mesh;
  eq.form_rank = 1;
  eq.poly_degree = r + 1;
  eq.dofs_per_element = 2 * modal::space_dim(r + 1);
  eq.total_dofs = static_cast<long>(eq.dofs_per_element) * mesh.elements.size();
  eq.mesh = &mesh;
  return {ep, eq};
}

FieldCoeffs project_field(const BrokenSpace& space, const ScalarField& f, double t) {
  if (space.form_rank != 0)
    throw std::invalid_argument("project_field: scalar field on a 1-form space");
  FieldCoeffs out(space);
  const Mesh& mesh = *space.mesh;
  int nb = space.scalar_block();
  QuadRule rule = triangle_rule(std::min(2 * space.poly_degree + 6, 20));
  std::vector<double> vals(nb);
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    double* c = out.x.data() + space.offset(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double X = rule.points[q][0], Y = rule.points[q][1];
      Point2 p = mesh.map_point(e, X, Y);
      modal::eval(space.poly_degree, X, Y, vals.data());
      double fv = f(t, p.x, p.y) * rule.weights[q];
      for (int i = 0; i < nb; ++i) c[i] += fv * vals[i];
    }
    // orthonormal reference basis: element mass is jacobian_det * I
  }
  return out;
}

FieldCoeffs project_field(const BrokenSpace& space, const VectorField& f, double t) {
  if (space.form_rank != 1)
    throw std::invalid_argument("project_field: vector field on a 0-form space");
  FieldCoeffs out(space);
  const Mesh& mesh = *space.mesh;
  int nb = space.scalar_block();
  QuadRule rule = triangle_rule(std::min(2 * space.poly_degree + 6, 20));
  std::vector<double> vals(nb);
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    double* c = out.x.data() + space.offset(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double X = rule.points[q][0], Y = rule.points[q][1];
      Point2 p = mesh.map_point(e, X, Y);
      modal::eval(space.poly_degree, X, Y, vals.data());
      auto fv = f(t, p.x, p.y);
      for (int i = 0; i < nb; ++i) {
        c[i] += fv[0] * rule.weights[q] * vals[i];
        c[nb + i] += fv[1] * rule.weights[q] * vals[i];
      }
    }
  }
  return out;
}

double eval_field_scalar(const FieldCoeffs& c, int element, double xhat, double yhat) {
  const BrokenSpace& s = *c.space;
  if (s.form_rank != 0) throw std::invalid_argument("eval_field_scalar: rank mismatch");
  if (element < 0 || element >= static_cast<int>(s.mesh->elements.size()))
    throw std::out_of_range("eval_field_scalar: element out of range");
  int nb = s.scalar_block();
  std::vector<double> vals(nb);
  modal::eval(s.poly_degree, xhat, yhat, vals.data());
  const double* co = c.x.data() + s.offset(element);
  double acc = 0.0;
  for (int i = 0; i < nb; ++i) acc += co[i] * vals[i];
  return acc;
}

std::array<double, 2> eval_field_vector(const FieldCoeffs& c, int element,
                                        double xhat, double yhat) {
  const BrokenSpace& s = *c.space;
  if (s.form_rank != 1) throw std::invalid_argument("eval_field_vector: rank mismatch");
  if (element < 0 || element >= static_cast<int>(s.mesh->elements.size()))
    throw std::out_of_range("eval_field_vector: element out of range");
  int nb = s.scalar_block();
  std::vector<double> vals(nb);
  modal::eval(s.poly_degree, xhat, yhat, vals.data());
  const double* co = c.x.data() + s.offset(element);
  double ax = 0.0, ay = 0.0;
  for (int i = 0; i < nb; ++i) {
    ax += co[i] * vals[i];
    ay += co[nb + i] * vals[i];
  }
  return {ax, ay};
}

double l2_error(const FieldCoeffs& c, const ScalarField& f, double t, int quad_degree) {
  const BrokenSpace& s = *c.space;
  const Mesh& mesh = *s.mesh;
  QuadRule rule = triangle_rule(quad_degree);
  int nb = s.scalar_block();
  std::vector<double> vals(nb);
  double acc = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    double det = mesh.elements[e].jacobian_det;
    const double* co = c.x.data() + s.offset(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double X = rule.points[q][0], Y = rule.points[q][1];
      modal::eval(s.poly_degree, X, Y, vals.data());
      double vh = 0.0;
      for (int i = 0; i < nb; ++i) vh += co[i] * vals[i];
      Point2 p = mesh.map_point(e, X, Y);
      double d = vh - f(t, p.x, p.y);
      acc += d * d * rule.weights[q] * det;
    }
  }
  return std::sqrt(acc);
}

double l2_error(const FieldCoeffs& c, const VectorField& f, double t, int quad_degree) {
  const BrokenSpace& s = *c.space;
  const Mesh& mesh = *s.mesh;
  QuadRule rule = triangle_rule(quad_degree);
  int nb = s.scalar_block();
  std::vector<double> vals(nb);
  double acc = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    double det = mesh.elements[e].jacobian_det;
    const double* co = c.x.data() + s.offset(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double X = rule.points[q][0], Y = rule.points[q][1];
      modal::eval(s.poly_degree, X, Y, vals.data());
      double ax = 0.0, ay = 0.0;
      for (int i = 0; i < nb; ++i) {
        ax += co[i] * vals[i];
        ay += co[nb + i] * vals[i];
      }
      Point2 p = mesh.map_point(e, X, Y);
      auto fv = f(t, p.x, p.y);
      double dx = ax - fv[0], dy = ay - fv[1];
      acc += (dx * dx + dy * dy) * rule.weights[q] * det;
    }
  }
  return std::sqrt(acc);
}

}  // namespace phdg
