#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace phdg {

struct Point2 {
  double x = 0.0, y = 0.0;
};

/// Triangle with vertex indices ordered counterclockwise; jacobian is the
/// matrix B of the affine map x = v0 + B xhat from the reference triangle
/// (0,0),(1,0),(0,1).
struct Element {
  std::array<int, 3> vertex_ids{};
  std::array<std::array<double, 2>, 2> jacobian{};
  double jacobian_det = 0.0;
};

/// Mesh face with a global direction (lower vertex id -> higher).
/// For interior faces the left element is the one whose induced
/// (counterclockwise) boundary orientation agrees with the global
/// direction, so sign_left = +1 and sign_right = -1. Exterior faces keep
/// their single element in the left slot with its actual sign.
struct Face {
  std::array<int, 2> vertex_ids{};
  int left_element = -1;
  std::optional<int> right_element;
  int local_edge_in_left = -1;
  int local_edge_in_right = -1;
  int sign_left = 0;
  int sign_right = 0;
  double length = 0.0;

  bool interior() const { return right_element.has_value(); }
};

struct Mesh {
  std::vector<Point2> vertices;
  std::vector<Element> elements;
  std::vector<Face> faces;
  double h = 0.0;  // axis-aligned cell edge of the structured grid
  int n = 0;       // cells per axis

  int num_interior_faces() const;
  int num_exterior_faces() const;

  /// Physical image of a reference point (xhat, yhat) in element e.
  Point2 map_point(int e, double xhat, double yhat) const;

  /// Reference coordinates of a physical point within element e.
  std::array<double, 2> unmap_point(int e, const Point2& p) const;

  /// Outward unit normal of element `elem` on its local edge `local_edge`.
  std::array<double, 2> outward_normal(int elem, int local_edge) const;
};

/// Uniform criss-cross triangulation of [-1,1]^2 with all diagonals in
/// the same direction; h = 2/n. Throws std::invalid_argument for n < 1.
Mesh build_structured_mesh(int n);

struct FaceGeometry {
  std::array<double, 2> tangent{};  // unit, along the global direction
  Point2 midpoint{};
  double length = 0.0;
};

FaceGeometry face_geometry(const Mesh& mesh, int face_id);

/// Legacy-ASCII VTK export (points + triangle connectivity).
void write_vtk(const Mesh& mesh, const std::string& path);

}  // namespace phdg
