#include "phdg/mesh.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace phdg {

int Mesh::num_interior_faces() const {
  int c = 0;
  for (const auto& f : faces) c += f.interior() ? 1 : 0;
  return c;
}

int Mesh::num_exterior_faces() const {
  return static_cast<int>(faces.size()) - num_interior_faces();
}

Point2 Mesh::map_point(int e, double xhat, double yhat) const {
  const Element& el = elements.at(e);
  const Point2& v0 = vertices[el.vertex_ids[0]];
  return {v0.x + el.jacobian[0][0] * xhat + el.jacobian[0][1] * yhat,
          v0.y + el.jacobian[1][0] * xhat + el.jacobian[1][1] * yhat};
}

std::array<double, 2> Mesh::unmap_point(int e, const Point2& p) const {
  const Element& el = elements.at(e);
  const Point2& v0 = vertices[el.vertex_ids[0]];
  double rx = p.x - v0.x, ry = p.y - v0.y;
  const auto& B = el.jacobian;
  double inv = 1.0 / el.jacobian_det;
  return {inv * (B[1][1] * rx - B[0][1] * ry),
          inv * (-B[1][0] * rx + B[0][0] * ry)};
}

std::array<double, 2> Mesh::outward_normal(int elem, int local_edge) const {
  const Element& el = elements.at(elem);
  int a = el.vertex_ids[local_edge];
  int b = el.vertex_ids[(local_edge + 1) % 3];
  double tx = vertices[b].x - vertices[a].x;
  double ty = vertices[b].y - vertices[a].y;
  double len = std::hypot(tx, ty);
  // counterclockwise element: outward normal is the induced tangent
  // rotated by -90 degrees
  return {ty / len, -tx / len};
}

Mesh build_structured_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_structured_mesh: n must be >= 1");
  Mesh mesh;
  mesh.n = n;
  mesh.h = 2.0 / n;
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  mesh.vertices.resize(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices[vid(i, j)] = {-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n};

  mesh.elements.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // diagonal from (i,j) to (i+1,j+1), both triangles counterclockwise
      mesh.elements.push_back({{vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)}});
      mesh.elements.push_back({{vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)}});
    }

  for (auto& el : mesh.elements) {
    const Point2& a = mesh.vertices[el.vertex_ids[0]];
    const Point2& b = mesh.vertices[el.vertex_ids[1]];
    const Point2& c = mesh.vertices[el.vertex_ids[2]];
    el.jacobian = {{{b.x - a.x, c.x - a.x}, {b.y - a.y, c.y - a.y}}};
    el.jacobian_det = el.jacobian[0][0] * el.jacobian[1][1] -
                      el.jacobian[0][1] * el.jacobian[1][0];
    if (el.jacobian_det <= 0.0)
      throw std::runtime_error("element with non-positive Jacobian");
  }

  std::map<std::array<int, 2>, Face> fmap;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    const auto& vids = mesh.elements[e].vertex_ids;
    for (int le = 0; le < 3; ++le) {
      int a = vids[le], b = vids[(le + 1) % 3];
      std::array<int, 2> key = {std::min(a, b), std::max(a, b)};
      int sign = (a < b) ? 1 : -1;  // induced traversal vs global lo->hi
      auto& f = fmap[key];
      if (f.left_element < 0) {
        f.vertex_ids = key;
        f.left_element = e;
        f.local_edge_in_left = le;
        f.sign_left = sign;
      } else {
        f.right_element = e;
        f.local_edge_in_right = le;
        f.sign_right = sign;
        if (f.sign_left < 0) {
          // keep the +1 element on the left
          std::swap(f.left_element, *f.right_element);
          std::swap(f.local_edge_in_left, f.local_edge_in_right);
          std::swap(f.sign_left, f.sign_right);
        }
      }
    }
  }
  mesh.faces.reserve(fmap.size());
  for (auto& [key, f] : fmap) {
    const Point2& a = mesh.vertices[key[0]];
    const Point2& b = mesh.vertices[key[1]];
    f.length = std::hypot(b.x - a.x, b.y - a.y);
    mesh.faces.push_back(f);
  }
  return mesh;
}

FaceGeometry face_geometry(const Mesh& mesh, int face_id) {
  if (face_id < 0 || face_id >= static_cast<int>(mesh.faces.size()))
    throw std::out_of_range("face_geometry: face id out of range");
  const Face& f = mesh.faces[face_id];
  const Point2& a = mesh.vertices[f.vertex_ids[0]];
  const Point2& b = mesh.vertices[f.vertex_ids[1]];
  FaceGeometry g;
  g.length = std::hypot(b.x - a.x, b.y - a.y);
  g.tangent = {(b.x - a.x) / g.length, (b.y - a.y) / g.length};
  g.midpoint = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  return g;
}

void write_vtk(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot open " + path);
  out << "# vtk DataFile Version 3.0\nphdg mesh\nASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& v : mesh.vertices) out << v.x << " " << v.y << " 0\n";
  out << "CELLS " << mesh.elements.size() << " " << 4 * mesh.elements.size()
      << "\n";
  for (const auto& e : mesh.elements)
    out << "3 " << e.vertex_ids[0] << " " << e.vertex_ids[1] << " "
        << e.vertex_ids[2] << "\n";
  out << "CELL_TYPES " << mesh.elements.size() << "\n";
  for (std::size_t i = 0; i < mesh.elements.size(); ++i) out << "5\n";
}

}  // namespace phdg
