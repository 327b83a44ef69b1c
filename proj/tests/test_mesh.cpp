#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "phdg/mesh.hpp"

using namespace phdg;

TEST_CASE("smallest split of the square") {
  Mesh m = build_structured_mesh(1);
  CHECK(m.elements.size() == 2);
  CHECK(m.vertices.size() == 4);
  CHECK(m.faces.size() == 5);
  CHECK(m.num_interior_faces() == 1);
  CHECK(m.num_exterior_faces() == 4);
}

TEST_CASE("rejects n = 0") { CHECK_THROWS(build_structured_mesh(0)); }

TEST_CASE("h column of the reported tables") {
  CHECK(build_structured_mesh(32).h == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(build_structured_mesh(64).h == doctest::Approx(0.03125));
  CHECK(build_structured_mesh(128).h == doctest::Approx(0.015625));
}

TEST_CASE("count identities for several n") {
  for (int n : {1, 2, 3, 5, 8}) {
    Mesh m = build_structured_mesh(n);
    int V = static_cast<int>(m.vertices.size());
    int T = static_cast<int>(m.elements.size());
    int E = static_cast<int>(m.faces.size());
    CHECK(V == (n + 1) * (n + 1));
    CHECK(T == 2 * n * n);
    CHECK(E == 3 * n * n + 2 * n);
    CHECK(V - E + T == 1);
    // every element touches 3 faces: 2|F_i| + |F_o| = 3T
    CHECK(2 * m.num_interior_faces() + m.num_exterior_faces() == 3 * T);
  }
}

TEST_CASE("n=2 direct enumeration") {
  Mesh m = build_structured_mesh(2);
  CHECK(m.vertices.size() == 9);
  CHECK(m.faces.size() == 16);
  CHECK(m.elements.size() == 8);
}

TEST_CASE("jacobians positive and identical") {
  Mesh m = build_structured_mesh(4);
  double det0 = m.elements[0].jacobian_det;
  CHECK(det0 > 0.0);
  // det equals twice the element area = h^2
  CHECK(det0 == doctest::Approx(m.h * m.h).epsilon(1e-14));
  for (const auto& e : m.elements) CHECK(e.jacobian_det == det0);
}

TEST_CASE("face orientation invariants") {
  Mesh m = build_structured_mesh(3);
  std::set<std::array<int, 2>> seen;
  for (const auto& f : m.faces) {
    CHECK(f.vertex_ids[0] < f.vertex_ids[1]);
    CHECK(!seen.count(f.vertex_ids));
    seen.insert(f.vertex_ids);
    if (f.interior()) {
      CHECK(f.sign_left == 1);
      CHECK(f.sign_left * f.sign_right == -1);
      CHECK(f.left_element != *f.right_element);
    } else {
      // exterior faces lie on the boundary of the square
      const Point2& a = m.vertices[f.vertex_ids[0]];
      const Point2& b = m.vertices[f.vertex_ids[1]];
      bool on_boundary = (std::abs(std::abs(a.x) - 1) < 1e-14 &&
                          std::abs(a.x - b.x) < 1e-14) ||
                         (std::abs(std::abs(a.y) - 1) < 1e-14 &&
                          std::abs(a.y - b.y) < 1e-14);
      CHECK(on_boundary);
    }
  }
}

TEST_CASE("face geometry") {
  Mesh m = build_structured_mesh(2);
  for (int i = 0; i < static_cast<int>(m.faces.size()); ++i) {
    FaceGeometry g = face_geometry(m, i);
    const Face& f = m.faces[i];
    const Point2& a = m.vertices[f.vertex_ids[0]];
    const Point2& b = m.vertices[f.vertex_ids[1]];
    CHECK(g.length == doctest::Approx(std::hypot(b.x - a.x, b.y - a.y)));
    // tangent points from lower to higher vertex id
    CHECK(g.tangent[0] * (b.x - a.x) + g.tangent[1] * (b.y - a.y) ==
          doctest::Approx(g.length));
    // diagonal faces have length h sqrt(2)
    if (std::abs(b.x - a.x) > 1e-14 && std::abs(b.y - a.y) > 1e-14)
      CHECK(g.length == doctest::Approx(m.h * std::sqrt(2.0)));
  }
  CHECK_THROWS(face_geometry(m, -1));
  CHECK_THROWS(face_geometry(m, 9999));
}

TEST_CASE("global direction rule on a downward edge") {
  // an edge from (0,0) to (0,-1): the global direction is from the lower
  // id; on the structured mesh ids grow with y, so the direction points
  // upward and the unit tangent is (0,1)
  Mesh m = build_structured_mesh(2);
  for (int i = 0; i < static_cast<int>(m.faces.size()); ++i) {
    const Face& f = m.faces[i];
    const Point2& a = m.vertices[f.vertex_ids[0]];
    const Point2& b = m.vertices[f.vertex_ids[1]];
    if (std::abs(a.x) < 1e-14 && std::abs(b.x) < 1e-14 &&
        std::abs(a.y + 1.0) < 1e-14 && std::abs(b.y) < 1e-14) {
      FaceGeometry g = face_geometry(m, i);
      CHECK(g.tangent[0] == doctest::Approx(0.0));
      CHECK(g.tangent[1] == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("outward normals") {
  Mesh m = build_structured_mesh(1);
  // element 0 is the lower triangle (-1,-1),(1,-1),(1,1)
  auto n0 = m.outward_normal(0, 0);  // bottom edge
  CHECK(n0[0] == doctest::Approx(0.0));
  CHECK(n0[1] == doctest::Approx(-1.0));
  auto n1 = m.outward_normal(0, 1);  // right edge
  CHECK(n1[0] == doctest::Approx(1.0));
  CHECK(n1[1] == doctest::Approx(0.0));
  // interior diagonal normals oppose
  auto nd0 = m.outward_normal(0, 2);
  auto nd1 = m.outward_normal(1, 0);
  CHECK(nd0[0] == doctest::Approx(-nd1[0]));
  CHECK(nd0[1] == doctest::Approx(-nd1[1]));
}

TEST_CASE("vtk export") {
  Mesh m = build_structured_mesh(2);
  auto path = std::filesystem::temp_directory_path() / "phdg_mesh_test.vtk";
  write_vtk(m, path.string());
  CHECK(std::filesystem::file_size(path) > 100);
  std::filesystem::remove(path);
}
