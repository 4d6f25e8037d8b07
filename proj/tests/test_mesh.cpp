#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "poro/mesh.hpp"

using namespace poro;

TEST_CASE("single square splits into two triangles") {
  Mesh m = build_structured_simplicial(1, 2);
  CHECK(m.n_elements() == 2);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_facets() == 5);
  CHECK(m.n_boundary_facets() == 4);
}

TEST_CASE("edge count matches an independent enumeration") {
  for (int n : {2, 3, 5}) {
    Mesh m = build_structured_simplicial(n, 2);
    std::set<std::pair<int, int>> edges;
    for (int k = 0; k < m.n_elements(); ++k) {
      auto v = m.element_vertices(k);
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) edges.insert({std::min(v[i], v[j]), std::max(v[i], v[j])});
      }
    }
    CHECK(m.n_elements() == 2 * n * n);
    CHECK(m.n_vertices() == (n + 1) * (n + 1));
    CHECK(static_cast<int>(edges.size()) == m.n_facets());
    CHECK(m.n_facets() == 2 * n * (n + 1) + n * n);
  }
}

TEST_CASE("Kuhn cube has six tetrahedra of volume 1/6") {
  Mesh m = build_structured_simplicial(1, 3);
  CHECK(m.n_elements() == 6);
  CHECK(m.n_vertices() == 8);
  double total = 0.0;
  for (int k = 0; k < 6; ++k) {
    double v = element_geometry(m, k).volume;
    CHECK(v == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    total += v;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("volumes sum to the box volume") {
  Box box{Vec3(-1.0, 0.5, 2.0), Vec3(2.0, 1.75, 2.5)};
  for (int dim : {2, 3}) {
    Mesh m = build_structured_simplicial(4, dim, box);
    double total = 0.0;
    for (int k = 0; k < m.n_elements(); ++k) total += element_geometry(m, k).volume;
    double expected = 3.0 * 1.25 * (dim == 3 ? 0.5 : 1.0);
    CHECK(std::abs(total - expected) <= 1e-13 * expected);
  }
}

TEST_CASE("facet tables are consistent") {
  for (int dim : {2, 3}) {
    Mesh m = build_structured_simplicial(3, dim);
    std::vector<int> seen(m.n_facets(), 0);
    for (int k = 0; k < m.n_elements(); ++k) {
      auto ev = m.element_vertices(k);
      for (int i = 0; i <= dim; ++i) {
        int f = m.element_facets[k][i];
        std::set<int> expect;
        for (int j = 0; j <= dim; ++j) {
          if (j != i) expect.insert(ev[j]);
        }
        auto fv = m.facet_vertices(f);
        CHECK(std::set<int>(fv.begin(), fv.end()) == expect);
        ++seen[f];
      }
    }
    std::map<std::string, int> tags;
    for (int f = 0; f < m.n_facets(); ++f) {
      bool boundary = m.is_boundary(f);
      CHECK(seen[f] == (boundary ? 1 : 2));
      CHECK(boundary == !m.facet_tags[f].empty());
      if (boundary) ++tags[m.facet_tags[f]];
    }
    CHECK(static_cast<int>(tags.size()) == 2 * dim);
    int per_face = dim == 2 ? 3 : 2 * 9;
    for (auto& [tag, count] : tags) CHECK(count == per_face);
  }
}

TEST_CASE("right triangle geometry") {
  std::vector<Vec3> x = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  auto g = simplex_geometry(2, x);
  CHECK(g.volume == doctest::Approx(0.5));
  CHECK(g.facet_areas[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK((g.normals[0] - Vec3(1, 1, 0) / std::sqrt(2.0)).norm() < 1e-15);
  CHECK((g.normals[1] - Vec3(-1, 0, 0)).norm() < 1e-15);
  CHECK((g.normals[2] - Vec3(0, -1, 0)).norm() < 1e-15);
}

TEST_CASE("reference tetrahedron geometry") {
  std::vector<Vec3> x = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  auto g = simplex_geometry(3, x);
  CHECK(g.volume == doctest::Approx(1.0 / 6.0));
  std::multiset<double> areas;
  for (int i = 0; i < 4; ++i) areas.insert(std::round(g.facet_areas[i] * 1e12) / 1e12);
  std::multiset<double> expected = {0.5, 0.5, 0.5, std::round(std::sqrt(3.0) / 2.0 * 1e12) / 1e12};
  CHECK(areas == expected);
}

TEST_CASE("closed surface and barycentric identities on every element") {
  for (int dim : {2, 3}) {
    Mesh m = build_structured_simplicial(3, dim, Box{Vec3(0, 0, 0), Vec3(2, 1, 3)});
    for (int k = 0; k < m.n_elements(); ++k) {
      auto g = element_geometry(m, k);
      Vec3 s = Vec3::Zero(), gl = Vec3::Zero();
      for (int i = 0; i <= dim; ++i) {
        s += g.facet_areas[i] * g.normals[i];
        gl += g.grad_lambda[i];
        CHECK(std::abs(g.normals[i].norm() - 1.0) < 1e-14);
        // Outward: the normal points away from the opposite vertex.
        CHECK(g.normals[i].dot(g.vertices[i] - g.centroid) < 0.0);
      }
      CHECK(s.norm() <= 1e-14);
      CHECK(gl.norm() <= 1e-12);
      CHECK(g.volume > 0.0);
    }
  }
}

TEST_CASE("degenerate input is rejected") {
  std::vector<Vec3> x = {Vec3(0, 0, 0), Vec3(1, 1, 0), Vec3(2, 2, 0)};
  CHECK_THROWS_AS(simplex_geometry(2, x), MeshError);
  CHECK_THROWS_AS(build_structured_simplicial(0, 2), ConfigError);
  CHECK_THROWS_AS(build_structured_simplicial(2, 4), ConfigError);
  CHECK_THROWS_AS(build_structured_simplicial(2, 2, Box{Vec3(0, 0, 0), Vec3(1, 0, 0)}), ConfigError);
}

TEST_CASE("negatively oriented input elements are reoriented") {
  std::vector<Vec3> x = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  Mesh m = build_mesh(2, x, {{0, 2, 1, -1}}, [](const Vec3&, const Vec3& n) { return box_face_tag(n); });
  auto v = m.element_vertices(0);
  Vec3 a = m.vertices[v[1]] - m.vertices[v[0]], b = m.vertices[v[2]] - m.vertices[v[0]];
  CHECK(a.x() * b.y() - a.y() * b.x() > 0.0);
}

TEST_CASE("connectivity") {
  for (int dim : {2, 3}) CHECK(check_connected(build_structured_simplicial(3, dim)));
  Mesh a = build_structured_simplicial(2, 2);
  Mesh b = build_structured_simplicial(2, 2, Box{Vec3(3, 0, 0), Vec3(4, 1, 0)});
  Mesh both = merge_disjoint(a, b);
  CHECK_FALSE(check_connected(both));
  CHECK(count_components(both) == 2);
  std::vector<Vec3> x = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  Mesh single = build_mesh(2, x, {{0, 1, 2, -1}}, [](const Vec3&, const Vec3& n) { return box_face_tag(n); });
  CHECK(check_connected(single));
}

TEST_CASE("structured meshes are quasi-uniform") {
  for (int dim : {2, 3}) {
    for (int n : {1, 4, 7}) CHECK(diameter_ratio(build_structured_simplicial(n, dim)) <= 4.0);
  }
}
