#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "poro/types.hpp"

namespace poro {

// Axis-aligned box; the z extent is ignored for 2D meshes.
struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();
};

// Conforming simplicial mesh with facet topology.
//
// Vertex coordinates are stored as 3-vectors with z = 0 in 2D. Only the
// first dim+1 entries of an element and the first dim entries of a facet
// are meaningful. Local facet i of an element is the facet opposite its
// local vertex i.
struct Mesh {
  int dim = 2;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> elements;
  std::vector<std::array<int, 3>> facets;          // ascending vertex ids
  std::vector<std::array<int, 2>> facet_elements;  // second is -1 on the boundary
  std::vector<std::array<int, 4>> element_facets;
  std::vector<std::string> facet_tags;             // empty for interior facets

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_facets() const { return static_cast<int>(facets.size()); }
  int n_boundary_facets() const;
  bool is_boundary(int facet) const { return facet_elements[facet][1] < 0; }

  std::span<const int> element_vertices(int k) const {
    return {elements[k].data(), static_cast<std::size_t>(dim + 1)};
  }
  std::span<const int> facet_vertices(int f) const {
    return {facets[f].data(), static_cast<std::size_t>(dim)};
  }

  // +1 when the local outward normal of facet `local` in element k agrees
  // with the facet's reference normal (outward from its first element).
  int facet_orientation(int k, int local) const {
    return facet_elements[element_facets[k][local]][0] == k ? 1 : -1;
  }

  std::vector<std::string> boundary_tag_names() const;
};

// Labels a boundary facet given its centroid and the unit outward normal.
using FacetTagger = std::function<std::string(const Vec3& centroid, const Vec3& normal)>;

// Builds facet tables, orients elements positively and tags boundary facets.
Mesh build_mesh(int dim, std::vector<Vec3> vertices, std::vector<std::array<int, 4>> elements,
                const FacetTagger& tagger);

// n^d cells; 2 triangles per square or 6 Kuhn tetrahedra per cube. Boundary
// facets are tagged left/right (x), bottom/top (y) and front/back (z).
Mesh build_structured_simplicial(int n, int dim, const Box& box = {});

// Tags a box face by the outward normal direction.
std::string box_face_tag(const Vec3& normal);

// Vertex and element lists of both meshes side by side (no shared entities).
Mesh merge_disjoint(const Mesh& a, const Mesh& b);

struct ElementGeometry {
  int dim = 2;
  std::array<Vec3, 4> vertices{};
  double volume = 0.0;
  std::array<double, 4> facet_areas{};
  std::array<Vec3, 4> normals{};         // unit outward, facet opposite vertex i
  std::array<Vec3, 4> grad_lambda{};     // constant barycentric gradients
  Vec3 centroid = Vec3::Zero();
  double diameter = 0.0;

  int n_vertices() const { return dim + 1; }
  Vec3 point(const Barycentric& b) const;
  // Barycentric coordinates of the point on local facet `i` given by the
  // facet-local coordinates `fb` (dim entries, summing to one).
  Barycentric facet_point(int i, std::span<const double> fb) const;
};

ElementGeometry simplex_geometry(int dim, std::span<const Vec3> vertices);
ElementGeometry element_geometry(const Mesh& mesh, int k);

// Components of the element graph linked through interior facets.
int count_components(const Mesh& mesh);
bool check_connected(const Mesh& mesh);

// Largest over smallest element diameter.
double diameter_ratio(const Mesh& mesh);
double max_diameter(const Mesh& mesh);

} // namespace poro
