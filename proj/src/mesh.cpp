#include "poro/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

namespace poro {

namespace {

std::array<int, 3> sorted_facet(const std::array<int, 4>& elem, int dim, int opposite) {
  std::array<int, 3> f{-1, -1, -1};
  int m = 0;
  for (int i = 0; i <= dim; ++i) {
    if (i != opposite) f[m++] = elem[i];
  }
  std::sort(f.begin(), f.begin() + dim);
  return f;
}

double signed_measure(int dim, const std::vector<Vec3>& x, const std::array<int, 4>& e) {
  if (dim == 2) {
    Eigen::Matrix2d J;
    J.col(0) = (x[e[1]] - x[e[0]]).head<2>();
    J.col(1) = (x[e[2]] - x[e[0]]).head<2>();
    return J.determinant() / 2.0;
  }
  Mat3 J;
  for (int i = 0; i < 3; ++i) J.col(i) = x[e[i + 1]] - x[e[0]];
  return J.determinant() / 6.0;
}

} // namespace

int Mesh::n_boundary_facets() const {
  int count = 0;
  for (int f = 0; f < n_facets(); ++f) count += is_boundary(f) ? 1 : 0;
  return count;
}

std::vector<std::string> Mesh::boundary_tag_names() const {
  std::set<std::string> names;
  for (int f = 0; f < n_facets(); ++f) {
    if (is_boundary(f)) names.insert(facet_tags[f]);
  }
  return {names.begin(), names.end()};
}

Mesh build_mesh(int dim, std::vector<Vec3> vertices, std::vector<std::array<int, 4>> elements,
                const FacetTagger& tagger) {
  if (dim != 2 && dim != 3) throw ConfigError("mesh dimension must be 2 or 3");

  Mesh mesh;
  mesh.dim = dim;
  mesh.vertices = std::move(vertices);
  mesh.elements = std::move(elements);

  for (auto& e : mesh.elements) {
    for (int i = 0; i <= dim; ++i) {
      if (e[i] < 0 || e[i] >= mesh.n_vertices()) throw MeshError("element references unknown vertex");
    }
    double m = signed_measure(dim, mesh.vertices, e);
    if (m == 0.0) throw MeshError("degenerate element");
    if (m < 0.0) std::swap(e[0], e[1]);
    if (dim == 2) e[3] = -1;
  }

  struct Incidence {
    std::array<int, 3> key;
    int element;
    int local;
  };
  std::vector<Incidence> inc;
  inc.reserve(mesh.elements.size() * static_cast<std::size_t>(dim + 1));
  for (int k = 0; k < mesh.n_elements(); ++k) {
    for (int i = 0; i <= dim; ++i) inc.push_back({sorted_facet(mesh.elements[k], dim, i), k, i});
  }
  std::sort(inc.begin(), inc.end(), [](const Incidence& a, const Incidence& b) {
    return std::tie(a.key, a.element, a.local) < std::tie(b.key, b.element, b.local);
  });

  mesh.element_facets.assign(mesh.elements.size(), {-1, -1, -1, -1});
  for (std::size_t s = 0; s < inc.size();) {
    std::size_t e = s;
    while (e < inc.size() && inc[e].key == inc[s].key) ++e;
    if (e - s > 2) throw MeshError("non-manifold facet shared by more than two elements");
    int f = mesh.n_facets();
    mesh.facets.push_back(inc[s].key);
    mesh.facet_elements.push_back({inc[s].element, e - s == 2 ? inc[s + 1].element : -1});
    for (std::size_t j = s; j < e; ++j) mesh.element_facets[inc[j].element][inc[j].local] = f;
    s = e;
  }

  mesh.facet_tags.assign(mesh.facets.size(), std::string{});
  for (int f = 0; f < mesh.n_facets(); ++f) {
    if (!mesh.is_boundary(f)) continue;
    int k = mesh.facet_elements[f][0];
    auto geom = element_geometry(mesh, k);
    int local = 0;
    while (mesh.element_facets[k][local] != f) ++local;
    Vec3 c = Vec3::Zero();
    for (int v : mesh.facet_vertices(f)) c += mesh.vertices[v];
    c /= dim;
    mesh.facet_tags[f] = tagger(c, geom.normals[local]);
  }
  return mesh;
}

std::string box_face_tag(const Vec3& n) {
  int axis = 0;
  n.cwiseAbs().maxCoeff(&axis);
  static const char* names[3][2] = {{"left", "right"}, {"bottom", "top"}, {"front", "back"}};
  return names[axis][n[axis] > 0 ? 1 : 0];
}

Mesh build_structured_simplicial(int n, int dim, const Box& box) {
  if (n < 1) throw ConfigError("mesh subdivision count must be at least 1");
  if (dim != 2 && dim != 3) throw ConfigError("mesh dimension must be 2 or 3");
  for (int a = 0; a < dim; ++a) {
    if (!(box.hi[a] > box.lo[a])) throw ConfigError("mesh box has non-positive extent");
  }

  const int np = n + 1;
  std::vector<Vec3> verts;
  auto vid = [&](int i, int j, int l) { return i + np * (j + np * l); };
  const int nz = dim == 3 ? np : 1;
  verts.reserve(static_cast<std::size_t>(np * np * nz));
  for (int l = 0; l < nz; ++l) {
    for (int j = 0; j < np; ++j) {
      for (int i = 0; i < np; ++i) {
        Vec3 p = Vec3::Zero();
        p[0] = box.lo[0] + (box.hi[0] - box.lo[0]) * i / n;
        p[1] = box.lo[1] + (box.hi[1] - box.lo[1]) * j / n;
        if (dim == 3) p[2] = box.lo[2] + (box.hi[2] - box.lo[2]) * l / n;
        verts.push_back(p);
      }
    }
  }

  std::vector<std::array<int, 4>> elems;
  if (dim == 2) {
    elems.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        int v00 = vid(i, j, 0), v10 = vid(i + 1, j, 0), v01 = vid(i, j + 1, 0), v11 = vid(i + 1, j + 1, 0);
        elems.push_back({v00, v10, v11, -1});
        elems.push_back({v00, v11, v01, -1});
      }
    }
  } else {
    // Kuhn subdivision: one tetrahedron per monotone lattice path from the
    // cell's lowest corner to its highest, all sharing the main diagonal.
    static const std::array<std::array<int, 3>, 6> perms{{
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    elems.reserve(static_cast<std::size_t>(6 * n * n * n));
    for (int l = 0; l < n; ++l) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          for (const auto& p : perms) {
            std::array<int, 3> c{i, j, l};
            std::array<int, 4> t{};
            t[0] = vid(c[0], c[1], c[2]);
            for (int s = 0; s < 3; ++s) {
              ++c[p[s]];
              t[s + 1] = vid(c[0], c[1], c[2]);
            }
            elems.push_back(t);
          }
        }
      }
    }
  }
  return build_mesh(dim, std::move(verts), std::move(elems),
                    [](const Vec3&, const Vec3& normal) { return box_face_tag(normal); });
}

Mesh merge_disjoint(const Mesh& a, const Mesh& b) {
  if (a.dim != b.dim) throw ConfigError("cannot merge meshes of different dimension");
  std::vector<Vec3> verts = a.vertices;
  verts.insert(verts.end(), b.vertices.begin(), b.vertices.end());
  std::vector<std::array<int, 4>> elems = a.elements;
  for (auto e : b.elements) {
    for (int i = 0; i <= a.dim; ++i) e[i] += a.n_vertices();
    elems.push_back(e);
  }
  return build_mesh(a.dim, std::move(verts), std::move(elems),
                    [](const Vec3&, const Vec3& normal) { return box_face_tag(normal); });
}

Vec3 ElementGeometry::point(const Barycentric& b) const {
  Vec3 x = Vec3::Zero();
  for (int i = 0; i <= dim; ++i) x += b[i] * vertices[i];
  return x;
}

Barycentric ElementGeometry::facet_point(int i, std::span<const double> fb) const {
  Barycentric b{0.0, 0.0, 0.0, 0.0};
  int m = 0;
  for (int j = 0; j <= dim; ++j) {
    if (j != i) b[j] = fb[m++];
  }
  return b;
}

ElementGeometry simplex_geometry(int dim, std::span<const Vec3> x) {
  ElementGeometry g;
  g.dim = dim;
  for (int i = 0; i <= dim; ++i) g.vertices[i] = x[i];

  Mat3 J = Mat3::Identity();
  for (int i = 0; i < dim; ++i) J.col(i) = x[i + 1] - x[0];
  double det = J.determinant();
  double scale = 0.0;
  for (int i = 0; i < dim; ++i) scale = std::max(scale, J.col(i).norm());
  if (std::abs(det) <= 1e-14 * std::pow(scale, dim)) throw MeshError("degenerate simplex");
  g.volume = std::abs(det) / (dim == 2 ? 2.0 : 6.0);

  Mat3 Jinv = J.inverse();
  g.grad_lambda[0] = Vec3::Zero();
  for (int i = 1; i <= dim; ++i) {
    g.grad_lambda[i] = Jinv.row(i - 1).transpose();
    if (dim == 2) g.grad_lambda[i][2] = 0.0;
    g.grad_lambda[0] -= g.grad_lambda[i];
  }
  for (int i = 0; i <= dim; ++i) {
    double len = g.grad_lambda[i].norm();
    g.normals[i] = -g.grad_lambda[i] / len;
    g.facet_areas[i] = dim * g.volume * len;
  }

  g.centroid = Vec3::Zero();
  for (int i = 0; i <= dim; ++i) g.centroid += x[i];
  g.centroid /= dim + 1;
  for (int i = 0; i <= dim; ++i) {
    for (int j = i + 1; j <= dim; ++j) g.diameter = std::max(g.diameter, (x[i] - x[j]).norm());
  }
  return g;
}

ElementGeometry element_geometry(const Mesh& mesh, int k) {
  if (k < 0 || k >= mesh.n_elements()) throw ConfigError("element index out of range");
  std::array<Vec3, 4> x{};
  for (int i = 0; i <= mesh.dim; ++i) x[i] = mesh.vertices[mesh.elements[k][i]];
  return simplex_geometry(mesh.dim, std::span<const Vec3>(x.data(), mesh.dim + 1));
}

int count_components(const Mesh& mesh) {
  std::vector<int> parent(mesh.elements.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& fe : mesh.facet_elements) {
    if (fe[1] >= 0) parent[find(fe[0])] = find(fe[1]);
  }
  int count = 0;
  for (int k = 0; k < mesh.n_elements(); ++k) count += find(k) == k ? 1 : 0;
  return count;
}

bool check_connected(const Mesh& mesh) { return count_components(mesh) <= 1; }

double max_diameter(const Mesh& mesh) {
  double h = 0.0;
  for (int k = 0; k < mesh.n_elements(); ++k) h = std::max(h, element_geometry(mesh, k).diameter);
  return h;
}

double diameter_ratio(const Mesh& mesh) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    double d = element_geometry(mesh, k).diameter;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi / lo;
}

} // namespace poro
