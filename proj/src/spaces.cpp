#include "poro/spaces.hpp"

#include "poro/quadrature.hpp"

namespace poro {

BrLocalBasis::BrLocalBasis(const ElementGeometry& geom, std::array<int, 4> bubble_signs)
    : geom_(geom), signs_(bubble_signs) {}

double BrLocalBasis::bubble(int i, const Barycentric& b) const {
  double v = 1.0;
  for (int j = 0; j <= dim(); ++j) {
    if (j != i) v *= b[j];
  }
  return v;
}

Vec3 BrLocalBasis::bubble_gradient(int i, const Barycentric& b) const {
  Vec3 g = Vec3::Zero();
  for (int j = 0; j <= dim(); ++j) {
    if (j == i) continue;
    double prod = 1.0;
    for (int m = 0; m <= dim(); ++m) {
      if (m != i && m != j) prod *= b[m];
    }
    g += prod * geom_.grad_lambda[j];
  }
  return g;
}

Vec3 BrLocalBasis::value(int a, const Barycentric& b) const {
  Vec3 v = Vec3::Zero();
  if (a < n_vertex_dofs()) {
    v[a % dim()] = b[a / dim()];
  } else {
    int i = a - n_vertex_dofs();
    v = signs_[i] * bubble(i, b) * geom_.normals[i];
  }
  return v;
}

Mat3 BrLocalBasis::gradient(int a, const Barycentric& b) const {
  Mat3 g = Mat3::Zero();
  if (a < n_vertex_dofs()) {
    g.row(a % dim()) = geom_.grad_lambda[a / dim()].transpose();
  } else {
    int i = a - n_vertex_dofs();
    g = signs_[i] * geom_.normals[i] * bubble_gradient(i, b).transpose();
  }
  return g;
}

std::vector<double> avg_divergence(const BrLocalBasis& basis) {
  static const QuadratureRule rule2 = simplex_rule(2, 2);
  static const QuadratureRule rule3 = simplex_rule(3, 2);
  const auto& rule = basis.dim() == 2 ? rule2 : rule3;
  std::vector<double> out(basis.size(), 0.0);
  for (int a = 0; a < basis.size(); ++a) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * basis.divergence(a, rule.points[q]);
    out[a] = s;
  }
  return out;
}

namespace {

// RT0 basis e_1..e_d, x - centroid; returns the local mass matrix and, per
// pressure unit vector (interior, facets), the right-hand side of the
// weak-gradient system.
void rt0_local_system(const ElementGeometry& g, DenseMatrix& mass, DenseMatrix& rhs) {
  const int d = g.dim;
  static const QuadratureRule cell2 = simplex_rule(2, 2);
  static const QuadratureRule cell3 = simplex_rule(3, 2);
  static const QuadratureRule face1 = simplex_rule(1, 2);
  static const QuadratureRule face2 = simplex_rule(2, 2);
  const auto& cell = d == 2 ? cell2 : cell3;
  const auto& face = d == 2 ? face1 : face2;

  auto psi = [&](int a, const Vec3& x) -> Vec3 {
    if (a < d) return Vec3::Unit(a);
    return x - g.centroid;
  };

  mass = DenseMatrix::Zero(d + 1, d + 1);
  for (std::size_t q = 0; q < cell.size(); ++q) {
    Vec3 x = g.point(cell.points[q]);
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; b <= d; ++b) mass(a, b) += g.volume * cell.weights[q] * psi(a, x).dot(psi(b, x));
    }
  }

  rhs = DenseMatrix::Zero(d + 1, d + 2);
  for (int a = 0; a <= d; ++a) {
    double div = a < d ? 0.0 : static_cast<double>(d);
    rhs(a, 0) = -div * g.volume;
    for (int i = 0; i <= d; ++i) {
      double s = 0.0;
      for (std::size_t q = 0; q < face.size(); ++q) {
        Vec3 x = g.point(g.facet_point(i, std::span<const double>(face.points[q].data(), d)));
        s += face.weights[q] * psi(a, x).dot(g.normals[i]);
      }
      rhs(a, 1 + i) = s * g.facet_areas[i];
    }
  }
}

} // namespace

Rt0Field wg_weak_gradient(const ElementGeometry& geom, double p_interior, std::span<const double> p_facets) {
  const int d = geom.dim;
  if (static_cast<int>(p_facets.size()) != d + 1) throw ConfigError("weak gradient needs dim+1 facet values");
  DenseMatrix mass, rhs;
  rt0_local_system(geom, mass, rhs);
  Vector p(d + 2);
  p[0] = p_interior;
  for (int i = 0; i <= d; ++i) p[1 + i] = p_facets[i];
  Eigen::LLT<DenseMatrix> llt(mass);
  if (llt.info() != Eigen::Success) throw MeshError("singular RT0 mass matrix");
  Vector c = llt.solve(rhs * p);

  Rt0Field field;
  for (int a = 0; a < d; ++a) field.constant[a] = c[a];
  field.linear = c[d];
  field.center = geom.centroid;
  return field;
}

DenseMatrix wg_local_stiffness(const ElementGeometry& geom) {
  DenseMatrix mass, rhs;
  rt0_local_system(geom, mass, rhs);
  Eigen::LLT<DenseMatrix> llt(mass);
  if (llt.info() != Eigen::Success) throw MeshError("singular RT0 mass matrix");
  DenseMatrix coeff = llt.solve(rhs);
  DenseMatrix K = coeff.transpose() * mass * coeff;
  return 0.5 * (K + K.transpose());
}

std::vector<int> DofMap::element_disp_dofs(const Mesh& mesh, int k) const {
  std::vector<int> dofs;
  dofs.reserve(static_cast<std::size_t>(dim * (dim + 1) + dim + 1));
  for (int i = 0; i <= dim; ++i) {
    for (int c = 0; c < dim; ++c) dofs.push_back(vertex_dof(mesh.elements[k][i], c));
  }
  for (int i = 0; i <= dim; ++i) dofs.push_back(bubble_dof(mesh.element_facets[k][i]));
  return dofs;
}

std::vector<int> DofMap::element_pres_dofs(const Mesh& mesh, int k) const {
  std::vector<int> dofs{interior_dof(k)};
  for (int i = 0; i <= dim; ++i) dofs.push_back(facet_dof(mesh.element_facets[k][i]));
  return dofs;
}

Vector DofMap::expand_displacement(const Vector& free) const {
  Vector g(disp_total());
  for (int i = 0; i < n_disp_free(); ++i) g[disp_free[i]] = free[i];
  for (std::size_t i = 0; i < disp_fixed.size(); ++i) g[disp_fixed[i]] = disp_values[static_cast<Eigen::Index>(i)];
  return g;
}

Vector DofMap::expand_pressure(const Vector& free) const {
  Vector g(pres_total());
  for (int i = 0; i < n_pres_free(); ++i) g[pres_free[i]] = free[i];
  for (std::size_t i = 0; i < pres_fixed.size(); ++i) g[pres_fixed[i]] = pres_values[static_cast<Eigen::Index>(i)];
  return g;
}

Vector DofMap::restrict_displacement(const Vector& global) const {
  Vector r(n_disp_free());
  for (int i = 0; i < n_disp_free(); ++i) r[i] = global[disp_free[i]];
  return r;
}

Vector DofMap::restrict_pressure(const Vector& global) const {
  Vector r(n_pres_free());
  for (int i = 0; i < n_pres_free(); ++i) r[i] = global[pres_free[i]];
  return r;
}

FacetFrame facet_frame(const Mesh& mesh, int f) {
  FacetFrame fr;
  fr.element = mesh.facet_elements[f][0];
  fr.local = 0;
  while (mesh.element_facets[fr.element][fr.local] != f) ++fr.local;
  auto g = element_geometry(mesh, fr.element);
  fr.normal = g.normals[fr.local];
  fr.area = g.facet_areas[fr.local];
  return fr;
}

namespace {

void split(const std::vector<bool>& fixed, std::vector<int>& free_index, std::vector<int>& fixed_index,
           std::vector<int>& free_list, std::vector<int>& fixed_list) {
  const int n = static_cast<int>(fixed.size());
  free_index.assign(n, -1);
  fixed_index.assign(n, -1);
  free_list.clear();
  fixed_list.clear();
  for (int i = 0; i < n; ++i) {
    if (fixed[i]) {
      fixed_index[i] = static_cast<int>(fixed_list.size());
      fixed_list.push_back(i);
    } else {
      free_index[i] = static_cast<int>(free_list.size());
      free_list.push_back(i);
    }
  }
}

} // namespace

DofMap dirichlet_constraints(const Mesh& mesh, const ScenarioSpec& scenario, double t) {
  scenario.validate(mesh);
  DofMap dofs;
  dofs.dim = mesh.dim;
  dofs.n_vertices = mesh.n_vertices();
  dofs.n_elements = mesh.n_elements();
  dofs.n_facets = mesh.n_facets();

  std::vector<bool> disp_fixed(dofs.disp_total(), false);
  std::vector<bool> pres_fixed(dofs.pres_total(), false);
  for (int f = 0; f < mesh.n_facets(); ++f) {
    if (!mesh.is_boundary(f)) continue;
    const auto& tag = mesh.facet_tags[f];
    if (scenario.displacement_kind(tag) == DisplacementBc::dirichlet) {
      disp_fixed[dofs.bubble_dof(f)] = true;
      for (int v : mesh.facet_vertices(f)) {
        for (int c = 0; c < mesh.dim; ++c) disp_fixed[dofs.vertex_dof(v, c)] = true;
      }
    }
    if (scenario.pressure_kind(tag) == PressureBc::dirichlet) pres_fixed[dofs.facet_dof(f)] = true;
  }
  split(disp_fixed, dofs.disp_free_index, dofs.disp_fixed_index, dofs.disp_free, dofs.disp_fixed);
  split(pres_fixed, dofs.pres_free_index, dofs.pres_fixed_index, dofs.pres_free, dofs.pres_fixed);
  update_dirichlet_values(mesh, scenario, t, dofs);
  return dofs;
}

void update_dirichlet_values(const Mesh& mesh, const ScenarioSpec& scenario, double t, DofMap& dofs) {
  const int d = mesh.dim;
  static const QuadratureRule face1 = simplex_rule(1, 3);
  static const QuadratureRule face2 = simplex_rule(2, 3);
  const auto& face = d == 2 ? face1 : face2;

  dofs.time = t;
  dofs.disp_values = Vector::Zero(static_cast<Eigen::Index>(dofs.disp_fixed.size()));
  dofs.pres_values = Vector::Zero(static_cast<Eigen::Index>(dofs.pres_fixed.size()));

  // Vertex values first; a vertex may sit on several Dirichlet facets, any
  // of them gives the same point value.
  std::vector<bool> vertex_done(mesh.n_vertices(), false);
  for (int f = 0; f < mesh.n_facets(); ++f) {
    if (!mesh.is_boundary(f)) continue;
    const auto& tag = mesh.facet_tags[f];
    bool disp_dirichlet = scenario.displacement_kind(tag) == DisplacementBc::dirichlet;
    bool pres_dirichlet = scenario.pressure_kind(tag) == PressureBc::dirichlet;
    if (!disp_dirichlet && !pres_dirichlet) continue;

    FacetFrame fr = facet_frame(mesh, f);
    auto geom = element_geometry(mesh, fr.element);

    if (disp_dirichlet) {
      for (int v : mesh.facet_vertices(f)) {
        if (vertex_done[v]) continue;
        vertex_done[v] = true;
        Vec3 u = scenario.displacement({mesh.vertices[v], fr.normal, tag}, t);
        for (int c = 0; c < d; ++c) dofs.disp_values[dofs.disp_fixed_index[dofs.vertex_dof(v, c)]] = u[c];
      }
    }

    // Facet moments: bubble coefficient matches the normal flux of u_D,
    // facet pressure is the facet mean of p_D.
    double flux_exact = 0.0, flux_linear = 0.0, bubble_mass = 0.0, p_mean = 0.0;
    for (std::size_t q = 0; q < face.size(); ++q) {
      Barycentric b = geom.facet_point(fr.local, std::span<const double>(face.points[q].data(), d));
      Vec3 x = geom.point(b);
      BoundaryPoint bp{x, fr.normal, tag};
      double w = face.weights[q] * fr.area;
      if (disp_dirichlet) {
        flux_exact += w * scenario.displacement(bp, t).dot(fr.normal);
        Vec3 lin = Vec3::Zero();
        for (int j = 0; j <= d; ++j) {
          if (j == fr.local) continue;
          lin += b[j] * scenario.displacement({mesh.vertices[mesh.elements[fr.element][j]], fr.normal, tag}, t);
        }
        flux_linear += w * lin.dot(fr.normal);
        double bub = 1.0;
        for (int j = 0; j <= d; ++j) {
          if (j != fr.local) bub *= b[j];
        }
        bubble_mass += w * bub;
      }
      if (pres_dirichlet) p_mean += w * scenario.pressure(bp, t);
    }
    if (disp_dirichlet) {
      dofs.disp_values[dofs.disp_fixed_index[dofs.bubble_dof(f)]] = (flux_exact - flux_linear) / bubble_mass;
    }
    if (pres_dirichlet) dofs.pres_values[dofs.pres_fixed_index[dofs.facet_dof(f)]] = p_mean / fr.area;
  }
}

} // namespace poro
