#pragma once

#include <span>
#include <vector>

#include "poro/mesh.hpp"
#include "poro/scenario.hpp"

namespace poro {

// Local Bernardi-Raugel space on one simplex: the vector P1 functions
// lambda_i e_c (local index i*dim + c) followed by one normal bubble
// s_i n_i prod_{j != i} lambda_j per facet (local index dim*(dim+1) + i).
// The sign s_i orients each bubble along its facet's reference normal so
// that the global bubble is single valued.
class BrLocalBasis {
 public:
  explicit BrLocalBasis(const ElementGeometry& geom, std::array<int, 4> bubble_signs = {1, 1, 1, 1});

  int dim() const { return geom_.dim; }
  int size() const { return dim() * (dim() + 1) + dim() + 1; }
  int n_vertex_dofs() const { return dim() * (dim() + 1); }
  int bubble_index(int facet) const { return n_vertex_dofs() + facet; }
  const ElementGeometry& geometry() const { return geom_; }

  Vec3 value(int a, const Barycentric& b) const;
  // Row r holds the gradient of component r.
  Mat3 gradient(int a, const Barycentric& b) const;
  double divergence(int a, const Barycentric& b) const { return gradient(a, b).trace(); }

 private:
  double bubble(int i, const Barycentric& b) const;
  Vec3 bubble_gradient(int i, const Barycentric& b) const;

  ElementGeometry geom_;
  std::array<int, 4> signs_;
};

// (1/|K|) * integral of div(phi) over K, one entry per local basis function.
std::vector<double> avg_divergence(const BrLocalBasis& basis);

// Field in RT0(K) written as constant + linear * (x - center).
struct Rt0Field {
  Vec3 constant = Vec3::Zero();
  double linear = 0.0;
  Vec3 center = Vec3::Zero();

  Vec3 operator()(const Vec3& x) const { return constant + linear * (x - center); }
};

// Discrete weak gradient of {p_interior, p_facets} (facet i opposite vertex
// i), found by solving the local RT0 mass system.
Rt0Field wg_weak_gradient(const ElementGeometry& geom, double p_interior, std::span<const double> p_facets);

// Local (dim+2)x(dim+2) matrix (grad_w p, grad_w q)_K; index 0 is the
// interior value, index 1+i the value on local facet i.
DenseMatrix wg_local_stiffness(const ElementGeometry& geom);

// Global numbering of displacement and pressure unknowns and the Dirichlet
// constraint sets.
//
// Displacement: dim dofs per vertex (v*dim + c), then one bubble per facet.
// Pressure: one interior value per element, then one value per facet.
// Free dofs keep the global order; interiors are never constrained.
struct DofMap {
  int dim = 2;
  int n_vertices = 0;
  int n_elements = 0;
  int n_facets = 0;

  std::vector<int> disp_free_index;   // global -> free index or -1
  std::vector<int> disp_fixed_index;  // global -> constrained index or -1
  std::vector<int> disp_free;         // free index -> global
  std::vector<int> disp_fixed;        // constrained index -> global
  std::vector<int> pres_free_index;
  std::vector<int> pres_fixed_index;
  std::vector<int> pres_free;
  std::vector<int> pres_fixed;

  // Prescribed values on the constrained dofs at the current time.
  Vector disp_values;
  Vector pres_values;
  double time = 0.0;

  int disp_total() const { return dim * n_vertices + n_facets; }
  int pres_total() const { return n_elements + n_facets; }
  int n_disp_free() const { return static_cast<int>(disp_free.size()); }
  int n_pres_free() const { return static_cast<int>(pres_free.size()); }
  int vertex_dof(int v, int c) const { return v * dim + c; }
  int bubble_dof(int f) const { return dim * n_vertices + f; }
  int interior_dof(int k) const { return k; }
  int facet_dof(int f) const { return n_elements + f; }

  // Global dofs of the local BR basis functions of element k.
  std::vector<int> element_disp_dofs(const Mesh& mesh, int k) const;
  // Global pressure dofs of element k: interior, then local facets.
  std::vector<int> element_pres_dofs(const Mesh& mesh, int k) const;

  // Free vector -> global vector with the prescribed values inserted.
  Vector expand_displacement(const Vector& free) const;
  Vector expand_pressure(const Vector& free) const;
  Vector restrict_displacement(const Vector& global) const;
  Vector restrict_pressure(const Vector& global) const;
};

// Constraint sets from the boundary tags and prescribed values at time t.
// A vertex touching any displacement-Dirichlet facet is constrained.
DofMap dirichlet_constraints(const Mesh& mesh, const ScenarioSpec& scenario, double t);

// Recomputes the prescribed values of an existing DofMap at time t.
void update_dirichlet_values(const Mesh& mesh, const ScenarioSpec& scenario, double t, DofMap& dofs);

// Reference unit normal of facet f (outward from its first element) and the
// element/local index it is taken from.
struct FacetFrame {
  int element = -1;
  int local = -1;
  Vec3 normal = Vec3::Zero();
  double area = 0.0;
};
FacetFrame facet_frame(const Mesh& mesh, int f);

} // namespace poro
