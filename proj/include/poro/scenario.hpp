#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "poro/mesh.hpp"

namespace poro {

enum class DisplacementBc { dirichlet, traction };
enum class PressureBc { dirichlet, flux };

// A point on a tagged boundary facet together with the unit outward normal.
struct BoundaryPoint {
  Vec3 x;
  Vec3 normal;
  std::string_view tag;
};

// Boundary-condition assignment and data for one problem. Every boundary
// tag of the mesh must appear in both condition maps.
struct ScenarioSpec {
  std::string name;
  std::map<std::string, DisplacementBc> displacement_bc;
  std::map<std::string, PressureBc> pressure_bc;

  std::function<Vec3(const Vec3&, double)> body_force;            // f
  std::function<double(const Vec3&, double)> source;              // s
  std::function<Vec3(const BoundaryPoint&, double)> displacement; // u_D
  std::function<Vec3(const BoundaryPoint&, double)> traction;     // t_N
  std::function<double(const BoundaryPoint&, double)> pressure;   // p_D
  std::function<double(const BoundaryPoint&, double)> flux;       // p_N

  DisplacementBc displacement_kind(const std::string& tag) const;
  PressureBc pressure_kind(const std::string& tag) const;

  // Throws ConfigError if a boundary tag is unassigned or data is missing.
  void validate(const Mesh& mesh) const;

  // True when no boundary facet of `mesh` carries a traction condition.
  bool pure_displacement_dirichlet(const Mesh& mesh) const;
  bool has_pressure_dirichlet(const Mesh& mesh) const;
};

} // namespace poro
