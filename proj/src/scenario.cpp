#include "poro/scenario.hpp"

namespace poro {

DisplacementBc ScenarioSpec::displacement_kind(const std::string& tag) const {
  auto it = displacement_bc.find(tag);
  if (it == displacement_bc.end()) throw ConfigError("no displacement condition for boundary tag '" + tag + "'");
  return it->second;
}

PressureBc ScenarioSpec::pressure_kind(const std::string& tag) const {
  auto it = pressure_bc.find(tag);
  if (it == pressure_bc.end()) throw ConfigError("no pressure condition for boundary tag '" + tag + "'");
  return it->second;
}

void ScenarioSpec::validate(const Mesh& mesh) const {
  bool need_ud = false, need_tn = false, need_pd = false, need_pn = false;
  for (const auto& tag : mesh.boundary_tag_names()) {
    (displacement_kind(tag) == DisplacementBc::dirichlet ? need_ud : need_tn) = true;
    (pressure_kind(tag) == PressureBc::dirichlet ? need_pd : need_pn) = true;
  }
  for (const auto& [tag, kind] : displacement_bc) {
    (void)kind;
    if (pressure_bc.find(tag) == pressure_bc.end()) {
      throw ConfigError("boundary tag '" + tag + "' lacks a pressure condition");
    }
  }
  if (!body_force) throw ConfigError("scenario '" + name + "' has no body force");
  if (!source) throw ConfigError("scenario '" + name + "' has no fluid source");
  if (need_ud && !displacement) throw ConfigError("scenario '" + name + "' has no boundary displacement");
  if (need_tn && !traction) throw ConfigError("scenario '" + name + "' has no boundary traction");
  if (need_pd && !pressure) throw ConfigError("scenario '" + name + "' has no boundary pressure");
  if (need_pn && !flux) throw ConfigError("scenario '" + name + "' has no boundary flux");
}

bool ScenarioSpec::pure_displacement_dirichlet(const Mesh& mesh) const {
  for (const auto& tag : mesh.boundary_tag_names()) {
    if (displacement_kind(tag) == DisplacementBc::traction) return false;
  }
  return true;
}

bool ScenarioSpec::has_pressure_dirichlet(const Mesh& mesh) const {
  for (const auto& tag : mesh.boundary_tag_names()) {
    if (pressure_kind(tag) == PressureBc::dirichlet) return true;
  }
  return false;
}

} // namespace poro
