#pragma once

#include <array>
#include <vector>

#include "poro/assembly.hpp"
#include "poro/scenario.hpp"

namespace poro {

// Product of one-dimensional factors 1, sin(k pi x_i) or cos(k pi x_i).
struct TrigFactor {
  enum Kind { one, sin, cos };
  Kind kind = one;
  double freq = 0.0;  // multiplies pi
};

struct TrigTerm {
  double coef = 1.0;
  std::array<TrigFactor, 3> factors{};
};

// Finite sum of trigonometric monomials with exact derivatives.
class TrigField {
 public:
  TrigField() = default;
  explicit TrigField(std::vector<TrigTerm> terms) : terms_(std::move(terms)) {}

  TrigField& add(double coef, TrigFactor fx, TrigFactor fy, TrigFactor fz = {});
  TrigField scaled(double s) const;

  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  Mat3 hessian(const Vec3& x) const;

 private:
  std::vector<TrigTerm> terms_;
};

inline TrigFactor one() { return {TrigFactor::one, 0.0}; }
inline TrigFactor sin_pi(double k) { return {TrigFactor::sin, k}; }
inline TrigFactor cos_pi(double k) { return {TrigFactor::cos, k}; }

struct Material {
  double mu = 1.0;
  double lambda = 1.0;
  double alpha = 1.0;
  double c0 = 1.0;
  double kappa = 1.0;
};

// u(x, t) = t U(x), p(x, t) = t P(x) together with the data that makes
// them solve the quasi-static Biot system with homogeneous material.
class ManufacturedSolution {
 public:
  ManufacturedSolution(int dim, std::array<TrigField, 3> u, TrigField p, Material m);

  int dim() const { return dim_; }
  const Material& material() const { return mat_; }

  Vec3 u(const Vec3& x, double t) const;
  Mat3 grad_u(const Vec3& x, double t) const;  // row r: gradient of u_r
  double p(const Vec3& x, double t) const;
  Vec3 grad_p(const Vec3& x, double t) const;

  Vec3 body_force(const Vec3& x, double t) const;
  double source(const Vec3& x, double t) const;
  Vec3 traction(const Vec3& x, const Vec3& n, double t) const;
  double flux(const Vec3& x, const Vec3& n, double t) const;  // kappa grad p . n

 private:
  int dim_;
  std::array<TrigField, 3> u_;
  TrigField p_;
  Material mat_;
};

ManufacturedSolution poro_2d_solution(const Material& m);
ManufacturedSolution poro_3d_solution(const Material& m);

enum class ScenarioKind { pure_dirichlet, mixed };

// pure_dirichlet: u and p prescribed on the whole boundary. mixed: traction
// and flux on the x = 1 face ("right"), Dirichlet elsewhere.
ScenarioSpec manufactured_scenario(const ManufacturedSolution& sol, ScenarioKind kind);

// Three horizontal strips of the unit square (bottom to top: gray, white,
// pia) with a pulsed load on the top edge.
struct LayeredSetup {
  double nu = 0.479;
  double e_pia = 2.3e7, e_white = 5e4, e_gray = 5e4;
  double kappa_pia = 3.0 / 7.0 * 1e-8, kappa_white = 2e-8, kappa_gray = 2e-9;
  double alpha = 1.0;
  double c0 = 1e-6;
  double dt = 0.005;
};

// 9000 (t / 0.1)^{1/2} exp(-5 t + 0.5)
double pulse(double t);

ScenarioSpec layered_scenario();
PhysicalParams layered_params(const Mesh& mesh, const LayeredSetup& setup = {});
// 0 gray, 1 white, 2 pia, from the element centroid height.
int layer_of(double y);

const char* to_string(ScenarioKind kind);

} // namespace poro
