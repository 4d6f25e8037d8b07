#include "poro/manufactured.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace poro {

namespace {

constexpr double pi = std::numbers::pi;

// Value and first two derivatives of one factor.
std::array<double, 3> eval(const TrigFactor& f, double x) {
  const double k = f.freq * pi;
  switch (f.kind) {
    case TrigFactor::sin: {
      double s = std::sin(k * x), c = std::cos(k * x);
      return {s, k * c, -k * k * s};
    }
    case TrigFactor::cos: {
      double s = std::sin(k * x), c = std::cos(k * x);
      return {c, -k * s, -k * k * c};
    }
    default:
      return {1.0, 0.0, 0.0};
  }
}

} // namespace

TrigField& TrigField::add(double coef, TrigFactor fx, TrigFactor fy, TrigFactor fz) {
  terms_.push_back({coef, {fx, fy, fz}});
  return *this;
}

TrigField TrigField::scaled(double s) const {
  TrigField out = *this;
  for (auto& t : out.terms_) t.coef *= s;
  return out;
}

double TrigField::value(const Vec3& x) const {
  double v = 0.0;
  for (const auto& t : terms_) {
    double p = t.coef;
    for (int i = 0; i < 3; ++i) p *= eval(t.factors[i], x[i])[0];
    v += p;
  }
  return v;
}

Vec3 TrigField::gradient(const Vec3& x) const {
  Vec3 g = Vec3::Zero();
  for (const auto& t : terms_) {
    std::array<std::array<double, 3>, 3> e;
    for (int i = 0; i < 3; ++i) e[i] = eval(t.factors[i], x[i]);
    g[0] += t.coef * e[0][1] * e[1][0] * e[2][0];
    g[1] += t.coef * e[0][0] * e[1][1] * e[2][0];
    g[2] += t.coef * e[0][0] * e[1][0] * e[2][1];
  }
  return g;
}

Mat3 TrigField::hessian(const Vec3& x) const {
  Mat3 h = Mat3::Zero();
  for (const auto& t : terms_) {
    std::array<std::array<double, 3>, 3> e;
    for (int i = 0; i < 3; ++i) e[i] = eval(t.factors[i], x[i]);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double p = t.coef;
        for (int i = 0; i < 3; ++i) {
          int order = (i == a) + (i == b);
          p *= e[i][order];
        }
        h(a, b) += p;
      }
    }
  }
  return h;
}

ManufacturedSolution::ManufacturedSolution(int dim, std::array<TrigField, 3> u, TrigField p, Material m)
    : dim_(dim), u_(std::move(u)), p_(std::move(p)), mat_(m) {
  if (dim != 2 && dim != 3) throw ConfigError("dimension must be 2 or 3");
}

Vec3 ManufacturedSolution::u(const Vec3& x, double t) const {
  Vec3 v = Vec3::Zero();
  for (int r = 0; r < dim_; ++r) v[r] = t * u_[r].value(x);
  return v;
}

Mat3 ManufacturedSolution::grad_u(const Vec3& x, double t) const {
  Mat3 g = Mat3::Zero();
  for (int r = 0; r < dim_; ++r) g.row(r) = t * u_[r].gradient(x).transpose();
  if (dim_ == 2) g.col(2).setZero();
  return g;
}

double ManufacturedSolution::p(const Vec3& x, double t) const { return t * p_.value(x); }

Vec3 ManufacturedSolution::grad_p(const Vec3& x, double t) const {
  Vec3 g = t * p_.gradient(x);
  if (dim_ == 2) g[2] = 0.0;
  return g;
}

Vec3 ManufacturedSolution::body_force(const Vec3& x, double t) const {
  std::array<Mat3, 3> h;
  for (int r = 0; r < dim_; ++r) h[r] = u_[r].hessian(x);
  Vec3 lap = Vec3::Zero(), grad_div = Vec3::Zero();
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < dim_; ++c) {
      lap[r] += h[r](c, c);
      grad_div[r] += h[c](c, r);
    }
  }
  Vec3 f = -mat_.mu * lap - (mat_.mu + mat_.lambda) * grad_div + mat_.alpha * p_.gradient(x);
  if (dim_ == 2) f[2] = 0.0;
  return t * f;
}

double ManufacturedSolution::source(const Vec3& x, double t) const {
  double div = 0.0;
  for (int r = 0; r < dim_; ++r) div += u_[r].gradient(x)[r];
  Mat3 hp = p_.hessian(x);
  double lap = 0.0;
  for (int c = 0; c < dim_; ++c) lap += hp(c, c);
  return mat_.alpha * div + mat_.c0 * p_.value(x) - mat_.kappa * t * lap;
}

Vec3 ManufacturedSolution::traction(const Vec3& x, const Vec3& n, double t) const {
  Mat3 g = grad_u(x, t);
  Mat3 strain = 0.5 * (g + g.transpose());
  Mat3 id = Mat3::Zero();
  for (int i = 0; i < dim_; ++i) id(i, i) = 1.0;
  Mat3 sigma = 2.0 * mat_.mu * strain + (mat_.lambda * g.trace() - mat_.alpha * p(x, t)) * id;
  return sigma * n;
}

double ManufacturedSolution::flux(const Vec3& x, const Vec3& n, double t) const {
  return mat_.kappa * grad_p(x, t).dot(n);
}

ManufacturedSolution poro_2d_solution(const Material& m) {
  const double b = 1.0 / (m.lambda + m.mu);
  TrigField u0, u1, p;
  u0.add(-1.0, one(), sin_pi(2)).add(1.0, cos_pi(2), sin_pi(2)).add(b, sin_pi(1), sin_pi(1));
  u1.add(1.0, sin_pi(2), one()).add(-1.0, sin_pi(2), cos_pi(2)).add(b, sin_pi(1), sin_pi(1));
  p.add(-1.0, sin_pi(1), sin_pi(1));
  return ManufacturedSolution(2, {u0, u1, TrigField()}, p, m);
}

ManufacturedSolution poro_3d_solution(const Material& m) {
  const double b = 1.0 / (m.lambda + m.mu);
  TrigField u0, u1, u2, p;
  u0.add(-1.0, one(), sin_pi(2), sin_pi(2)).add(1.0, cos_pi(2), sin_pi(2), sin_pi(2));
  u0.add(b, sin_pi(1), sin_pi(1), sin_pi(1));
  u1.add(2.0, sin_pi(2), one(), sin_pi(2)).add(-2.0, sin_pi(2), cos_pi(2), sin_pi(2));
  u1.add(b, sin_pi(1), sin_pi(1), sin_pi(1));
  u2.add(-1.0, sin_pi(2), sin_pi(2), one()).add(1.0, sin_pi(2), sin_pi(2), cos_pi(2));
  u2.add(b, sin_pi(1), sin_pi(1), sin_pi(1));
  p.add(1.0, sin_pi(1), sin_pi(1), sin_pi(1));
  return ManufacturedSolution(3, {u0, u1, u2}, p, m);
}

ScenarioSpec manufactured_scenario(const ManufacturedSolution& sol, ScenarioKind kind) {
  ScenarioSpec s;
  s.name = kind == ScenarioKind::pure_dirichlet ? "I" : "II";
  std::vector<std::string> tags = {"left", "right", "bottom", "top"};
  if (sol.dim() == 3) {
    tags.push_back("front");
    tags.push_back("back");
  }
  for (const auto& t : tags) {
    bool natural = kind == ScenarioKind::mixed && t == "right";
    s.displacement_bc[t] = natural ? DisplacementBc::traction : DisplacementBc::dirichlet;
    s.pressure_bc[t] = natural ? PressureBc::flux : PressureBc::dirichlet;
  }
  // The closures share one copy of the solution.
  auto ms = std::make_shared<ManufacturedSolution>(sol);
  s.body_force = [ms](const Vec3& x, double t) { return ms->body_force(x, t); };
  s.source = [ms](const Vec3& x, double t) { return ms->source(x, t); };
  s.displacement = [ms](const BoundaryPoint& bp, double t) { return ms->u(bp.x, t); };
  s.pressure = [ms](const BoundaryPoint& bp, double t) { return ms->p(bp.x, t); };
  s.traction = [ms](const BoundaryPoint& bp, double t) { return ms->traction(bp.x, bp.normal, t); };
  s.flux = [ms](const BoundaryPoint& bp, double t) { return ms->flux(bp.x, bp.normal, t); };
  return s;
}

double pulse(double t) {
  if (t <= 0.0) return 0.0;
  return 9000.0 * std::sqrt(t / 0.1) * std::exp(-5.0 * t + 0.5);
}

int layer_of(double y) {
  if (y < 1.0 / 3.0) return 0;
  if (y > 2.0 / 3.0) return 2;
  return 1;
}

ScenarioSpec layered_scenario() {
  ScenarioSpec s;
  s.name = "layered";
  s.displacement_bc = {{"bottom", DisplacementBc::dirichlet},
                       {"top", DisplacementBc::traction},
                       {"left", DisplacementBc::traction},
                       {"right", DisplacementBc::traction}};
  s.pressure_bc = {{"bottom", PressureBc::flux},
                   {"top", PressureBc::dirichlet},
                   {"left", PressureBc::dirichlet},
                   {"right", PressureBc::dirichlet}};
  s.body_force = [](const Vec3&, double) { return Vec3::Zero().eval(); };
  s.source = [](const Vec3&, double) { return 0.0; };
  s.displacement = [](const BoundaryPoint&, double) { return Vec3::Zero().eval(); };
  s.traction = [](const BoundaryPoint& bp, double t) {
    if (bp.tag == "top") return Vec3(0.0, -pulse(t), 0.0);
    return Vec3::Zero().eval();
  };
  s.pressure = [](const BoundaryPoint& bp, double t) { return bp.tag == "top" ? pulse(t) : 0.0; };
  s.flux = [](const BoundaryPoint&, double) { return 0.0; };
  return s;
}

PhysicalParams layered_params(const Mesh& mesh, const LayeredSetup& setup) {
  const int n = mesh.n_elements();
  PhysicalParams p;
  p.alpha = setup.alpha;
  p.c0 = setup.c0;
  p.dt = setup.dt;
  p.mu.resize(n);
  p.lambda.resize(n);
  p.kappa.resize(n);
  const double young[3] = {setup.e_gray, setup.e_white, setup.e_pia};
  const double kappa[3] = {setup.kappa_gray, setup.kappa_white, setup.kappa_pia};
  for (int k = 0; k < n; ++k) {
    int layer = layer_of(element_geometry(mesh, k).centroid.y());
    auto [lam, mu] = PhysicalParams::lame_from_young(young[layer], setup.nu);
    p.mu[k] = mu;
    p.lambda[k] = lam;
    p.kappa[k] = kappa[layer];
  }
  return p;
}

const char* to_string(ScenarioKind kind) { return kind == ScenarioKind::pure_dirichlet ? "I" : "II"; }

} // namespace poro
