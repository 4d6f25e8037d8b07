#include "poro/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "poro/quadrature.hpp"

namespace poro {

PhysicalParams PhysicalParams::uniform(int n_elements, double mu, double lambda, double alpha, double c0,
                                       double kappa, double dt) {
  PhysicalParams p;
  p.alpha = alpha;
  p.c0 = c0;
  p.dt = dt;
  p.mu.assign(n_elements, mu);
  p.lambda.assign(n_elements, lambda);
  p.kappa.assign(n_elements, kappa);
  return p;
}

std::pair<double, double> PhysicalParams::lame_from_young(double E, double nu) {
  if (!(E > 0.0) || !(nu > -1.0 && nu < 0.5)) throw ConfigError("invalid Young's modulus or Poisson ratio");
  return {nu * E / ((1.0 - 2.0 * nu) * (1.0 + nu)), E / (2.0 * (1.0 + nu))};
}

double PhysicalParams::mu_ref() const { return *std::max_element(mu.begin(), mu.end()); }
double PhysicalParams::lambda_ref() const { return *std::max_element(lambda.begin(), lambda.end()); }

void PhysicalParams::validate(int n_elements, bool has_pressure_dirichlet) const {
  auto sized = [&](const std::vector<double>& v) { return static_cast<int>(v.size()) == n_elements; };
  if (!sized(mu) || !sized(lambda) || !sized(kappa)) throw ConfigError("material arrays must have one entry per element");
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
  };
  if (!positive(mu)) throw ConfigError("mu must be positive");
  if (!positive(lambda)) throw ConfigError("lambda must be positive");
  if (!positive(kappa)) throw ConfigError("kappa must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(c0 >= 0.0)) throw ConfigError("c0 must be non-negative");
  if (c0 == 0.0 && !has_pressure_dirichlet) throw ConfigError("c0 = 0 requires a pressure Dirichlet boundary");
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
}

SparseMatrix extract_block(const SparseMatrix& m, const std::vector<int>& row_map, int n_rows,
                           const std::vector<int>& col_map, int n_cols) {
  std::vector<Triplet> trips;
  for (int r = 0; r < m.outerSize(); ++r) {
    int rr = row_map[r];
    if (rr < 0) continue;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      int cc = col_map[it.col()];
      if (cc >= 0) trips.emplace_back(rr, cc, it.value());
    }
  }
  SparseMatrix out(n_rows, n_cols);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

namespace {

const QuadratureRule& stiffness_rule(int dim) {
  static const QuadratureRule r2 = simplex_rule(2, 2);
  static const QuadratureRule r3 = simplex_rule(3, 4);
  return dim == 2 ? r2 : r3;
}

const QuadratureRule& load_rule(int dim) {
  static const QuadratureRule r2 = simplex_rule(2, 4);
  static const QuadratureRule r3 = simplex_rule(3, 5);
  return dim == 2 ? r2 : r3;
}

const QuadratureRule& facet_rule(int dim) {
  static const QuadratureRule r1 = simplex_rule(1, 3);
  static const QuadratureRule r2 = simplex_rule(2, 3);
  return dim == 2 ? r1 : r2;
}

std::array<int, 4> bubble_signs(const Mesh& mesh, int k) {
  std::array<int, 4> s{1, 1, 1, 1};
  for (int i = 0; i <= mesh.dim; ++i) s[i] = mesh.facet_orientation(k, i);
  return s;
}

std::vector<int> identity_map(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i;
  return m;
}

} // namespace

AssembledBlocks assemble_blocks(const Mesh& mesh, const DofMap& dofs, const PhysicalParams& params) {
  const int N = mesh.n_elements();
  const int d = mesh.dim;
  params.validate(N, !dofs.pres_fixed.empty());

  AssembledBlocks out;
  out.mu_ref = params.mu_ref();
  out.lambda_ref = params.lambda_ref();
  out.alpha = params.alpha;
  out.Mp.resize(N);
  out.Mdil.resize(N);

  std::vector<Triplet> a1, a0, bc, ap, dd;
  const auto& rule = stiffness_rule(d);

  for (int k = 0; k < N; ++k) {
    auto geom = element_geometry(mesh, k);
    BrLocalBasis basis(geom, bubble_signs(mesh, k));
    const int nl = basis.size();
    auto udofs = dofs.element_disp_dofs(mesh, k);
    auto pdofs = dofs.element_pres_dofs(mesh, k);
    const double vol = geom.volume;
    const double wmu = params.mu[k] / out.mu_ref;
    const double wlam = params.lambda[k] / out.lambda_ref;

    DenseMatrix local = DenseMatrix::Zero(nl, nl);
    std::vector<Mat3> strain(nl);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      for (int a = 0; a < nl; ++a) {
        Mat3 g = basis.gradient(a, rule.points[q]);
        strain[a] = 0.5 * (g + g.transpose());
      }
      for (int a = 0; a < nl; ++a) {
        for (int b = a; b < nl; ++b) local(a, b) += rule.weights[q] * strain[a].cwiseProduct(strain[b]).sum();
      }
    }
    for (int a = 0; a < nl; ++a) {
      for (int b = a; b < nl; ++b) {
        double v = wmu * vol * local(a, b);
        a1.emplace_back(udofs[a], udofs[b], v);
        if (a != b) a1.emplace_back(udofs[b], udofs[a], v);
      }
    }

    auto avg = avg_divergence(basis);
    for (int a = 0; a < nl; ++a) {
      bc.emplace_back(k, udofs[a], vol * avg[a]);
      for (int b = 0; b < nl; ++b) a0.emplace_back(udofs[a], udofs[b], wlam * vol * avg[a] * avg[b]);
    }

    out.Mp[k] = vol;
    out.Mdil[k] = vol / wlam;

    DenseMatrix kp = wg_local_stiffness(geom);
    for (int a = 0; a < d + 2; ++a) {
      for (int b = 0; b < d + 2; ++b) {
        ap.emplace_back(pdofs[a], pdofs[b], kp(a, b));
        dd.emplace_back(pdofs[a], pdofs[b], params.dt * params.kappa[k] * kp(a, b));
      }
    }
    dd.emplace_back(pdofs[0], pdofs[0], params.c0 * vol);
  }

  const int nu_t = dofs.disp_total(), np_t = dofs.pres_total();
  SparseMatrix A1t(nu_t, nu_t), A0t(nu_t, nu_t), Bt(N, nu_t), Apt(np_t, np_t), Dt(np_t, np_t);
  A1t.setFromTriplets(a1.begin(), a1.end());
  A0t.setFromTriplets(a0.begin(), a0.end());
  Bt.setFromTriplets(bc.begin(), bc.end());
  Apt.setFromTriplets(ap.begin(), ap.end());
  Dt.setFromTriplets(dd.begin(), dd.end());

  const int nuf = dofs.n_disp_free(), nuc = static_cast<int>(dofs.disp_fixed.size());
  const int npf = dofs.n_pres_free(), npc = static_cast<int>(dofs.pres_fixed.size());
  auto rows = identity_map(N);

  out.A1 = extract_block(A1t, dofs.disp_free_index, nuf, dofs.disp_free_index, nuf);
  out.A0 = extract_block(A0t, dofs.disp_free_index, nuf, dofs.disp_free_index, nuf);
  out.Bc = extract_block(Bt, rows, N, dofs.disp_free_index, nuf);
  out.Ap = extract_block(Apt, dofs.pres_free_index, npf, dofs.pres_free_index, npf);
  out.D = extract_block(Dt, dofs.pres_free_index, npf, dofs.pres_free_index, npf);
  out.A1_fixed = extract_block(A1t, dofs.disp_free_index, nuf, dofs.disp_fixed_index, nuc);
  out.A0_fixed = extract_block(A0t, dofs.disp_free_index, nuf, dofs.disp_fixed_index, nuc);
  out.Bc_fixed = extract_block(Bt, rows, N, dofs.disp_fixed_index, nuc);
  out.D_fixed = extract_block(Dt, dofs.pres_free_index, npf, dofs.pres_fixed_index, npc);
  out.Bc_total = std::move(Bt);
  return out;
}

LoadVectors assemble_rhs(const Mesh& mesh, const DofMap& dofs, const PhysicalParams& params,
                         const AssembledBlocks& blocks, const ScenarioSpec& scenario, double t,
                         const Vector& u_prev, const Vector& p_prev) {
  const int N = mesh.n_elements();
  const int d = mesh.dim;
  if (u_prev.size() != dofs.disp_total() || p_prev.size() != dofs.pres_total()) {
    throw ConfigError("previous-step fields must cover all dofs");
  }
  if (!scenario.body_force || !scenario.source) throw ConfigError("scenario lacks body force or source");

  Vector b1 = Vector::Zero(dofs.disp_total());
  Vector b2 = Vector::Zero(dofs.pres_total());
  const auto& rule = load_rule(d);
  const auto& frule = facet_rule(d);

  for (int k = 0; k < N; ++k) {
    auto geom = element_geometry(mesh, k);
    BrLocalBasis basis(geom, bubble_signs(mesh, k));
    auto udofs = dofs.element_disp_dofs(mesh, k);
    double s_int = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Vec3 x = geom.point(rule.points[q]);
      double w = rule.weights[q] * geom.volume;
      Vec3 f = scenario.body_force(x, t);
      for (int a = 0; a < basis.size(); ++a) b1[udofs[a]] += w * f.dot(basis.value(a, rule.points[q]));
      s_int += w * scenario.source(x, t);
    }
    b2[dofs.interior_dof(k)] += -params.dt * s_int;
  }

  for (int f = 0; f < mesh.n_facets(); ++f) {
    if (!mesh.is_boundary(f)) continue;
    const auto& tag = mesh.facet_tags[f];
    bool traction = scenario.displacement_kind(tag) == DisplacementBc::traction;
    bool flux = scenario.pressure_kind(tag) == PressureBc::flux;
    if (!traction && !flux) continue;
    if (traction && !scenario.traction) throw ConfigError("scenario lacks traction data");
    if (flux && !scenario.flux) throw ConfigError("scenario lacks flux data");

    FacetFrame fr = facet_frame(mesh, f);
    auto geom = element_geometry(mesh, fr.element);
    BrLocalBasis basis(geom, bubble_signs(mesh, fr.element));
    auto udofs = dofs.element_disp_dofs(mesh, fr.element);
    double flux_int = 0.0;
    for (std::size_t q = 0; q < frule.size(); ++q) {
      Barycentric b = geom.facet_point(fr.local, std::span<const double>(frule.points[q].data(), d));
      Vec3 x = geom.point(b);
      double w = frule.weights[q] * fr.area;
      BoundaryPoint bp{x, fr.normal, tag};
      if (traction) {
        Vec3 tn = scenario.traction(bp, t);
        for (int a = 0; a < basis.size(); ++a) b1[udofs[a]] += w * tn.dot(basis.value(a, b));
      }
      if (flux) flux_int += w * scenario.flux(bp, t);
    }
    if (flux) b2[dofs.facet_dof(f)] += -params.dt * flux_int;
  }

  // Previous-step terms: -alpha (div u^{n-1}, q) - c0 (p^{n-1}, q).
  Vector div_prev = blocks.Bc_total * u_prev;
  for (int k = 0; k < N; ++k) {
    b2[dofs.interior_dof(k)] += -params.alpha * div_prev[k] - params.c0 * blocks.Mp[k] * p_prev[dofs.interior_dof(k)];
  }

  LoadVectors out;
  out.b1 = dofs.restrict_displacement(b1);
  out.b2 = dofs.restrict_pressure(b2);

  // Move the Dirichlet columns to the right-hand side.
  const Vector& uc = dofs.disp_values;
  const Vector& pc = dofs.pres_values;
  if (uc.size() > 0) {
    out.b1 -= 2.0 * blocks.mu_ref * (blocks.A1_fixed * uc) + blocks.lambda_ref * (blocks.A0_fixed * uc);
    out.b2.head(N) += params.alpha * (blocks.Bc_fixed * uc);
  }
  if (pc.size() > 0) out.b2 += blocks.D_fixed * pc;
  return out;
}

} // namespace poro
