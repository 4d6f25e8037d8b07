#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "poro/manufactured.hpp"
#include "poro/quadrature.hpp"
#include "poro/spaces.hpp"

using namespace poro;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

Barycentric random_bary(int dim, std::mt19937& rng) {
  std::exponential_distribution<double> e(1.0);
  Barycentric b{0, 0, 0, 0};
  double s = 0.0;
  for (int i = 0; i <= dim; ++i) s += (b[i] = e(rng));
  for (int i = 0; i <= dim; ++i) b[i] /= s;
  return b;
}

ElementGeometry skewed(int dim) {
  if (dim == 2) {
    std::vector<Vec3> x = {Vec3(0.1, 0.2, 0), Vec3(1.3, 0.1, 0), Vec3(0.4, 0.9, 0)};
    return simplex_geometry(2, x);
  }
  std::vector<Vec3> x = {Vec3(0.1, 0.2, 0.0), Vec3(1.2, 0.1, 0.3), Vec3(0.3, 1.1, 0.2), Vec3(0.2, 0.4, 0.9)};
  return simplex_geometry(3, x);
}

} // namespace

TEST_CASE("Gauss-Legendre on [0,1]") {
  std::vector<double> x, w;
  gauss_legendre(3, x, w);
  CHECK(x[0] == doctest::Approx(0.5 - std::sqrt(0.15)).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(0.5));
  CHECK(w[0] == doctest::Approx(5.0 / 18.0));
  CHECK(w[1] == doctest::Approx(8.0 / 18.0));
}

TEST_CASE("simplex rules integrate monomials exactly") {
  for (int dim = 1; dim <= 3; ++dim) {
    for (int degree = 0; degree <= 5; ++degree) {
      QuadratureRule r = simplex_rule(dim, degree);
      double wsum = 0.0;
      for (double w : r.weights) wsum += w;
      CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
      // Monomials in the barycentric coordinates over the unit simplex:
      // mean of prod b_i^{a_i} = dim! prod a_i! / (dim + sum a)!.
      for (int a = 0; a <= degree; ++a) {
        for (int b = 0; a + b <= degree; ++b) {
          int c = dim == 3 ? degree - a - b : 0;
          if (dim < 3 && a + b != degree && dim == 2) continue;
          double q = 0.0;
          for (std::size_t k = 0; k < r.size(); ++k) {
            q += r.weights[k] * std::pow(r.points[k][1], a) * std::pow(r.points[k][dim >= 2 ? 2 : 0], dim >= 2 ? b : 0) *
                 std::pow(r.points[k][3], c);
          }
          double exact = factorial(dim) * factorial(a) * (dim >= 2 ? factorial(b) : 1.0) * factorial(c) /
                         factorial(dim + a + (dim >= 2 ? b : 0) + c);
          CHECK(q == doctest::Approx(exact).epsilon(1e-13));
        }
      }
    }
  }
  CHECK_THROWS_AS(simplex_rule(4, 2), ConfigError);
}

TEST_CASE("edge bubble equals n/4 at its edge midpoint") {
  auto g = skewed(2);
  BrLocalBasis basis(g);
  for (int i = 0; i < 3; ++i) {
    Barycentric mid{0.5, 0.5, 0.5, 0.0};
    mid[i] = 0.0;
    Vec3 v = basis.value(basis.bubble_index(i), mid);
    CHECK((v - g.normals[i] / 4.0).norm() < 1e-15);
  }
}

TEST_CASE("bubbles vanish at vertices and on the other facets") {
  std::mt19937 rng(7);
  for (int dim : {2, 3}) {
    auto g = skewed(dim);
    BrLocalBasis basis(g);
    for (int i = 0; i <= dim; ++i) {
      int a = basis.bubble_index(i);
      for (int v = 0; v <= dim; ++v) {
        Barycentric b{0, 0, 0, 0};
        b[v] = 1.0;
        CHECK(basis.value(a, b).norm() == 0.0);
      }
      for (int j = 0; j <= dim; ++j) {
        if (j == i) continue;
        for (int t = 0; t < 5; ++t) {
          Barycentric b = random_bary(dim, rng);
          b[j] = 0.0;
          CHECK(basis.value(a, b).norm() == 0.0);
        }
      }
    }
  }
}

TEST_CASE("vertex functions reproduce constant and linear fields") {
  std::mt19937 rng(11);
  for (int dim : {2, 3}) {
    auto g = skewed(dim);
    BrLocalBasis basis(g);
    auto field = [&](const Vec3& x) { return Vec3(x.x() + 2.0, -x.y(), dim == 3 ? 0.5 * x.z() : 0.0); };
    Mat3 grad = Mat3::Zero();
    grad(0, 0) = 1.0;
    grad(1, 1) = -1.0;
    if (dim == 3) grad(2, 2) = 0.5;
    std::vector<double> cconst(basis.size(), 0.0), clin(basis.size(), 0.0);
    for (int i = 0; i <= dim; ++i) {
      cconst[i * dim + 0] = 1.0;
      for (int c = 0; c < dim; ++c) clin[i * dim + c] = field(g.vertices[i])[c];
    }
    for (int t = 0; t < 10; ++t) {
      Barycentric b = random_bary(dim, rng);
      Vec3 vc = Vec3::Zero(), vl = Vec3::Zero();
      Mat3 gl = Mat3::Zero();
      for (int a = 0; a < basis.n_vertex_dofs(); ++a) {
        vc += cconst[a] * basis.value(a, b);
        vl += clin[a] * basis.value(a, b);
        gl += clin[a] * basis.gradient(a, b);
      }
      CHECK((vc - Vec3::UnitX()).norm() <= 1e-14);
      CHECK((vl - field(g.point(b))).norm() <= 1e-14);
      CHECK((gl - grad).norm() <= 1e-13);
    }
  }
}

TEST_CASE("bubble gradients match finite differences") {
  auto g = skewed(3);
  BrLocalBasis basis(g);
  std::mt19937 rng(3);
  Barycentric b = random_bary(3, rng);
  const double h = 1e-6;
  for (int a = 0; a < basis.size(); ++a) {
    Mat3 an = basis.gradient(a, b);
    for (int c = 0; c < 3; ++c) {
      // Move the point by h e_c in physical space.
      Barycentric bp = b, bm = b;
      for (int i = 0; i < 4; ++i) {
        bp[i] += h * g.grad_lambda[i][c];
        bm[i] -= h * g.grad_lambda[i][c];
      }
      Vec3 fd = (basis.value(a, bp) - basis.value(a, bm)) / (2 * h);
      CHECK((fd - an.col(c)).norm() <= 1e-8);
    }
  }
}

TEST_CASE("averaged divergence") {
  for (int dim : {2, 3}) {
    auto g = skewed(dim);
    BrLocalBasis basis(g);
    auto avg = avg_divergence(basis);
    for (int c = 0; c < dim; ++c) {
      double s = 0.0;
      for (int i = 0; i <= dim; ++i) s += avg[i * dim + c];
      CHECK(std::abs(s) <= 1e-14);
    }
    double div = 0.0;
    for (int i = 0; i <= dim; ++i) {
      for (int c = 0; c < dim; ++c) div += g.vertices[i][c] * avg[i * dim + c];
    }
    CHECK(div == doctest::Approx(dim));

    // Boundary-integral oracle: (1/|K|) int_{dK} phi . n.
    QuadratureRule face = simplex_rule(dim - 1, 4);
    for (int i = 0; i <= dim; ++i) {
      int a = basis.bubble_index(i);
      double flux = 0.0;
      for (int f = 0; f <= dim; ++f) {
        for (std::size_t q = 0; q < face.size(); ++q) {
          Barycentric b = g.facet_point(f, std::span<const double>(face.points[q].data(), dim));
          flux += face.weights[q] * g.facet_areas[f] * basis.value(a, b).dot(g.normals[f]);
        }
      }
      CHECK(avg[a] == doctest::Approx(flux / g.volume).epsilon(1e-13));
    }
  }
}

TEST_CASE("weak gradient of constants vanishes") {
  for (int dim : {2, 3}) {
    auto g = skewed(dim);
    std::vector<double> pf(dim + 1, 3.5);
    Rt0Field f = wg_weak_gradient(g, 3.5, pf);
    CHECK(f.constant.norm() <= 1e-13);
    CHECK(std::abs(f.linear) <= 1e-13);
  }
}

TEST_CASE("weak gradient is exact on linear pressures with averaged dofs") {
  for (int dim : {2, 3}) {
    Mesh m = build_structured_simplicial(3, dim, Box{Vec3(0, 0, 0), Vec3(1.5, 1.0, 0.7)});
    Vec3 grad(1.0, -2.0, dim == 3 ? 0.5 : 0.0);
    auto p = [&](const Vec3& x) { return 0.3 + grad.dot(x); };
    for (int k = 0; k < m.n_elements(); ++k) {
      auto g = element_geometry(m, k);
      std::vector<double> pf(dim + 1);
      for (int i = 0; i <= dim; ++i) {
        Vec3 c = Vec3::Zero();
        for (int j = 0; j <= dim; ++j) {
          if (j != i) c += g.vertices[j] / dim;
        }
        pf[i] = p(c);
      }
      Rt0Field f = wg_weak_gradient(g, p(g.centroid), pf);
      for (int i = 0; i <= dim; ++i) CHECK((f(g.vertices[i]) - grad).norm() <= 1e-13);
    }
  }
}

TEST_CASE("weak gradient of an interior unit value on the reference triangle") {
  std::vector<Vec3> x = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  auto g = simplex_geometry(2, x);
  std::vector<double> pf = {0.0, 0.0, 0.0};
  Rt0Field f = wg_weak_gradient(g, 1.0, pf);
  // (g, w)_K = -(1, div w)_K for w = e1, e2, x - x_K.
  QuadratureRule r = simplex_rule(2, 2);
  std::array<double, 3> lhs{0, 0, 0};
  for (std::size_t q = 0; q < r.size(); ++q) {
    Vec3 xq = g.point(r.points[q]);
    Vec3 w[3] = {Vec3::UnitX(), Vec3::UnitY(), xq - g.centroid};
    for (int a = 0; a < 3; ++a) lhs[a] += r.weights[q] * g.volume * f(xq).dot(w[a]);
  }
  CHECK(std::abs(lhs[0]) <= 1e-14);
  CHECK(std::abs(lhs[1]) <= 1e-14);
  CHECK(lhs[2] == doctest::Approx(-2.0 * g.volume).epsilon(1e-13));
}

TEST_CASE("local weak-Galerkin stiffness") {
  for (int dim : {2, 3}) {
    auto g = skewed(dim);
    DenseMatrix k = wg_local_stiffness(g);
    CHECK(k.rows() == dim + 2);
    CHECK((k - k.transpose()).norm() <= 1e-14 * k.norm());
    CHECK((k * Vector::Ones(dim + 2)).norm() <= 1e-13 * k.norm());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(k);
    CHECK(es.eigenvalues()[0] >= -1e-13 * k.norm());
    CHECK(es.eigenvalues()[1] > 1e-8 * k.norm());
  }
}

namespace {

Material unit_material() { return {}; }

} // namespace

TEST_CASE("Dirichlet sets for the manufactured scenarios") {
  Mesh m = build_structured_simplicial(4, 2);
  auto sol = poro_2d_solution(unit_material());

  DofMap d1 = dirichlet_constraints(m, manufactured_scenario(sol, ScenarioKind::pure_dirichlet), 0.0);
  int boundary_vertices = 4 * 4;
  CHECK(static_cast<int>(d1.disp_fixed.size()) == 2 * boundary_vertices + m.n_boundary_facets());
  CHECK(static_cast<int>(d1.pres_fixed.size()) == m.n_boundary_facets());
  CHECK(d1.n_pres_free() == m.n_elements() + m.n_facets() - m.n_boundary_facets());
  CHECK(d1.disp_values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d1.pres_values.cwiseAbs().maxCoeff() == 0.0);

  DofMap d2 = dirichlet_constraints(m, manufactured_scenario(sol, ScenarioKind::mixed), 0.0);
  for (int f = 0; f < m.n_facets(); ++f) {
    if (m.facet_tags[f] == "right") {
      CHECK(d2.disp_free_index[d2.bubble_dof(f)] >= 0);
      CHECK(d2.pres_free_index[d2.facet_dof(f)] >= 0);
    } else if (m.is_boundary(f)) {
      CHECK(d2.disp_fixed_index[d2.bubble_dof(f)] >= 0);
      CHECK(d2.pres_fixed_index[d2.facet_dof(f)] >= 0);
    }
  }
  // Corners of the traction face touch Dirichlet facets and stay constrained.
  int free_right_vertices = 0;
  for (int v = 0; v < m.n_vertices(); ++v) {
    const Vec3& x = m.vertices[v];
    if (std::abs(x.x() - 1.0) < 1e-12) {
      bool corner = x.y() < 1e-12 || x.y() > 1.0 - 1e-12;
      CHECK((d2.disp_fixed_index[d2.vertex_dof(v, 0)] >= 0) == corner);
      if (!corner) ++free_right_vertices;
    }
  }
  CHECK(free_right_vertices == 3);
  CHECK(d2.n_pres_free() == m.n_elements() + m.n_facets() - (m.n_boundary_facets() - 4));
}

TEST_CASE("lifted bubble matches the facet normal flux of the data") {
  Mesh m = build_structured_simplicial(3, 2);
  ScenarioSpec s = manufactured_scenario(poro_2d_solution(unit_material()), ScenarioKind::pure_dirichlet);
  auto quad = [](const BoundaryPoint& bp, double) { return Vec3(bp.x.x() * bp.x.y(), bp.x.x() * bp.x.x(), 0.0); };
  s.displacement = quad;
  DofMap d = dirichlet_constraints(m, s, 1.0);
  Vector u = d.expand_displacement(Vector::Zero(d.n_disp_free()));
  QuadratureRule face = simplex_rule(1, 4);
  for (int f = 0; f < m.n_facets(); ++f) {
    if (!m.is_boundary(f)) continue;
    FacetFrame fr = facet_frame(m, f);
    auto g = element_geometry(m, fr.element);
    std::array<int, 4> signs{1, 1, 1, 1};
    for (int i = 0; i < 3; ++i) signs[i] = m.facet_orientation(fr.element, i);
    BrLocalBasis basis(g, signs);
    auto dofs = d.element_disp_dofs(m, fr.element);
    double flux_h = 0.0, flux = 0.0;
    for (std::size_t q = 0; q < face.size(); ++q) {
      Barycentric b = g.facet_point(fr.local, std::span<const double>(face.points[q].data(), 2));
      Vec3 uh = Vec3::Zero();
      for (int a = 0; a < basis.size(); ++a) uh += u[dofs[a]] * basis.value(a, b);
      flux_h += face.weights[q] * uh.dot(fr.normal);
      flux += face.weights[q] * quad({g.point(b), fr.normal, ""}, 1.0).dot(fr.normal);
    }
    CHECK(flux_h == doctest::Approx(flux).epsilon(1e-13));
  }
}

TEST_CASE("linear boundary data needs no bubble correction") {
  Mesh m = build_structured_simplicial(2, 3);
  ScenarioSpec s = manufactured_scenario(poro_3d_solution(unit_material()), ScenarioKind::pure_dirichlet);
  s.displacement = [](const BoundaryPoint& bp, double t) { return Vec3(t * bp.x.y(), 2.0 - bp.x.z(), bp.x.x()); };
  DofMap d = dirichlet_constraints(m, s, 0.5);
  for (int f = 0; f < m.n_facets(); ++f) {
    if (m.is_boundary(f)) CHECK(std::abs(d.disp_values[d.disp_fixed_index[d.bubble_dof(f)]]) <= 1e-13);
  }
}

TEST_CASE("pressure lifting uses facet means") {
  Mesh m = build_structured_simplicial(2, 2);
  ScenarioSpec s = manufactured_scenario(poro_2d_solution(unit_material()), ScenarioKind::pure_dirichlet);
  s.pressure = [](const BoundaryPoint& bp, double) { return bp.x.x() * bp.x.x(); };
  DofMap d = dirichlet_constraints(m, s, 1.0);
  for (int f = 0; f < m.n_facets(); ++f) {
    if (!m.is_boundary(f)) continue;
    auto fv = m.facet_vertices(f);
    double a = m.vertices[fv[0]].x(), b = m.vertices[fv[1]].x();
    double mean = (a * a + a * b + b * b) / 3.0;
    CHECK(d.pres_values[d.pres_fixed_index[d.facet_dof(f)]] == doctest::Approx(mean).epsilon(1e-14));
  }
}

TEST_CASE("unknown boundary tags are configuration errors") {
  Mesh m = build_structured_simplicial(2, 2);
  ScenarioSpec s = manufactured_scenario(poro_2d_solution(unit_material()), ScenarioKind::pure_dirichlet);
  s.displacement_bc.erase("top");
  CHECK_THROWS_AS(dirichlet_constraints(m, s, 0.0), ConfigError);
}
