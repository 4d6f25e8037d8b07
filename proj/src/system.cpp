#include "poro/system.hpp"

#include <cmath>

#include "poro/sparse.hpp"

namespace poro {

RegularizationSpec build_regularizer(const Vector& mass, RegularizationMode mode, double rho_scale) {
  if (mass.size() == 0) throw ConfigError("empty mass matrix");
  if ((mass.array() <= 0.0).any()) throw ConfigError("mass entries must be positive");
  RegularizationSpec reg;
  reg.w = mass / mass.norm();
  if (mode == RegularizationMode::pure_dbc) {
    if (!(rho_scale >= 0.0)) throw ConfigError("rho scale must be non-negative");
    reg.rho = rho_scale * mass.minCoeff();
    reg.enabled = reg.rho > 0.0;
  }
  return reg;
}

SparseMatrix build_two_field(const AssembledBlocks& b) {
  const Eigen::Index nu = b.A1.rows(), np = b.D.rows();
  std::vector<Triplet> trips;
  trips.reserve(b.A1.nonZeros() + b.A0.nonZeros() + 2 * b.Bc.nonZeros() + b.D.nonZeros());
  append_block(trips, b.A1, 0, 0, 2.0 * b.mu_ref);
  append_block(trips, b.A0, 0, 0, b.lambda_ref);
  SparseMatrix bt = b.Bc.transpose();
  append_block(trips, bt, 0, nu, -b.alpha);
  append_block(trips, b.Bc, nu, 0, -b.alpha);
  append_block(trips, b.D, nu, nu, -1.0);
  return from_triplets(nu + np, nu + np, trips);
}

Vector two_field_rhs(const LoadVectors& loads) {
  Vector r(loads.b1.size() + loads.b2.size());
  r << loads.b1, loads.b2;
  return r;
}

ThreeFieldSystem::ThreeFieldSystem(AssembledBlocks blocks, RegularizationSpec reg)
    : blocks_(std::move(blocks)), reg_(std::move(reg)) {
  if (blocks_.D.rows() < blocks_.Mp.size()) throw ConfigError("pressure block smaller than element count");
  if (!reg_.enabled) {
    reg_.rho = 0.0;
  } else if (reg_.w.size() != blocks_.Mp.size()) {
    throw ConfigError("regularizer length does not match element count");
  }
  if (reg_.w.size() == 0) reg_.w = Vector::Zero(blocks_.Mp.size());
}

Vector ThreeFieldSystem::regularized_mass(const Vector& v) const {
  Vector out = mass().cwiseProduct(v);
  if (reg_.rho != 0.0) out += reg_.rho * reg_.w.dot(v) * reg_.w;
  return out;
}

void ThreeFieldSystem::apply(const Vector& x, Vector& y) const {
  const Eigen::Index nu = n_u(), np = n_p(), ne = n_e();
  y.resize(size());
  auto x1 = x.segment(0, nu);
  auto x2 = x.segment(nu, np);
  auto x3 = x.segment(nu + np, ne);

  Vector s = x2.head(ne) + x3;
  Vector ms = eps() * mass().cwiseProduct(s);
  if (reg_.rho != 0.0) ms += reg_.rho * reg_.w.dot(s) * reg_.w;

  y.segment(0, nu).noalias() = blocks_.A1 * x1;
  y.segment(0, nu).noalias() -= blocks_.Bc.transpose() * x3;

  y.segment(nu, np).noalias() = -d_scale() * (blocks_.D * x2);
  y.segment(nu, ne) -= ms;

  // eps M x2 + eps M x3 as one term; the rank-one part is not scaled by eps.
  y.segment(nu + np, ne).noalias() = -(blocks_.Bc * x1);
  y.segment(nu + np, ne) -= ms;
}

LinearOperator ThreeFieldSystem::op() const {
  return {size(), [this](const Vector& x, Vector& y) { apply(x, y); }};
}

Vector ThreeFieldSystem::rhs(const LoadVectors& loads) const {
  if (loads.b1.size() != n_u() || loads.b2.size() != n_p()) throw ConfigError("load vector size mismatch");
  Vector r = Vector::Zero(size());
  r.segment(0, n_u()) = loads.b1 / two_mu();
  r.segment(n_u(), n_p()) = -loads.b2 / alpha();
  return r;
}

std::pair<Vector, Vector> ThreeFieldSystem::recover(const Vector& x) const {
  if (x.size() != size()) throw ConfigError("solution vector size mismatch");
  Vector u = x.segment(0, n_u());
  Vector p = -(two_mu() / alpha()) * x.segment(n_u(), n_p());
  return {u, p};
}

Vector ThreeFieldSystem::scale(const Vector& u, const Vector& p) const {
  Vector x(size());
  x.segment(0, n_u()) = u;
  x.segment(n_u(), n_p()) = -(alpha() / two_mu()) * p;
  Vector z = -(blocks_.Bc * u).cwiseQuotient(mass());
  x.segment(n_u() + n_p(), n_e()) = z / eps() - x.segment(n_u(), n_e());
  return x;
}

SparseMatrix ThreeFieldSystem::middle_sparse() const {
  std::vector<Triplet> trips;
  append_block(trips, blocks_.D, 0, 0, d_scale());
  for (Eigen::Index k = 0; k < n_e(); ++k) trips.emplace_back(k, k, eps() * mass()[k]);
  return from_triplets(n_p(), n_p(), trips);
}

SparseMatrix ThreeFieldSystem::assemble() const {
  const Eigen::Index nu = n_u(), np = n_p(), ne = n_e();
  std::vector<Triplet> trips;
  append_block(trips, blocks_.A1, 0, 0);
  SparseMatrix bt = blocks_.Bc.transpose();
  append_block(trips, bt, 0, nu + np, -1.0);
  append_block(trips, blocks_.Bc, nu + np, 0, -1.0);
  append_block(trips, blocks_.D, nu, nu, -d_scale());
  const Eigen::Index rows[2] = {nu, nu + np};
  for (Eigen::Index r : rows) {
    for (Eigen::Index c : rows) {
      for (Eigen::Index k = 0; k < ne; ++k) trips.emplace_back(r + k, c + k, -eps() * mass()[k]);
      if (reg_.rho != 0.0) {
        for (Eigen::Index i = 0; i < ne; ++i) {
          for (Eigen::Index j = 0; j < ne; ++j) trips.emplace_back(r + i, c + j, -reg_.rho * reg_.w[i] * reg_.w[j]);
        }
      }
    }
  }
  return from_triplets(size(), size(), trips);
}

} // namespace poro
