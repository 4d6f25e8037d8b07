#pragma once

#include <utility>

#include "poro/assembly.hpp"

namespace poro {

enum class RegularizationMode { pure_dbc, mixed };

// Rank-one term rho * w w^T added to the interior-pressure blocks.
struct RegularizationSpec {
  double rho = 0.0;
  Vector w;
  bool enabled = false;
};

// w = M 1 / |M 1|; rho = rho_scale * min_j M_j for pure_dbc, zero for mixed.
RegularizationSpec build_regularizer(const Vector& mass, RegularizationMode mode, double rho_scale = 0.1);

// [[2 mu A1 + lambda A0, -alpha B^T], [-alpha B, -D]] with B = [Bc; 0].
SparseMatrix build_two_field(const AssembledBlocks& blocks);
Vector two_field_rhs(const LoadVectors& loads);

// Regularized three-field operator on the unknown
//   x = (u; -(alpha/2mu) p; z/eps + (alpha/2mu) p_interior),
// where z = -M^{-1} Bc u and M is the dilatation mass (the element volumes
// for homogeneous media). Pressure blocks list the interior values first.
class ThreeFieldSystem {
 public:
  ThreeFieldSystem(AssembledBlocks blocks, RegularizationSpec reg);

  Eigen::Index n_u() const { return blocks_.A1.rows(); }
  Eigen::Index n_p() const { return blocks_.D.rows(); }
  Eigen::Index n_e() const { return blocks_.Mp.size(); }
  Eigen::Index size() const { return n_u() + n_p() + n_e(); }

  double two_mu() const { return 2.0 * blocks_.mu_ref; }
  double alpha() const { return blocks_.alpha; }
  double eps() const { return 2.0 * blocks_.mu_ref / blocks_.lambda_ref; }
  // Coefficient of D in the pressure block: 2 mu / alpha^2.
  double d_scale() const { return two_mu() / (alpha() * alpha()); }

  const AssembledBlocks& blocks() const { return blocks_; }
  const RegularizationSpec& regularization() const { return reg_; }
  const Vector& mass() const { return blocks_.Mdil; }

  void apply(const Vector& x, Vector& y) const;
  LinearOperator op() const;

  Vector rhs(const LoadVectors& loads) const;
  // (u, p) on the free dofs.
  std::pair<Vector, Vector> recover(const Vector& x) const;
  // Inverse of recover, including the auxiliary third block.
  Vector scale(const Vector& u, const Vector& p) const;

  // (M + rho w w^T) v.
  Vector regularized_mass(const Vector& v) const;
  // d_scale * D + eps * embed(M); the sparse part of the pressure block.
  SparseMatrix middle_sparse() const;

  // Explicit matrix (rank-one terms filled in densely); for small meshes.
  SparseMatrix assemble() const;

 private:
  AssembledBlocks blocks_;
  RegularizationSpec reg_;
};

} // namespace poro
