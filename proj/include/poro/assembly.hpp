#pragma once

#include <vector>

#include "poro/mesh.hpp"
#include "poro/scenario.hpp"
#include "poro/spaces.hpp"

namespace poro {

// Material and time-step data. Lame constants and permeability are stored
// per element so layered media are representable; homogeneous problems use
// uniform().
struct PhysicalParams {
  double alpha = 1.0;
  double c0 = 1.0;
  double dt = 1e-3;
  std::vector<double> mu;
  std::vector<double> lambda;
  std::vector<double> kappa;

  static PhysicalParams uniform(int n_elements, double mu, double lambda, double alpha, double c0,
                                double kappa, double dt);

  // (lambda, mu) from Young's modulus and Poisson's ratio.
  static std::pair<double, double> lame_from_young(double E, double nu);

  // Reference values used to scale the system; the per-element weights
  // mu_K / mu_ref and lambda_ref / lambda_K equal one for uniform media.
  double mu_ref() const;
  double lambda_ref() const;
  double eps() const { return 2.0 * mu_ref() / lambda_ref(); }

  void validate(int n_elements, bool has_pressure_dirichlet) const;
};

// Matrices of one time step on the free dofs (Dirichlet dofs eliminated).
//
// A1 carries the relative shear weights mu_K/mu_ref but not the factor
// 2 mu_ref; A0 carries lambda_K/lambda_ref but not lambda_ref; Bc carries
// no alpha. The system module applies the global scalings.
struct AssembledBlocks {
  SparseMatrix A1;   // strain stiffness
  SparseMatrix A0;   // averaged-divergence stiffness
  SparseMatrix Bc;   // elements x free displacement dofs
  SparseMatrix Ap;   // weak-Galerkin Laplacian on free pressure dofs
  SparseMatrix D;    // c0 interior mass + dt * kappa-weighted Ap
  Vector Mp;         // |K_j|
  Vector Mdil;       // |K_j| lambda_ref / lambda_j; Mp for uniform media

  // Couplings to constrained dofs, used to lift Dirichlet data.
  SparseMatrix A1_fixed;  // free x constrained displacement
  SparseMatrix A0_fixed;
  SparseMatrix Bc_fixed;  // elements x constrained displacement
  SparseMatrix D_fixed;   // free x constrained pressure
  SparseMatrix Bc_total;  // elements x all displacement dofs

  double mu_ref = 1.0;
  double lambda_ref = 1.0;
  double alpha = 1.0;

  int n_elements() const { return static_cast<int>(Mp.size()); }
  int n_u() const { return static_cast<int>(A1.rows()); }
  int n_p() const { return static_cast<int>(D.rows()); }
};

AssembledBlocks assemble_blocks(const Mesh& mesh, const DofMap& dofs, const PhysicalParams& params);

struct LoadVectors {
  Vector b1;  // free displacement rows
  Vector b2;  // free pressure rows
};

// Right-hand sides at time t (dofs must hold the Dirichlet values at t).
// u_prev and p_prev are the previous-step fields on all dofs.
LoadVectors assemble_rhs(const Mesh& mesh, const DofMap& dofs, const PhysicalParams& params,
                         const AssembledBlocks& blocks, const ScenarioSpec& scenario, double t,
                         const Vector& u_prev, const Vector& p_prev);

// Rows/columns of `m` mapped through index tables (-1 drops the entry).
SparseMatrix extract_block(const SparseMatrix& m, const std::vector<int>& row_map, int n_rows,
                           const std::vector<int>& col_map, int n_cols);

} // namespace poro
