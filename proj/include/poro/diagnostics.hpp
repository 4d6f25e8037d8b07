#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "poro/system.hpp"

namespace poro {

// Dense work is refused above this many unknowns.
inline constexpr Eigen::Index kDenseLimit = 2500;

struct EigenReport {
  std::string scenario;
  double h = 0.0;
  double eps = 0.0;
  double rho = 0.0;
  std::vector<double> eigenvalues;  // ascending
  double min = 0.0;
  double max = 0.0;
  double beta = 0.0;
  double c_korn = 0.0;
};

// Pressure-space Schur complement of the three-field operator
//   S3 = [[d D + E(R), E(R)], [E(R)^T, R + Bc A1^{-1} Bc^T]],  R = eps M + rho w w^T,
// (E embeds interior rows into the pressure layout) and its block diagonal
// approximation blockdiag(d D + E(R), M + rho w w^T).
struct SchurPair {
  DenseMatrix s3;
  DenseMatrix s3_hat;
};
SchurPair dense_schur(const ThreeFieldSystem& system, Eigen::Index limit = kDenseLimit);

// Generalized eigenvalues of S3 x = theta S3_hat x for each eps in the list
// (the shear modulus is kept, lambda_ref = 2 mu_ref / eps).
std::vector<EigenReport> dense_schur_eigs(const AssembledBlocks& blocks, const RegularizationSpec& reg,
                                          const std::vector<double>& eps_list, const std::string& scenario,
                                          double h, Eigen::Index limit = kDenseLimit);

// Eigenvalues of P^{-1} A for the exact block diagonal preconditioner.
std::vector<double> preconditioned_eigs(const ThreeFieldSystem& system, Eigen::Index limit = kDenseLimit);

struct RankReport {
  std::vector<double> singular_values;  // of Bc^T, descending
  int null_dim = 0;
  DenseMatrix null_basis;               // N x null_dim, orthonormal
  // |cos| between the single null vector and the constant vector; 0 otherwise.
  double constant_cosine = 0.0;
  double sigma_ratio = 0.0;             // sigma_min / sigma_max
};

// Singular values with sigma <= 1e-10 sigma_max counted as zero.
RankReport rank_nullspace(const SparseMatrix& bc, Eigen::Index limit = kDenseLimit);

struct InfSupReport {
  double beta = 0.0;        // sqrt of the smallest nonzero eigenvalue
  double c_korn = 0.0;      // largest eigenvalue
  int zero_eigenvalues = 0;
  std::vector<double> eigenvalues;
};

// Pencil Bc A1^{-1} Bc^T q = theta M q.
InfSupReport estimate_inf_sup(const SparseMatrix& a1, const SparseMatrix& bc, const Vector& mass,
                              Eigen::Index limit = kDenseLimit);

void write_eigen_csv(const std::vector<EigenReport>& reports, const std::filesystem::path& path);

} // namespace poro
