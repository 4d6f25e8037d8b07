#pragma once

#include <atomic>
#include <memory>

#include "poro/system.hpp"

namespace poro {

struct InnerSolverConfig {
  double tol = 1e-12;
  int max_iterations = 200;
  double droptol = 1e-3;

  void validate() const;
};

// Incomplete Cholesky with threshold dropping: entries of column j below
// droptol * |S(j:n, j)|_1 are discarded. A nonpositive pivot triggers a
// retry on S + beta diag(S) for beta in {1e-3, 1e-2, 1e-1}.
class IcFactor {
 public:
  using Factor = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

  IcFactor() = default;
  IcFactor(const SparseMatrix& s, double droptol);

  // z = (L L^T)^{-1} r
  void solve(const Vector& r, Vector& z) const;
  Vector solve(const Vector& r) const;

  const Factor& factor() const { return l_; }
  double shift() const { return shift_; }
  Eigen::Index size() const { return l_.rows(); }

 private:
  Factor l_;
  double shift_ = 0.0;
};

// Lower factor of S (+ shift * diag(S)); returns false on a nonpositive pivot.
bool ict_factorize(const SparseMatrix& s, double droptol, double shift, IcFactor::Factor& l);

struct PcgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Preconditioned conjugate gradients from a zero initial guess, stopping
// when |r| <= tol |b|. Throws InnerSolverError when max_iterations is hit
// and `throw_on_failure` is set.
PcgResult pcg(const LinearOperator& a, const Vector& b, const LinearOperator& m, const InnerSolverConfig& cfg,
              bool throw_on_failure = true);

// (diag(mass) + rho w w^T)^{-1} v
Vector smw_solve(const Vector& mass, double rho, const Vector& w, const Vector& v);

// Solver for S + rho w w^T with S sparse SPD: PCG on the full operator,
// preconditioned by IC(S) with the rank-one term restored by
// Sherman-Morrison-Woodbury. rho = 0 gives plain IC-preconditioned CG.
class SpdBlockSolver {
 public:
  SpdBlockSolver(SparseMatrix s, Vector w, double rho, const InnerSolverConfig& cfg);

  // Returns the iteration count.
  int solve(const Vector& r, Vector& z) const;
  void apply_operator(const Vector& x, Vector& y) const;
  void apply_preconditioner(const Vector& r, Vector& z) const;

  const SparseMatrix& matrix() const { return s_; }
  const IcFactor& ic() const { return ic_; }

 private:
  SparseMatrix s_;
  Vector w_;
  double rho_ = 0.0;
  InnerSolverConfig cfg_;
  IcFactor ic_;
  Vector v_;        // (L L^T)^{-1} w
  double denom_ = 1.0;
};

enum class PreconditionerKind { diagonal, triangular };

struct PreconditionerStats {
  long applications = 0;
  long a1_iterations = 0;
  long middle_iterations = 0;
};

// Block diagonal diag(A1, M2, M3) or lower block triangular
// [[A1, 0, 0], [0, -M2, 0], [-Bc, 0, -M3]] with
//   M2 = (2mu/alpha^2) D + eps embed(M) + embed(rho w w^T),
//   M3 = M + rho w w^T.
// A1 and M2 are applied by inner PCG; M3 in closed form.
class BlockPreconditioner {
 public:
  BlockPreconditioner(const ThreeFieldSystem& system, PreconditionerKind kind, const InnerSolverConfig& cfg = {});

  PreconditionerKind kind() const { return kind_; }
  void apply(const Vector& r, Vector& z) const;
  LinearOperator op() const;

  PreconditionerStats stats() const;
  void reset_stats() const;

  const SpdBlockSolver& a1_solver() const { return *a1_; }
  const SpdBlockSolver& middle_solver() const { return *middle_; }

 private:
  struct Counters {
    std::atomic<long> applications{0};
    std::atomic<long> a1_iterations{0};
    std::atomic<long> middle_iterations{0};
  };

  const ThreeFieldSystem* system_;
  PreconditionerKind kind_;
  std::unique_ptr<SpdBlockSolver> a1_;
  std::unique_ptr<SpdBlockSolver> middle_;
  std::unique_ptr<Counters> counters_;
};

const char* to_string(PreconditionerKind kind);

} // namespace poro
