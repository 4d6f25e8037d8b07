#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "poro/types.hpp"

namespace poro {

struct SolverConfig {
  double tol = 1e-8;
  int max_iterations = 1000;
  int restart = 30;

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  // Relative preconditioned residual norms, entry 0 being the initial one.
  std::vector<double> residuals;
  // Restart boundaries (GMRES): iteration indices at which a cycle began.
  std::vector<int> cycle_starts;
  double true_relative_residual = 0.0;
  double seconds = 0.0;
  long inner_a1_iterations = 0;
  long inner_middle_iterations = 0;
  std::string message;
};

// Preconditioned MINRES for symmetric A with SPD preconditioner M (given as
// the action of M^{-1}). Stops when the M^{-1}-norm of the residual has
// dropped by tol.
SolveReport minres(const LinearOperator& a, const Vector& b, const LinearOperator& m_inv, const SolverConfig& cfg,
                   Vector& x);

// Restarted GMRES with left preconditioning; counts every inner iteration.
SolveReport gmres(const LinearOperator& a, const Vector& b, const LinearOperator& m_inv, const SolverConfig& cfg,
                  Vector& x);

// "iteration,residual" rows.
void write_residual_csv(const SolveReport& report, const std::filesystem::path& path);

} // namespace poro
