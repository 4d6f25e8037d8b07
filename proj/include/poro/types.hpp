#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace poro {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Compressed row storage; column indices within a row are kept sorted.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

// Barycentric coordinates of a point in a simplex; trailing entries unused in 2D.
using Barycentric = std::array<double, 4>;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an inner (preconditioner) solve fails to reach its tolerance.
struct InnerSolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Square linear map given by its action.
struct LinearOperator {
  Eigen::Index size = 0;
  std::function<void(const Vector&, Vector&)> apply;

  Vector operator*(const Vector& x) const {
    Vector y(size);
    apply(x, y);
    return y;
  }
};

inline LinearOperator identity_operator(Eigen::Index n) {
  return {n, [](const Vector& x, Vector& y) { y = x; }};
}

inline LinearOperator matrix_operator(const SparseMatrix& A) {
  return {A.rows(), [&A](const Vector& x, Vector& y) { y.noalias() = A * x; }};
}

} // namespace poro
