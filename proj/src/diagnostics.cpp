#include "poro/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace poro {

namespace {

void check_limit(Eigen::Index n, Eigen::Index limit) {
  if (n > limit) {
    throw ConfigError("dense diagnostics limited to " + std::to_string(limit) + " unknowns (got " +
                      std::to_string(n) + "); use a coarser mesh");
  }
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

DenseMatrix dense_a1_inverse_times(const SparseMatrix& a1, const DenseMatrix& rhs) {
  Eigen::LLT<DenseMatrix> llt{DenseMatrix(a1)};
  if (llt.info() != Eigen::Success) throw FactorizationError("A1 is not positive definite");
  return llt.solve(rhs);
}

DenseMatrix regularized(const Vector& mass, double eps, const RegularizationSpec& reg) {
  DenseMatrix r = (eps * mass).asDiagonal();
  if (reg.rho != 0.0) r += reg.rho * reg.w * reg.w.transpose();
  return r;
}

} // namespace

SchurPair dense_schur(const ThreeFieldSystem& sys, Eigen::Index limit) {
  const Eigen::Index np = sys.n_p(), ne = sys.n_e();
  check_limit(np + ne, limit);
  check_limit(sys.n_u(), 2 * limit);
  const auto& b = sys.blocks();
  const auto& reg = sys.regularization();
  DenseMatrix r = regularized(sys.mass(), sys.eps(), reg);

  DenseMatrix bct = DenseMatrix(b.Bc.transpose());
  DenseMatrix c = DenseMatrix(b.Bc) * dense_a1_inverse_times(b.A1, bct);

  SchurPair out;
  out.s3 = DenseMatrix::Zero(np + ne, np + ne);
  out.s3.topLeftCorner(np, np) = sys.d_scale() * DenseMatrix(b.D);
  out.s3.topLeftCorner(ne, ne) += r;
  out.s3.block(0, np, ne, ne) = r;
  out.s3.block(np, 0, ne, ne) = r;
  out.s3.bottomRightCorner(ne, ne) = r + c;

  out.s3_hat = DenseMatrix::Zero(np + ne, np + ne);
  out.s3_hat.topLeftCorner(np, np) = out.s3.topLeftCorner(np, np);
  out.s3_hat.bottomRightCorner(ne, ne) = regularized(sys.mass(), 1.0, reg);
  return out;
}

std::vector<EigenReport> dense_schur_eigs(const AssembledBlocks& blocks, const RegularizationSpec& reg,
                                          const std::vector<double>& eps_list, const std::string& scenario,
                                          double h, Eigen::Index limit) {
  InfSupReport infsup = estimate_inf_sup(blocks.A1, blocks.Bc, blocks.Mdil, limit);
  std::vector<EigenReport> out;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    AssembledBlocks b = blocks;
    b.lambda_ref = 2.0 * b.mu_ref / eps;
    ThreeFieldSystem sys(std::move(b), reg);
    SchurPair sp = dense_schur(sys, limit);
    Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> ges(sp.s3, sp.s3_hat, Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) throw FactorizationError("generalized eigensolver failed");
    EigenReport rep;
    rep.scenario = scenario;
    rep.h = h;
    rep.eps = eps;
    rep.rho = sys.regularization().rho;
    rep.eigenvalues = to_std(ges.eigenvalues());
    rep.min = rep.eigenvalues.front();
    rep.max = rep.eigenvalues.back();
    rep.beta = infsup.beta;
    rep.c_korn = infsup.c_korn;
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<double> preconditioned_eigs(const ThreeFieldSystem& sys, Eigen::Index limit) {
  check_limit(sys.size(), limit);
  const Eigen::Index nu = sys.n_u(), np = sys.n_p(), ne = sys.n_e();
  DenseMatrix a = DenseMatrix(sys.assemble());
  DenseMatrix p = DenseMatrix::Zero(sys.size(), sys.size());
  p.topLeftCorner(nu, nu) = DenseMatrix(sys.blocks().A1);
  p.block(nu, nu, np, np) = DenseMatrix(sys.middle_sparse());
  const auto& reg = sys.regularization();
  if (reg.rho != 0.0) p.block(nu, nu, ne, ne) += reg.rho * reg.w * reg.w.transpose();
  p.bottomRightCorner(ne, ne) = regularized(sys.mass(), 1.0, reg);
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> ges(a, p, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) throw FactorizationError("generalized eigensolver failed");
  return to_std(ges.eigenvalues());
}

RankReport rank_nullspace(const SparseMatrix& bc, Eigen::Index limit) {
  check_limit(bc.rows(), limit);
  DenseMatrix bt = DenseMatrix(bc.transpose());
  Eigen::JacobiSVD<DenseMatrix> svd(bt, Eigen::ComputeFullV);
  Vector s = svd.singularValues();
  RankReport rep;
  rep.singular_values = to_std(s);
  const Eigen::Index n = bc.rows();
  Vector all = Vector::Zero(n);
  all.head(s.size()) = s;
  const double smax = all.maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (all[i] <= 1e-10 * smax) ++rep.null_dim;
  }
  rep.sigma_ratio = smax > 0.0 ? all.minCoeff() / smax : 0.0;
  rep.null_basis = svd.matrixV().rightCols(rep.null_dim);
  if (rep.null_dim == 1) {
    Vector ones = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    rep.constant_cosine = std::abs(rep.null_basis.col(0).dot(ones));
  }
  return rep;
}

InfSupReport estimate_inf_sup(const SparseMatrix& a1, const SparseMatrix& bc, const Vector& mass,
                              Eigen::Index limit) {
  check_limit(bc.rows(), limit);
  check_limit(a1.rows(), 2 * limit);
  DenseMatrix bct = DenseMatrix(bc.transpose());
  DenseMatrix c = DenseMatrix(bc) * dense_a1_inverse_times(a1, bct);
  c = 0.5 * (c + c.transpose()).eval();
  DenseMatrix m = mass.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> ges(c, m, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) throw FactorizationError("generalized eigensolver failed");
  InfSupReport rep;
  rep.eigenvalues = to_std(ges.eigenvalues());
  rep.c_korn = rep.eigenvalues.back();
  double smallest = rep.c_korn;
  for (double v : rep.eigenvalues) {
    if (v <= 1e-10 * rep.c_korn) {
      ++rep.zero_eigenvalues;
    } else {
      smallest = std::min(smallest, v);
    }
  }
  rep.beta = std::sqrt(smallest);
  return rep;
}

void write_eigen_csv(const std::vector<EigenReport>& reports, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "scenario,h,eps,rho,theta_min,theta_max,beta,c_korn\n" << std::setprecision(12);
  for (const auto& r : reports) {
    out << r.scenario << ',' << r.h << ',' << r.eps << ',' << r.rho << ',' << r.min << ',' << r.max << ','
        << r.beta << ',' << r.c_korn << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace poro
