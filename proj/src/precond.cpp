#include "poro/precond.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace poro {

void InnerSolverConfig::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("inner tolerance must lie in (0, 1)");
  if (max_iterations < 1) throw ConfigError("inner iteration limit must be at least 1");
  if (!(droptol >= 0.0)) throw ConfigError("drop tolerance must be non-negative");
}

bool ict_factorize(const SparseMatrix& s, double droptol, double shift, IcFactor::Factor& l) {
  const int n = static_cast<int>(s.rows());
  std::vector<std::vector<std::pair<int, double>>> cols(n);
  std::vector<std::vector<int>> row_cols(n);  // columns k < i with L(i, k) != 0
  std::vector<std::size_t> next(n, 0);
  std::vector<double> work(n, 0.0);
  std::vector<char> mark(n, 0);
  std::vector<int> touched;

  for (int j = 0; j < n; ++j) {
    touched.clear();
    double norm1 = 0.0;
    for (SparseMatrix::InnerIterator it(s, j); it; ++it) {
      int i = static_cast<int>(it.col());
      if (i < j) continue;
      double v = it.value();
      if (i == j) v += shift * v;
      norm1 += std::abs(v);
      work[i] = v;
      if (!mark[i]) {
        mark[i] = 1;
        touched.push_back(i);
      }
    }
    if (!mark[j]) {
      mark[j] = 1;
      touched.push_back(j);
    }

    for (int k : row_cols[j]) {
      auto& col = cols[k];
      std::size_t p = next[k];
      double ljk = col[p].second;
      for (std::size_t q = p; q < col.size(); ++q) {
        int i = col[q].first;
        work[i] -= col[q].second * ljk;
        if (!mark[i]) {
          mark[i] = 1;
          touched.push_back(i);
        }
      }
      next[k] = p + 1;
    }

    double pivot = work[j];
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      for (int i : touched) {
        work[i] = 0.0;
        mark[i] = 0;
      }
      return false;
    }
    double ljj = std::sqrt(pivot);
    std::sort(touched.begin(), touched.end());
    auto& col = cols[j];
    col.emplace_back(j, ljj);
    const double cut = droptol * norm1;
    for (int i : touched) {
      if (i > j) {
        double v = work[i] / ljj;
        if (std::abs(v) >= cut && v != 0.0) {
          col.emplace_back(i, v);
          row_cols[i].push_back(j);
        }
      }
      work[i] = 0.0;
      mark[i] = 0;
    }
    next[j] = 1;
  }

  std::vector<Eigen::Triplet<double, int>> trips;
  for (int j = 0; j < n; ++j) {
    for (auto& [i, v] : cols[j]) trips.emplace_back(i, j, v);
  }
  l.resize(n, n);
  l.setFromTriplets(trips.begin(), trips.end());
  l.makeCompressed();
  return true;
}

IcFactor::IcFactor(const SparseMatrix& s, double droptol) {
  if (s.rows() != s.cols()) throw FactorizationError("incomplete Cholesky needs a square matrix");
  for (double beta : {0.0, 1e-3, 1e-2, 1e-1}) {
    if (ict_factorize(s, droptol, beta, l_)) {
      shift_ = beta;
      return;
    }
  }
  throw FactorizationError("incomplete Cholesky broke down for all diagonal shifts");
}

void IcFactor::solve(const Vector& r, Vector& z) const {
  z = r;
  l_.triangularView<Eigen::Lower>().solveInPlace(z);
  l_.transpose().triangularView<Eigen::Upper>().solveInPlace(z);
}

Vector IcFactor::solve(const Vector& r) const {
  Vector z;
  solve(r, z);
  return z;
}

PcgResult pcg(const LinearOperator& a, const Vector& b, const LinearOperator& m, const InnerSolverConfig& cfg,
              bool throw_on_failure) {
  PcgResult res;
  const Eigen::Index n = b.size();
  res.x = Vector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  Vector r = b, z(n), p(n), q(n);
  m.apply(r, z);
  p = z;
  double rz = r.dot(z);
  double rel = 1.0;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    a.apply(p, q);
    double pq = p.dot(q);
    if (!(pq > 0.0)) break;
    double step = rz / pq;
    res.x.noalias() += step * p;
    r.noalias() -= step * q;
    rel = r.norm() / bnorm;
    res.iterations = it;
    if (rel <= cfg.tol) {
      res.converged = true;
      break;
    }
    m.apply(r, z);
    double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  res.relative_residual = rel;
  if (!res.converged && throw_on_failure) {
    throw InnerSolverError("PCG reached relative residual " + std::to_string(rel) + " after " +
                           std::to_string(res.iterations) + " iterations");
  }
  return res;
}

Vector smw_solve(const Vector& mass, double rho, const Vector& w, const Vector& v) {
  Vector y = v.cwiseQuotient(mass);
  if (rho == 0.0) return y;
  Vector mw = w.cwiseQuotient(mass);
  return y - (rho * w.dot(y) / (1.0 + rho * w.dot(mw))) * mw;
}

SpdBlockSolver::SpdBlockSolver(SparseMatrix s, Vector w, double rho, const InnerSolverConfig& cfg)
    : s_(std::move(s)), w_(std::move(w)), rho_(rho), cfg_(cfg) {
  cfg_.validate();
  ic_ = IcFactor(s_, cfg_.droptol);
  if (rho_ != 0.0) {
    if (w_.size() != s_.rows()) throw ConfigError("rank-one vector size mismatch");
    ic_.solve(w_, v_);
    denom_ = 1.0 + rho_ * w_.dot(v_);
  }
}

void SpdBlockSolver::apply_operator(const Vector& x, Vector& y) const {
  y.noalias() = s_ * x;
  if (rho_ != 0.0) y += (rho_ * w_.dot(x)) * w_;
}

void SpdBlockSolver::apply_preconditioner(const Vector& r, Vector& z) const {
  ic_.solve(r, z);
  if (rho_ != 0.0) z -= (rho_ * w_.dot(z) / denom_) * v_;
}

int SpdBlockSolver::solve(const Vector& r, Vector& z) const {
  LinearOperator a{s_.rows(), [this](const Vector& x, Vector& y) { apply_operator(x, y); }};
  LinearOperator m{s_.rows(), [this](const Vector& x, Vector& y) { apply_preconditioner(x, y); }};
  PcgResult res = pcg(a, r, m, cfg_);
  z = std::move(res.x);
  return res.iterations;
}

BlockPreconditioner::BlockPreconditioner(const ThreeFieldSystem& system, PreconditionerKind kind,
                                         const InnerSolverConfig& cfg)
    : system_(&system), kind_(kind), counters_(std::make_unique<Counters>()) {
  const auto& b = system.blocks();
  a1_ = std::make_unique<SpdBlockSolver>(b.A1, Vector(), 0.0, cfg);
  const auto& reg = system.regularization();
  Vector w_embedded = Vector::Zero(system.n_p());
  if (reg.rho != 0.0) w_embedded.head(system.n_e()) = reg.w;
  middle_ = std::make_unique<SpdBlockSolver>(system.middle_sparse(), w_embedded, reg.rho, cfg);
}

void BlockPreconditioner::apply(const Vector& r, Vector& z) const {
  const auto& sys = *system_;
  const Eigen::Index nu = sys.n_u(), np = sys.n_p(), ne = sys.n_e();
  const auto& reg = sys.regularization();
  z.resize(sys.size());

  Vector z1, z2;
  int it1 = a1_->solve(r.segment(0, nu), z1);
  int it2 = middle_->solve(r.segment(nu, np), z2);
  Vector r3 = r.segment(nu + np, ne);
  if (kind_ == PreconditionerKind::triangular) {
    r3.noalias() += sys.blocks().Bc * z1;
    z2 = -z2;
  }
  Vector z3 = smw_solve(sys.mass(), reg.rho, reg.w, r3);
  if (kind_ == PreconditionerKind::triangular) z3 = -z3;

  z.segment(0, nu) = z1;
  z.segment(nu, np) = z2;
  z.segment(nu + np, ne) = z3;

  counters_->applications.fetch_add(1, std::memory_order_relaxed);
  counters_->a1_iterations.fetch_add(it1, std::memory_order_relaxed);
  counters_->middle_iterations.fetch_add(it2, std::memory_order_relaxed);
}

LinearOperator BlockPreconditioner::op() const {
  return {system_->size(), [this](const Vector& r, Vector& z) { apply(r, z); }};
}

PreconditionerStats BlockPreconditioner::stats() const {
  return {counters_->applications.load(), counters_->a1_iterations.load(), counters_->middle_iterations.load()};
}

void BlockPreconditioner::reset_stats() const {
  counters_->applications = 0;
  counters_->a1_iterations = 0;
  counters_->middle_iterations = 0;
}

const char* to_string(PreconditionerKind kind) {
  return kind == PreconditionerKind::diagonal ? "diagonal" : "triangular";
}

} // namespace poro
