#include "poro/krylov.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace poro {

void SolverConfig::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("solver tolerance must lie in (0, 1)");
  if (max_iterations < 1) throw ConfigError("iteration limit must be at least 1");
  if (restart < 1) throw ConfigError("restart length must be at least 1");
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double true_residual(const LinearOperator& a, const Vector& b, const Vector& x) {
  double bn = b.norm();
  if (bn == 0.0) return 0.0;
  Vector ax(b.size());
  a.apply(x, ax);
  return (b - ax).norm() / bn;
}

} // namespace

SolveReport minres(const LinearOperator& a, const Vector& b, const LinearOperator& m_inv, const SolverConfig& cfg,
                   Vector& x) {
  cfg.validate();
  const auto start = Clock::now();
  const Eigen::Index n = b.size();
  SolveReport rep;
  x = Vector::Zero(n);

  Vector v_old = Vector::Zero(n), v = b, v_new(n);
  Vector z(n), z_new(n), az(n);
  Vector w_old = Vector::Zero(n), w = Vector::Zero(n), w_new(n);
  m_inv.apply(v, z);
  double zv = z.dot(v);
  if (zv < 0.0) throw ConfigError("MINRES preconditioner is not positive definite");
  double gamma = std::sqrt(zv);
  rep.residuals.push_back(1.0);
  if (gamma == 0.0) {
    rep.converged = true;
    rep.seconds = elapsed(start);
    return rep;
  }
  const double gamma1 = gamma;
  double gamma_old = 1.0;
  double eta = gamma;
  double s_old = 0.0, s = 0.0, c_old = 1.0, c = 1.0;

  for (int j = 1; j <= cfg.max_iterations; ++j) {
    z /= gamma;
    a.apply(z, az);
    double delta = az.dot(z);
    v_new = az - (delta / gamma) * v - (gamma / gamma_old) * v_old;
    m_inv.apply(v_new, z_new);
    double zv_new = z_new.dot(v_new);
    if (zv_new < 0.0) {
      rep.message = "preconditioner lost positive definiteness";
      break;
    }
    double gamma_new = std::sqrt(zv_new);

    double a0 = c * delta - c_old * s * gamma;
    double a1 = std::hypot(a0, gamma_new);
    double a2 = s * delta + c_old * c * gamma;
    double a3 = s_old * gamma;
    if (a1 == 0.0) {
      rep.message = "breakdown";
      break;
    }
    double c_new = a0 / a1, s_new = gamma_new / a1;
    w_new = (z - a3 * w_old - a2 * w) / a1;
    x.noalias() += (c_new * eta) * w_new;
    eta = -s_new * eta;

    rep.iterations = j;
    double rel = std::abs(eta) / gamma1;
    rep.residuals.push_back(rel);
    if (!std::isfinite(rel)) {
      rep.message = "non-finite residual";
      break;
    }
    if (rel <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (gamma_new == 0.0) {
      rep.message = "Krylov space exhausted";
      break;
    }

    v_old.swap(v);
    v.swap(v_new);
    z.swap(z_new);
    w_old.swap(w);
    w.swap(w_new);
    gamma_old = gamma;
    gamma = gamma_new;
    c_old = c;
    c = c_new;
    s_old = s;
    s = s_new;
  }
  if (!rep.converged && rep.message.empty()) rep.message = "iteration limit reached";
  rep.true_relative_residual = true_residual(a, b, x);
  rep.seconds = elapsed(start);
  return rep;
}

SolveReport gmres(const LinearOperator& a, const Vector& b, const LinearOperator& m_inv, const SolverConfig& cfg,
                  Vector& x) {
  cfg.validate();
  const auto start = Clock::now();
  const Eigen::Index n = b.size();
  const int m = cfg.restart;
  SolveReport rep;
  x = Vector::Zero(n);

  Vector mb(n);
  m_inv.apply(b, mb);
  const double ref = mb.norm();
  rep.residuals.push_back(1.0);
  if (ref == 0.0) {
    rep.converged = true;
    rep.seconds = elapsed(start);
    return rep;
  }

  DenseMatrix basis(n, m + 1);
  DenseMatrix h = DenseMatrix::Zero(m + 1, m);
  Vector cs(m), sn(m), g(m + 1);
  Vector r(n), ax(n), av(n), w(n);
  double cycle_start_residual = 1.0;

  while (rep.iterations < cfg.max_iterations) {
    rep.cycle_starts.push_back(rep.iterations);
    a.apply(x, ax);
    r = b - ax;
    m_inv.apply(r, w);
    double beta = w.norm();
    if (beta / ref <= cfg.tol) {
      rep.converged = true;
      break;
    }
    basis.col(0) = w / beta;
    g.setZero();
    g[0] = beta;
    h.setZero();
    int k = 0;
    bool done = false;
    for (; k < m && rep.iterations < cfg.max_iterations; ++k) {
      a.apply(basis.col(k), av);
      m_inv.apply(av, w);
      for (int i = 0; i <= k; ++i) {
        h(i, k) = w.dot(basis.col(i));
        w.noalias() -= h(i, k) * basis.col(i);
      }
      h(k + 1, k) = w.norm();
      if (h(k + 1, k) != 0.0) basis.col(k + 1) = w / h(k + 1, k);
      for (int i = 0; i < k; ++i) {
        double t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
        h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
        h(i, k) = t;
      }
      double rr = std::hypot(h(k, k), h(k + 1, k));
      if (rr == 0.0) {
        rep.message = "breakdown";
        done = true;
        break;
      }
      cs[k] = h(k, k) / rr;
      sn[k] = h(k + 1, k) / rr;
      h(k, k) = rr;
      h(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];

      ++rep.iterations;
      double rel = std::abs(g[k + 1]) / ref;
      rep.residuals.push_back(rel);
      if (!std::isfinite(rel)) {
        rep.message = "non-finite residual";
        done = true;
        break;
      }
      if (rel <= cfg.tol) {
        rep.converged = true;
        ++k;
        done = true;
        break;
      }
      if (h(k + 1, k) == 0.0 && std::abs(g[k + 1]) == 0.0) {
        ++k;
        done = true;
        break;
      }
    }
    if (k > 0) {
      Vector y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
      x.noalias() += basis.leftCols(k) * y;
    }
    if (done) break;
    double now = rep.residuals.back();
    if (k == m && !(now < cycle_start_residual * (1.0 - 1e-12))) {
      rep.message = "stagnation over a restart cycle";
      break;
    }
    cycle_start_residual = now;
  }
  if (!rep.converged && rep.message.empty()) rep.message = "iteration limit reached";
  rep.true_relative_residual = true_residual(a, b, x);
  rep.seconds = elapsed(start);
  return rep;
}

void write_residual_csv(const SolveReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "iteration,residual\n" << std::setprecision(17);
  for (std::size_t i = 0; i < report.residuals.size(); ++i) out << i << ',' << report.residuals[i] << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace poro
