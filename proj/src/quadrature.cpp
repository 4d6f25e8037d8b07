#include "poro/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace poro {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule simplex_rule(int dim, int degree) {
  if (dim < 1 || dim > 3) throw ConfigError("quadrature dimension must be 1, 2 or 3");
  if (degree < 0) throw ConfigError("quadrature degree must be non-negative");

  // The collapsed map adds dim-1 powers of (1-u) to the integrand.
  int n = std::max(1, (degree + dim) / 2 + ((degree + dim) % 2));
  std::vector<double> g, w;
  gauss_legendre(n, g, w);

  QuadratureRule rule;
  rule.dim = dim;
  if (dim == 1) {
    for (int a = 0; a < n; ++a) {
      rule.points.push_back({1.0 - g[a], g[a], 0.0, 0.0});
      rule.weights.push_back(w[a]);
    }
  } else if (dim == 2) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        double x = g[a], y = (1.0 - g[a]) * g[b];
        rule.points.push_back({1.0 - x - y, x, y, 0.0});
        rule.weights.push_back(2.0 * w[a] * w[b] * (1.0 - g[a]));
      }
    }
  } else {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          double x = g[a], y = (1.0 - g[a]) * g[b], z = (1.0 - g[a]) * (1.0 - g[b]) * g[c];
          rule.points.push_back({1.0 - x - y - z, x, y, z});
          rule.weights.push_back(6.0 * w[a] * w[b] * w[c] * (1.0 - g[a]) * (1.0 - g[a]) * (1.0 - g[b]));
        }
      }
    }
  }
  return rule;
}

} // namespace poro
