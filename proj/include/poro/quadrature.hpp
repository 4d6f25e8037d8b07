#pragma once

#include <vector>

#include "poro/types.hpp"

namespace poro {

// Quadrature on the unit simplex of dimension 1, 2 or 3. Points are given in
// barycentric coordinates (dim+1 entries) and weights sum to one, so an
// integral over a simplex S is |S| * sum_q w_q f(x_q).
struct QuadratureRule {
  int dim = 0;
  std::vector<Barycentric> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Collapsed-coordinate product rule, exact for polynomials of total degree
// `degree` on the simplex.
QuadratureRule simplex_rule(int dim, int degree);

} // namespace poro
