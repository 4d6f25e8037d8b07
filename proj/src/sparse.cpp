#include "poro/sparse.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace poro {

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& trips) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double asymmetry(const SparseMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  SparseMatrix t = a.transpose();
  SparseMatrix d = a - t;
  return max_abs(d);
}

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

SparseMatrix diagonal_matrix(const Vector& d) {
  std::vector<Triplet> trips;
  trips.reserve(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) trips.emplace_back(i, i, d[i]);
  return from_triplets(d.size(), d.size(), trips);
}

void append_block(std::vector<Triplet>& trips, const SparseMatrix& block, Eigen::Index row, Eigen::Index col,
                  double scale) {
  for (int r = 0; r < block.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(block, r); it; ++it) {
      trips.emplace_back(row + it.row(), col + it.col(), scale * it.value());
    }
  }
}

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("%%MatrixMarket matrix coordinate real general", 0) != 0) {
    throw std::runtime_error(path.string() + ": unsupported Matrix Market header");
  }
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream head(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(head >> rows >> cols >> nnz)) throw std::runtime_error(path.string() + ": bad size line");
  std::vector<Triplet> trips;
  trips.reserve(nnz);
  for (long k = 0; k < nnz; ++k) {
    long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw std::runtime_error(path.string() + ": truncated entries");
    trips.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
  }
  return from_triplets(rows, cols, trips);
}

} // namespace poro
