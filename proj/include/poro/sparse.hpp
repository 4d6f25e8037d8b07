#pragma once

#include <filesystem>
#include <vector>

#include "poro/types.hpp"

namespace poro {

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& trips);

// Largest |a_ij - a_ji|.
double asymmetry(const SparseMatrix& a);

double max_abs(const SparseMatrix& a);

// Square diagonal matrix with the given entries.
SparseMatrix diagonal_matrix(const Vector& d);

// Places `block` at (row, col) of a rows x cols zero matrix.
void append_block(std::vector<Triplet>& trips, const SparseMatrix& block, Eigen::Index row, Eigen::Index col,
                  double scale = 1.0);

// Coordinate-format Matrix Market text ("general real").
void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

} // namespace poro
