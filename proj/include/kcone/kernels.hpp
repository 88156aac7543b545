#pragma once

#include <vector>

#include "kcone/lefschetz_metric.hpp"

namespace kcone {

// Execution policy for the table kernels. `serial` is the reference path;
// `parallel` distributes independent entries over OpenMP threads and yields
// bit-identical results.
enum class Exec { serial, parallel };

// Index of the unordered pair (i, j) in a packed symmetric m x m table.
inline int pair_index(int i, int j, int m) { return i * m + j; }

// Columns (i*m + j) hold lambda_class(p, b_i, b_j) for the columns b_i of
// `basis`; symmetric in (i, j).
Matrix lambda_class_table(const ConePoint& p, const Matrix& basis, Exec exec);

// W(a, b) = C_a^T G C_b over the columns of `classes`.
Matrix pair_inner_table(const Matrix& classes, const Matrix& gram, Exec exec);

// Dense rank-4 array R[i][j][k][l] = a * W(il, jk) + b * W(ik, jl).
std::vector<double> assemble_curvature(const Matrix& table, int m, double a, double b, Exec exec);

int max_threads();

}  // namespace kcone
