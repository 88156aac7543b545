#include "kcone/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kcone {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Matrix lambda_class_table(const ConePoint& p, const Matrix& basis, Exec exec) {
  const int m = static_cast<int>(basis.cols());
  const int pairs = m * (m + 1) / 2;
  Matrix table(basis.rows(), m * m);

  std::vector<std::pair<int, int>> upper;
  upper.reserve(pairs);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) upper.emplace_back(i, j);

  auto fill = [&](int k) {
    auto [i, j] = upper[k];
    CohClass l = lambda_class(p, basis.col(i), basis.col(j));
    table.col(pair_index(i, j, m)) = l;
    table.col(pair_index(j, i, m)) = l;
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < pairs; ++k) fill(k);
  } else {
    for (int k = 0; k < pairs; ++k) fill(k);
  }
  return table;
}

Matrix pair_inner_table(const Matrix& classes, const Matrix& gram, Exec exec) {
  const int count = static_cast<int>(classes.cols());
  const int rows = static_cast<int>(classes.rows());
  // G C once; each entry is then an independent dot product.
  Matrix lowered(rows, count);
  for (int b = 0; b < count; ++b)
    for (int r = 0; r < rows; ++r) {
      double s = 0.0;
      for (int q = 0; q < rows; ++q) s += gram(r, q) * classes(q, b);
      lowered(r, b) = s;
    }

  Matrix w(count, count);
  auto row = [&](int a) {
    for (int b = 0; b < count; ++b) {
      double s = 0.0;
      for (int r = 0; r < rows; ++r) s += classes(r, a) * lowered(r, b);
      w(a, b) = s;
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int a = 0; a < count; ++a) row(a);
  } else {
    for (int a = 0; a < count; ++a) row(a);
  }
  return w;
}

std::vector<double> assemble_curvature(const Matrix& table, int m, double a, double b, Exec exec) {
  std::vector<double> out(static_cast<std::size_t>(m) * m * m * m);
  auto block = [&](int i, int j) {
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        const std::size_t at = ((static_cast<std::size_t>(i) * m + j) * m + k) * m + l;
        out[at] = a * table(pair_index(i, l, m), pair_index(j, k, m)) +
                  b * table(pair_index(i, k, m), pair_index(j, l, m));
      }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) block(i, j);
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) block(i, j);
  }
  return out;
}

}  // namespace kcone
