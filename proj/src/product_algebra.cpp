#include "kcone/product_algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "kcone/errors.hpp"

namespace kcone {

AlgebraAtPoint::AlgebraAtPoint(ConePoint base, Exec exec)
    : base_(std::move(base)),
      structure_(0.5 * lambda_class_table(base_, Matrix::Identity(base_.rank(), base_.rank()), exec)) {}

CohClass product(const AlgebraAtPoint& a, const CohClass& u, const CohClass& v) {
  return 0.5 * lambda_class(a.base(), u, v);
}

AlgebraIdentityReport algebra_identities(const AlgebraAtPoint& a) {
  const ConePoint& p = a.base();
  const int m = p.rank();
  const double n = p.dim();
  const CohClass& w = p.omega();
  AlgebraIdentityReport r;
  for (int i = 0; i < m; ++i) {
    const CohClass x = basis_class(m, i);
    const CohClass lhs = product(a, x, w);
    const CohClass rhs = 0.5 * lambda1(p, x) * w + 0.5 * (n - 2.0) * x;
    r.x_omega = std::max(r.x_omega, (lhs - rhs).cwiseAbs().maxCoeff());
    for (int j = 0; j < m; ++j)
      r.commutativity = std::max(
          r.commutativity,
          (a.structure().col(i * m + j) - a.structure().col(j * m + i)).cwiseAbs().maxCoeff());
  }
  r.omega_omega = (product(a, w, w) - (n - 1.0) * w).cwiseAbs().maxCoeff();
  return r;
}

CurvatureTensor algebra_curvature(const AlgebraAtPoint& a, Exec exec) {
  const Matrix table = pair_inner_table(a.structure(), a.base().gram(), exec);
  return CurvatureTensor(a.base(), assemble_curvature(table, a.rank(), 1.0, -1.0, exec));
}

Matrix orthonormal_basis(const ConePoint& p) {
  Eigen::LLT<Matrix> llt(p.gram());
  if (llt.info() != Eigen::Success) throw IndefiniteMetric("Cholesky factorization of the Gram matrix failed");
  const Matrix lower = llt.matrixL();
  return lower.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(p.rank(), p.rank()));
}

Matrix primitive_orthonormal_basis(const ConePoint& p) {
  const int m = p.rank();
  Matrix prim(m, m);
  for (int i = 0; i < m; ++i) prim.col(i) = primitive_part(p, basis_class(m, i));
  Eigen::ColPivHouseholderQR<Matrix> qr(prim);
  qr.setThreshold(1e-10);
  const int r = static_cast<int>(qr.rank());
  if (r == 0) return Matrix(m, 0);
  const Matrix q = Matrix(qr.householderQ()).leftCols(r);
  Eigen::LLT<Matrix> llt(q.transpose() * p.gram() * q);
  const Matrix lower = llt.matrixL();
  return q * lower.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(r, r));
}

BilinearFormSet kn_decompose(const AlgebraAtPoint& a) {
  const ConePoint& p = a.base();
  const int m = p.rank();
  BilinearFormSet set;
  set.basis = orthonormal_basis(p);
  const Matrix lowered = p.gram() * set.basis;  // column l is G x_l
  for (int l = 0; l < m; ++l) {
    Matrix b(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) b(i, j) = a.structure().col(i * m + j).dot(lowered.col(l));
    set.forms.push_back(std::move(b));
  }
  return set;
}

std::vector<double> kn_product(const Matrix& h, const Matrix& k) {
  const int m = static_cast<int>(h.rows());
  if (h.cols() != m || k.rows() != m || k.cols() != m)
    throw DimensionError("Kulkarni-Nomizu product needs square forms of equal size");
  std::vector<double> out(static_cast<std::size_t>(m) * m * m * m);
  std::size_t at = 0;
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      for (int z = 0; z < m; ++z)
        for (int w = 0; w < m; ++w)
          out[at++] = 0.5 * (h(x, z) * k(y, w) + h(y, w) * k(x, z) - h(x, w) * k(y, z) -
                             h(y, z) * k(x, w));
  return out;
}

KNReport kn_residuals(const AlgebraAtPoint& a, const BilinearFormSet& set) {
  const int m = a.rank();
  KNReport r;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      CohClass rebuilt = CohClass::Zero(m);
      for (int l = 0; l < m; ++l) rebuilt += set.forms[l](i, j) * set.basis.col(l);
      r.reconstruction =
          std::max(r.reconstruction, (rebuilt - a.structure().col(i * m + j)).cwiseAbs().maxCoeff());
    }
  std::vector<double> sum(static_cast<std::size_t>(m) * m * m * m, 0.0);
  for (const Matrix& b : set.forms) {
    r.symmetry = std::max(r.symmetry, (b - b.transpose()).cwiseAbs().maxCoeff());
    const auto kn = kn_product(b, b);
    for (std::size_t q = 0; q < sum.size(); ++q) sum[q] += kn[q];
  }
  const CurvatureTensor alg = algebra_curvature(a, Exec::serial);
  for (std::size_t q = 0; q < sum.size(); ++q)
    r.curvature = std::max(r.curvature, std::abs(alg.entries()[q] + sum[q]));
  return r;
}

namespace {

// Dense d^4 array helpers for the constant curvature test.
struct Tensor4 {
  int d;
  std::vector<double> v;
  explicit Tensor4(int dim) : d(dim), v(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}
  double& operator()(int a, int b, int c, int e) {
    return v[((static_cast<std::size_t>(a) * d + b) * d + c) * d + e];
  }
  double operator()(int a, int b, int c, int e) const {
    return v[((static_cast<std::size_t>(a) * d + b) * d + c) * d + e];
  }
};

Tensor4 non_symmetric_part(const Tensor4& t) {
  const int d = t.d;
  Tensor4 out(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          std::array<int, 4> idx{a, b, c, e};
          std::array<int, 4> perm{0, 1, 2, 3};
          double sum = 0.0;
          do {
            sum += t(idx[perm[0]], idx[perm[1]], idx[perm[2]], idx[perm[3]]);
          } while (std::next_permutation(perm.begin(), perm.end()));
          out(a, b, c, e) = t(a, b, c, e) - sum / 24.0;
        }
  return out;
}

double dot(const Tensor4& x, const Tensor4& y) {
  double s = 0.0;
  for (std::size_t q = 0; q < x.v.size(); ++q) s += x.v[q] * y.v[q];
  return s;
}

}  // namespace

ConstantCurvatureResult constant_curvature_test(const AlgebraAtPoint& a, Subspace subspace) {
  const ConePoint& p = a.base();
  const Matrix basis =
      subspace == Subspace::full ? orthonormal_basis(p) : primitive_orthonormal_basis(p);
  const int d = static_cast<int>(basis.cols());
  ConstantCurvatureResult r;
  r.dim = d;
  if (d == 0) return r;

  std::vector<CohClass> prods(static_cast<std::size_t>(d) * d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) prods[x * d + y] = product(a, basis.col(x), basis.col(y));

  Tensor4 t(d), s(d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w) {
          t(x, y, z, w) = inner(p, prods[x * d + y], prods[z * d + w]);
          s(x, y, z, w) = 0.5 * ((x == z) * (y == w) + (x == w) * (y == z));
        }
  r.tol = 1e-8 * std::sqrt(dot(t, t));
  if (d == 1) return r;  // a one-dimensional tensor is fully symmetric

  const Tensor4 pt = non_symmetric_part(t);
  const Tensor4 ps = non_symmetric_part(s);
  const double ss = dot(ps, ps);
  r.lambda = ss > 1e-14 ? dot(pt, ps) / (2.0 * ss) : 0.0;
  double res2 = 0.0;
  for (std::size_t q = 0; q < pt.v.size(); ++q) {
    const double e = pt.v[q] - 2.0 * r.lambda * ps.v[q];
    res2 += e * e;
  }
  r.residual = std::sqrt(res2);
  return r;
}

DerivationReport derivations(const AlgebraAtPoint& a) {
  const ConePoint& p = a.base();
  const int m = p.rank();
  // Unknown D_{ab} at column a + b*m (column-major vec).
  const int rows = m * (m * (m + 1) / 2);
  Matrix sys = Matrix::Zero(rows, m * m);
  int row = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int r = 0; r < m; ++r, ++row) {
        for (int k = 0; k < m; ++k) {
          sys(row, r + k * m) += a.structure(i, j, k);
          sys(row, k + i * m) -= a.structure(k, j, r);
          sys(row, k + j * m) -= a.structure(i, k, r);
        }
      }

  Eigen::JacobiSVD<Matrix> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = kNullTol * (sv.size() ? sv.maxCoeff() : 0.0);

  DerivationReport report;
  const Matrix frame = orthonormal_basis(p);
  const Matrix frame_inv = frame.inverse();
  for (int c = 0; c < m * m; ++c) {
    const double s = c < sv.size() ? sv[c] : 0.0;
    if (s >= cutoff) continue;
    const Eigen::VectorXd d = svd.matrixV().col(c);
    Matrix dm = Eigen::Map<const Matrix>(d.data(), m, m);
    report.max_system_residual = std::max(report.max_system_residual, (sys * d).norm());
    report.max_omega = std::max(report.max_omega, (dm * p.omega()).norm());
    for (int i = 0; i < m; ++i)
      report.max_lambda = std::max(report.max_lambda, std::abs(lambda1(p, dm.col(i))));
    const Matrix local = frame_inv * dm * frame;
    report.max_skew = std::max(report.max_skew, (local + local.transpose()).norm());
    report.generators.push_back(std::move(dm));
  }
  return report;
}

}  // namespace kcone
