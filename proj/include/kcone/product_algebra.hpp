#pragma once

#include <vector>

#include "kcone/cone_geometry.hpp"

namespace kcone {

// The commutative, non-associative product x . y = 1/2 Lambda(x y) on
// H^{1,1} at a fixed cone point.
class AlgebraAtPoint {
 public:
  explicit AlgebraAtPoint(ConePoint base, Exec exec = Exec::parallel);

  const ConePoint& base() const noexcept { return base_; }
  int rank() const noexcept { return base_.rank(); }
  // Column i*m + j holds e_i . e_j.
  const Matrix& structure() const noexcept { return structure_; }
  double structure(int i, int j, int k) const { return structure_(k, i * rank() + j); }

 private:
  ConePoint base_;
  Matrix structure_;
};

CohClass product(const AlgebraAtPoint& a, const CohClass& u, const CohClass& v);

struct AlgebraIdentityReport {
  double x_omega = 0.0;      // max |x . w - 1/2 Lambda(x) w - 1/2 (n-2) x| over basis x
  double omega_omega = 0.0;  // |w . w - (n-1) w|
  double commutativity = 0.0;
};
AlgebraIdentityReport algebra_identities(const AlgebraAtPoint& a);

// R_alg(x,y,z,w) = <x.w, y.z> - <x.z, y.w>.
CurvatureTensor algebra_curvature(const AlgebraAtPoint& a, Exec exec = Exec::parallel);

// Columns form a g-orthonormal basis, from the Cholesky factor of the Gram matrix.
Matrix orthonormal_basis(const ConePoint& p);
// g-orthonormal basis of the primitive subspace (m-1 columns).
Matrix primitive_orthonormal_basis(const ConePoint& p);

// b_l(x, y) = <x . y, x_l> over a g-orthonormal basis x_l.
struct BilinearFormSet {
  Matrix basis;              // columns x_l
  std::vector<Matrix> forms;  // b_l on the standard basis
};
BilinearFormSet kn_decompose(const AlgebraAtPoint& a);

// Symmetrized Kulkarni-Nomizu product; for h = k it is
// h(x,z) h(y,w) - h(x,w) h(y,z).
std::vector<double> kn_product(const Matrix& h, const Matrix& k);

struct KNReport {
  double reconstruction = 0.0;  // max |x.y - sum_l b_l(x,y) x_l|
  double curvature = 0.0;       // max |R_alg + sum_l b_l ^ b_l|
  double symmetry = 0.0;        // max |b_l - b_l^T|
};
KNReport kn_residuals(const AlgebraAtPoint& a, const BilinearFormSet& set);

enum class Subspace { full, primitive };

struct ConstantCurvatureResult {
  double lambda = 0.0;    // best fit; the algebra tensor then has sectional -lambda
  double residual = 0.0;  // norm of the non-symmetric remainder of T - 2 lambda <xy, zw>
  double tol = 0.0;       // 1e-8 * |T|
  int dim = 0;
  bool constant() const { return residual <= tol; }
};
ConstantCurvatureResult constant_curvature_test(const AlgebraAtPoint& a,
                                                Subspace subspace = Subspace::full);

inline constexpr double kNullTol = 1e-8;

struct DerivationReport {
  std::vector<Matrix> generators;  // unit Frobenius norm
  double max_system_residual = 0.0;
  double max_omega = 0.0;   // |D w|
  double max_lambda = 0.0;  // |Lambda(D e_i)|
  double max_skew = 0.0;    // |D^t + D| in a g-orthonormal basis
};
DerivationReport derivations(const AlgebraAtPoint& a);

}  // namespace kcone
