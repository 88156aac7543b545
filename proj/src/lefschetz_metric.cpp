#include "kcone/lefschetz_metric.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "kcone/errors.hpp"

namespace kcone {

namespace {

struct Admission {
  double vol = 0.0;
  Matrix gram;
  Matrix gram_inv;
  const char* failure = nullptr;  // nullptr when admitted
  std::string detail;
};

Admission admit(const IntersectionForm& form, const CohClass& omega) {
  Admission a;
  if (omega.size() != form.rank()) throw DimensionError("class length does not match h11");
  if (!omega.allFinite()) {
    a.failure = "NonPositiveVolume";
    a.detail = "non-finite class";
    return a;
  }
  const int n = form.dim();
  const int m = form.rank();
  a.vol = volume(form, omega);
  if (!(a.vol > 0.0)) {
    a.failure = "NonPositiveVolume";
    std::ostringstream out;
    out << "Vol(omega) = " << a.vol << " <= 0; omega is outside the volume cone";
    a.detail = out.str();
    return a;
  }

  // Lambda(e_i) and Lambda^2(e_i e_j) straight from the form.
  CohClass lam(m);
  const double scale1 = factorial(n - 1) * a.vol;
  for (int i = 0; i < m; ++i) {
    std::array<CohClass, 1> args{basis_class(m, i)};
    lam[i] = form.eval_with_power(args, omega) / scale1;
  }
  a.gram = lam * lam.transpose();
  if (n >= 2) {
    const double scale2 = factorial(n - 2) * a.vol;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        std::array<CohClass, 2> args{basis_class(m, i), basis_class(m, j)};
        const double l2 = form.eval_with_power(args, omega) / scale2;
        a.gram(i, j) -= l2;
        if (i != j) a.gram(j, i) -= l2;
      }
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(a.gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || !(lo > kPosdefTol * hi)) {
    a.failure = "IndefiniteMetric";
    std::ostringstream out;
    out << "Gram matrix is not positive definite (eigenvalues in [" << lo << ", " << hi << "])";
    a.detail = out.str();
    return a;
  }
  a.gram_inv = a.gram.ldlt().solve(Matrix::Identity(m, m));
  const double resid = (a.gram * a.gram_inv - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
  if (!(resid <= 1e-10)) {
    a.failure = "IndefiniteMetric";
    a.detail = "Gram matrix is too ill-conditioned to invert";
  }
  return a;
}

}  // namespace

CohClass basis_class(int m, int i) {
  CohClass e = CohClass::Zero(m);
  e[i] = 1.0;
  return e;
}

ConePoint::ConePoint(std::shared_ptr<const IntersectionForm> form, CohClass omega)
    : form_(std::move(form)), omega_(std::move(omega)) {
  Admission a = admit(*form_, omega_);
  if (a.failure) {
    if (std::string_view(a.failure) == "NonPositiveVolume") throw NonPositiveVolume(a.detail);
    throw IndefiniteMetric(a.detail);
  }
  vol_ = a.vol;
  gram_ = std::move(a.gram);
  gram_inv_ = std::move(a.gram_inv);
}

ConePoint::ConePoint(const IntersectionForm& form, CohClass omega)
    : ConePoint(std::make_shared<const IntersectionForm>(form), std::move(omega)) {}

bool admissible(const std::shared_ptr<const IntersectionForm>& form, const CohClass& omega) {
  return admit(*form, omega).failure == nullptr;
}

double lambda_scalar(const ConePoint& p, std::span<const CohClass> us) {
  const int n = p.dim();
  const int k = static_cast<int>(us.size());
  if (k > n) return 0.0;
  return p.form().eval_with_power(us, p.omega()) / (factorial(n - k) * p.vol());
}

double lambda1(const ConePoint& p, const CohClass& u) {
  std::array<CohClass, 1> a{u};
  return lambda_scalar(p, a);
}

double lambda2(const ConePoint& p, const CohClass& u, const CohClass& v) {
  std::array<CohClass, 2> a{u, v};
  return lambda_scalar(p, a);
}

double lambda3(const ConePoint& p, const CohClass& u, const CohClass& v, const CohClass& z) {
  std::array<CohClass, 3> a{u, v, z};
  return lambda_scalar(p, a);
}

double inner(const ConePoint& p, const CohClass& u, const CohClass& v) {
  return u.dot(p.gram() * v);
}

double norm(const ConePoint& p, const CohClass& u) { return std::sqrt(inner(p, u, u)); }

CohClass primitive_part(const ConePoint& p, const CohClass& u) {
  return u - (lambda1(p, u) / p.dim()) * p.omega();
}

CohClass lambda_class(const ConePoint& p, const CohClass& u, const CohClass& v) {
  const int m = p.rank();
  const double l2 = lambda2(p, u, v);
  CohClass rhs(m);
  for (int i = 0; i < m; ++i) {
    const CohClass e = basis_class(m, i);
    rhs[i] = -lambda3(p, u, v, e) + l2 * lambda1(p, e);
  }
  return p.gram_inv() * rhs;
}

}  // namespace kcone
