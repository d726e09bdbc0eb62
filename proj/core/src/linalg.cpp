#include "freelmi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace freelmi {

void ToleranceProfile::validate() const {
  if (!(psd_tol >= 0.0) || !(rank_tol >= 0.0) || !(residual_tol >= 0.0)) {
    throw PreconditionError("tolerances must be nonnegative");
  }
}

MatrixTuple::MatrixTuple(std::vector<CMatrix> mats) : mats_(std::move(mats)) {
  if (mats_.empty()) throw ShapeError("matrix tuple needs at least one coordinate");
  rows_ = mats_.front().rows();
  cols_ = mats_.front().cols();
  for (const auto& m : mats_) {
    if (m.rows() != rows_ || m.cols() != cols_) {
      throw ShapeError("matrix tuple coordinates must share one shape");
    }
    if (!m.allFinite()) throw ShapeError("matrix tuple has non-finite entries");
  }
}

MatrixTuple MatrixTuple::zeros(std::size_t g, Eigen::Index d, Eigen::Index e) {
  return MatrixTuple(std::vector<CMatrix>(g, CMatrix::Zero(d, e)));
}

MatrixTuple MatrixTuple::scalars(const std::vector<cplx>& z) {
  std::vector<CMatrix> m;
  m.reserve(z.size());
  for (auto v : z) m.push_back(CMatrix::Constant(1, 1, v));
  return MatrixTuple(std::move(m));
}

MatrixTuple MatrixTuple::scalars(const CVector& z) {
  return scalars(std::vector<cplx>(z.data(), z.data() + z.size()));
}

MatrixTuple MatrixTuple::adjoint() const {
  std::vector<CMatrix> out;
  out.reserve(g());
  for (const auto& m : mats_) out.push_back(m.adjoint());
  return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::scaled(cplx s) const {
  std::vector<CMatrix> out;
  out.reserve(g());
  for (const auto& m : mats_) out.push_back(s * m);
  return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::plus(const MatrixTuple& other) const {
  if (other.g() != g() || other.rows() != rows_ || other.cols() != cols_) {
    throw ShapeError("tuple sum needs matching shapes");
  }
  std::vector<CMatrix> out;
  out.reserve(g());
  for (std::size_t j = 0; j < g(); ++j) out.push_back(mats_[j] + other[j]);
  return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::minus(const MatrixTuple& other) const {
  return plus(other.scaled(-1.0));
}

MatrixTuple MatrixTuple::direct_sum(const MatrixTuple& other) const {
  if (other.g() != g()) throw ShapeError("direct sum needs equal coordinate counts");
  std::vector<CMatrix> out;
  out.reserve(g());
  for (std::size_t j = 0; j < g(); ++j) {
    CMatrix m = CMatrix::Zero(rows_ + other.rows(), cols_ + other.cols());
    m.topLeftCorner(rows_, cols_) = mats_[j];
    m.bottomRightCorner(other.rows(), other.cols()) = other[j];
    out.push_back(std::move(m));
  }
  return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::sandwich(const CMatrix& left, const CMatrix& right) const {
  if (left.cols() != rows_ || right.rows() != cols_) throw ShapeError("sandwich shape mismatch");
  std::vector<CMatrix> out;
  out.reserve(g());
  for (const auto& m : mats_) out.push_back(left * m * right);
  return MatrixTuple(std::move(out));
}

double MatrixTuple::distance(const MatrixTuple& other) const {
  if (other.g() != g() || other.rows() != rows_ || other.cols() != cols_) {
    throw ShapeError("distance needs matching shapes");
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < g(); ++j) {
    worst = std::max(worst, operator_norm(mats_[j] - other[j]));
  }
  return worst;
}

CVector MatrixTuple::as_vector() const {
  if (rows_ != 1 || cols_ != 1) throw ShapeError("as_vector needs a level-1 tuple");
  CVector z(static_cast<Eigen::Index>(g()));
  for (std::size_t j = 0; j < g(); ++j) z(static_cast<Eigen::Index>(j)) = mats_[j](0, 0);
  return z;
}

const char* to_string(PsdKind kind) {
  switch (kind) {
    case PsdKind::PositiveDefinite: return "PositiveDefinite";
    case PsdKind::PsdSingular: return "PsdSingular";
    case PsdKind::Indefinite: return "Indefinite";
  }
  return "?";
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix lambda_eval(const MatrixTuple& A, const MatrixTuple& X) {
  if (A.g() != X.g()) throw ShapeError("lambda_eval: coordinate counts differ");
  if (!X.square()) throw ShapeError("lambda_eval: evaluation point must be square");
  const Eigen::Index n = X.rows();
  CMatrix out = CMatrix::Zero(A.rows() * n, A.cols() * n);
  for (std::size_t j = 0; j < A.g(); ++j) {
    const CMatrix& a = A[j];
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.cols(); ++c) {
        if (a(r, c) != cplx(0.0)) out.block(r * n, c * n, n, n) += a(r, c) * X[j];
      }
    }
  }
  return out;
}

CMatrix hermitian_part(const CMatrix& H) { return 0.5 * (H + H.adjoint()); }

PsdVerdict psd_check(const CMatrix& H, const ToleranceProfile& tol) {
  if (H.rows() != H.cols()) throw ShapeError("psd_check: matrix must be square");
  if (H.size() == 0) return {};
  const double skew = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (skew > tol.rank_tol * std::max(1.0, H.cwiseAbs().maxCoeff())) {
    throw PreconditionError("psd_check: matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(H));
  if (es.info() != Eigen::Success) throw NumericalFailure("psd_check: eigensolver failed");
  PsdVerdict v;
  v.eigenvalues = es.eigenvalues();
  v.min_eig = v.eigenvalues(0);
  if (v.min_eig > tol.psd_tol) {
    v.kind = PsdKind::PositiveDefinite;
  } else if (v.min_eig >= -tol.psd_tol) {
    v.kind = PsdKind::PsdSingular;
    for (Eigen::Index i = 0; i < v.eigenvalues.size() && v.eigenvalues(i) <= tol.psd_tol; ++i) {
      v.kernel.push_back(es.eigenvectors().col(i));
    }
  } else {
    v.kind = PsdKind::Indefinite;
  }
  return v;
}

double operator_norm(const CMatrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues()(0);
}

double min_singular_value(const CMatrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

CMatrix defect(const CMatrix& T, const ToleranceProfile& tol) {
  const Eigen::Index e = T.cols();
  CMatrix H = CMatrix::Identity(e, e) - T.adjoint() * T;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(H));
  RVector ev = es.eigenvalues();
  if (ev.size() > 0 && ev(0) < -tol.psd_tol) {
    throw PreconditionError("defect: argument is not a contraction");
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<CVector> kernel_basis(const CMatrix& A, const ToleranceProfile& tol) {
  std::vector<CVector> out;
  const Eigen::Index n = A.cols();
  if (n == 0) return out;
  if (A.rows() == 0) {
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(CVector::Unit(n, i));
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double thr = tol.rank_tol * std::max(1.0, s(0));
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > thr) ++rank;
  for (Eigen::Index i = rank; i < n; ++i) out.push_back(svd.matrixV().col(i));
  return out;
}

Eigen::Index numerical_rank(const CMatrix& A, double tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(A);
  const RVector& s = svd.singularValues();
  const double thr = tol * std::max(1.0, s(0));
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > thr) ++rank;
  return rank;
}

CMatrix range_basis(const CMatrix& A, const ToleranceProfile& tol) {
  if (A.size() == 0) return CMatrix(A.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  const double thr = tol.rank_tol * std::max(1.0, s(0));
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > thr) ++rank;
  return svd.matrixU().leftCols(rank);
}

CMatrix psd_sqrt(const CMatrix& H) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(H));
  RVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix psd_inv_sqrt(const CMatrix& H) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(H));
  const RVector& ev = es.eigenvalues();
  if (ev.size() > 0 && ev(0) <= 0.0) throw DomainViolation("psd_inv_sqrt: matrix is not positive definite");
  RVector w = ev.cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

bool is_unitary(const CMatrix& U, double tol) {
  if (U.rows() != U.cols()) return false;
  return (U.adjoint() * U - CMatrix::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff() <= tol;
}

CMatrix polar_unitary(const CMatrix& A) {
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CVector vec(const CMatrix& A) { return Eigen::Map<const CVector>(A.data(), A.size()); }

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw ShapeError("unvec: length mismatch");
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

CMatrix stack_vectorized(const MatrixTuple& A) {
  CMatrix out(A.rows() * A.cols(), static_cast<Eigen::Index>(A.g()));
  for (std::size_t j = 0; j < A.g(); ++j) out.col(static_cast<Eigen::Index>(j)) = vec(A[j]);
  return out;
}

CMatrix hstack(const MatrixTuple& A) {
  CMatrix out(A.rows(), A.cols() * static_cast<Eigen::Index>(A.g()));
  for (std::size_t j = 0; j < A.g(); ++j) {
    out.middleCols(static_cast<Eigen::Index>(j) * A.cols(), A.cols()) = A[j];
  }
  return out;
}

CMatrix vstack(const MatrixTuple& A) {
  CMatrix out(A.rows() * static_cast<Eigen::Index>(A.g()), A.cols());
  for (std::size_t j = 0; j < A.g(); ++j) {
    out.middleRows(static_cast<Eigen::Index>(j) * A.rows(), A.rows()) = A[j];
  }
  return out;
}

double Rng::normal() {
  std::normal_distribution<double> d(0.0, 1.0);
  return d(engine_);
}

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(engine_);
}

std::size_t Rng::index(std::size_t n) {
  std::uniform_int_distribution<std::size_t> d(0, n - 1);
  return d(engine_);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return cplx(re, im) * std::sqrt(0.5);
}

cplx Rng::unimodular() { return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)); }

CMatrix Rng::gaussian(Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
  }
  return m;
}

CMatrix Rng::unitary(Eigen::Index n) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian(n, n));
  CMatrix Q = qr.householderQ();
  CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx d = R(i, i);
    if (std::abs(d) > 0.0) Q.col(i) *= d / std::abs(d);
  }
  return Q;
}

MatrixTuple Rng::tuple(std::size_t g, Eigen::Index d, Eigen::Index e) {
  std::vector<CMatrix> m;
  m.reserve(g);
  for (std::size_t j = 0; j < g; ++j) m.push_back(gaussian(d, e));
  return MatrixTuple(std::move(m));
}

}  // namespace freelmi
