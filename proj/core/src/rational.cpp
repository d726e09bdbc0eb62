#include "freelmi/rational.hpp"

namespace freelmi {

namespace {

CMatrix resolvent(const Realization& r, const MatrixTuple& X) {
  r.validate();
  if (X.g() != r.S.g()) throw ShapeError("realization: coordinate count mismatch");
  if (!X.square()) throw ShapeError("realization: point must be square");
  const CMatrix L = lambda_eval(r.S, X);
  return CMatrix::Identity(L.rows(), L.cols()) - L;
}

bool conditioned(const CMatrix& R, const ToleranceProfile& tol) {
  Eigen::JacobiSVD<CMatrix> svd(R);
  const RVector& s = svd.singularValues();
  return s(s.size() - 1) > tol.rank_tol * s(0);
}

}  // namespace

void Realization::validate() const {
  if (!S.square()) throw ShapeError("realization: S must be square");
  if (b.size() != S.rows() || c.size() != S.rows()) throw ShapeError("realization: b and c must match the state size");
}

CMatrix real_eval(const Realization& r, const MatrixTuple& X, const ToleranceProfile& tol) {
  const CMatrix R = resolvent(r, X);
  if (!conditioned(R, tol)) throw DomainViolation("realization: resolvent is singular");
  const Eigen::Index n = X.rows();
  const CMatrix In = CMatrix::Identity(n, n);
  const CMatrix B = kron(r.b, In);
  const CMatrix Cs = kron(r.c.adjoint(), In);
  return Cs * R.partialPivLu().solve(B);
}

bool in_domain(const Realization& r, const MatrixTuple& X, const ToleranceProfile& tol) {
  return conditioned(resolvent(r, X), tol);
}

std::vector<Realization> convexotonic_to_realizations(const MatrixTuple& Xi) {
  const Eigen::Index g = static_cast<Eigen::Index>(Xi.g());
  if (Xi.rows() != g || Xi.cols() != g) throw ShapeError("convexotonic tuple must be g matrices of size g");
  std::vector<CMatrix> S;
  for (Eigen::Index k = 0; k < g; ++k) {
    CMatrix s = CMatrix::Zero(g + 1, g + 1);
    s(0, 1 + k) = 1.0;
    s.bottomRightCorner(g, g) = Xi[static_cast<std::size_t>(k)];
    S.push_back(std::move(s));
  }
  const MatrixTuple St(std::move(S));
  std::vector<Realization> out;
  for (Eigen::Index i = 0; i < g; ++i) {
    CVector b = CVector::Zero(g + 1);
    b(1 + i) = 1.0;
    out.push_back({St, b, CVector::Unit(g + 1, 0)});
  }
  return out;
}

}  // namespace freelmi
