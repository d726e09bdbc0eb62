#include "freelmi/pencil.hpp"

#include <cmath>
#include <limits>

namespace freelmi {

HermitianPencil::HermitianPencil(MatrixTuple A) : A_(std::move(A)) {
  if (!A_.square()) throw ShapeError("hermitian pencil needs square coefficients");
}

const char* to_string(Region region) {
  switch (region) {
    case Region::Interior: return "Interior";
    case Region::Boundary: return "Boundary";
    case Region::Exterior: return "Exterior";
  }
  return "?";
}

CMatrix hermitian_eval(const HermitianPencil& P, const MatrixTuple& X) {
  const CMatrix L = lambda_eval(P.A(), X);
  return CMatrix::Identity(L.rows(), L.cols()) + L + L.adjoint();
}

CMatrix q_eval(const SpectraballPencil& E, const MatrixTuple& X) {
  const CMatrix L = lambda_eval(E.E(), X);
  return CMatrix::Identity(L.cols(), L.cols()) - L.adjoint() * L;
}

CMatrix m_eval(const SpectraballPencil& E, const MatrixTuple& X) {
  const CMatrix L = lambda_eval(E.E(), X);
  const Eigen::Index dn = L.rows();
  const Eigen::Index en = L.cols();
  CMatrix M = CMatrix::Identity(dn + en, dn + en);
  M.topRightCorner(dn, en) = L;
  M.bottomLeftCorner(en, dn) = L.adjoint();
  return M;
}

Membership membership(const HermitianPencil& P, const MatrixTuple& X, const ToleranceProfile& tol) {
  const PsdVerdict v = psd_check(hermitian_eval(P, X), tol);
  Membership m;
  m.certificate = v.min_eig;
  if (v.kind == PsdKind::PositiveDefinite) {
    m.region = Region::Interior;
  } else if (v.kind == PsdKind::PsdSingular) {
    m.region = Region::Boundary;
  } else {
    m.region = Region::Exterior;
  }
  return m;
}

Membership membership(const SpectraballPencil& E, const MatrixTuple& X, const ToleranceProfile& tol) {
  Membership m;
  m.certificate = operator_norm(lambda_eval(E.E(), X));
  if (std::abs(m.certificate - 1.0) <= tol.psd_tol) {
    m.region = Region::Boundary;
  } else if (m.certificate < 1.0) {
    m.region = Region::Interior;
  } else {
    m.region = Region::Exterior;
  }
  return m;
}

HermitianPencil embed_ball(const SpectraballPencil& E) {
  const Eigen::Index d = E.d();
  const Eigen::Index e = E.e();
  std::vector<CMatrix> F;
  F.reserve(E.g());
  for (const auto& Ej : E.E()) {
    CMatrix f = CMatrix::Zero(d + e, d + e);
    f.topRightCorner(d, e) = Ej;
    F.push_back(std::move(f));
  }
  return HermitianPencil(MatrixTuple(std::move(F)));
}

double spectrahedron_ray_limit(const HermitianPencil& P, const MatrixTuple& X) {
  const CMatrix L = lambda_eval(P.A(), X);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(L + L.adjoint()), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  if (lo >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lo;
}

}  // namespace freelmi
