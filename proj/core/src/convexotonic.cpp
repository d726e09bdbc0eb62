#include "freelmi/convexotonic.hpp"

#include <algorithm>

namespace freelmi {

namespace {

Eigen::Index idx(std::size_t j) { return static_cast<Eigen::Index>(j); }

MatrixTuple reslice_row(const CMatrix& row, std::size_t g) {
  const Eigen::Index n = row.rows();
  std::vector<CMatrix> out;
  out.reserve(g);
  for (std::size_t j = 0; j < g; ++j) out.push_back(row.middleCols(idx(j) * n, n));
  return MatrixTuple(std::move(out));
}

}  // namespace

ConvexotonicMap make_convexotonic_map(MatrixTuple Xi, int sign, const ToleranceProfile& tol) {
  if (sign != 1 && sign != -1) throw PreconditionError("convexotonic map sign must be +1 or -1");
  const double res = convexotonic_residual(Xi);
  if (res > tol.residual_tol) throw PreconditionError("tuple is not convexotonic");
  return {MultiplicationTable{std::move(Xi), res}, sign};
}

CMatrix co_resolvent(const MatrixTuple& Xi, const MatrixTuple& X, int sign) {
  if (Xi.g() != X.g()) throw ShapeError("convexotonic evaluation: coordinate counts differ");
  const CMatrix L = lambda_eval(Xi, X);
  return CMatrix::Identity(L.rows(), L.cols()) - static_cast<double>(sign) * L;
}

bool well_conditioned(const CMatrix& R, const ToleranceProfile& tol) {
  Eigen::JacobiSVD<CMatrix> svd(R);
  const RVector& s = svd.singularValues();
  return s(s.size() - 1) > tol.rank_tol * s(0);
}

MatrixTuple co_eval_raw(const MatrixTuple& Xi, const MatrixTuple& X, int sign, const ToleranceProfile& tol) {
  if (!X.square()) throw ShapeError("convexotonic evaluation: point must be square");
  const CMatrix R = co_resolvent(Xi, X, sign);
  if (!well_conditioned(R, tol)) throw DomainViolation("convexotonic evaluation: resolvent is singular");
  const CMatrix row = hstack(X);
  const CMatrix out = R.transpose().partialPivLu().solve(row.transpose()).transpose();
  return reslice_row(out, X.g());
}

MatrixTuple co_eval(const ConvexotonicMap& m, const MatrixTuple& X, const ToleranceProfile& tol) {
  return co_eval_raw(m.Xi(), X, m.sign, tol);
}

InverseCheck verify_inverse_pair(const MatrixTuple& Xi, const std::vector<MatrixTuple>& samples,
                                 const ToleranceProfile& tol) {
  InverseCheck out;
  for (const auto& X : samples) {
    try {
      const MatrixTuple Y = co_eval_raw(Xi, X, +1, tol);
      const MatrixTuple Z = co_eval_raw(Xi, Y, -1, tol);
      out.max_residual = std::max(out.max_residual, Z.distance(X));
      ++out.evaluated;
    } catch (const DomainViolation&) {
      ++out.skipped;
    }
  }
  return out;
}

std::optional<PencilPair> make_pencil_pair(const MatrixTuple& A, const CMatrix& U, const ToleranceProfile& tol) {
  if (!A.square() || U.rows() != A.rows() || U.cols() != A.rows()) throw ShapeError("pencil pair: shape mismatch");
  if (!is_unitary(U, 1e3 * tol.rank_tol)) throw PreconditionError("pencil pair: U is not unitary");
  if (!is_linearly_independent(A, tol)) throw PreconditionError("pencil pair: A is linearly dependent");
  const CMatrix UmI = U - CMatrix::Identity(U.rows(), U.cols());
  StructureFit fit = fit_structure_constants(A, UmI);
  if (fit.residual > tol.residual_tol) return std::nullopt;
  std::vector<CMatrix> B;
  std::vector<CMatrix> R;
  for (const auto& a : A) {
    B.push_back(U * a);
    R.push_back(UmI * a);
  }
  return PencilPair{HermitianPencil(A), HermitianPencil(MatrixTuple(std::move(B))), U,
                    MultiplicationTable{std::move(fit.Psi), fit.residual}, MatrixTuple(std::move(R))};
}

MatrixTuple unitary_target_tuple(const SpectraballPencil& E, const CMatrix& U, Eigen::Index r) {
  if (r < std::max(E.d(), E.e())) throw PreconditionError("pencil_pair_from_unitary: r below max(d, e)");
  if (U.rows() != r || U.cols() != r) throw ShapeError("pencil_pair_from_unitary: U must be r x r");
  std::vector<CMatrix> T;
  for (const auto& e : E.E()) {
    CMatrix pad = CMatrix::Zero(r, r);
    pad.topLeftCorner(e.rows(), e.cols()) = e;
    T.push_back(U * pad);
  }
  return MatrixTuple(std::move(T));
}

std::optional<PencilPair> pencil_pair_from_unitary(const SpectraballPencil& E, const CMatrix& U, Eigen::Index r,
                                                   const ToleranceProfile& tol) {
  if (U.rows() != r || U.cols() != r) throw ShapeError("pencil_pair_from_unitary: U must be r x r");
  if (!is_unitary(U, 1e3 * tol.rank_tol)) throw PreconditionError("pencil_pair_from_unitary: U is not unitary");
  const MatrixTuple T = unitary_target_tuple(E, U, r);
  std::vector<CMatrix> A;
  for (const auto& t : T) {
    CMatrix a = CMatrix::Zero(2 * r, 2 * r);
    a.topRightCorner(r, r) = t;
    A.push_back(std::move(a));
  }
  CMatrix swap = CMatrix::Zero(2 * r, 2 * r);
  swap.topRightCorner(r, r).setIdentity();
  swap.bottomLeftCorner(r, r).setIdentity();
  return make_pencil_pair(MatrixTuple(std::move(A)), swap, tol);
}

std::pair<double, double> nstatz_residuals(const PencilPair& pair, const MatrixTuple& X, const ToleranceProfile& tol) {
  const CMatrix LR = lambda_eval(pair.R, X);
  const CMatrix Q = CMatrix::Identity(LR.rows(), LR.cols()) - LR;
  if (!well_conditioned(Q, tol)) throw DomainViolation("nstatz: Q(X) is singular");
  const MatrixTuple P = co_eval(pair.p(), X, tol);
  const CMatrix LA = lambda_eval(pair.A.A(), X);
  const CMatrix LB = lambda_eval(pair.B.A(), P);
  const CMatrix I = CMatrix::Identity(LA.rows(), LA.cols());
  const double r1 = operator_norm((I + LB) * Q - (I + LA));
  const double r2 = operator_norm(Q.adjoint() * (I + LB + LB.adjoint()) * Q - (I + LA + LA.adjoint()));
  return {r1, r2};
}

TransportReport boundary_transport_check(const PencilPair& pair, const MatrixTuple& X, const ToleranceProfile& tol) {
  TransportReport out;
  out.source = membership(pair.A, X, tol);
  out.image = membership(pair.B, co_eval(pair.p(), X, tol), tol);
  out.consistent = out.source.region == out.image.region;
  return out;
}

ProperMap proper_map_to_ball(const HermitianPencil& A, const ToleranceProfile& tol) {
  AlgebraBasis basis = generated_algebra_basis(A.A(), tol);
  auto table = solve_multiplication_table(basis.J, tol);
  if (!table) throw NumericalFailure("proper_map_to_ball: generated basis is not closed under products");
  ConvexotonicMap q{std::move(*table), -1};
  const std::size_t g = A.g();
  const std::size_t h = basis.h;
  ProperMap out{std::move(basis), q, {}};
  out.evaluate = [q, g, h, tol](const MatrixTuple& X) {
    if (X.g() != g) throw ShapeError("proper map: coordinate count mismatch");
    std::vector<CMatrix> padded(X.begin(), X.end());
    padded.resize(h, CMatrix::Zero(X.rows(), X.cols()));
    return co_eval(q, MatrixTuple(std::move(padded)), tol);
  };
  return out;
}

MatrixTuple nilpotent_lift(const MatrixTuple& X, std::size_t m) {
  if (!X.square()) throw ShapeError("nilpotent_lift: point must be square");
  const Eigen::Index k = idx(m) + 1;
  CMatrix S = CMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i + 1 < k; ++i) S(i, i + 1) = 1.0;
  std::vector<CMatrix> out;
  for (const auto& x : X) out.push_back(kron(S, x));
  return MatrixTuple(std::move(out));
}

}  // namespace freelmi
