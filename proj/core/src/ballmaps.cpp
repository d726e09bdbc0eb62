#include "freelmi/ballmaps.hpp"

#include <algorithm>
#include <cmath>

namespace freelmi {

namespace {

Eigen::Index idx(std::size_t j) { return static_cast<Eigen::Index>(j); }

CMatrix lambda_at(const MatrixTuple& C, const CVector& b) {
  if (idx(C.g()) != b.size()) throw ShapeError("point and pencil coordinate counts differ");
  CMatrix L = CMatrix::Zero(C.rows(), C.cols());
  for (std::size_t j = 0; j < C.g(); ++j) L += b(idx(j)) * C[j];
  return L;
}

void require_unitary(const CMatrix& U, Eigen::Index n, const char* what, const ToleranceProfile& tol) {
  if (U.rows() != n || U.cols() != n) throw ShapeError(std::string(what) + " has the wrong size");
  if (!is_unitary(U, 1e3 * tol.rank_tol)) throw PreconditionError(std::string(what) + " is not unitary");
}

void require_interior(const SpectraballPencil& C, const CVector& b, const ToleranceProfile& tol) {
  if (membership(C, MatrixTuple::scalars(b), tol).region != Region::Interior) {
    throw DomainViolation("b is not an interior point of the target spectraball");
  }
}

CMatrix inverse_checked(const CMatrix& D, const ToleranceProfile& tol, const char* what) {
  if (min_singular_value(D) <= tol.rank_tol) throw PreconditionError(std::string(what) + " is singular");
  return D.inverse();
}

MatrixTuple constant_shift(const MatrixTuple& X, const CVector& b, double sign) {
  std::vector<CMatrix> out(X.begin(), X.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] += sign * b(idx(j)) * CMatrix::Identity(X.rows(), X.rows());
  }
  return MatrixTuple(std::move(out));
}

CMatrix permutation_to_inverse(const std::vector<std::size_t>& pi) {
  const Eigen::Index g = idx(pi.size());
  CMatrix P = CMatrix::Zero(g, g);
  for (std::size_t j = 0; j < pi.size(); ++j) P(idx(j), idx(pi[j])) = 1.0;
  return P;
}

void validate_polydisc(const PolydiscParams& p) {
  const std::size_t g = p.pi.size();
  if (g == 0 || idx(g) != p.b.size() || idx(g) != p.rho.size()) throw ShapeError("polydisc parameters: sizes differ");
  std::vector<bool> seen(g, false);
  for (auto k : p.pi) {
    if (k >= g || seen[k]) throw PreconditionError("polydisc parameters: pi is not a permutation");
    seen[k] = true;
  }
  for (Eigen::Index j = 0; j < p.b.size(); ++j) {
    if (!(std::abs(p.b(j)) < 1.0)) throw DomainViolation("polydisc parameters: |b_j| must be below 1");
    if (std::abs(std::abs(p.rho(j)) - 1.0) > 1e-12) throw PreconditionError("polydisc parameters: rho not unimodular");
  }
}

cplx mobius(cplx rho, cplx c, cplx x) { return rho * (x + c) / (1.0 + std::conj(c) * x); }
cplx mobius_derivative(cplx rho, cplx c, cplx x) {
  const cplx den = 1.0 + std::conj(c) * x;
  return rho * (1.0 - std::norm(c)) / (den * den);
}

}  // namespace

StructureFit solve_b2b_xi(const MatrixTuple& E, const MatrixTuple& C, const CVector& b, const CMatrix& W,
                          const CMatrix& V) {
  const CMatrix L = lambda_at(C, b);
  return fit_structure_constants(E, -(V.adjoint() * L.adjoint() * W));
}

B2BResiduals verify_b2b(const BallMapData& data, const ToleranceProfile& tol) {
  const MatrixTuple& E = data.E.E();
  const MatrixTuple& C = data.C.E();
  const std::size_t g = E.g();
  if (C.g() != g || C.rows() != E.rows() || C.cols() != E.cols()) throw ShapeError("verify_b2b: E and C differ in shape");
  if (data.M.rows() != idx(g) || data.M.cols() != idx(g)) throw ShapeError("verify_b2b: M must be g x g");
  if (data.Xi.Xi.g() != g || data.Xi.Xi.rows() != idx(g)) throw ShapeError("verify_b2b: Xi must be g matrices g x g");
  require_unitary(data.W, E.rows(), "W", tol);
  require_unitary(data.V, E.cols(), "V", tol);
  require_interior(data.C, data.b, tol);
  const CMatrix L = lambda_at(C, data.b);
  const CMatrix D = defect(L, tol);
  const CMatrix Dst = defect(L.adjoint(), tol);
  const CMatrix mid = -(data.V.adjoint() * L.adjoint() * data.W);
  B2BResiduals out;
  for (std::size_t j = 0; j < g; ++j) {
    for (std::size_t k = 0; k < g; ++k) {
      CMatrix r = E[j] * mid * E[k];
      for (std::size_t s = 0; s < g; ++s) r -= data.Xi.Xi[k](idx(j), idx(s)) * E[s];
      out.a = std::max(out.a, operator_norm(r));
    }
    CMatrix r = Dst * data.W * E[j] * data.V.adjoint() * D;
    for (std::size_t s = 0; s < g; ++s) r -= data.M(idx(j), idx(s)) * C[s];
    out.b = std::max(out.b, operator_norm(r));
  }
  return out;
}

BallMap::BallMap(BallMapData data, ConvexotonicMap psi, Evaluator closed_form)
    : data_(std::move(data)), psi_(std::move(psi)), closed_form_(std::move(closed_form)) {}

MatrixTuple BallMap::apply(const MatrixTuple& X, const ToleranceProfile& tol) const {
  if (closed_form_) return closed_form_(X);
  return apply_convexotonic(X, tol);
}

MatrixTuple BallMap::apply_convexotonic(const MatrixTuple& X, const ToleranceProfile& tol) const {
  const MatrixTuple psi = co_eval(psi_, X, tol);
  return affine_point(psi, data_.M, data_.b);
}

MatrixTuple BallMap::apply_inverse(const MatrixTuple& Y, const ToleranceProfile& tol) const {
  const MatrixTuple shifted = constant_shift(Y, data_.b, -1.0);
  const CMatrix Minv = inverse_checked(data_.M, tol, "M");
  const MatrixTuple Z = affine_point(shifted, Minv, CVector::Zero(data_.b.size()));
  return co_eval(psi_.inverse(), Z, tol);
}

BallMap construct_ball_map(BallMapData data, const ToleranceProfile& tol) {
  const B2BResiduals r = verify_b2b(data, tol);
  if (r.a > tol.residual_tol || r.b > tol.residual_tol) {
    throw PreconditionError("construct_ball_map: conditions (a)/(b) fail");
  }
  if (min_singular_value(data.M) <= tol.rank_tol) throw PreconditionError("construct_ball_map: M is singular");
  const double conv = convexotonic_residual(data.Xi.Xi);
  if (conv > tol.residual_tol) throw PreconditionError("construct_ball_map: Xi is not convexotonic");
  ConvexotonicMap psi{data.Xi, +1};
  return BallMap(std::move(data), std::move(psi));
}

double only_c_residual(const SpectraballPencil& C, const CVector& b) {
  const ToleranceProfile tol;
  const CMatrix L = lambda_at(C.E(), b);
  const CMatrix Dinv = inverse_checked(defect(L, tol), tol, "defect of Lambda_C(b)");
  const CMatrix Dstinv = inverse_checked(defect(L.adjoint(), tol), tol, "defect of Lambda_C(b)^*");
  return fit_structure_constants(C.E(), Dinv * L.adjoint() * Dstinv).residual;
}

bool only_c_condition(const SpectraballPencil& C, const CVector& b, const ToleranceProfile& tol) {
  require_interior(C, b, tol);
  return only_c_residual(C, b) <= tol.residual_tol;
}

SpectraballPencil solve_E_from_C(const SpectraballPencil& C, const CVector& b, const CMatrix& M, const CMatrix& W,
                                 const CMatrix& V, const ToleranceProfile& tol) {
  const std::size_t g = C.g();
  if (M.rows() != idx(g) || M.cols() != idx(g)) throw ShapeError("solve_E_from_C: M must be g x g");
  require_unitary(W, C.d(), "W", tol);
  require_unitary(V, C.e(), "V", tol);
  if (!only_c_condition(C, b, tol)) throw PreconditionError("solve_E_from_C: span condition on C fails");
  if (min_singular_value(M) <= tol.rank_tol) throw PreconditionError("solve_E_from_C: M is singular");
  const CMatrix L = lambda_at(C.E(), b);
  const CMatrix Dinv = defect(L, tol).inverse();
  const CMatrix Dstinv = defect(L.adjoint(), tol).inverse();
  const MatrixTuple MC = dot_action(M, C.E());
  return SpectraballPencil(MC.sandwich(W.adjoint() * Dstinv, Dinv * V));
}

MatrixTuple polydisc_tuple(std::size_t g) {
  std::vector<CMatrix> E;
  for (std::size_t j = 0; j < g; ++j) {
    CMatrix m = CMatrix::Zero(idx(g), idx(g));
    m(idx(j), idx(j)) = 1.0;
    E.push_back(std::move(m));
  }
  return MatrixTuple(std::move(E));
}

BallMap polydisc_automorphism(const PolydiscParams& params, const ToleranceProfile& tol) {
  validate_polydisc(params);
  const std::size_t g = params.pi.size();
  const MatrixTuple P = polydisc_tuple(g);
  // V e_s = e_t and W e_s = rho_t e_t where pi(t) = s.
  const CMatrix V = permutation_to_inverse(params.pi);
  const CMatrix W = params.rho.asDiagonal() * V;
  CMatrix M = CMatrix::Zero(idx(g), idx(g));
  for (std::size_t t = 0; t < g; ++t) {
    M(idx(params.pi[t]), idx(t)) = params.rho(idx(t)) * (1.0 - std::norm(params.b(idx(t))));
  }
  StructureFit xi = solve_b2b_xi(P, P, params.b, W, V);
  BallMapData data{SpectraballPencil(P), SpectraballPencil(P), params.b, M, W, V,
                   MultiplicationTable{std::move(xi.Psi), xi.residual}};
  BallMap base = construct_ball_map(data, tol);
  auto closed = [params](const MatrixTuple& X) {
    if (X.g() != params.pi.size()) throw ShapeError("polydisc automorphism: coordinate count mismatch");
    const Eigen::Index n = X.rows();
    const CMatrix I = CMatrix::Identity(n, n);
    std::vector<CMatrix> out;
    for (std::size_t j = 0; j < X.g(); ++j) {
      const cplx rho = params.rho(idx(j));
      const cplx c = std::conj(rho) * params.b(idx(j));
      const CMatrix& x = X[params.pi[j]];
      const CMatrix den = I + std::conj(c) * x;
      out.push_back(rho * (den.transpose().partialPivLu().solve((x + c * I).transpose())).transpose());
    }
    return MatrixTuple(std::move(out));
  };
  return BallMap(base.data(), base.psi(), closed);
}

PolydiscParams compose_polydisc(const PolydiscParams& phi1, const PolydiscParams& phi2) {
  validate_polydisc(phi1);
  validate_polydisc(phi2);
  const std::size_t g = phi1.pi.size();
  if (phi2.pi.size() != g) throw ShapeError("compose_polydisc: sizes differ");
  PolydiscParams out{CVector(idx(g)), std::vector<std::size_t>(g), CVector(idx(g))};
  for (std::size_t j = 0; j < g; ++j) {
    const std::size_t k = phi2.pi[j];
    out.pi[j] = phi1.pi[k];
    const cplx rho2 = phi2.rho(idx(j));
    const cplx c2 = std::conj(rho2) * phi2.b(idx(j));
    const cplx y = phi1.b(idx(k));
    const cplx bj = mobius(rho2, c2, y);
    const cplx deriv = mobius_derivative(rho2, c2, y) * phi1.rho(idx(k)) * (1.0 - std::norm(y));
    out.b(idx(j)) = bj;
    const cplx rho = deriv / (1.0 - std::norm(bj));
    out.rho(idx(j)) = rho / std::abs(rho);
  }
  return out;
}

PolydiscParams invert_polydisc(const PolydiscParams& phi) {
  validate_polydisc(phi);
  const std::size_t g = phi.pi.size();
  PolydiscParams out{CVector(idx(g)), std::vector<std::size_t>(g), CVector(idx(g))};
  for (std::size_t j = 0; j < g; ++j) {
    const std::size_t k = phi.pi[j];
    const cplx rho = phi.rho(idx(j));
    const cplx c = std::conj(rho) * phi.b(idx(j));
    out.pi[k] = j;
    out.b(idx(k)) = -c;
    out.rho(idx(k)) = std::conj(rho);
  }
  return out;
}

MatrixTuple matrix_units(Eigen::Index d, Eigen::Index e) {
  std::vector<CMatrix> E;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < e; ++j) {
      CMatrix m = CMatrix::Zero(d, e);
      m(i, j) = 1.0;
      E.push_back(std::move(m));
    }
  }
  return MatrixTuple(std::move(E));
}

CMatrix matt(const MatrixTuple& z, Eigen::Index d, Eigen::Index e) {
  if (idx(z.g()) != d * e) throw ShapeError("matt: coordinate count must be d e");
  return lambda_eval(matrix_units(d, e), z);
}

MatrixTuple row(const CMatrix& Y, Eigen::Index d, Eigen::Index e) {
  if (d <= 0 || e <= 0 || Y.rows() % d != 0 || Y.cols() % e != 0 || Y.rows() / d != Y.cols() / e) {
    throw ShapeError("row: matrix is not a d x e block matrix of square blocks");
  }
  const Eigen::Index n = Y.rows() / d;
  std::vector<CMatrix> out;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < e; ++j) out.push_back(Y.block(i * n, j * n, n, n));
  }
  return MatrixTuple(std::move(out));
}

BallMap matrixball_automorphism(Eigen::Index d, Eigen::Index e, const CMatrix& b, const CMatrix& W, const CMatrix& V,
                                const ToleranceProfile& tol) {
  if (b.rows() != d || b.cols() != e) throw ShapeError("matrixball_automorphism: b must be d x e");
  if (!(operator_norm(b) < 1.0)) throw DomainViolation("matrixball_automorphism: ||b|| must be below 1");
  require_unitary(W, d, "W", tol);
  require_unitary(V, e, "V", tol);
  const Eigen::Index g = d * e;
  const MatrixTuple U = matrix_units(d, e);
  CVector bv(g);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < e; ++j) bv(i * e + j) = b(i, j);
  }
  const CMatrix D = defect(b, tol);
  const CMatrix Dst = defect(b.adjoint(), tol);
  const CMatrix left = Dst * W;
  const CMatrix right = V.adjoint() * D;
  CMatrix M(g, g);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < e; ++j) {
      for (Eigen::Index u = 0; u < d; ++u) {
        for (Eigen::Index v = 0; v < e; ++v) M(i * e + j, u * e + v) = left(u, i) * right(j, v);
      }
    }
  }
  const CMatrix beta = -(V.adjoint() * b.adjoint() * W);
  std::vector<CMatrix> Xi(static_cast<std::size_t>(g), CMatrix::Zero(g, g));
  for (Eigen::Index s = 0; s < d; ++s) {
    for (Eigen::Index t = 0; t < e; ++t) {
      CMatrix& X = Xi[static_cast<std::size_t>(s * e + t)];
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < e; ++j) X(i * e + j, i * e + t) = beta(j, s);
      }
    }
  }
  BallMapData data{SpectraballPencil(U), SpectraballPencil(U), bv, M, W, V,
                   MultiplicationTable{MatrixTuple(std::move(Xi)), 0.0}};
  BallMap base = construct_ball_map(data, tol);
  const CMatrix c = W.adjoint() * b * V;
  const CMatrix Id = CMatrix::Identity(d, d);
  const CMatrix Ie = CMatrix::Identity(e, e);
  const CMatrix pre = W * psd_inv_sqrt(Id - c * c.adjoint());
  const CMatrix post = psd_sqrt(Ie - c.adjoint() * c) * V.adjoint();
  auto closed = [d, e, c, pre, post](const MatrixTuple& X) {
    const Eigen::Index n = X.rows();
    const CMatrix x = matt(X, d, e);
    const CMatrix In = CMatrix::Identity(n, n);
    const CMatrix num = x + kron(c, In);
    const CMatrix den = CMatrix::Identity(e * n, e * n) + kron(c.adjoint(), In) * x;
    const CMatrix frac = den.transpose().partialPivLu().solve(num.transpose()).transpose();
    return row(kron(pre, In) * frac * kron(post, In), d, e);
  };
  return BallMap(base.data(), base.psi(), closed);
}

CMatrix derivative_at_zero(const BallMap& phi, double step) {
  const std::size_t g = phi.data().E.g();
  CMatrix Dm(idx(g), idx(g));
  for (std::size_t k = 0; k < g; ++k) {
    std::vector<cplx> zp(g, 0.0);
    std::vector<cplx> zm(g, 0.0);
    zp[k] = step;
    zm[k] = -step;
    const CVector fp = phi.apply(MatrixTuple::scalars(zp)).as_vector();
    const CVector fm = phi.apply(MatrixTuple::scalars(zm)).as_vector();
    Dm.row(idx(k)) = ((fp - fm) / (2.0 * step)).transpose();
  }
  return Dm;
}

double cartan_uniqueness_check(const BallMap& phi1, const BallMap& phi2, const std::vector<MatrixTuple>& samples,
                               const ToleranceProfile& tol) {
  const std::size_t g = phi1.data().E.g();
  if (phi2.data().E.g() != g || phi1.data().E.d() != phi2.data().E.d() || phi1.data().E.e() != phi2.data().E.e()) {
    throw ShapeError("cartan check: maps act on different shapes");
  }
  const MatrixTuple zero = MatrixTuple::zeros(g, 1, 1);
  const double value_gap = (phi1.apply(zero, tol).as_vector() - phi2.apply(zero, tol).as_vector()).cwiseAbs().maxCoeff();
  const double deriv_gap = (derivative_at_zero(phi1) - derivative_at_zero(phi2)).cwiseAbs().maxCoeff();
  if (value_gap > 1e-8 || deriv_gap > 1e-8) {
    throw PreconditionError("cartan check: maps differ in value or derivative at 0");
  }
  double worst = 0.0;
  for (const auto& X : samples) worst = std::max(worst, phi1.apply(X, tol).distance(phi2.apply(X, tol)));
  return worst;
}

}  // namespace freelmi
