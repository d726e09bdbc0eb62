#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "freelmi/algebra.hpp"

namespace freelmi {

// p(x) = x (I - Lambda_Xi(x))^{-1} for sign +1, q(x) = x (I + Lambda_Xi(x))^{-1} for sign -1.
struct ConvexotonicMap {
  MultiplicationTable table;
  int sign = +1;

  const MatrixTuple& Xi() const { return table.Xi; }
  ConvexotonicMap inverse() const { return {table, -sign}; }
};

// Checks the convexotonic identity before wrapping.
ConvexotonicMap make_convexotonic_map(MatrixTuple Xi, int sign, const ToleranceProfile& tol = {});

// Resolvent I - sign Lambda_Xi(X); usable iff its condition number is below 1/rank_tol.
CMatrix co_resolvent(const MatrixTuple& Xi, const MatrixTuple& X, int sign);
bool well_conditioned(const CMatrix& R, const ToleranceProfile& tol);

MatrixTuple co_eval(const ConvexotonicMap& m, const MatrixTuple& X, const ToleranceProfile& tol = {});
// Same evaluation without the convexotonic check, for negative controls.
MatrixTuple co_eval_raw(const MatrixTuple& Xi, const MatrixTuple& X, int sign, const ToleranceProfile& tol = {});

struct InverseCheck {
  double max_residual = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

InverseCheck verify_inverse_pair(const MatrixTuple& Xi, const std::vector<MatrixTuple>& samples,
                                 const ToleranceProfile& tol = {});

struct PencilPair {
  HermitianPencil A;
  HermitianPencil B;
  CMatrix U;
  MultiplicationTable Xi;
  // R = (U - I) A.
  MatrixTuple R;

  ConvexotonicMap p() const { return {Xi, +1}; }
};

// Pair (A, UA) with A_l (U - I) A_j = sum_s (Xi_j)_{l,s} A_s, or nullopt when the span condition fails.
std::optional<PencilPair> make_pencil_pair(const MatrixTuple& A, const CMatrix& U, const ToleranceProfile& tol = {});

// Pads E into the top-left corner of an r x r matrix, forms T = U E, and returns the pair
// A = [[0, T], [0, 0]], B = [[0, 0], [0, T]] with swap unitary, so D_A = B_E and D_B = D_T.
std::optional<PencilPair> pencil_pair_from_unitary(const SpectraballPencil& E, const CMatrix& U, Eigen::Index r,
                                                   const ToleranceProfile& tol = {});

// The square tuple T = U E (E top-left padded to r x r).
MatrixTuple unitary_target_tuple(const SpectraballPencil& E, const CMatrix& U, Eigen::Index r);

// Residuals of (I + Lambda_B(p(X))) Q(X) = I + Lambda_A(X) and Q^* L_B(p) Q = L_A with Q = I - Lambda_R(X).
std::pair<double, double> nstatz_residuals(const PencilPair& pair, const MatrixTuple& X,
                                           const ToleranceProfile& tol = {});

struct TransportReport {
  Membership source;
  Membership image;
  bool consistent = true;
};

TransportReport boundary_transport_check(const PencilPair& pair, const MatrixTuple& X,
                                         const ToleranceProfile& tol = {});

struct ProperMap {
  AlgebraBasis basis;
  ConvexotonicMap q;
  std::function<MatrixTuple(const MatrixTuple&)> evaluate;
};

// G(x) = q(x, 0) into the spectraball of the generated algebra basis.
ProperMap proper_map_to_ball(const HermitianPencil& A, const ToleranceProfile& tol = {});

// (S (x) X_j) with S the (m+1) x (m+1) superdiagonal shift.
MatrixTuple nilpotent_lift(const MatrixTuple& X, std::size_t m);

}  // namespace freelmi
