#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "freelmi/convexotonic.hpp"

namespace freelmi {

struct BallMapData {
  SpectraballPencil E;
  SpectraballPencil C;
  CVector b;
  CMatrix M;
  CMatrix W;
  CMatrix V;
  MultiplicationTable Xi;
};

struct B2BResiduals {
  double a = 0.0;
  double b = 0.0;
};

// Residuals of -E_j V^* L^* W E_k = (Xi_k . E)_j and D_{L^*} W E_j V^* D_L = (M . C)_j, L = Lambda_C(b).
B2BResiduals verify_b2b(const BallMapData& data, const ToleranceProfile& tol = {});

// Solves the first condition for Xi by least squares against span(E).
StructureFit solve_b2b_xi(const MatrixTuple& E, const MatrixTuple& C, const CVector& b, const CMatrix& W,
                          const CMatrix& V);

// phi = psi . M + b with psi(x) = x (I - Lambda_Xi(x))^{-1}.
class BallMap {
 public:
  using Evaluator = std::function<MatrixTuple(const MatrixTuple&)>;

  BallMap(BallMapData data, ConvexotonicMap psi, Evaluator closed_form = {});

  const BallMapData& data() const { return data_; }
  const ConvexotonicMap& psi() const { return psi_; }
  bool has_closed_form() const { return static_cast<bool>(closed_form_); }

  // Closed form when one was supplied, otherwise the convexotonic path.
  MatrixTuple apply(const MatrixTuple& X, const ToleranceProfile& tol = {}) const;
  MatrixTuple apply_convexotonic(const MatrixTuple& X, const ToleranceProfile& tol = {}) const;
  // x = q((y - b) M^{-1}).
  MatrixTuple apply_inverse(const MatrixTuple& Y, const ToleranceProfile& tol = {}) const;

 private:
  BallMapData data_;
  ConvexotonicMap psi_;
  Evaluator closed_form_;
};

BallMap construct_ball_map(BallMapData data, const ToleranceProfile& tol = {});

bool only_c_condition(const SpectraballPencil& C, const CVector& b, const ToleranceProfile& tol = {});
double only_c_residual(const SpectraballPencil& C, const CVector& b);

SpectraballPencil solve_E_from_C(const SpectraballPencil& C, const CVector& b, const CMatrix& M, const CMatrix& W,
                                 const CMatrix& V, const ToleranceProfile& tol = {});

// Output coordinate j is rho_j (x_{pi(j)} + c_j)(1 + conj(c_j) x_{pi(j)})^{-1} with c_j = conj(rho_j) b_j,
// so phi(0) = b.
struct PolydiscParams {
  CVector b;
  std::vector<std::size_t> pi;
  CVector rho;
};

BallMap polydisc_automorphism(const PolydiscParams& params, const ToleranceProfile& tol = {});
// Parameters of phi2 o phi1.
PolydiscParams compose_polydisc(const PolydiscParams& phi1, const PolydiscParams& phi2);
PolydiscParams invert_polydisc(const PolydiscParams& phi);
MatrixTuple polydisc_tuple(std::size_t g);

MatrixTuple matrix_units(Eigen::Index d, Eigen::Index e);
// Row-major d x e arrangement of z at level n: block (i, j) is z_{i e + j}.
CMatrix matt(const MatrixTuple& z, Eigen::Index d, Eigen::Index e);
MatrixTuple row(const CMatrix& Y, Eigen::Index d, Eigen::Index e);

BallMap matrixball_automorphism(Eigen::Index d, Eigen::Index e, const CMatrix& b, const CMatrix& W, const CMatrix& V,
                                const ToleranceProfile& tol = {});

// Central-difference derivative at 0: row k is the derivative along x_k.
CMatrix derivative_at_zero(const BallMap& phi, double step = 1e-6);

double cartan_uniqueness_check(const BallMap& phi1, const BallMap& phi2, const std::vector<MatrixTuple>& samples,
                               const ToleranceProfile& tol = {});

}  // namespace freelmi
