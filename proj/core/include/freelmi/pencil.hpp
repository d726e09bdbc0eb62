#pragma once

#include "freelmi/linalg.hpp"

namespace freelmi {

// Square coefficients A in M_r^g defining D_A = {X : I + Lambda_A(X) + Lambda_A(X)^* >= 0}.
class HermitianPencil {
 public:
  explicit HermitianPencil(MatrixTuple A);
  const MatrixTuple& A() const { return A_; }
  std::size_t g() const { return A_.g(); }
  Eigen::Index size() const { return A_.rows(); }

 private:
  MatrixTuple A_;
};

// Rectangular coefficients E in M_{d x e}^g defining B_E = {X : ||Lambda_E(X)|| <= 1}.
class SpectraballPencil {
 public:
  explicit SpectraballPencil(MatrixTuple E) : E_(std::move(E)) {}
  const MatrixTuple& E() const { return E_; }
  std::size_t g() const { return E_.g(); }
  Eigen::Index d() const { return E_.rows(); }
  Eigen::Index e() const { return E_.cols(); }

 private:
  MatrixTuple E_;
};

enum class Region { Interior, Boundary, Exterior };

const char* to_string(Region region);

struct Membership {
  Region region = Region::Interior;
  // Minimum eigenvalue of L^re for spectrahedra, ||Lambda_E(X)|| for spectraballs.
  double certificate = 0.0;
};

CMatrix hermitian_eval(const HermitianPencil& P, const MatrixTuple& X);
CMatrix q_eval(const SpectraballPencil& E, const MatrixTuple& X);
CMatrix m_eval(const SpectraballPencil& E, const MatrixTuple& X);

Membership membership(const HermitianPencil& P, const MatrixTuple& X, const ToleranceProfile& tol = {});
Membership membership(const SpectraballPencil& E, const MatrixTuple& X, const ToleranceProfile& tol = {});

// [[0, E], [0, 0]] of size d + e.
HermitianPencil embed_ball(const SpectraballPencil& E);

// Largest t with tX in D_A; infinity when the whole ray stays inside.
double spectrahedron_ray_limit(const HermitianPencil& P, const MatrixTuple& X);

}  // namespace freelmi
