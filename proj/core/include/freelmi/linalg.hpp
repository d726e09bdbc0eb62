#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "freelmi/types.hpp"

namespace freelmi {

enum class PsdKind { PositiveDefinite, PsdSingular, Indefinite };

const char* to_string(PsdKind kind);

struct PsdVerdict {
  PsdKind kind = PsdKind::PositiveDefinite;
  std::vector<CVector> kernel;
  double min_eig = 0.0;
  // Eigenvalues in ascending order, kept for kernel-gap diagnostics.
  RVector eigenvalues;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Sum_j A_j (x) X_j, shape (d n) x (e n).
CMatrix lambda_eval(const MatrixTuple& A, const MatrixTuple& X);

PsdVerdict psd_check(const CMatrix& H, const ToleranceProfile& tol = {});

double operator_norm(const CMatrix& A);
double min_singular_value(const CMatrix& A);

// Positive square root of I - T^* T.
CMatrix defect(const CMatrix& T, const ToleranceProfile& tol = {});

// Orthonormal basis of the right null space.
std::vector<CVector> kernel_basis(const CMatrix& A, const ToleranceProfile& tol = {});

// Orthonormal basis of the column space, as columns.
CMatrix range_basis(const CMatrix& A, const ToleranceProfile& tol = {});

Eigen::Index numerical_rank(const CMatrix& A, double tol);

CMatrix hermitian_part(const CMatrix& H);
// Functions of a Hermitian PSD matrix via its eigendecomposition.
CMatrix psd_sqrt(const CMatrix& H);
CMatrix psd_inv_sqrt(const CMatrix& H);

bool is_unitary(const CMatrix& U, double tol);
// Unitary factor of the polar decomposition.
CMatrix polar_unitary(const CMatrix& A);

// Column-major vectorization.
CVector vec(const CMatrix& A);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

// Vectorized coefficients as columns of a (d e) x g matrix.
CMatrix stack_vectorized(const MatrixTuple& A);
// [A_1 ... A_g] side by side and [A_1; ...; A_g] stacked.
CMatrix hstack(const MatrixTuple& A);
CMatrix vstack(const MatrixTuple& A);

// Seeded sampling helpers. Complex Gaussians have E|z|^2 = 1.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal();
  double uniform(double lo, double hi);
  std::size_t index(std::size_t n);
  cplx complex_normal();
  cplx unimodular();
  CMatrix gaussian(Eigen::Index rows, Eigen::Index cols);
  CMatrix unitary(Eigen::Index n);
  MatrixTuple tuple(std::size_t g, Eigen::Index d, Eigen::Index e);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace freelmi
