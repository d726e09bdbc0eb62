#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "freelmi/pencil.hpp"

namespace freelmi {

struct MultiplicationTable {
  MatrixTuple Xi;
  double residual = 0.0;
};

// Coefficients Psi with G_l C G_t = sum_s (Psi_t)_{l,s} G_s, fitted by least
// squares against span(G). C defaults to the identity (plain products).
struct StructureFit {
  MatrixTuple Psi;
  double residual = 0.0;
};

StructureFit fit_structure_constants(const MatrixTuple& G, const CMatrix& C);
StructureFit fit_structure_constants(const MatrixTuple& G);

bool is_linearly_independent(const MatrixTuple& A, const ToleranceProfile& tol = {});

// A_k A_j = sum_s (Xi_j)_{k,s} A_s, or nullopt when some product leaves span(A).
std::optional<MultiplicationTable> solve_multiplication_table(const MatrixTuple& A,
                                                              const ToleranceProfile& tol = {});

double convexotonic_residual(const MatrixTuple& Xi);
bool is_convexotonic(const MatrixTuple& Xi, const ToleranceProfile& tol = {});

struct AlgebraBasis {
  MatrixTuple J;
  std::size_t h = 0;
};

AlgebraBasis generated_algebra_basis(const MatrixTuple& A, const ToleranceProfile& tol = {});

std::vector<CMatrix> centralizer_basis(const std::vector<CMatrix>& family, const ToleranceProfile& tol = {});
std::size_t centralizer_dim(const std::vector<CMatrix>& family, const ToleranceProfile& tol = {});

// Centralizer of {A_j, A_j^*} is trivial.
bool is_irreducible(const HermitianPencil& A, const ToleranceProfile& tol = {});

bool atom_check(const SpectraballPencil& E, const ToleranceProfile& tol = {});

struct Decomposition {
  std::vector<HermitianPencil> summands;
  // Columns are orthonormal bases of the summand subspaces, in order.
  CMatrix similarity;
  // Indices into summands forming the returned direct sum.
  std::vector<std::size_t> kept;
  std::size_t duplicates_removed = 0;
  std::size_t pruned_redundant = 0;
  // Redundancy pruning is a sampling search, not a proof.
  bool pruning_heuristic = false;
  bool split_verified = true;
  int attempts = 0;
};

struct Reduction {
  HermitianPencil pencil;
  Decomposition decomposition;
};

Reduction minimal_reduction(const HermitianPencil& A, const ToleranceProfile& tol = {},
                            std::uint64_t seed = 0);

struct BallReduction {
  SpectraballPencil pencil;
  double structure_residual = 0.0;
  std::size_t samples = 0;
  std::size_t agreements = 0;
};

BallReduction ball_minimal_reduction(const SpectraballPencil& E, const ToleranceProfile& tol = {},
                                     std::uint64_t seed = 0);

// Unitaries (W, V) with F_j = W E_j V, or nullopt when the search gives up.
std::optional<std::pair<CMatrix, CMatrix>> ball_equivalent(const MatrixTuple& E, const MatrixTuple& F,
                                                           const ToleranceProfile& tol = {},
                                                           std::uint64_t seed = 0, int starts = 24);

// (Delta . C)_j = sum_k Delta_{j,k} C_k.
MatrixTuple dot_action(const CMatrix& Delta, const MatrixTuple& C);

// lambda(X) = X . M + b, i.e. lambda(X)_t = sum_s M_{s,t} X_s + b_t I.
MatrixTuple affine_point(const MatrixTuple& X, const CMatrix& M, const CVector& b);

// F with lambda^{-1}(D_A) = D_F.
HermitianPencil affine_change(const HermitianPencil& A, const CMatrix& M, const CVector& b,
                              const ToleranceProfile& tol = {});

}  // namespace freelmi
