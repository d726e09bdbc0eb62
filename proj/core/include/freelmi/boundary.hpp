#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "freelmi/algebra.hpp"

namespace freelmi {

struct BoundaryWitness {
  MatrixTuple X;
  CVector v;
  std::size_t kernel_dim = 0;
  // Smallest eigenvalue of Q^re outside the kernel band; small values flag near-degenerate kernels.
  double kernel_gap = 0.0;
};

struct HairSample {
  CVector u;
  BoundaryWitness source;
};

MatrixTuple boundary_scale(const SpectraballPencil& E, const MatrixTuple& X);

// Gaussian tuples scaled onto the boundary, with the bottom eigenvector of Q^re as kernel vector.
std::vector<BoundaryWitness> sample_detailed_boundary(const SpectraballPencil& E, Eigen::Index n, std::size_t count,
                                                      std::uint64_t seed, const ToleranceProfile& tol = {});

// pi(v) = (I_e (x) e_1^*) v, the first-block projection of a kernel vector.
CVector hair_projection(const CVector& v, Eigen::Index e);

// Hairs of the witnesses with one-dimensional kernel; zero projections are dropped.
std::vector<HairSample> hairs_of(const std::vector<BoundaryWitness>& witnesses, Eigen::Index e,
                                 const ToleranceProfile& tol = {});

std::size_t hair_span_rank(const std::vector<HairSample>& hairs, const ToleranceProfile& tol = {});
std::size_t vector_span_rank(const std::vector<CVector>& vectors, const ToleranceProfile& tol = {});

std::optional<std::vector<CVector>> hyperbasis_search(const std::vector<HairSample>& hairs, Eigen::Index e,
                                                      std::size_t budget, const ToleranceProfile& tol = {});

struct GenericityReport {
  bool eig_generic = false;
  bool star_generic = false;
  bool weakly_eig_generic = false;
  bool weakly_star_generic = false;
};

// Q_E is an atom and ker E = 0, tested after restricting the codomain to ran(E).
bool atom_with_trivial_kernel(const MatrixTuple& E, const ToleranceProfile& tol = {});
bool is_ball_minimal(const MatrixTuple& E, const ToleranceProfile& tol = {}, std::uint64_t seed = 0);

GenericityReport eig_generic_check(const HermitianPencil& A, const ToleranceProfile& tol = {},
                                   std::uint64_t seed = 0);

using Word = std::vector<std::size_t>;

// Words of length <= M ordered by length, then lexicographically.
struct FockShiftTuple {
  std::size_t g = 0;
  std::size_t M = 0;
  MatrixTuple S;
  std::vector<Word> words;

  Eigen::Index dim() const { return S.rows(); }
  // Projection onto words of length < M.
  CMatrix P() const;
  Eigen::Index index_of(const Word& w) const;
};

constexpr std::size_t kFockDimensionBudget = 10000;

FockShiftTuple fock_shift_tuple(std::size_t g, std::size_t M);

// g x g array of r x r blocks; blocks[j][k] = beta_{j,k}.
struct BlockBeta {
  std::vector<std::vector<CMatrix>> blocks;

  std::size_t g() const { return blocks.size(); }
  Eigen::Index r() const { return blocks.front().front().rows(); }
  const CMatrix& operator()(std::size_t j, std::size_t k) const { return blocks[j][k]; }
  static BlockBeta identity(std::size_t g, Eigen::Index r);
  static BlockBeta zeros(std::size_t g, Eigen::Index r);
};

// (beta . S)_j = sum_k beta_{j,k} (x) S_k.
MatrixTuple beta_dot_shift(const BlockBeta& beta, const FockShiftTuple& S);

// beta~_{u,w} = beta_{k1,j1} ... beta_{kN,jN} for u = x_{j1}..x_{jN}, w = x_{k1}..x_{kN}.
CMatrix beta_tilde(const BlockBeta& beta, const Word& u, const Word& w);

// Block (u, w) of B(beta, N) is beta~_{u,w}; words of length N in lex order.
CMatrix b_matrix(const BlockBeta& beta, std::size_t N);

std::vector<Word> words_of_length(std::size_t g, std::size_t N);

// (E . beta)_k = sum_j E_j (x) beta_{j,k}.
MatrixTuple e_dot_beta(const MatrixTuple& E, const BlockBeta& beta);
// I - sum_k (E . beta)_k^* (E . beta)_k.
CMatrix fock_defect(const MatrixTuple& E, const BlockBeta& beta);

struct FockWitnessSet {
  std::vector<BoundaryWitness> witnesses;
  std::vector<CVector> hairs;
  std::size_t level = 0;
  double perturbation = 0.0;
  // Smallest singular value of B(beta, N), N = 1..M, over all witnesses.
  double min_b_singular = 0.0;
};

FockWitnessSet fock_boundary_witness(const SpectraballPencil& E, std::size_t M, std::uint64_t seed,
                                     const ToleranceProfile& tol = {});

// V(x) = sum_w V_w x^w with rows x e coefficient matrices.
struct NcPolynomial {
  std::size_t g = 0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::map<Word, CMatrix> coeffs;

  CMatrix apply(const MatrixTuple& X, const CVector& v) const;
  bool is_zero() const;
};

double nullstellensatz_test(const SpectraballPencil& E, const NcPolynomial& V,
                            const std::vector<BoundaryWitness>& witnesses);

}  // namespace freelmi
