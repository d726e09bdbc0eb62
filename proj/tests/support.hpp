#pragma once

#include <vector>

#include "freelmi/ballmaps.hpp"
#include "freelmi/boundary.hpp"
#include "freelmi/convexotonic.hpp"
#include "freelmi/rational.hpp"

namespace freelmi::testing {

inline CMatrix mat(std::initializer_list<std::initializer_list<cplx>> rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = static_cast<Eigen::Index>(rows.begin()->size());
  CMatrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (auto v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline MatrixTuple row_ball() { return MatrixTuple({mat({{1, 0}}), mat({{0, 1}})}); }
inline MatrixTuple column_ball() { return MatrixTuple({mat({{1}, {0}}), mat({{0}, {1}})}); }

// E = (I_2, lower shift) and the cyclic permutation used for the (x1, x2 + x1^2) example.
inline MatrixTuple example_E() { return MatrixTuple({mat({{1, 0}, {0, 1}}), mat({{0, 0}, {1, 0}})}); }
inline CMatrix example_U() { return mat({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}); }
inline MatrixTuple example_Xi() { return MatrixTuple({mat({{0, 1}, {0, 0}}), mat({{0, 0}, {0, 0}})}); }

// Lambda(x) = [[0, x2], [x1, 0]].
inline MatrixTuple swap_block_E() { return MatrixTuple({mat({{0, 0}, {1, 0}}), mat({{0, 1}, {0, 0}})}); }

inline MatrixTuple scaled_to_norm(const MatrixTuple& E, const MatrixTuple& X, double target) {
  const double nx = operator_norm(lambda_eval(E, X));
  return X.scaled(target / nx);
}

inline CMatrix unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  CMatrix m = CMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

// Basis of a small subalgebra of upper triangular matrices, mixed by a random
// change of basis and a random similarity.
inline MatrixTuple upper_triangular_algebra(Rng& rng) {
  using Pick = std::vector<std::pair<Eigen::Index, Eigen::Index>>;
  static const std::vector<std::pair<Eigen::Index, Pick>> catalog = {
      {2, {{0, 1}}},
      {2, {{0, 0}, {0, 1}}},
      {2, {{0, 1}, {1, 1}}},
      {2, {{0, 0}, {0, 1}, {1, 1}}},
      {3, {{0, 1}, {0, 2}, {1, 2}}},
      {3, {{0, 0}, {0, 1}, {0, 2}}},
      {3, {{0, 2}, {1, 2}, {2, 2}}},
      {3, {{0, 1}, {0, 2}}},
      {3, {{1, 1}, {1, 2}}},
  };
  const auto& [m, pick] = catalog[rng.index(catalog.size())];
  std::vector<CMatrix> base;
  for (auto [i, j] : pick) base.push_back(unit(m, i, j));
  const Eigen::Index g = static_cast<Eigen::Index>(base.size());
  const CMatrix T = CMatrix::Identity(g, g) + 0.5 * rng.gaussian(g, g);
  const CMatrix S = CMatrix::Identity(m, m) + 0.3 * rng.gaussian(m, m);
  return dot_action(T, MatrixTuple(base)).sandwich(S.inverse(), S);
}

// Contraction with operator norm `norm`.
inline CMatrix contraction(Rng& rng, Eigen::Index d, Eigen::Index e, double norm) {
  CMatrix b = rng.gaussian(d, e);
  return b * (norm / operator_norm(b));
}

}  // namespace freelmi::testing
