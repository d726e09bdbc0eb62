#pragma once

#include <vector>

#include "freelmi/linalg.hpp"

namespace freelmi {

// r(x) = c^* (I - Lambda_S(x))^{-1} b.
struct Realization {
  MatrixTuple S;
  CVector b;
  CVector c;

  void validate() const;
};

CMatrix real_eval(const Realization& r, const MatrixTuple& X, const ToleranceProfile& tol = {});
bool in_domain(const Realization& r, const MatrixTuple& X, const ToleranceProfile& tol = {});

// Coordinate i of p(x) = x (I - Lambda_Xi(x))^{-1} on the state space C (+) C^g.
std::vector<Realization> convexotonic_to_realizations(const MatrixTuple& Xi);

}  // namespace freelmi
