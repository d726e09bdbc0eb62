#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace freelmi {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Error hierarchy. Shape and precondition errors are caller mistakes,
// domain and numerical errors come from the data.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
struct DomainViolation : Error {
  using Error::Error;
};
struct NumericalFailure : Error {
  using Error::Error;
};

struct ToleranceProfile {
  double psd_tol = 1e-10;
  double rank_tol = 1e-10;
  double residual_tol = 1e-8;

  void validate() const;
};

// g matrices sharing one shape d x e. Immutable once built.
class MatrixTuple {
 public:
  MatrixTuple() = default;
  explicit MatrixTuple(std::vector<CMatrix> mats);

  static MatrixTuple zeros(std::size_t g, Eigen::Index d, Eigen::Index e);
  // Level-1 point from g scalars.
  static MatrixTuple scalars(const std::vector<cplx>& z);
  static MatrixTuple scalars(const CVector& z);
  static MatrixTuple scalars(std::initializer_list<cplx> z) { return scalars(std::vector<cplx>(z)); }

  std::size_t g() const { return mats_.size(); }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return mats_.empty(); }

  const CMatrix& operator[](std::size_t j) const { return mats_[j]; }
  const std::vector<CMatrix>& mats() const { return mats_; }
  auto begin() const { return mats_.begin(); }
  auto end() const { return mats_.end(); }

  MatrixTuple adjoint() const;
  MatrixTuple scaled(cplx s) const;
  MatrixTuple plus(const MatrixTuple& other) const;
  MatrixTuple minus(const MatrixTuple& other) const;
  // Coordinatewise block diagonal sum.
  MatrixTuple direct_sum(const MatrixTuple& other) const;
  // Coordinatewise S^{-1} X_j S style conjugation: left * X_j * right.
  MatrixTuple sandwich(const CMatrix& left, const CMatrix& right) const;
  // max_j ||X_j - Y_j|| in operator norm.
  double distance(const MatrixTuple& other) const;
  // Column vector of the scalar entries of a level-1 tuple.
  CVector as_vector() const;

 private:
  std::vector<CMatrix> mats_;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
};

}  // namespace freelmi
