#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace freelmi;
using freelmi::testing::mat;

namespace {

// Direct Kronecker expansion of I + sum A_j (x) X_j + sum A_j^* (x) X_j^*.
CMatrix hermitian_oracle(const MatrixTuple& A, const MatrixTuple& X) {
  const Eigen::Index N = A.rows() * X.rows();
  CMatrix out = CMatrix::Identity(N, N);
  for (std::size_t j = 0; j < A.g(); ++j) {
    out += kron(A[j], X[j]) + kron(A[j].adjoint(), X[j].adjoint());
  }
  return out;
}

}  // namespace

TEST(HermitianEval, ZeroIsIdentity) {
  Rng rng(1);
  const HermitianPencil P(rng.tuple(2, 3, 3));
  EXPECT_TRUE(hermitian_eval(P, MatrixTuple::zeros(2, 2, 2)).isApprox(CMatrix::Identity(6, 6)));
}

TEST(HermitianEval, ScalarBoundary) {
  const HermitianPencil P(MatrixTuple({mat({{1}})}));
  EXPECT_NEAR(std::abs(hermitian_eval(P, MatrixTuple::scalars({-0.5}))(0, 0)), 0.0, 1e-15);
}

TEST(HermitianEval, ExampleTupleShortPoint) {
  const MatrixTuple T = unitary_target_tuple(SpectraballPencil(freelmi::testing::example_E()),
                                             freelmi::testing::example_U(), 3);
  const HermitianPencil P(T);
  const MatrixTuple X = MatrixTuple::scalars({0.1, 0.1});
  const CMatrix H = hermitian_eval(P, X);
  EXPECT_LT((H - hermitian_oracle(T, X)).norm(), 1e-14);
  EXPECT_EQ(psd_check(H).kind, PsdKind::PositiveDefinite);
}

TEST(HermitianEval, MatchesOracleOnRandomData) {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const MatrixTuple A = rng.tuple(3, 2, 2);
    const MatrixTuple X = rng.tuple(3, 3, 3);
    EXPECT_LT((hermitian_eval(HermitianPencil(A), X) - hermitian_oracle(A, X)).norm(), 1e-12);
  }
}

TEST(QEval, RowBallPoint) {
  const SpectraballPencil E(freelmi::testing::row_ball());
  const CMatrix Q = q_eval(E, MatrixTuple::scalars({0.6, 0.8}));
  EXPECT_LT((Q - mat({{0.64, -0.48}, {-0.48, 0.36}})).norm(), 1e-15);
  EXPECT_EQ(psd_check(Q).kind, PsdKind::PsdSingular);
}

TEST(QEval, ContractionIsPositiveDefinite) {
  Rng rng(3);
  const SpectraballPencil E(rng.tuple(2, 2, 3));
  for (int t = 0; t < 10; ++t) {
    const MatrixTuple X = freelmi::testing::scaled_to_norm(E.E(), rng.tuple(2, 2, 2), 0.9);
    EXPECT_EQ(psd_check(q_eval(E, X)).kind, PsdKind::PositiveDefinite);
  }
}

TEST(QEval, Entrywise) {
  Rng rng(4);
  const SpectraballPencil E(rng.tuple(2, 3, 2));
  const MatrixTuple X = rng.tuple(2, 2, 2);
  const CMatrix L = lambda_eval(E.E(), X);
  EXPECT_LT((q_eval(E, X) - (CMatrix::Identity(4, 4) - L.adjoint() * L)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MEval, ZeroAndEmbedding) {
  Rng rng(5);
  const SpectraballPencil E(rng.tuple(2, 2, 3));
  EXPECT_TRUE(m_eval(E, MatrixTuple::zeros(2, 2, 2)).isApprox(CMatrix::Identity(10, 10)));
  const MatrixTuple X = rng.tuple(2, 2, 2);
  EXPECT_LT((m_eval(E, X) - hermitian_eval(embed_ball(E), X)).norm(), 1e-13);
}

TEST(MEval, SchurComplementDeterminant) {
  Rng rng(6);
  const SpectraballPencil E(rng.tuple(2, 2, 2));
  for (int t = 0; t < 10; ++t) {
    const MatrixTuple X = freelmi::testing::scaled_to_norm(E.E(), rng.tuple(2, 2, 2), rng.uniform(0.2, 1.8));
    const cplx dm = m_eval(E, X).determinant();
    const cplx dq = q_eval(E, X).determinant();
    EXPECT_LT(std::abs(dm - dq), 1e-10 * std::max(1.0, std::abs(dq)));
  }
}

TEST(MEval, PsdIffQPsd) {
  Rng rng(7);
  const SpectraballPencil E(rng.tuple(3, 2, 2));
  for (int t = 0; t < 20; ++t) {
    const MatrixTuple X = freelmi::testing::scaled_to_norm(E.E(), rng.tuple(3, 2, 2), rng.uniform(0.3, 1.7));
    const bool m_psd = psd_check(m_eval(E, X)).kind != PsdKind::Indefinite;
    const bool q_psd = psd_check(q_eval(E, X)).kind != PsdKind::Indefinite;
    EXPECT_EQ(m_psd, q_psd);
  }
}

TEST(Membership, ZeroIsInterior) {
  Rng rng(8);
  const MatrixTuple A = rng.tuple(2, 3, 3);
  EXPECT_EQ(membership(HermitianPencil(A), MatrixTuple::zeros(2, 2, 2)).region, Region::Interior);
  EXPECT_EQ(membership(SpectraballPencil(A), MatrixTuple::zeros(2, 2, 2)).region, Region::Interior);
}

TEST(Membership, RowBallBoundaryPoint) {
  EXPECT_EQ(membership(SpectraballPencil(freelmi::testing::row_ball()), MatrixTuple::scalars({0.6, 0.8})).region,
            Region::Boundary);
}

TEST(Membership, RowAndColumnBallsDifferAtLevelTwo) {
  const MatrixTuple X({mat({{0, 1}, {0, 0}}), mat({{0, 0}, {0, 1}})});
  EXPECT_EQ(membership(SpectraballPencil(freelmi::testing::row_ball()), X).region, Region::Boundary);
  const Membership col = membership(SpectraballPencil(freelmi::testing::column_ball()), X);
  EXPECT_EQ(col.region, Region::Exterior);
  EXPECT_NEAR(col.certificate, std::sqrt(2.0), 1e-14);
}

TEST(Membership, EmbeddingAgreesWithBallPath) {
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.index(3));
    const Eigen::Index e = 1 + static_cast<Eigen::Index>(rng.index(3));
    const SpectraballPencil E(rng.tuple(2, d, e));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.index(3));
    const MatrixTuple X = freelmi::testing::scaled_to_norm(E.E(), rng.tuple(2, n, n), rng.uniform(0.2, 1.8));
    EXPECT_EQ(membership(E, X).region, membership(embed_ball(E), X).region);
  }
}

TEST(EmbedBall, ScalarAndPolydisc) {
  const HermitianPencil P = embed_ball(SpectraballPencil(MatrixTuple({mat({{1}})})));
  EXPECT_EQ(P.A()[0], mat({{0, 1}, {0, 0}}));
  const HermitianPencil B = embed_ball(SpectraballPencil(polydisc_tuple(2)));
  EXPECT_EQ(B.size(), 4);
  // Bidisc corners lie on the boundary; outside corners are exterior.
  for (cplx a : {cplx(1, 0), cplx(0, 1), cplx(-1, 0)}) {
    for (cplx b : {cplx(1, 0), cplx(0, -1)}) {
      EXPECT_EQ(membership(B, MatrixTuple::scalars({a, b})).region, Region::Boundary);
    }
  }
  EXPECT_EQ(membership(B, MatrixTuple::scalars({0.9, 0.9})).region, Region::Interior);
  EXPECT_EQ(membership(B, MatrixTuple::scalars({1.1, 0.0})).region, Region::Exterior);
}

TEST(Membership, StarShaped) {
  Rng rng(10);
  const HermitianPencil P(rng.tuple(2, 3, 3));
  const SpectraballPencil E(rng.tuple(2, 2, 3));
  for (int t = 0; t < 20; ++t) {
    const MatrixTuple X = rng.tuple(2, 2, 2).scaled(0.2);
    for (double s : {0.0, 0.3, 0.7, 0.99}) {
      if (membership(P, X).region == Region::Interior) {
        EXPECT_EQ(membership(P, X.scaled(s)).region, Region::Interior);
      }
      if (membership(E, X).region == Region::Interior) {
        EXPECT_EQ(membership(E, X.scaled(s)).region, Region::Interior);
      }
    }
  }
}

TEST(Membership, HalfPlane) {
  // I + T + T^* >= 0 iff I + T invertible and ||(I + T)^{-1} T|| <= 1.
  Rng rng(11);
  for (int t = 0; t < 60; ++t) {
    const CMatrix T = rng.gaussian(3, 3) * rng.uniform(0.1, 1.5);
    const CMatrix I = CMatrix::Identity(3, 3);
    const bool lhs = psd_check(I + T + T.adjoint()).kind != PsdKind::Indefinite;
    const CMatrix IT = I + T;
    bool rhs = false;
    if (min_singular_value(IT) > 1e-12) rhs = operator_norm(IT.inverse() * T) <= 1.0 + 1e-10;
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Membership, SpectraballRotationInvariant) {
  Rng rng(12);
  const SpectraballPencil E(rng.tuple(2, 2, 2));
  for (int t = 0; t < 20; ++t) {
    const MatrixTuple X = freelmi::testing::scaled_to_norm(E.E(), rng.tuple(2, 2, 2), rng.uniform(0.3, 1.7));
    EXPECT_EQ(membership(E, X).region, membership(E, X.scaled(rng.unimodular())).region);
  }
}

TEST(Membership, ExampleSpectrahedronNotRotationInvariant) {
  // D_A for the (x1, x2 + x1^2) example tuple contains points whose rotations leave it.
  const HermitianPencil P(unitary_target_tuple(SpectraballPencil(freelmi::testing::example_E()),
                                               freelmi::testing::example_U(), 3));
  Rng rng(13);
  bool found = false;
  for (int t = 0; t < 400 && !found; ++t) {
    const MatrixTuple X = rng.tuple(2, 1, 1);
    if (membership(P, X).region != Region::Interior) continue;
    for (int k = 0; k < 8 && !found; ++k) {
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      if (membership(P, X.scaled(std::polar(1.0, theta))).region == Region::Exterior) found = true;
    }
  }
  EXPECT_TRUE(found);
}
