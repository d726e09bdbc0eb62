#include "freelmi/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace freelmi {

namespace {

constexpr double kClusterGap = 1e-7;
constexpr double kEquivalenceTol = 1e-8;
constexpr int kSplitAttempts = 3;
constexpr int kPruneRays = 240;

Eigen::Index idx(std::size_t j) { return static_cast<Eigen::Index>(j); }

std::vector<CMatrix> star_family(const MatrixTuple& A) {
  std::vector<CMatrix> f;
  f.reserve(2 * A.g());
  for (const auto& a : A) {
    f.push_back(a);
    f.push_back(a.adjoint());
  }
  return f;
}

// Stacked operators X -> L_i X - X R_i, acting on column-major vec(X).
CMatrix intertwiner_system(const std::vector<CMatrix>& left, const std::vector<CMatrix>& right) {
  const Eigen::Index m = left.front().rows();
  const Eigen::Index n = right.front().rows();
  const Eigen::Index blk = m * n;
  CMatrix K(blk * idx(left.size()), blk);
  const CMatrix Im = CMatrix::Identity(m, m);
  const CMatrix In = CMatrix::Identity(n, n);
  for (std::size_t i = 0; i < left.size(); ++i) {
    K.middleRows(idx(i) * blk, blk) = kron(In, left[i]) - kron(right[i].transpose(), Im);
  }
  return K;
}

// Traces of all words of length <= 4 in the letters A_j, A_j^*.
CVector word_trace_fingerprint(const MatrixTuple& A) {
  const std::vector<CMatrix> letters = star_family(A);
  const Eigen::Index n = A.rows();
  std::vector<cplx> traces;
  std::vector<CMatrix> frontier{CMatrix::Identity(n, n)};
  for (int len = 1; len <= 4; ++len) {
    std::vector<CMatrix> next;
    next.reserve(frontier.size() * letters.size());
    for (const auto& w : frontier) {
      for (const auto& l : letters) {
        next.push_back(w * l);
        traces.push_back(next.back().trace());
      }
    }
    frontier = std::move(next);
  }
  return Eigen::Map<CVector>(traces.data(), idx(traces.size()));
}

bool unitarily_equivalent(const MatrixTuple& A, const MatrixTuple& B, const ToleranceProfile& tol) {
  if (A.rows() != B.rows()) return false;
  const CMatrix K = intertwiner_system(star_family(B), star_family(A));
  const auto ker = kernel_basis(K, tol);
  if (ker.empty()) return false;
  const Eigen::Index n = A.rows();
  const CMatrix W = polar_unitary(unvec(ker.front(), n, n));
  for (std::size_t j = 0; j < A.g(); ++j) {
    if (operator_norm(W * A[j] * W.adjoint() - B[j]) > kEquivalenceTol) return false;
  }
  return true;
}

MatrixTuple compress(const MatrixTuple& A, const CMatrix& Q) { return A.sandwich(Q.adjoint(), Q); }

MatrixTuple block_diagonal(const std::vector<MatrixTuple>& parts) {
  MatrixTuple out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = out.direct_sum(parts[i]);
  return out;
}

double min_ray_limit(const std::vector<const HermitianPencil*>& pencils, const MatrixTuple& X) {
  double t = std::numeric_limits<double>::infinity();
  for (const auto* p : pencils) t = std::min(t, spectrahedron_ray_limit(*p, X));
  return t;
}

// Looks for a direction along which D_{others} reaches further than D_{candidate},
// which exhibits a point of the intersection of the others outside the candidate.
bool has_separating_point(const HermitianPencil& candidate, const std::vector<const HermitianPencil*>& others,
                          Rng& rng) {
  for (int k = 0; k < kPruneRays; ++k) {
    const Eigen::Index n = 1 + (k % 3);
    const MatrixTuple X = rng.tuple(candidate.g(), n, n);
    const double t_cand = spectrahedron_ray_limit(candidate, X);
    const double t_rest = min_ray_limit(others, X);
    if (std::isfinite(t_cand) && t_cand < t_rest * (1.0 - 1e-6)) return true;
  }
  return false;
}

struct Split {
  std::vector<CMatrix> bases;
  bool verified = true;
};

Split split_by_commutant(const HermitianPencil& A, const std::vector<CMatrix>& commutant,
                         const ToleranceProfile& tol, Rng& rng, int& attempts) {
  const Eigen::Index n = A.size();
  Split last;
  for (attempts = 1; attempts <= kSplitAttempts; ++attempts) {
    CMatrix T = CMatrix::Zero(n, n);
    for (const auto& c : commutant) T += rng.complex_normal() * c;
    CMatrix H = hermitian_part(T);
    const double scale = operator_norm(H);
    if (scale > 0.0) H /= scale;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
    const RVector& ev = es.eigenvalues();
    Split s;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= n; ++i) {
      if (i == n || ev(i) - ev(i - 1) > kClusterGap) {
        s.bases.push_back(es.eigenvectors().middleCols(start, i - start));
        start = i;
      }
    }
    for (const auto& Q : s.bases) {
      const MatrixTuple part = compress(A.A(), Q);
      for (std::size_t j = 0; j < A.g(); ++j) {
        if (operator_norm(A.A()[j] * Q - Q * part[j]) > 1e-8) s.verified = false;
      }
      if (s.verified && !is_irreducible(HermitianPencil(part), tol)) s.verified = false;
      if (!s.verified) break;
    }
    if (s.verified) return s;
    last = std::move(s);
  }
  attempts = kSplitAttempts;
  last.verified = false;
  return last;
}

}  // namespace

StructureFit fit_structure_constants(const MatrixTuple& G, const CMatrix& C) {
  if (C.rows() != G.cols() || C.cols() != G.rows()) throw ShapeError("structure constants: middle factor shape");
  const std::size_t g = G.g();
  const CMatrix V = stack_vectorized(G);
  const Eigen::ColPivHouseholderQR<CMatrix> qr(V);
  std::vector<CMatrix> Psi(g, CMatrix::Zero(idx(g), idx(g)));
  double worst = 0.0;
  for (std::size_t t = 0; t < g; ++t) {
    const CMatrix right = C * G[t];
    for (std::size_t l = 0; l < g; ++l) {
      const CVector p = vec(G[l] * right);
      const CVector c = qr.solve(p);
      Psi[t].row(idx(l)) = c.transpose();
      worst = std::max(worst, (V * c - p).norm() / std::max(1.0, p.norm()));
    }
  }
  return {MatrixTuple(std::move(Psi)), worst};
}

StructureFit fit_structure_constants(const MatrixTuple& G) {
  return fit_structure_constants(G, CMatrix::Identity(G.cols(), G.rows()));
}

bool is_linearly_independent(const MatrixTuple& A, const ToleranceProfile& tol) {
  return numerical_rank(stack_vectorized(A), tol.rank_tol) == idx(A.g());
}

std::optional<MultiplicationTable> solve_multiplication_table(const MatrixTuple& A, const ToleranceProfile& tol) {
  if (!A.square()) throw ShapeError("multiplication table needs square coefficients");
  if (!is_linearly_independent(A, tol)) throw PreconditionError("multiplication table: tuple is linearly dependent");
  StructureFit fit = fit_structure_constants(A);
  if (fit.residual > tol.residual_tol) return std::nullopt;
  return MultiplicationTable{std::move(fit.Psi), fit.residual};
}

double convexotonic_residual(const MatrixTuple& Xi) {
  const std::size_t g = Xi.g();
  if (Xi.rows() != idx(g) || Xi.cols() != idx(g)) throw ShapeError("convexotonic tuple must be g matrices of size g");
  double worst = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    for (std::size_t j = 0; j < g; ++j) {
      CMatrix r = Xi[k] * Xi[j];
      for (std::size_t s = 0; s < g; ++s) r -= Xi[j](idx(k), idx(s)) * Xi[s];
      worst = std::max(worst, operator_norm(r));
    }
  }
  return worst;
}

bool is_convexotonic(const MatrixTuple& Xi, const ToleranceProfile& tol) {
  return convexotonic_residual(Xi) <= tol.residual_tol;
}

AlgebraBasis generated_algebra_basis(const MatrixTuple& A, const ToleranceProfile& tol) {
  if (!A.square()) throw ShapeError("algebra basis needs square coefficients");
  if (!is_linearly_independent(A, tol)) throw PreconditionError("algebra basis: tuple is linearly dependent");
  const Eigen::Index r = A.rows();
  std::vector<CMatrix> J(A.begin(), A.end());
  // Orthonormal columns spanning vec(span J).
  Eigen::HouseholderQR<CMatrix> qr0(stack_vectorized(A));
  CMatrix Q = qr0.householderQ() * CMatrix::Identity(r * r, idx(A.g()));
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  for (std::size_t l = 0; l < J.size(); ++l) {
    for (std::size_t j = 0; j < J.size(); ++j) queue.emplace_back(l, j);
  }
  while (!queue.empty() && Q.cols() < r * r) {
    const auto [l, j] = queue.front();
    queue.pop_front();
    const CVector p = vec(J[l] * J[j]);
    CVector res = p - Q * (Q.adjoint() * p);
    res -= Q * (Q.adjoint() * res);
    const double nr = res.norm();
    if (nr <= tol.rank_tol * std::max(1.0, p.norm()) || nr <= 1e3 * tol.rank_tol) continue;
    res /= nr;
    Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
    Q.col(Q.cols() - 1) = res;
    J.push_back(unvec(res, r, r));
    const std::size_t k = J.size() - 1;
    for (std::size_t i = 0; i <= k; ++i) {
      queue.emplace_back(i, k);
      if (i != k) queue.emplace_back(k, i);
    }
  }
  AlgebraBasis out{MatrixTuple(std::move(J)), 0};
  out.h = out.J.g();
  return out;
}

std::vector<CMatrix> centralizer_basis(const std::vector<CMatrix>& family, const ToleranceProfile& tol) {
  if (family.empty()) throw PreconditionError("centralizer of an empty family");
  const Eigen::Index n = family.front().rows();
  for (const auto& f : family) {
    if (f.rows() != n || f.cols() != n) throw ShapeError("centralizer family must be square of one size");
  }
  const CMatrix K = intertwiner_system(family, family);
  std::vector<CMatrix> out;
  for (const auto& v : kernel_basis(K, tol)) out.push_back(unvec(v, n, n));
  return out;
}

std::size_t centralizer_dim(const std::vector<CMatrix>& family, const ToleranceProfile& tol) {
  return centralizer_basis(family, tol).size();
}

bool is_irreducible(const HermitianPencil& A, const ToleranceProfile& tol) {
  return centralizer_dim(star_family(A.A()), tol) == 1;
}

bool atom_check(const SpectraballPencil& E, const ToleranceProfile& tol) {
  const Eigen::Index d = E.d();
  const Eigen::Index e = E.e();
  std::vector<CMatrix> family;
  for (const auto& Ej : E.E()) {
    CMatrix up = CMatrix::Zero(d + e, d + e);
    up.topRightCorner(d, e) = Ej;
    family.push_back(up);
    family.push_back(up.adjoint());
  }
  if (centralizer_dim(family, tol) != 1) return false;
  if (!kernel_basis(vstack(E.E()), tol).empty()) return false;
  return kernel_basis(vstack(E.E().adjoint()), tol).empty();
}

Reduction minimal_reduction(const HermitianPencil& A, const ToleranceProfile& tol, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index n = A.size();
  Decomposition dec;
  const auto commutant = centralizer_basis(star_family(A.A()), tol);
  std::vector<CMatrix> bases;
  if (commutant.size() <= 1) {
    bases.push_back(CMatrix::Identity(n, n));
    dec.attempts = 0;
  } else {
    Split s = split_by_commutant(A, commutant, tol, rng, dec.attempts);
    dec.split_verified = s.verified;
    bases = std::move(s.bases);
  }
  dec.similarity = CMatrix(n, n);
  Eigen::Index col = 0;
  for (const auto& Q : bases) {
    dec.similarity.middleCols(col, Q.cols()) = Q;
    col += Q.cols();
    dec.summands.emplace_back(compress(A.A(), Q));
  }

  // Deduplicate unitarily equivalent summands.
  std::vector<CVector> prints;
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < dec.summands.size(); ++i) {
    const MatrixTuple& Si = dec.summands[i].A();
    const CVector fp = word_trace_fingerprint(Si);
    bool dup = false;
    for (std::size_t k = 0; k < reps.size() && !dup; ++k) {
      const MatrixTuple& Sk = dec.summands[reps[k]].A();
      if (Sk.rows() != Si.rows()) continue;
      const double gap = (fp - prints[k]).norm() / std::max(1.0, fp.norm());
      if (gap <= kEquivalenceTol && unitarily_equivalent(Si, Sk, tol)) dup = true;
    }
    if (dup) {
      ++dec.duplicates_removed;
      continue;
    }
    reps.push_back(i);
    prints.push_back(fp);
  }

  // Randomized irredundancy pruning.
  std::vector<std::size_t> kept = reps;
  if (kept.size() > 1) {
    dec.pruning_heuristic = true;
    for (std::size_t pos = 0; pos < kept.size() && kept.size() > 1;) {
      std::vector<const HermitianPencil*> others;
      for (std::size_t q = 0; q < kept.size(); ++q) {
        if (q != pos) others.push_back(&dec.summands[kept[q]]);
      }
      if (has_separating_point(dec.summands[kept[pos]], others, rng)) {
        ++pos;
      } else {
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(pos));
        ++dec.pruned_redundant;
      }
    }
  }
  dec.kept = kept;
  std::vector<MatrixTuple> parts;
  for (auto i : kept) parts.push_back(dec.summands[i].A());
  return {HermitianPencil(block_diagonal(parts)), std::move(dec)};
}

BallReduction ball_minimal_reduction(const SpectraballPencil& E, const ToleranceProfile& tol, std::uint64_t seed) {
  const Reduction red = minimal_reduction(embed_ball(E), tol, seed);
  const std::size_t g = E.g();
  BallReduction out{SpectraballPencil(MatrixTuple::zeros(g, 1, 1)), 0.0, 0, 0};
  std::vector<MatrixTuple> blocks;
  for (auto i : red.decomposition.kept) {
    const MatrixTuple& S = red.decomposition.summands[i].A();
    const CMatrix R = range_basis(hstack(S), tol);
    const CMatrix K = range_basis(hstack(S.adjoint()), tol);
    if (R.cols() == 0 || K.cols() == 0) continue;
    double resid = operator_norm(R.adjoint() * K);
    std::vector<CMatrix> F;
    for (const auto& s : S) {
      F.push_back(R.adjoint() * s * K);
      resid = std::max(resid, operator_norm(s - R * F.back() * K.adjoint()));
    }
    if (R.cols() + K.cols() != S.rows()) resid = std::max(resid, 1.0);
    out.structure_residual = std::max(out.structure_residual, resid);
    blocks.emplace_back(std::move(F));
  }
  if (out.structure_residual > 1e-8) {
    throw NumericalFailure("ball reduction: summand is not of the form [[0,F],[0,0]]");
  }
  if (blocks.empty()) return out;
  out.pencil = SpectraballPencil(block_diagonal(blocks));

  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int k = 0; k < 60; ++k) {
    const Eigen::Index n = 1 + (k % 3);
    MatrixTuple X = rng.tuple(g, n, n);
    const double nx = operator_norm(lambda_eval(E.E(), X));
    if (nx == 0.0) continue;
    X = X.scaled(rng.uniform(0.5, 1.5) / nx);
    const Membership a = membership(E, X, tol);
    if (a.region == Region::Boundary) continue;
    ++out.samples;
    if (membership(out.pencil, X, tol).region == a.region) ++out.agreements;
  }
  return out;
}

std::optional<std::pair<CMatrix, CMatrix>> ball_equivalent(const MatrixTuple& E, const MatrixTuple& F,
                                                           const ToleranceProfile& tol, std::uint64_t seed,
                                                           int starts) {
  if (E.g() != F.g() || E.rows() != F.rows() || E.cols() != F.cols()) {
    throw ShapeError("ball_equivalent: tuples must share shape");
  }
  Rng rng(seed);
  const Eigen::Index d = E.rows();
  const Eigen::Index e = E.cols();
  auto misfit = [&](const CMatrix& W, const CMatrix& V) {
    double worst = 0.0;
    for (std::size_t j = 0; j < E.g(); ++j) worst = std::max(worst, operator_norm(F[j] - W * E[j] * V));
    return worst;
  };
  for (int s = 0; s < starts; ++s) {
    CMatrix V = s == 0 ? CMatrix::Identity(e, e) : rng.unitary(e);
    CMatrix W = CMatrix::Identity(d, d);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 4000; ++it) {
      CMatrix N = CMatrix::Zero(d, d);
      for (std::size_t j = 0; j < E.g(); ++j) N += E[j] * V * F[j].adjoint();
      W = polar_unitary(N).adjoint();
      CMatrix K = CMatrix::Zero(e, e);
      for (std::size_t j = 0; j < E.g(); ++j) K += F[j].adjoint() * W * E[j];
      V = polar_unitary(K).adjoint();
      const double cur = misfit(W, V);
      if (cur <= 0.1 * tol.residual_tol) break;
      if (it % 50 == 49) {
        if (cur > prev * (1.0 - 1e-4)) break;
        prev = cur;
      }
    }
    if (misfit(W, V) <= tol.residual_tol) return std::make_pair(W, V);
  }
  return std::nullopt;
}

MatrixTuple dot_action(const CMatrix& Delta, const MatrixTuple& C) {
  const Eigen::Index g = idx(C.g());
  if (Delta.rows() != g || Delta.cols() != g) throw ShapeError("dot_action: Delta must be g x g");
  std::vector<CMatrix> out(C.g(), CMatrix::Zero(C.rows(), C.cols()));
  for (Eigen::Index j = 0; j < g; ++j) {
    for (Eigen::Index k = 0; k < g; ++k) {
      if (Delta(j, k) != cplx(0.0)) out[j] += Delta(j, k) * C[k];
    }
  }
  return MatrixTuple(std::move(out));
}

MatrixTuple affine_point(const MatrixTuple& X, const CMatrix& M, const CVector& b) {
  const Eigen::Index g = idx(X.g());
  if (M.rows() != g || M.cols() != g || b.size() != g) throw ShapeError("affine_point: shape mismatch");
  MatrixTuple Y = dot_action(M.transpose(), X);
  std::vector<CMatrix> out(Y.begin(), Y.end());
  for (Eigen::Index t = 0; t < g; ++t) out[t] += b(t) * CMatrix::Identity(X.rows(), X.rows());
  return MatrixTuple(std::move(out));
}

HermitianPencil affine_change(const HermitianPencil& A, const CMatrix& M, const CVector& b,
                              const ToleranceProfile& tol) {
  const Eigen::Index g = idx(A.g());
  if (M.rows() != g || M.cols() != g || b.size() != g) throw ShapeError("affine_change: shape mismatch");
  if (min_singular_value(M) <= tol.rank_tol * std::max(1.0, operator_norm(M))) {
    throw PreconditionError("affine_change: M is singular");
  }
  const CMatrix L = hermitian_eval(A, MatrixTuple::scalars(b));
  if (psd_check(L, tol).kind != PsdKind::PositiveDefinite) {
    throw DomainViolation("affine_change: b is not an interior point");
  }
  const CMatrix H = psd_inv_sqrt(L);
  return HermitianPencil(dot_action(M, A.A().sandwich(H, H)));
}

}  // namespace freelmi
