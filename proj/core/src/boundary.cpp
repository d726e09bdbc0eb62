#include "freelmi/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace freelmi {

namespace {

Eigen::Index idx(std::size_t j) { return static_cast<Eigen::Index>(j); }

constexpr double kHairFloor = 1e-6;

CMatrix columns(const std::vector<CVector>& vs) {
  CMatrix m(vs.front().size(), idx(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) m.col(idx(i)) = vs[i];
  return m;
}

// Every subset of `chosen` of size k, joined with `cand`, keeps full column rank.
bool in_general_position(const std::vector<CVector>& chosen, const CVector& cand, std::size_t k, double tol) {
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    std::vector<CVector> set;
    for (auto i : pick) set.push_back(chosen[i]);
    set.push_back(cand);
    if (min_singular_value(columns(set)) <= tol) return false;
    // Next k-combination of chosen.size().
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == chosen.size() - k + i - 1) --i;
    if (i == 0) return true;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

BoundaryWitness witness_at(const SpectraballPencil& E, const MatrixTuple& X, const ToleranceProfile& tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(q_eval(E, X)));
  const RVector& ev = es.eigenvalues();
  BoundaryWitness w{X, es.eigenvectors().col(0), 0, 0.0};
  while (idx(w.kernel_dim) < ev.size() && ev(idx(w.kernel_dim)) <= tol.psd_tol) ++w.kernel_dim;
  w.kernel_dim = std::max<std::size_t>(w.kernel_dim, 1);
  w.kernel_gap = idx(w.kernel_dim) < ev.size() ? ev(idx(w.kernel_dim)) : 0.0;
  return w;
}

}  // namespace

MatrixTuple boundary_scale(const SpectraballPencil& E, const MatrixTuple& X) {
  const double nx = operator_norm(lambda_eval(E.E(), X));
  if (nx == 0.0) throw PreconditionError("boundary_scale: Lambda_E(X) vanishes");
  return X.scaled(1.0 / nx);
}

std::vector<BoundaryWitness> sample_detailed_boundary(const SpectraballPencil& E, Eigen::Index n, std::size_t count,
                                                      std::uint64_t seed, const ToleranceProfile& tol) {
  if (n < 1) throw PreconditionError("sample_detailed_boundary: level must be positive");
  Rng rng(seed);
  std::vector<BoundaryWitness> out;
  out.reserve(count);
  while (out.size() < count) {
    const MatrixTuple X = rng.tuple(E.g(), n, n);
    if (operator_norm(lambda_eval(E.E(), X)) == 0.0) continue;
    BoundaryWitness w = witness_at(E, boundary_scale(E, X), tol);
    if ((q_eval(E, w.X) * w.v).norm() > 10.0 * tol.psd_tol) {
      throw NumericalFailure("sample_detailed_boundary: kernel vector residual too large");
    }
    out.push_back(std::move(w));
  }
  return out;
}

CVector hair_projection(const CVector& v, Eigen::Index e) {
  if (e <= 0 || v.size() % e != 0) throw ShapeError("hair_projection: vector length is not a multiple of e");
  const Eigen::Index n = v.size() / e;
  CVector u(e);
  for (Eigen::Index a = 0; a < e; ++a) u(a) = v(a * n);
  return u;
}

std::vector<HairSample> hairs_of(const std::vector<BoundaryWitness>& witnesses, Eigen::Index e,
                                 const ToleranceProfile& tol) {
  (void)tol;
  std::vector<HairSample> out;
  for (const auto& w : witnesses) {
    if (w.kernel_dim != 1) continue;
    CVector u = hair_projection(w.v, e);
    if (u.norm() < kHairFloor) continue;
    out.push_back({std::move(u), w});
  }
  return out;
}

std::size_t vector_span_rank(const std::vector<CVector>& vectors, const ToleranceProfile& tol) {
  if (vectors.empty()) return 0;
  return static_cast<std::size_t>(numerical_rank(columns(vectors), tol.rank_tol));
}

std::size_t hair_span_rank(const std::vector<HairSample>& hairs, const ToleranceProfile& tol) {
  std::vector<CVector> us;
  for (const auto& h : hairs) us.push_back(h.u);
  return vector_span_rank(us, tol);
}

std::optional<std::vector<CVector>> hyperbasis_search(const std::vector<HairSample>& hairs, Eigen::Index e,
                                                      std::size_t budget, const ToleranceProfile& tol) {
  if (e < 1) throw PreconditionError("hyperbasis_search: e must be positive");
  std::vector<CVector> chosen;
  const std::size_t target = static_cast<std::size_t>(e) + 1;
  std::size_t examined = 0;
  for (const auto& h : hairs) {
    if (examined++ >= budget) break;
    if (h.u.size() != e) throw ShapeError("hyperbasis_search: hair length differs from e");
    if (h.u.norm() < kHairFloor) continue;
    const CVector u = h.u.normalized();
    const std::size_t k = std::min(chosen.size(), static_cast<std::size_t>(e) - 1);
    if (!in_general_position(chosen, u, k, tol.rank_tol)) continue;
    chosen.push_back(u);
    if (chosen.size() == target) return chosen;
  }
  return std::nullopt;
}

bool atom_with_trivial_kernel(const MatrixTuple& E, const ToleranceProfile& tol) {
  const CMatrix R = range_basis(hstack(E), tol);
  if (R.cols() == 0) return false;
  return atom_check(SpectraballPencil(E.sandwich(R.adjoint(), CMatrix::Identity(E.cols(), E.cols()))), tol);
}

bool is_ball_minimal(const MatrixTuple& E, const ToleranceProfile& tol, std::uint64_t seed) {
  const BallReduction red = ball_minimal_reduction(SpectraballPencil(E), tol, seed);
  return red.pencil.d() + red.pencil.e() == E.rows() + E.cols();
}

GenericityReport eig_generic_check(const HermitianPencil& A, const ToleranceProfile& tol, std::uint64_t seed) {
  const MatrixTuple& a = A.A();
  const MatrixTuple as = a.adjoint();
  const Eigen::Index d = A.size();
  const CMatrix Id = CMatrix::Identity(d, d);
  GenericityReport r;
  r.eig_generic = atom_with_trivial_kernel(a, tol);
  r.star_generic = is_ball_minimal(as, tol, seed);
  const CMatrix ran_as = range_basis(hstack(as), tol);
  if (ran_as.cols() > 0) r.weakly_eig_generic = atom_with_trivial_kernel(a.sandwich(Id, ran_as), tol);
  const CMatrix ran_a = range_basis(hstack(a), tol);
  if (ran_a.cols() > 0) r.weakly_star_generic = is_ball_minimal(as.sandwich(Id, ran_a), tol, seed);
  return r;
}

CMatrix FockShiftTuple::P() const {
  CMatrix p = CMatrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].size() < M) p(idx(i), idx(i)) = 1.0;
  }
  return p;
}

Eigen::Index FockShiftTuple::index_of(const Word& w) const {
  if (w.size() > M) throw PreconditionError("fock index: word longer than truncation degree");
  std::size_t offset = 0;
  std::size_t block = 1;
  for (std::size_t len = 0; len < w.size(); ++len) {
    offset += block;
    block *= g;
  }
  std::size_t rank = 0;
  for (auto letter : w) rank = rank * g + letter;
  return idx(offset + rank);
}

std::vector<Word> words_of_length(std::size_t g, std::size_t N) {
  std::vector<Word> out{Word{}};
  for (std::size_t len = 0; len < N; ++len) {
    std::vector<Word> next;
    next.reserve(out.size() * g);
    for (const auto& w : out) {
      for (std::size_t l = 0; l < g; ++l) {
        Word x = w;
        x.push_back(l);
        next.push_back(std::move(x));
      }
    }
    out = std::move(next);
  }
  return out;
}

FockShiftTuple fock_shift_tuple(std::size_t g, std::size_t M) {
  if (g < 1 || M < 1) throw PreconditionError("fock_shift_tuple: g and M must be positive");
  std::size_t dim = 0;
  std::size_t block = 1;
  for (std::size_t k = 0; k <= M; ++k) {
    dim += block;
    if (dim > kFockDimensionBudget) throw PreconditionError("fock_shift_tuple: dimension budget exceeded");
    block *= g;
  }
  FockShiftTuple F;
  F.g = g;
  F.M = M;
  for (std::size_t k = 0; k <= M; ++k) {
    auto ws = words_of_length(g, k);
    F.words.insert(F.words.end(), ws.begin(), ws.end());
  }
  std::vector<CMatrix> S(g, CMatrix::Zero(idx(dim), idx(dim)));
  F.S = MatrixTuple(S);
  for (std::size_t l = 0; l < g; ++l) {
    for (std::size_t i = 0; i < F.words.size(); ++i) {
      const Word& w = F.words[i];
      if (w.size() >= M) continue;
      Word x{l};
      x.insert(x.end(), w.begin(), w.end());
      S[l](F.index_of(x), idx(i)) = 1.0;
    }
  }
  F.S = MatrixTuple(std::move(S));
  return F;
}

BlockBeta BlockBeta::identity(std::size_t g, Eigen::Index r) {
  BlockBeta b = zeros(g, r);
  for (std::size_t j = 0; j < g; ++j) b.blocks[j][j].setIdentity();
  return b;
}

BlockBeta BlockBeta::zeros(std::size_t g, Eigen::Index r) {
  return {std::vector<std::vector<CMatrix>>(g, std::vector<CMatrix>(g, CMatrix::Zero(r, r)))};
}

MatrixTuple beta_dot_shift(const BlockBeta& beta, const FockShiftTuple& S) {
  if (beta.g() != S.g) throw ShapeError("beta_dot_shift: coordinate counts differ");
  std::vector<CMatrix> out;
  for (std::size_t j = 0; j < beta.g(); ++j) {
    CMatrix m = CMatrix::Zero(beta.r() * S.dim(), beta.r() * S.dim());
    for (std::size_t k = 0; k < beta.g(); ++k) m += kron(beta(j, k), S.S[k]);
    out.push_back(std::move(m));
  }
  return MatrixTuple(std::move(out));
}

CMatrix beta_tilde(const BlockBeta& beta, const Word& u, const Word& w) {
  if (u.size() != w.size()) throw ShapeError("beta_tilde: words of different length");
  CMatrix out = CMatrix::Identity(beta.r(), beta.r());
  for (std::size_t i = 0; i < u.size(); ++i) out = out * beta(w[i], u[i]);
  return out;
}

CMatrix b_matrix(const BlockBeta& beta, std::size_t N) {
  if (N < 1) throw PreconditionError("b_matrix: N must be positive");
  const auto words = words_of_length(beta.g(), N);
  const Eigen::Index r = beta.r();
  if (words.size() * static_cast<std::size_t>(r) > kFockDimensionBudget) {
    throw PreconditionError("b_matrix: dimension budget exceeded");
  }
  CMatrix B(idx(words.size()) * r, idx(words.size()) * r);
  for (std::size_t a = 0; a < words.size(); ++a) {
    for (std::size_t c = 0; c < words.size(); ++c) {
      B.block(idx(a) * r, idx(c) * r, r, r) = beta_tilde(beta, words[a], words[c]);
    }
  }
  return B;
}

MatrixTuple e_dot_beta(const MatrixTuple& E, const BlockBeta& beta) {
  if (E.g() != beta.g()) throw ShapeError("e_dot_beta: coordinate counts differ");
  std::vector<CMatrix> out;
  for (std::size_t k = 0; k < beta.g(); ++k) {
    CMatrix m = CMatrix::Zero(E.rows() * beta.r(), E.cols() * beta.r());
    for (std::size_t j = 0; j < beta.g(); ++j) m += kron(E[j], beta(j, k));
    out.push_back(std::move(m));
  }
  return MatrixTuple(std::move(out));
}

CMatrix fock_defect(const MatrixTuple& E, const BlockBeta& beta) {
  const MatrixTuple Eb = e_dot_beta(E, beta);
  CMatrix R = CMatrix::Identity(Eb.cols(), Eb.cols());
  for (const auto& m : Eb) R -= m.adjoint() * m;
  return R;
}

FockWitnessSet fock_boundary_witness(const SpectraballPencil& E, std::size_t M, std::uint64_t seed,
                                     const ToleranceProfile& tol) {
  if (!is_ball_minimal(E.E(), tol, seed)) throw PreconditionError("fock_boundary_witness: E is not ball-minimal");
  const std::size_t g = E.g();
  const Eigen::Index e = E.e();
  const FockShiftTuple F = fock_shift_tuple(g, M);
  Rng rng(seed);

  // Hair witnesses at a common level whose hairs span C^e.
  std::vector<BoundaryWitness> base;
  Eigen::Index r = 1;
  for (; r <= std::max<Eigen::Index>(e, 1) && idx(base.size()) < e; ++r) {
    base.clear();
    std::vector<CVector> spans;
    const auto pool = sample_detailed_boundary(E, r, static_cast<std::size_t>(50 * e), rng.engine()(), tol);
    for (const auto& w : pool) {
      if (w.kernel_dim != 1) continue;
      CVector u = hair_projection(w.v, e);
      if (u.norm() < kHairFloor) continue;
      spans.push_back(u);
      if (vector_span_rank(spans, tol) == spans.size()) {
        base.push_back(w);
        if (idx(base.size()) == e) break;
      } else {
        spans.pop_back();
      }
    }
    if (idx(base.size()) == e) break;
  }
  if (idx(base.size()) < e) throw NumericalFailure("fock_boundary_witness: no spanning hair witnesses found");
  if (idx(base.size()) * r * F.dim() * e > idx(kFockDimensionBudget)) {
    throw PreconditionError("fock_boundary_witness: dimension budget exceeded");
  }

  CVector vacuum = CVector::Zero(F.dim());
  vacuum(0) = 1.0;
  for (double eps = 1e-2; eps >= 1e-7; eps /= 10.0) {
    FockWitnessSet out;
    out.level = static_cast<std::size_t>(r * F.dim());
    out.perturbation = eps;
    out.min_b_singular = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (const auto& w : base) {
      BlockBeta beta = BlockBeta::zeros(g, r);
      for (std::size_t j = 0; j < g; ++j) {
        beta.blocks[j][0] = w.X[j];
        for (std::size_t k = 0; k < g; ++k) beta.blocks[j][k] += eps * rng.gaussian(r, r);
      }
      CMatrix H = CMatrix::Identity(e * r, e * r) - fock_defect(E.E(), beta);
      Eigen::SelfAdjointEigenSolver<CMatrix> hs(hermitian_part(H), Eigen::EigenvaluesOnly);
      const double top = hs.eigenvalues()(hs.eigenvalues().size() - 1);
      const double c = 1.0 / std::sqrt(top);
      for (auto& rowb : beta.blocks) {
        for (auto& blk : rowb) blk *= c;
      }
      for (std::size_t N = 1; N <= M; ++N) {
        const CMatrix B = b_matrix(beta, N);
        Eigen::JacobiSVD<CMatrix> svd(B);
        const RVector& s = svd.singularValues();
        out.min_b_singular = std::min(out.min_b_singular, s(s.size() - 1));
        if (s(s.size() - 1) <= tol.rank_tol * std::max(1.0, s(0))) ok = false;
      }
      Eigen::SelfAdjointEigenSolver<CMatrix> rs(hermitian_part(fock_defect(E.E(), beta)));
      const RVector& ev = rs.eigenvalues();
      if (std::abs(ev(0)) > tol.psd_tol || (ev.size() > 1 && ev(1) <= tol.psd_tol)) ok = false;
      if (!ok) break;
      const CVector gamma = rs.eigenvectors().col(0);
      const MatrixTuple X = beta_dot_shift(beta, F);
      BoundaryWitness bw = witness_at(E, X, tol);
      bw.v = kron(gamma, vacuum);
      if ((q_eval(E, X) * bw.v).norm() > 10.0 * tol.psd_tol) ok = false;
      if (membership(E, X, tol).region != Region::Boundary) ok = false;
      if (!ok) break;
      out.hairs.push_back(hair_projection(bw.v, e));
      out.witnesses.push_back(std::move(bw));
    }
    if (ok && idx(vector_span_rank(out.hairs, tol)) == e) return out;
  }
  throw NumericalFailure("fock_boundary_witness: perturbation schedule exhausted");
}

CMatrix NcPolynomial::apply(const MatrixTuple& X, const CVector& v) const {
  if (X.g() != g) throw ShapeError("polynomial: coordinate count mismatch");
  const Eigen::Index n = X.rows();
  if (v.size() != cols * n) throw ShapeError("polynomial: vector length mismatch");
  CVector out = CVector::Zero(rows * n);
  for (const auto& [w, coeff] : coeffs) {
    CMatrix xw = CMatrix::Identity(n, n);
    for (auto letter : w) {
      if (letter >= g) throw ShapeError("polynomial: letter out of range");
      xw = xw * X[letter];
    }
    out += kron(coeff, xw) * v;
  }
  return out;
}

bool NcPolynomial::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const auto& kv) { return kv.second.isZero(0.0); });
}

double nullstellensatz_test(const SpectraballPencil& E, const NcPolynomial& V,
                            const std::vector<BoundaryWitness>& witnesses) {
  if (V.g != E.g() || V.cols != E.e()) throw ShapeError("nullstellensatz_test: polynomial shape mismatch");
  double worst = 0.0;
  for (const auto& w : witnesses) worst = std::max(worst, V.apply(w.X, w.v).norm());
  return worst;
}

}  // namespace freelmi
