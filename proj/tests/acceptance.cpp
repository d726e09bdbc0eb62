#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "cli_fixtures.hpp"

using namespace freelmi;
using freelmi::testing::mat;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

MatrixTuple pad_zero(const MatrixTuple& E, bool row, Eigen::Index at) {
  std::vector<CMatrix> out;
  for (const auto& m : E) {
    CMatrix p = CMatrix::Zero(m.rows() + (row ? 1 : 0), m.cols() + (row ? 0 : 1));
    if (row) {
      p.topRows(at) = m.topRows(at);
      p.bottomRows(m.rows() - at) = m.bottomRows(m.rows() - at);
    } else {
      p.leftCols(at) = m.leftCols(at);
      p.rightCols(m.cols() - at) = m.rightCols(m.cols() - at);
    }
    out.push_back(p);
  }
  return MatrixTuple(out);
}

std::optional<MatrixTuple> ball_minimal_sample(Rng& rng, std::size_t g, Eigen::Index d, Eigen::Index e) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    MatrixTuple E = rng.tuple(g, d, e);
    if (is_ball_minimal(E)) return E;
  }
  return std::nullopt;
}

double largest(const MatrixTuple& X) {
  double top = 0.0;
  for (const auto& x : X) top = std::max(top, operator_norm(x));
  return top;
}

CMatrix word_power(const MatrixTuple& T, const Word& w) {
  CMatrix out = CMatrix::Identity(T.rows(), T.cols());
  for (auto letter : w) out = out * T[letter];
  return out;
}

// f(x1, x2) = (x1, x2 + x1^2) on 6 scalar points, then transport of the boundary of B_E.
Outcome example_reproduction() {
  const SpectraballPencil E(freelmi::testing::example_E());
  const auto pair = pencil_pair_from_unitary(E, freelmi::testing::example_U(), 3);
  if (!pair) return {false, "pencil pair absent"};
  const ConvexotonicMap p = pair->p();
  Rng rng(101);
  CMatrix V(6, 6), F(6, 2);
  for (Eigen::Index i = 0; i < 6; ++i) {
    const cplx x1 = 0.4 * rng.complex_normal(), x2 = 0.4 * rng.complex_normal();
    V.row(i) << 1.0, x1, x2, x1 * x1, x1 * x2, x2 * x2;
    const CVector y = co_eval(p, MatrixTuple::scalars({x1, x2})).as_vector();
    F.row(i) = y.transpose();
  }
  CMatrix expect = CMatrix::Zero(6, 2);
  expect(1, 0) = 1.0;
  expect(2, 1) = 1.0;
  expect(3, 1) = 1.0;
  const double coeff = (V.fullPivLu().solve(F) - expect).cwiseAbs().maxCoeff();

  double transport = 0.0;
  int checked = 0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 1 + t % 3;
    const MatrixTuple X = boundary_scale(E, rng.tuple(2, n, n));
    const MatrixTuple Y = co_eval(p, X);
    const MatrixTuple f({X[0], X[1] + X[0] * X[0]});
    const double lam = std::abs(membership(pair->B, Y).certificate);
    transport = std::max({transport, Y.distance(f), lam});
    if (membership(pair->A, X).region == Region::Boundary) ++checked;
  }
  return {coeff < 1e-10 && transport < 1e-7 && checked == 20,
          fmt("coefficient error %.2e, transport residual %.2e over %.0f boundary points", coeff, transport, checked)};
}

Outcome inverse_pair_suite() {
  Rng rng(102);
  double worst = 0.0;
  std::size_t evaluated = 0;
  for (int t = 0; t < 100; ++t) {
    const auto table = solve_multiplication_table(freelmi::testing::upper_triangular_algebra(rng));
    if (!table) return {false, "algebra not closed"};
    std::vector<MatrixTuple> samples;
    for (int s = 0; s < 10; ++s) {
      const Eigen::Index n = 1 + s % 4;
      const MatrixTuple X = rng.tuple(table->Xi.g(), n, n);
      samples.push_back(X.scaled(0.5 / std::max(operator_norm(lambda_eval(table->Xi, X)), largest(X))));
    }
    const InverseCheck c = verify_inverse_pair(table->Xi, samples);
    worst = std::max(worst, c.max_residual);
    evaluated += c.evaluated;
  }
  return {worst < 1e-9 && evaluated == 1000, fmt("max ||q(p(X)) - X|| = %.2e over %.0f points", worst, evaluated)};
}

Outcome transport_identities() {
  Rng rng(103);
  std::vector<PencilPair> pairs;
  pairs.push_back(*pencil_pair_from_unitary(SpectraballPencil(freelmi::testing::example_E()),
                                            freelmi::testing::example_U(), 3));
  while (pairs.size() < 6) {
    const MatrixTuple A = freelmi::testing::upper_triangular_algebra(rng);
    const CMatrix U = rng.unimodular() * CMatrix::Identity(A.rows(), A.rows());
    if (auto pair = make_pencil_pair(A, U)) pairs.push_back(std::move(*pair));
  }
  double worst = 0.0;
  for (const auto& pair : pairs) {
    for (int s = 0; s < 40; ++s) {
      const Eigen::Index n = 1 + s % 3;
      MatrixTuple X = rng.tuple(pair.A.g(), n, n);
      const double r = rng.uniform(0.05, 0.5);
      const double nr = operator_norm(lambda_eval(pair.R, X));
      X = nr > 0.0 ? X.scaled(r / nr) : X.scaled(r);
      const auto [a, b] = nstatz_residuals(pair, X);
      worst = std::max({worst, a, b});
    }
  }
  PencilPair bad = pairs.front();
  std::vector<CMatrix> xi = bad.Xi.Xi.mats();
  xi[0](0, 0) += 0.1;
  bad.Xi.Xi = MatrixTuple(xi);
  const auto [ba, bb] = nstatz_residuals(bad, rng.tuple(2, 2, 2).scaled(0.3));
  const double control = std::max(ba, bb);
  return {worst < 1e-9 && control > 1e-3,
          fmt("max residual %.2e over %.0f pairs, perturbed control %.2e", worst, pairs.size(), control)};
}

Outcome matrix_ball_dual() {
  Rng rng(104);
  double worst = 0.0;
  const std::pair<Eigen::Index, Eigen::Index> shapes[] = {{1, 2}, {2, 2}, {2, 3}};
  for (auto [d, e] : shapes) {
    const MatrixTuple units = matrix_units(d, e);
    for (int t = 0; t < 5; ++t) {
      const CMatrix b = freelmi::testing::contraction(rng, d, e, rng.uniform(0.1, 0.9));
      const BallMap phi = matrixball_automorphism(d, e, b, rng.unitary(d), rng.unitary(e));
      for (int s = 0; s < 50; ++s) {
        const Eigen::Index n = 1 + s % 3;
        const double r = rng.uniform(0.05, 0.95);
        const MatrixTuple X = freelmi::testing::scaled_to_norm(units, rng.tuple(units.g(), n, n), r);
        worst = std::max(worst, phi.apply(X).distance(phi.apply_convexotonic(X)));
      }
    }
  }
  return {worst < 1e-10, fmt("max closed vs convexotonic gap %.2e", worst)};
}

PolydiscParams random_polydisc(Rng& rng, std::size_t g) {
  PolydiscParams p{CVector(static_cast<Eigen::Index>(g)), std::vector<std::size_t>(g), CVector(static_cast<Eigen::Index>(g))};
  for (std::size_t j = 0; j < g; ++j) p.pi[j] = j;
  std::shuffle(p.pi.begin(), p.pi.end(), rng.engine());
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(g); ++j) {
    p.b(j) = std::polar(rng.uniform(0.0, 0.8), rng.uniform(0.0, 6.28));
    p.rho(j) = rng.unimodular();
  }
  return p;
}

Outcome polydisc_group_law() {
  Rng rng(105);
  const PolydiscParams p1 = random_polydisc(rng, 3), p2 = random_polydisc(rng, 3);
  const BallMap phi1 = polydisc_automorphism(p1), phi2 = polydisc_automorphism(p2);
  const BallMap phi12 = polydisc_automorphism(compose_polydisc(p1, p2));
  const BallMap composite(phi12.data(), phi2.psi(), [phi1, phi2](const MatrixTuple& X) {
    return phi2.apply(phi1.apply(X));
  });
  std::vector<MatrixTuple> samples;
  for (int s = 0; s < 20; ++s) {
    const Eigen::Index n = 1 + s % 3;
    std::vector<CMatrix> X;
    for (int j = 0; j < 3; ++j) {
      const CMatrix m = rng.gaussian(n, n);
      X.push_back(m * (rng.uniform(0.1, 0.9) / operator_norm(m)));
    }
    samples.emplace_back(X);
  }
  try {
    const double gap = cartan_uniqueness_check(composite, phi12, samples);
    return {gap < 1e-10, fmt("composition gap %.2e on 20 points", gap)};
  } catch (const PreconditionError& ex) {
    return {false, ex.what()};
  }
}

Outcome atoms_and_genericity() {
  const MatrixTuple swap = freelmi::testing::swap_block_E();
  bool ok = !atom_check(SpectraballPencil(swap));
  auto agrees = [](const MatrixTuple& A) {
    const GenericityReport r = eig_generic_check(HermitianPencil(A));
    const bool eig = atom_check(SpectraballPencil(A)) && kernel_basis(vstack(A)).empty();
    const BallReduction red = ball_minimal_reduction(SpectraballPencil(A.adjoint()));
    const bool star = red.pencil.d() == A.rows() && red.pencil.e() == A.cols();
    return r.eig_generic == eig && r.star_generic == star;
  };
  ok = ok && agrees(swap);
  Rng rng(106);
  int atoms = 0, agreements = 0;
  for (int t = 0; t < 50; ++t) {
    const MatrixTuple A = rng.tuple(2, 2, 2);
    if (atom_check(SpectraballPencil(A))) ++atoms;
    if (agrees(A)) ++agreements;
  }
  return {ok && atoms == 50 && agreements == 50,
          fmt("swap block atom=%.0f, generic atoms %.0f/50, genericity agreement %.0f/50",
              atom_check(SpectraballPencil(swap)) ? 1.0 : 0.0, atoms, agreements)};
}

Outcome minimality() {
  Rng rng(107);
  const MatrixTuple A = rng.tuple(2, 2, 2);
  const HermitianPencil doubled(A.direct_sum(A));
  const Reduction red = minimal_reduction(doubled);
  int agree = 0;
  for (int s = 0; s < 30; ++s) {
    const Eigen::Index n = 1 + s % 3;
    const MatrixTuple X = rng.tuple(2, n, n).scaled(rng.uniform(0.1, 2.0));
    if (membership(doubled, X).region == membership(red.pencil, X).region) ++agree;
  }
  int stripped = 0;
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.index(2)), e = 1 + static_cast<Eigen::Index>(rng.index(2));
    const MatrixTuple E = rng.tuple(2, d, e);
    const bool row = rng.index(2) == 0;
    const MatrixTuple padded = pad_zero(E, row, static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(row ? d : e) + 1)));
    const BallReduction br = ball_minimal_reduction(SpectraballPencil(padded));
    if (br.pencil.d() == d && br.pencil.e() == e && br.agreements == br.samples) ++stripped;
  }
  return {red.pencil.size() == 2 && agree == 30 && stripped == 50,
          fmt("A+A reduced to size %.0f, membership agreement %.0f/30, padding stripped %.0f/50",
              static_cast<double>(red.pencil.size()), agree, stripped)};
}

Outcome boundary_hairs() {
  Rng rng(108);
  int reached = 0;
  for (int t = 0; t < 20; ++t) {
    std::optional<MatrixTuple> sample;
    while (!sample) {
      const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.index(3)), e = 1 + static_cast<Eigen::Index>(rng.index(3));
      sample = ball_minimal_sample(rng, 2 + rng.index(2), d, e);
    }
    const MatrixTuple& E = *sample;
    const Eigen::Index e = E.cols();
    const auto ws = sample_detailed_boundary(SpectraballPencil(E), 2, 50 * static_cast<std::size_t>(e), 200 + t);
    if (hair_span_rank(hairs_of(ws, e)) == static_cast<std::size_t>(e)) ++reached;
  }
  const SpectraballPencil block(MatrixTuple({mat({{1, 0}, {0, 0}}), mat({{0, 0}, {0, 1}})}));
  const auto hairs = hairs_of(sample_detailed_boundary(block, 2, 200, 9), 2);
  const bool absent = !hyperbasis_search(hairs, 2, hairs.size()).has_value();
  return {reached == 20 && absent,
          fmt("hair span reached e for %.0f/20, block hyperbasis absent=%.0f", reached, absent ? 1.0 : 0.0)};
}

Outcome fock_layer() {
  bool identity = true;
  for (std::size_t N = 1; N <= 3; ++N) {
    const CMatrix B = b_matrix(BlockBeta::identity(2, 2), N);
    identity = identity && B == CMatrix::Identity(B.rows(), B.cols());
  }
  Rng rng(109);
  BlockBeta beta = BlockBeta::zeros(2, 2);
  for (auto& row : beta.blocks) {
    for (auto& blk : row) blk = rng.gaussian(2, 2);
  }
  const FockShiftTuple F = fock_shift_tuple(2, 3);
  const MatrixTuple T = beta_dot_shift(beta, F);
  double expansion = 0.0;
  for (std::size_t N = 1; N <= 3; ++N) {
    for (const Word& w : words_of_length(2, N)) {
      CMatrix expect = CMatrix::Zero(T.rows(), T.cols());
      for (const Word& u : words_of_length(2, N)) expect += kron(beta_tilde(beta, u, w), word_power(F.S, u));
      expansion = std::max(expansion, (word_power(T, w) - expect).norm());
    }
  }
  int spanning = 0;
  std::vector<MatrixTuple> cases = {freelmi::testing::row_ball()};
  while (cases.size() < 6) {
    if (auto E = ball_minimal_sample(rng, 2, 2, 2)) cases.push_back(*E);
  }
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const FockWitnessSet set = fock_boundary_witness(SpectraballPencil(cases[i]), 2, 300 + i);
    const auto e = static_cast<std::size_t>(cases[i].cols());
    if (set.witnesses.size() == e && vector_span_rank(set.hairs) == e) ++spanning;
  }
  return {identity && expansion < 1e-12 && spanning == 6,
          fmt("B(identity)=I %.0f, word expansion residual %.2e, spanning witness sets %.0f/6", identity ? 1.0 : 0.0,
              expansion, spanning)};
}

Outcome nullstellensatz_falsifier() {
  const SpectraballPencil E(freelmi::testing::row_ball());
  const auto ws = sample_detailed_boundary(E, 3, 200, 110);
  Rng rng(110);
  double weakest = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 20; ++t) {
    const std::size_t degree = static_cast<std::size_t>(t % 3);
    NcPolynomial V{2, 1, 2, {}};
    for (std::size_t len = 0; len <= degree; ++len) {
      for (const Word& w : words_of_length(2, len)) {
        if (rng.uniform(0.0, 1.0) < 0.5) V.coeffs[w] = 0.5 * rng.gaussian(1, 2);
      }
    }
    const auto top = words_of_length(2, degree);
    const CMatrix lead = rng.gaussian(1, 2);
    V.coeffs[top[rng.index(top.size())]] = lead / lead.norm();
    weakest = std::min(weakest, nullstellensatz_test(E, V, ws));
  }
  const double zero = nullstellensatz_test(E, NcPolynomial{2, 1, 2, {}}, ws);
  return {weakest > 1e-6 && zero == 0.0, fmt("weakest nonzero residual %.2e, zero polynomial %.2e", weakest, zero)};
}

Outcome row_column_separation() {
  const MatrixTuple X({mat({{0, 1}, {0, 0}}), mat({{0, 0}, {0, 1}})});
  const Region row = membership(SpectraballPencil(freelmi::testing::row_ball()), X).region;
  const Region col = membership(SpectraballPencil(freelmi::testing::column_ball()), X).region;
  return {row == Region::Boundary && col == Region::Exterior,
          std::string("row ball ") + to_string(row) + ", column ball " + to_string(col)};
}

Outcome cli_determinism() {
  const auto dir = freelmi::testing::fresh_dir("acceptance");
  const auto cases = freelmi::testing::coverage_cases(dir);
  int identical = 0;
  for (const auto& c : cases) {
    const auto a = freelmi::testing::run_cli(c.args), b = freelmi::testing::run_cli(c.args);
    if (a.code == c.expected_exit && a.code == b.code && a.out == b.out && !a.out.empty()) ++identical;
  }
  return {identical == static_cast<int>(cases.size()),
          fmt("%.0f/%.0f subcommand reports byte-identical", identical, static_cast<double>(cases.size()))};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"example map (x1, x2 + x1^2)", example_reproduction},
      {"inverse pairs from triangular algebras", inverse_pair_suite},
      {"pencil pair transport identities", transport_identities},
      {"matrix ball dual construction", matrix_ball_dual},
      {"polydisc group law", polydisc_group_law},
      {"atoms and genericity", atoms_and_genericity},
      {"minimal reductions", minimality},
      {"boundary hairs and hyperbasis", boundary_hairs},
      {"Fock witnesses", fock_layer},
      {"Nullstellensatz falsifier", nullstellensatz_falsifier},
      {"row and column ball separation", row_column_separation},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].first, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
