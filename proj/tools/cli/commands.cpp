#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "freelmi/ballmaps.hpp"
#include "io.hpp"

namespace freelmi::cli {

namespace {

struct Options {
  std::uint64_t seed = 0;
  double psd_tol = 1e-10;
  double rank_tol = 1e-10;
  double residual_tol = 1e-8;
  std::size_t level = 2;
  std::size_t count = 50;
  std::string output;

  std::string pencil, point, tuple, xi, unitary, source, target, b, m, w, v, rho, perm, poly, realization;
  std::string set = "ball";
  bool inverse = false;
  bool fock = false;
  Eigen::Index d = 1, e = 1;
  std::size_t degree = 2;

  ToleranceProfile tol() const {
    ToleranceProfile t{psd_tol, rank_tol, residual_tol};
    t.validate();
    return t;
  }
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void verdict(const std::string& key, json value) { verdicts_[key] = std::move(value); }
  void output(const std::string& key, json value) { outputs_[key] = std::move(value); }
  void residual(const std::string& key, double value) {
    if (!std::isfinite(value)) throw NumericalFailure("residual " + key + " is not finite");
    residuals_[key] = value;
  }
  // Asserted verdicts decide the exit status.
  void assert_verdict(const std::string& key, bool value) {
    verdict(key, value);
    ok_ = ok_ && value;
  }
  bool ok() const { return ok_; }

  json finish(const Options& o) const {
    return {{"command", command_},
            {"verdicts", verdicts_},
            {"residuals", residuals_},
            {"outputs", outputs_},
            {"seed", o.seed},
            {"tolerance", {{"psd_tol", o.psd_tol}, {"rank_tol", o.rank_tol}, {"residual_tol", o.residual_tol}}}};
  }

 private:
  std::string command_;
  json verdicts_ = json::object();
  json residuals_ = json::object();
  json outputs_ = json::object();
  bool ok_ = true;
};

const std::string& need(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required flag ") + flag);
  return value;
}

MatrixTuple load(const std::string& value, const char* flag) { return load_tuple(need(value, flag)).tuple; }

// Scaled so that neither ||Lambda(X)|| nor any ||X_j|| exceeds target.
MatrixTuple random_point(Rng& rng, std::size_t g, Eigen::Index n, const MatrixTuple& scale_by, double target) {
  MatrixTuple X = rng.tuple(g, n, n);
  double top = operator_norm(lambda_eval(scale_by, X));
  for (const auto& x : X) top = std::max(top, operator_norm(x));
  return X.scaled(target / top);
}

Eigen::Index sample_level(std::size_t i, std::size_t max_level) {
  return 1 + static_cast<Eigen::Index>(i % std::max<std::size_t>(max_level, 1));
}

json region_json(Region r) { return to_string(r); }

// ---------------------------------------------------------------------------

void cmd_membership(const Options& o, Report& rep) {
  const MatrixTuple P = load(o.pencil, "--pencil");
  const MatrixTuple X = load(o.point, "--point");
  Membership mm;
  if (o.set == "ball") {
    mm = membership(SpectraballPencil(P), X, o.tol());
  } else if (o.set == "spectrahedron") {
    mm = membership(HermitianPencil(P), X, o.tol());
  } else {
    throw UsageError("--set must be ball or spectrahedron");
  }
  rep.verdict("region", region_json(mm.region));
  rep.residual("certificate", mm.certificate);
}

void cmd_mult_table(const Options& o, Report& rep) {
  const auto table = solve_multiplication_table(load(o.tuple, "--tuple"), o.tol());
  rep.assert_verdict("closed", table.has_value());
  if (!table) return;
  rep.residual("fit", table->residual);
  rep.verdict("convexotonic", is_convexotonic(table->Xi, o.tol()));
  rep.output("xi", tuple_to_json(table->Xi, "xi"));
}

void cmd_convexotonic_eval(const Options& o, Report& rep) {
  const ConvexotonicMap p = make_convexotonic_map(load(o.xi, "--xi"), o.inverse ? -1 : +1, o.tol());
  rep.output("value", tuple_to_json(co_eval(p, load(o.point, "--point"), o.tol()), "point"));
  rep.verdict("map", o.inverse ? "q" : "p");
}

void cmd_verify_pair(const Options& o, Report& rep) {
  const MatrixTuple Xi = load(o.xi, "--xi");
  const ConvexotonicMap p = make_convexotonic_map(Xi, +1, o.tol());
  Rng rng(o.seed);
  std::vector<MatrixTuple> samples;
  for (std::size_t i = 0; i < o.count; ++i) samples.push_back(random_point(rng, Xi.g(), sample_level(i, o.level), Xi, 0.5));
  const InverseCheck c = verify_inverse_pair(p.Xi(), samples, o.tol());
  rep.residual("inverse", c.max_residual);
  rep.output("evaluated", c.evaluated);
  rep.output("skipped", c.skipped);
  rep.assert_verdict("inverse_pair", c.max_residual <= o.residual_tol);
}

void cmd_pencil_pair(const Options& o, Report& rep) {
  const CMatrix U = load_matrix(need(o.unitary, "--unitary"));
  std::optional<PencilPair> pair;
  if (!o.source.empty()) {
    pair = pencil_pair_from_unitary(SpectraballPencil(load(o.source, "--source")), U, U.rows(), o.tol());
  } else {
    pair = make_pencil_pair(load(o.tuple, "--tuple or --source"), U, o.tol());
  }
  rep.assert_verdict("pair_found", pair.has_value());
  if (!pair) return;
  rep.output("xi", tuple_to_json(pair->Xi.Xi, "xi"));
  rep.output("A", tuple_to_json(pair->A.A(), "pencil"));
  rep.output("B", tuple_to_json(pair->B.A(), "pencil"));
  rep.residual("fit", pair->Xi.residual);
  Rng rng(o.seed);
  double worst_a = 0.0, worst_b = 0.0;
  std::size_t evaluated = 0;
  for (std::size_t i = 0; i < o.count; ++i) {
    const MatrixTuple X = random_point(rng, pair->A.g(), sample_level(i, o.level), pair->R, 0.5);
    try {
      const auto [ra, rb] = nstatz_residuals(*pair, X, o.tol());
      worst_a = std::max(worst_a, ra);
      worst_b = std::max(worst_b, rb);
      ++evaluated;
    } catch (const DomainViolation&) {
    }
  }
  rep.residual("nstatz_a", worst_a);
  rep.residual("nstatz_b", worst_b);
  rep.output("evaluated", evaluated);
  rep.assert_verdict("transport_identities", std::max(worst_a, worst_b) <= o.residual_tol);
}

BallMapData load_ball_data(const Options& o, Report& rep) {
  const SpectraballPencil C(load(o.target, "--target"));
  const CVector b = load_point_vector(need(o.b, "--b"));
  const CMatrix M = load_matrix(need(o.m, "--m"));
  const CMatrix W = o.w.empty() ? CMatrix::Identity(C.d(), C.d()) : load_matrix(o.w);
  const CMatrix V = o.v.empty() ? CMatrix::Identity(C.e(), C.e()) : load_matrix(o.v);
  const SpectraballPencil E = o.source.empty() ? solve_E_from_C(C, b, M, W, V, o.tol())
                                               : SpectraballPencil(load_tuple(o.source).tuple);
  MultiplicationTable Xi;
  if (o.xi.empty()) {
    const StructureFit fit = solve_b2b_xi(E.E(), C.E(), b, W, V);
    rep.residual("xi_fit", fit.residual);
    Xi = {fit.Psi, fit.residual};
  } else {
    Xi = {load_tuple(o.xi).tuple, 0.0};
  }
  return {E, C, b, M, W, V, Xi};
}

void cmd_ballmap_verify(const Options& o, Report& rep) {
  const BallMapData data = load_ball_data(o, rep);
  const B2BResiduals r = verify_b2b(data, o.tol());
  rep.residual("condition_a", r.a);
  rep.residual("condition_b", r.b);
  rep.assert_verdict("b2b_conditions", std::max(r.a, r.b) <= o.residual_tol);
}

void cmd_ballmap_build(const Options& o, Report& rep) {
  const BallMapData data = load_ball_data(o, rep);
  const B2BResiduals r = verify_b2b(data, o.tol());
  rep.residual("condition_a", r.a);
  rep.residual("condition_b", r.b);
  const bool holds = std::max(r.a, r.b) <= o.residual_tol;
  rep.assert_verdict("b2b_conditions", holds);
  rep.output("source", tuple_to_json(data.E.E(), "pencil"));
  rep.output("xi", tuple_to_json(data.Xi.Xi, "xi"));
  if (!holds) return;
  const BallMap phi = construct_ball_map(data, o.tol());
  const std::size_t g = data.E.g();
  rep.residual("value_at_zero", (phi.apply(MatrixTuple::zeros(g, 1, 1), o.tol()).as_vector() - data.b).norm());
  rep.residual("derivative_at_zero", (derivative_at_zero(phi) - data.M).cwiseAbs().maxCoeff());
}

void cmd_ballmap_apply(const Options& o, Report& rep) {
  const BallMapData data = load_ball_data(o, rep);
  const B2BResiduals r = verify_b2b(data, o.tol());
  rep.residual("condition_a", r.a);
  rep.residual("condition_b", r.b);
  if (std::max(r.a, r.b) > o.residual_tol) {
    rep.assert_verdict("b2b_conditions", false);
    return;
  }
  const BallMap phi = construct_ball_map(data, o.tol());
  const MatrixTuple X = load(o.point, "--point");
  const MatrixTuple Y = o.inverse ? phi.apply_inverse(X, o.tol()) : phi.apply(X, o.tol());
  rep.output("value", tuple_to_json(Y, "point"));
  rep.verdict("image_region", region_json(membership(o.inverse ? data.E : data.C, Y, o.tol()).region));
}

std::vector<std::size_t> parse_perm(const std::string& text, std::size_t g) {
  std::vector<std::size_t> pi;
  if (text.empty()) {
    for (std::size_t j = 0; j < g; ++j) pi.push_back(j);
    return pi;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      pi.push_back(static_cast<std::size_t>(std::stoul(item)));
    } catch (const std::exception&) {
      throw UsageError("--perm must be a comma separated list of indices");
    }
  }
  return pi;
}

void report_map(const BallMap& phi, const Options& o, Report& rep, const std::function<MatrixTuple(Rng&, Eigen::Index)>& sampler) {
  rep.output("M", tuple_to_json(MatrixTuple({phi.data().M})));
  rep.output("xi", tuple_to_json(phi.data().Xi.Xi, "xi"));
  double worst = 0.0;
  if (!o.point.empty()) {
    const MatrixTuple X = load(o.point, "--point");
    const MatrixTuple Y = phi.apply(X, o.tol());
    worst = Y.distance(phi.apply_convexotonic(X, o.tol()));
    rep.output("value", tuple_to_json(Y, "point"));
  } else {
    Rng rng(o.seed);
    for (std::size_t i = 0; i < o.count; ++i) {
      const MatrixTuple X = sampler(rng, sample_level(i, o.level));
      worst = std::max(worst, phi.apply(X, o.tol()).distance(phi.apply_convexotonic(X, o.tol())));
    }
  }
  rep.residual("closed_vs_convexotonic", worst);
  rep.residual("derivative_at_zero", (derivative_at_zero(phi) - phi.data().M).cwiseAbs().maxCoeff());
  rep.assert_verdict("paths_agree", worst <= o.residual_tol);
}

void cmd_polydisc(const Options& o, Report& rep) {
  const CVector b = load_point_vector(need(o.b, "--b"));
  const std::size_t g = static_cast<std::size_t>(b.size());
  const CVector rho = o.rho.empty() ? CVector::Ones(b.size()) : load_point_vector(o.rho);
  const BallMap phi = polydisc_automorphism({b, parse_perm(o.perm, g), rho}, o.tol());
  report_map(phi, o, rep, [g](Rng& rng, Eigen::Index n) {
    std::vector<CMatrix> X;
    for (std::size_t j = 0; j < g; ++j) {
      const CMatrix m = rng.gaussian(n, n);
      X.push_back(m * (rng.uniform(0.05, 0.95) / operator_norm(m)));
    }
    return MatrixTuple(X);
  });
}

void cmd_matrixball(const Options& o, Report& rep) {
  const CMatrix b = load_matrix(need(o.b, "--b"));
  if (b.rows() != o.d || b.cols() != o.e) throw UsageError("--b must be a d x e matrix");
  const CMatrix W = o.w.empty() ? CMatrix::Identity(o.d, o.d) : load_matrix(o.w);
  const CMatrix V = o.v.empty() ? CMatrix::Identity(o.e, o.e) : load_matrix(o.v);
  const BallMap phi = matrixball_automorphism(o.d, o.e, b, W, V, o.tol());
  const MatrixTuple units = matrix_units(o.d, o.e);
  report_map(phi, o, rep, [&units](Rng& rng, Eigen::Index n) {
    const double radius = rng.uniform(0.05, 0.95);
    return random_point(rng, units.g(), n, units, radius);
  });
}

json witness_json(const BoundaryWitness& w) {
  return {{"X", tuple_to_json(w.X, "point")}, {"v", vector_to_json(w.v)}, {"kernel_dim", w.kernel_dim},
          {"kernel_gap", w.kernel_gap}};
}

void cmd_boundary_sample(const Options& o, Report& rep) {
  const SpectraballPencil E(load(o.pencil, "--pencil"));
  const auto ws = sample_detailed_boundary(E, static_cast<Eigen::Index>(o.level), o.count, o.seed, o.tol());
  json arr = json::array();
  double worst = 0.0;
  bool all_boundary = true;
  std::size_t simple = 0;
  for (const auto& w : ws) {
    arr.push_back(witness_json(w));
    worst = std::max(worst, (q_eval(E, w.X) * w.v).norm());
    all_boundary = all_boundary && membership(E, w.X, o.tol()).region == Region::Boundary;
    if (w.kernel_dim == 1) ++simple;
  }
  rep.output("witnesses", arr);
  rep.output("simple_kernel_count", simple);
  rep.residual("kernel", worst);
  rep.assert_verdict("all_boundary", all_boundary);
}

std::vector<HairSample> sampled_hairs(const SpectraballPencil& E, const Options& o) {
  return hairs_of(sample_detailed_boundary(E, static_cast<Eigen::Index>(o.level), o.count, o.seed, o.tol()), E.e(),
                  o.tol());
}

void cmd_hair_span(const Options& o, Report& rep) {
  const SpectraballPencil E(load(o.pencil, "--pencil"));
  const auto hairs = sampled_hairs(E, o);
  const std::size_t rank = hair_span_rank(hairs, o.tol());
  rep.output("hairs", hairs.size());
  rep.output("rank", rank);
  rep.verdict("spans", rank == static_cast<std::size_t>(E.e()));
}

void cmd_hyperbasis(const Options& o, Report& rep) {
  const SpectraballPencil E(load(o.pencil, "--pencil"));
  const auto hairs = sampled_hairs(E, o);
  const auto hb = hyperbasis_search(hairs, E.e(), hairs.size(), o.tol());
  rep.output("hairs", hairs.size());
  rep.assert_verdict("found", hb.has_value());
  if (!hb) return;
  json arr = json::array();
  for (const auto& u : *hb) arr.push_back(vector_to_json(u));
  rep.output("hyperbasis", arr);
}

void cmd_atom_check(const Options& o, Report& rep) {
  const MatrixTuple E = load(o.pencil, "--pencil");
  rep.verdict("atom", atom_check(SpectraballPencil(E), o.tol()));
  if (!E.square()) return;
  const GenericityReport g = eig_generic_check(HermitianPencil(E), o.tol(), o.seed);
  rep.verdict("eig_generic", g.eig_generic);
  rep.verdict("star_generic", g.star_generic);
  rep.verdict("weakly_eig_generic", g.weakly_eig_generic);
  rep.verdict("weakly_star_generic", g.weakly_star_generic);
}

void cmd_minimize(const Options& o, Report& rep) {
  const HermitianPencil A(load(o.pencil, "--pencil"));
  const Reduction red = minimal_reduction(A, o.tol(), o.seed);
  const Decomposition& dec = red.decomposition;
  rep.output("pencil", tuple_to_json(red.pencil.A(), "pencil"));
  rep.output("size", red.pencil.size());
  rep.output("summands", dec.summands.size());
  rep.output("duplicates_removed", dec.duplicates_removed);
  rep.output("pruned_redundant", dec.pruned_redundant);
  rep.verdict("pruning_heuristic", dec.pruning_heuristic);
  rep.verdict("split_verified", dec.split_verified);
  Rng rng(o.seed);
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i < o.count; ++i) {
    const MatrixTuple X = rng.tuple(A.g(), sample_level(i, o.level), sample_level(i, o.level)).scaled(rng.uniform(0.05, 1.0));
    if (membership(A, X, o.tol()).region != membership(red.pencil, X, o.tol()).region) ++disagreements;
  }
  rep.output("membership_samples", o.count);
  rep.assert_verdict("membership_agrees", disagreements == 0);
}

void cmd_ball_minimize(const Options& o, Report& rep) {
  const BallReduction red = ball_minimal_reduction(SpectraballPencil(load(o.pencil, "--pencil")), o.tol(), o.seed);
  rep.output("pencil", tuple_to_json(red.pencil.E(), "pencil"));
  rep.output("d", red.pencil.d());
  rep.output("e", red.pencil.e());
  rep.output("membership_samples", red.samples);
  rep.residual("structure", red.structure_residual);
  rep.assert_verdict("membership_agrees", red.agreements == red.samples);
}

void cmd_fock_witness(const Options& o, Report& rep) {
  const SpectraballPencil E(load(o.pencil, "--pencil"));
  const FockWitnessSet set = fock_boundary_witness(E, o.degree, o.seed, o.tol());
  double worst = 0.0;
  json hairs = json::array();
  for (const auto& w : set.witnesses) worst = std::max(worst, (q_eval(E, w.X) * w.v).norm());
  for (const auto& h : set.hairs) hairs.push_back(vector_to_json(h));
  const std::size_t rank = vector_span_rank(set.hairs, o.tol());
  rep.output("witness_count", set.witnesses.size());
  rep.output("level", set.level);
  rep.output("hairs", hairs);
  rep.output("hair_rank", rank);
  rep.residual("perturbation", set.perturbation);
  rep.residual("min_b_singular", set.min_b_singular);
  rep.residual("kernel", worst);
  rep.assert_verdict("hairs_span", rank == static_cast<std::size_t>(E.e()));
}

void cmd_nullsatz(const Options& o, Report& rep) {
  const SpectraballPencil E(load(o.pencil, "--pencil"));
  const NcPolynomial V = polynomial_from_json(read_json_file(need(o.poly, "--poly")));
  std::vector<BoundaryWitness> ws = sample_detailed_boundary(E, static_cast<Eigen::Index>(o.level), o.count, o.seed, o.tol());
  if (o.fock) {
    const FockWitnessSet set = fock_boundary_witness(E, o.degree, o.seed, o.tol());
    ws.insert(ws.end(), set.witnesses.begin(), set.witnesses.end());
  }
  const double r = nullstellensatz_test(E, V, ws);
  rep.output("witnesses", ws.size());
  rep.residual("max_residual", r);
  rep.verdict("detected_nonzero", r > 1e-6);
  rep.verdict("polynomial_zero", V.is_zero());
}

void cmd_realization_eval(const Options& o, Report& rep) {
  const Realization r = realization_from_json(read_json_file(need(o.realization, "--realization")));
  const MatrixTuple X = load(o.point, "--point");
  const bool inside = in_domain(r, X, o.tol());
  rep.verdict("in_domain", inside);
  if (!inside) throw DomainViolation("realization-eval: point outside the domain");
  rep.output("value", tuple_to_json(MatrixTuple({real_eval(r, X, o.tol())})));
}

using Handler = void (*)(const Options&, Report&);

struct Command {
  const char* name;
  const char* help;
  Handler handler;
  std::vector<const char*> flags;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"membership", "Classify a point against a spectraball or free spectrahedron", cmd_membership,
       {"pencil", "point", "set"}},
      {"mult-table", "Solve the multiplication table of a coefficient tuple", cmd_mult_table, {"tuple"}},
      {"convexotonic-eval", "Evaluate p (or q with --inverse) at a point", cmd_convexotonic_eval,
       {"xi", "point", "inverse"}},
      {"verify-pair", "Check q(p(X)) = X on seeded samples", cmd_verify_pair, {"xi"}},
      {"pencil-pair", "Build a pencil pair from a unitary and check transport identities", cmd_pencil_pair,
       {"tuple", "source", "unitary"}},
      {"ballmap-verify", "Evaluate the two ball-to-ball conditions", cmd_ballmap_verify,
       {"source", "target", "b", "m", "w", "v", "xi"}},
      {"ballmap-build", "Assemble a ball map, solving for E and Xi when absent", cmd_ballmap_build,
       {"source", "target", "b", "m", "w", "v", "xi"}},
      {"ballmap-apply", "Apply a ball map (or its inverse) to a point", cmd_ballmap_apply,
       {"source", "target", "b", "m", "w", "v", "xi", "point", "inverse"}},
      {"automorphism-polydisc", "Free polydisc automorphism from (b, pi, rho)", cmd_polydisc,
       {"b", "perm", "rho", "point"}},
      {"automorphism-matrixball", "Free matrix ball automorphism from (b, W, V)", cmd_matrixball,
       {"d", "e", "b", "w", "v", "point"}},
      {"boundary-sample", "Sample detailed boundary points with kernel vectors", cmd_boundary_sample, {"pencil"}},
      {"hair-span", "Rank of sampled hairs", cmd_hair_span, {"pencil"}},
      {"hyperbasis", "Search sampled hairs for a hyperbasis", cmd_hyperbasis, {"pencil"}},
      {"atom-check", "Atom test and genericity verdicts", cmd_atom_check, {"pencil"}},
      {"minimize", "Minimal reduction of a free spectrahedron pencil", cmd_minimize, {"pencil"}},
      {"ball-minimize", "Ball-minimal reduction of a spectraball pencil", cmd_ball_minimize, {"pencil"}},
      {"fock-witness", "Boundary witnesses from truncated Fock shifts", cmd_fock_witness, {"pencil", "degree"}},
      {"nullsatz-test", "Residual of a polynomial over boundary witnesses", cmd_nullsatz,
       {"pencil", "poly", "fock", "degree"}},
      {"realization-eval", "Evaluate a realization at a point", cmd_realization_eval, {"realization", "point"}},
  };
  return table;
}

void add_flag(CLI::App& sub, Options& o, const std::string& flag) {
  static const std::map<std::string, std::string> file_help = {
      {"pencil", "pencil tuple document"}, {"point", "point tuple document"}, {"tuple", "coefficient tuple document"},
      {"xi", "convexotonic tuple document"}, {"unitary", "unitary matrix document"},
      {"source", "source spectraball E"}, {"target", "target spectraball C"}, {"b", "centre point document"},
      {"m", "g x g derivative matrix"}, {"w", "left unitary W"}, {"v", "right unitary V"},
      {"rho", "unimodular factors as a point document"}, {"poly", "polynomial document"},
      {"realization", "realization document"}};
  std::map<std::string, std::string*> files = {
      {"pencil", &o.pencil}, {"point", &o.point}, {"tuple", &o.tuple}, {"xi", &o.xi}, {"unitary", &o.unitary},
      {"source", &o.source}, {"target", &o.target}, {"b", &o.b}, {"m", &o.m}, {"w", &o.w}, {"v", &o.v},
      {"rho", &o.rho}, {"poly", &o.poly}, {"realization", &o.realization}};
  if (auto it = files.find(flag); it != files.end()) {
    sub.add_option("--" + flag, *it->second, file_help.at(flag));
  } else if (flag == "set") {
    sub.add_option("--set", o.set, "ball or spectrahedron")->check(CLI::IsMember({"ball", "spectrahedron"}));
  } else if (flag == "inverse") {
    sub.add_flag("--inverse", o.inverse, "use the inverse map");
  } else if (flag == "fock") {
    sub.add_flag("--fock", o.fock, "add Fock-space witnesses");
  } else if (flag == "perm") {
    sub.add_option("--perm", o.perm, "comma separated permutation, output j reads input pi(j)");
  } else if (flag == "d") {
    sub.add_option("--d", o.d, "row size")->check(CLI::PositiveNumber);
  } else if (flag == "e") {
    sub.add_option("--e", o.e, "column size")->check(CLI::PositiveNumber);
  } else if (flag == "degree") {
    sub.add_option("--degree", o.degree, "truncation degree")->check(CLI::PositiveNumber);
  }
}

void add_common(CLI::App& sub, Options& o) {
  sub.add_option("--seed", o.seed, "random seed");
  sub.add_option("--psd-tol", o.psd_tol, "eigenvalue threshold");
  sub.add_option("--rank-tol", o.rank_tol, "singular value threshold");
  sub.add_option("--residual-tol", o.residual_tol, "fit threshold");
  sub.add_option("--level", o.level, "matrix level for sampling")->check(CLI::PositiveNumber);
  sub.add_option("--count", o.count, "number of samples");
  sub.add_option("--output", o.output, "write the report here instead of stdout");
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& c : commands()) out.emplace_back(c.name);
    return out;
  }();
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Free LMI, spectraball and convexotonic map toolkit", "freelmi"};
  app.require_subcommand(1);
  std::map<const CLI::App*, const Command*> lookup;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    for (const char* f : c.flags) add_flag(*sub, o, f);
    add_common(*sub, o);
    lookup[sub] = &c;
  }

  std::vector<std::string> storage = {"freelmi"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const Command& cmd = *lookup.at(chosen);
  Report rep(cmd.name);
  try {
    o.tol();
    cmd.handler(o, rep);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kUsage;
  } catch (const ShapeError& ex) {
    err << "shape error: " << ex.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& ex) {
    err << "precondition failed: " << ex.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& ex) {
    err << "malformed document: " << ex.what() << "\n";
    return kUsage;
  } catch (const DomainViolation& ex) {
    err << "domain violation: " << ex.what() << "\n";
    return kNumerical;
  } catch (const NumericalFailure& ex) {
    err << "numerical failure: " << ex.what() << "\n";
    return kNumerical;
  }

  const std::string text = canonical(rep.finish(o));
  if (o.output.empty()) {
    out << text;
  } else {
    std::ofstream file(o.output, std::ios::binary);
    if (!file) {
      err << "usage error: cannot write " << o.output << "\n";
      return kUsage;
    }
    file << text;
  }
  return rep.ok() ? kOk : kVerdictFailure;
}

}  // namespace freelmi::cli
