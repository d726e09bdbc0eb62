#include "io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace freelmi::cli {

namespace {

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw UsageError("complex entries must be [re, im] number pairs");
  }
  const double re = j[0].get<double>();
  const double im = j[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) throw UsageError("non-finite entry");
  return {re, im};
}

std::size_t count_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) throw UsageError(std::string("missing count field ") + key);
  return j[key].get<std::size_t>();
}

CMatrix matrix_from_json(const json& j, Eigen::Index d, Eigen::Index e) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != d) throw UsageError("matrix row count does not match d");
  CMatrix m(d, e);
  for (Eigen::Index i = 0; i < d; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != e) {
      throw UsageError("matrix column count does not match e");
    }
    for (Eigen::Index k = 0; k < e; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw UsageError("vector must be a nonempty array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

json tuple_to_json(const MatrixTuple& t, const std::optional<std::string>& kind) {
  json j;
  j["g"] = t.g();
  j["d"] = t.rows();
  j["e"] = t.cols();
  if (kind) j["kind"] = *kind;
  json mats = json::array();
  for (const auto& m : t) mats.push_back(matrix_to_json(m));
  j["matrices"] = std::move(mats);
  return j;
}

TupleDocument tuple_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("tuple document must be an object");
  const std::size_t g = count_field(j, "g");
  const auto d = static_cast<Eigen::Index>(count_field(j, "d"));
  const auto e = static_cast<Eigen::Index>(count_field(j, "e"));
  if (g == 0 || d == 0 || e == 0) throw UsageError("tuple document needs g, d, e >= 1");
  if (!j.contains("matrices") || !j["matrices"].is_array() || j["matrices"].size() != g) {
    throw UsageError("matrices array length does not match g");
  }
  std::vector<CMatrix> mats;
  for (const auto& m : j["matrices"]) mats.push_back(matrix_from_json(m, d, e));
  TupleDocument doc{MatrixTuple(std::move(mats)), std::nullopt};
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw UsageError("kind must be a string");
    const auto k = j["kind"].get<std::string>();
    if (k != "pencil" && k != "point" && k != "xi" && k != "unitary") throw UsageError("unknown kind " + k);
    doc.kind = k;
  }
  return doc;
}

json realization_to_json(const Realization& r) {
  return {{"S", tuple_to_json(r.S)}, {"b", vector_to_json(r.b)}, {"c", vector_to_json(r.c)}};
}

Realization realization_from_json(const json& j) {
  if (!j.is_object() || !j.contains("S") || !j.contains("b") || !j.contains("c")) {
    throw UsageError("realization document needs S, b, c");
  }
  Realization r{tuple_from_json(j["S"]).tuple, vector_from_json(j["b"]), vector_from_json(j["c"])};
  try {
    r.validate();
  } catch (const ShapeError& ex) {
    throw UsageError(ex.what());
  }
  return r;
}

json polynomial_to_json(const NcPolynomial& p) {
  json terms = json::array();
  for (const auto& [w, c] : p.coeffs) terms.push_back({{"word", w}, {"coeff", matrix_to_json(c)}});
  return {{"g", p.g}, {"rows", p.rows}, {"cols", p.cols}, {"terms", terms}};
}

NcPolynomial polynomial_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("polynomial document must be an object");
  NcPolynomial p;
  p.g = count_field(j, "g");
  p.rows = static_cast<Eigen::Index>(count_field(j, "rows"));
  p.cols = static_cast<Eigen::Index>(count_field(j, "cols"));
  if (!j.contains("terms") || !j["terms"].is_array()) throw UsageError("polynomial needs a terms array");
  for (const auto& t : j["terms"]) {
    if (!t.contains("word") || !t["word"].is_array() || !t.contains("coeff")) {
      throw UsageError("polynomial term needs word and coeff");
    }
    Word w;
    for (const auto& letter : t["word"]) {
      if (!letter.is_number_unsigned() || letter.get<std::size_t>() >= p.g) throw UsageError("bad word letter");
      w.push_back(letter.get<std::size_t>());
    }
    CMatrix c = matrix_from_json(t["coeff"], p.rows, p.cols);
    auto [it, fresh] = p.coeffs.emplace(w, c);
    if (!fresh) it->second += c;
  }
  return p;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw UsageError(path + ": " + ex.what());
  }
}

TupleDocument load_tuple(const std::string& path) {
  try {
    return tuple_from_json(read_json_file(path));
  } catch (const ShapeError& ex) {
    throw UsageError(path + ": " + ex.what());
  } catch (const json::exception& ex) {
    throw UsageError(path + ": " + ex.what());
  }
}

CMatrix load_matrix(const std::string& path) {
  const TupleDocument doc = load_tuple(path);
  if (doc.tuple.g() != 1) throw UsageError(path + ": expected a single matrix (g = 1)");
  return doc.tuple[0];
}

CVector load_point_vector(const std::string& path) {
  const TupleDocument doc = load_tuple(path);
  if (doc.tuple.rows() != 1 || doc.tuple.cols() != 1) throw UsageError(path + ": expected a level-1 point");
  return doc.tuple.as_vector();
}

std::string canonical(const json& j) { return j.dump(2) + "\n"; }

}  // namespace freelmi::cli
