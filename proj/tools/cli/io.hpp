#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "freelmi/boundary.hpp"
#include "freelmi/rational.hpp"

namespace freelmi::cli {

using json = nlohmann::json;

// Malformed documents and bad flags; mapped to exit status 2.
struct UsageError : Error {
  using Error::Error;
};

struct TupleDocument {
  MatrixTuple tuple;
  std::optional<std::string> kind;
};

json tuple_to_json(const MatrixTuple& t, const std::optional<std::string>& kind = std::nullopt);
TupleDocument tuple_from_json(const json& j);

json matrix_to_json(const CMatrix& m);
json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);

// Realization: {"S": tuple, "b": [[re, im], ...], "c": [[re, im], ...]}.
json realization_to_json(const Realization& r);
Realization realization_from_json(const json& j);

// Polynomial: {"g", "rows", "cols", "terms": [{"word": [...], "coeff": [[[re, im], ...], ...]}]}.
json polynomial_to_json(const NcPolynomial& p);
NcPolynomial polynomial_from_json(const json& j);

json read_json_file(const std::string& path);
TupleDocument load_tuple(const std::string& path);
// The single matrix of a g = 1 document.
CMatrix load_matrix(const std::string& path);
// Level-1 point document as a vector of g scalars.
CVector load_point_vector(const std::string& path);

// Canonical text form: two-space indent, sorted keys, trailing newline.
std::string canonical(const json& j);

}  // namespace freelmi::cli
