#include "bergerkit/serialize.hpp"

#include <stdexcept>

#include "bergerkit/errors.hpp"

namespace bergerkit {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw PreconditionError(std::string("json: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json rational_to_json(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_den() == 1 ? c.get_num().get_str() : c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw PreconditionError(std::string("json: bad rational: ") + e.what());
  }
  throw PreconditionError("json: rational must be a string or an integer, got " + j.dump());
}

Json matrix_to_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rational_to_json(m.at(i, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RatMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw PreconditionError("json: matrix must be an array of rows");
  if (j.empty()) return RatMatrix(0, 0);
  const std::size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
  RatMatrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw PreconditionError("json: ragged matrix row " + std::to_string(i));
    for (std::size_t c = 0; c < cols; ++c) m.set(i, c, rational_from_json(j[i][c]));
  }
  return m;
}

Json quadratic_space_to_json(const QuadraticSpace& space) {
  auto sig = space.signature();
  return {{"gram", matrix_to_json(space.gram())}, {"signature", {sig.p, sig.q}}};
}

QuadraticSpace quadratic_space_from_json(const Json& j) {
  return QuadraticSpace(matrix_from_json(j.is_array() ? j : field(j, "gram")));
}

Json witt_basis_to_json(const WittBasis& basis) {
  return {{"m", basis.m}, {"e_signs", basis.e_signs}, {"vectors", matrix_to_json(basis.vectors)}};
}

WittBasis witt_basis_from_json(const Json& j) {
  WittBasis b;
  b.m = field(j, "m").get<std::size_t>();
  b.e_signs = field(j, "e_signs").get<std::vector<int>>();
  b.vectors = matrix_from_json(field(j, "vectors"));
  if (b.vectors.rows() != 2 * b.m + b.k() || b.vectors.cols() != b.vectors.rows())
    throw PreconditionError("json: witt basis has the wrong shape");
  return b;
}

Json algebra_to_json(const MatrixLieAlgebra& g) {
  Json j{{"name", g.name()}, {"ambient_dim", g.ambient_dim()}};
  if (g.has_metric()) j["metric"] = matrix_to_json(g.metric().gram());
  Json basis = Json::array();
  for (auto& b : g.basis()) basis.push_back(matrix_to_json(b));
  j["basis"] = std::move(basis);
  return j;
}

MatrixLieAlgebra algebra_from_json(const Json& j) {
  const std::size_t n = field(j, "ambient_dim").get<std::size_t>();
  std::string name = j.value("name", std::string("g"));
  std::vector<RatMatrix> basis;
  for (auto& b : field(j, "basis")) {
    auto m = matrix_from_json(b);
    if (m.rows() != n || m.cols() != n) throw DimensionError("json: basis element is not " + std::to_string(n) + "x" + std::to_string(n));
    basis.push_back(std::move(m));
  }
  std::optional<QuadraticSpace> metric;
  if (j.contains("metric") && !j.at("metric").is_null()) {
    metric = quadratic_space_from_json(j.at("metric"));
    if (metric->dim() != n) throw DimensionError("json: metric size differs from ambient_dim");
  }
  return MatrixLieAlgebra(std::move(name), n, std::move(basis), std::move(metric));
}

Json report_to_json(const CurvatureReport& r) {
  Json j{{"algebra", r.algebra},
         {"dim_R", r.dim_R},
         {"dim_R0", r.dim_R0},
         {"R1_nonempty", r.R1_nonempty},
         {"dim_LR", r.dim_LR},
         {"dim_LR1", r.dim_LR1},
         {"is_berger", r.is_berger},
         {"is_einstein_berger", r.is_einstein_berger},
         {"dim_nabla", r.dim_nabla},
         {"is_symmetric_berger", r.is_symmetric_berger}};
  j["dim_prolongation_1"] = r.dim_prolongation_1 ? Json(*r.dim_prolongation_1) : Json(nullptr);
  j["dim_prolongation_2"] = r.dim_prolongation_2 ? Json(*r.dim_prolongation_2) : Json(nullptr);
  return j;
}

}  // namespace bergerkit
