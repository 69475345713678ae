#pragma once

#include <json.hpp>

#include "bergerkit/curvature.hpp"
#include "bergerkit/lie_algebra.hpp"
#include "bergerkit/quadratic_space.hpp"

namespace bergerkit {

using Json = nlohmann::json;

// Rationals travel as "num/den" strings; plain integers are accepted on input.
// Malformed input raises PreconditionError.
Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);

// Row lists.
Json matrix_to_json(const RatMatrix& m);
RatMatrix matrix_from_json(const Json& j);

Json quadratic_space_to_json(const QuadraticSpace& space);  // {"gram": ...}
QuadraticSpace quadratic_space_from_json(const Json& j);

Json witt_basis_to_json(const WittBasis& basis);  // {"m", "e_signs", "vectors"}
WittBasis witt_basis_from_json(const Json& j);

// {name, ambient_dim, metric?, basis}; metric is a Gram matrix.
Json algebra_to_json(const MatrixLieAlgebra& g);
MatrixLieAlgebra algebra_from_json(const Json& j);

Json report_to_json(const CurvatureReport& r);

}  // namespace bergerkit
