#pragma once

#include <string>
#include <vector>

#include "bergerkit/lie_algebra.hpp"

namespace bergerkit {

struct CatalogEntry {
  std::string id;           // id pattern, e.g. "so:p,q"
  std::string family;       // human readable, e.g. "so(p,q)"
  std::string ambient;      // e.g. "so(p,q)"
  std::string parameters;   // accepted parameter ranges
  std::string dim_formula;
  bool in_berger_list = false;
  bool in_einstein_list = false;
  bool symmetric_family = false;
  bool experimental = false;
};

const std::vector<CatalogEntry>& catalog_entries();

// Entry whose pattern matches id; throws PreconditionError for unknown ids.
const CatalogEntry& catalog_entry(const std::string& id);

// Builds the algebra named by id, e.g. "so:3", "so:2,1", "u:1,1",
// "gl:2:R@so(2,2)", "sp:2:R", "g2". Throws PreconditionError for unknown
// families or invalid parameters.
MatrixLieAlgebra catalog(const std::string& id);

// {0} inside so(space).
MatrixLieAlgebra zero_algebra(const QuadraticSpace& space, std::string name = "0");

// A |-> diag(A, -A^t) on V + V* with Gram [[0, I], [I, 0]].
MatrixLieAlgebra embed_gl(const MatrixLieAlgebra& g, std::string name);

// Realification of a complex matrix algebra: P + iQ acts on (x, y) as
// [[P, -Q], [Q, P]]; the basis is {M, iM} for M in the given real basis.
std::vector<RatMatrix> complexify(const std::vector<RatMatrix>& real_basis);

// Realification of a complex bilinear form S: Re S on (x, y) is diag(S, -S).
RatMatrix complexify_form(const RatMatrix& s);

// Standard symplectic form [[0, I], [-I, 0]] of size 2m.
RatMatrix symplectic_form(std::size_t m);

}  // namespace bergerkit
