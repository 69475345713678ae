#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergerkit/lie_algebra.hpp"

namespace bergerkit {

// Polynomials over Q, coefficients from the constant term upwards; monic
// where noted.
using Poly = RatVector;

Poly minimal_polynomial(const RatMatrix& t);  // monic
Poly squarefree_part(const Poly& p);          // monic
RatMatrix evaluate(const Poly& p, const RatMatrix& t);
// Distinct rational roots, ascending.
std::vector<Rational> rational_roots(const Poly& p);

// Unital associative algebra generated by the matrices, flattened.
SubspaceBasis associative_envelope(const std::vector<RatMatrix>& gens, std::size_t n);
// {T : [T, x] = 0 for every generator x}, flattened.
SubspaceBasis commutant(const std::vector<RatMatrix>& gens, std::size_t n);
// Jacobson radical of an associative matrix algebra: {a : tr(ab) = 0 for all b}.
SubspaceBasis trace_radical(const SubspaceBasis& algebra, std::size_t n);
// True iff the algebra (containing I) is isomorphic to R, C or H.
bool is_division_algebra(const SubspaceBasis& algebra, std::size_t n);
// Irreducibility of R^n under the matrices, exact.
bool is_irreducible(const std::vector<RatMatrix>& gens, std::size_t n);

enum class Verdict { yes, no, inconclusive };
std::string to_string(Verdict v);

struct WeakIrreducibility {
  Verdict verdict = Verdict::inconclusive;
  // Rational proper non-degenerate invariant subspace, when one was found.
  std::optional<SubspaceBasis> witness;
  std::size_t commutant_dim = 0;
  std::size_t selfadjoint_dim = 0;
  std::size_t reduced_dim = 0;  // self-adjoint part modulo the radical
  std::string reason;
};

// Decision via the self-adjoint part S of the commutant: g preserves a proper
// non-degenerate subspace iff S holds an idempotent other than 0 and I.
// Requires a metric.
WeakIrreducibility weak_irreducibility(const MatrixLieAlgebra& g);
Verdict is_weakly_irreducible(const MatrixLieAlgebra& g);

// Orthogonal complex structure commuting with g: J^2 = -I, J skew. Only
// rational J are found.
std::optional<RatMatrix> complex_structure(const MatrixLieAlgebra& g);

// g restricted to an invariant subspace, in the coordinates of W.vectors().
MatrixLieAlgebra restrict_to(const MatrixLieAlgebra& g, const SubspaceBasis& w, std::string name);

struct WuFactor {
  SubspaceBasis subspace;          // ambient coordinates
  std::vector<RatVector> frame;    // ambient vectors behind the algebra's coordinates
  MatrixLieAlgebra algebra;        // restriction to the subspace
  Verdict weakly_irreducible = Verdict::yes;
};

struct WuDecomposition {
  SubspaceBasis flat;  // sum of the factors on which g acts trivially
  std::vector<WuFactor> factors;
  bool exhaustive = true;   // every factor was certified weakly irreducible
  bool direct_sum = true;   // g is the sum of its restrictions (ideals annihilating the other factors)
};

WuDecomposition wu_decompose(const MatrixLieAlgebra& g);

}  // namespace bergerkit
