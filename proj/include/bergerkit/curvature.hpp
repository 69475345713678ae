#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergerkit/lie_algebra.hpp"

namespace bergerkit {

// Coordinates of a tensor R in L^2 V* (x) g: for each pair a < b (in
// lexicographic order) the coefficients of R(e_a, e_b) against g.basis().
class CurvatureLayout {
 public:
  explicit CurvatureLayout(const MatrixLieAlgebra& g);

  std::size_t n() const { return n_; }
  std::size_t algebra_dim() const { return d_; }
  std::size_t pairs() const { return n_ * (n_ - 1) / 2; }
  std::size_t size() const { return pairs() * d_; }
  std::size_t pair_index(std::size_t a, std::size_t b) const;  // requires a < b
  std::size_t index(std::size_t a, std::size_t b, std::size_t k) const { return pair_index(a, b) * d_ + k; }

 private:
  std::size_t n_;
  std::size_t d_;
};

struct CurvatureSpace {
  MatrixLieAlgebra algebra;
  SubspaceBasis tensors;  // canonical basis of R(g) in layout coordinates

  std::size_t dim() const { return tensors.dim(); }
  CurvatureLayout layout() const { return CurvatureLayout(algebra); }
};

// R1 = particular + span(directions); directions span R0 = {Ric = 0}.
struct AffineCurvatureSpace {
  MatrixLieAlgebra algebra;
  std::optional<RatVector> particular;
  SubspaceBasis directions;

  bool empty() const { return !particular.has_value(); }
};

// R(X, Y) as an N x N matrix, for tensor coordinates t.
RatMatrix curvature_value(const MatrixLieAlgebra& g, const RatVector& t, std::size_t a, std::size_t b);

// Coefficients of R(e_a, e_b) against g.basis(); antisymmetric in (a, b).
RatVector curvature_coefficients(const CurvatureLayout& layout, const RatVector& t, std::size_t a, std::size_t b);

// Requires a metric (PreconditionError otherwise).
CurvatureSpace curvature_space(const MatrixLieAlgebra& g);

// Ric(X, Y) = tr(Z -> R(Z, X) Y); R_const gives (n - 1) g.
RatMatrix ricci(const MatrixLieAlgebra& g, const RatVector& t);

// The tensor R(X, Y) Z = g(Y, Z) X - g(X, Z) Y, projected into layout
// coordinates; requires every R(e_a, e_b) to lie in g.
RatVector constant_curvature_tensor(const MatrixLieAlgebra& g);

// First Bianchi identity and g-valuedness of a tensor given by layout coordinates.
bool satisfies_bianchi(const MatrixLieAlgebra& g, const RatVector& t);

AffineCurvatureSpace einstein_space(const CurvatureSpace& space);
AffineCurvatureSpace einstein_space(const MatrixLieAlgebra& g);

// Flattened span (in Q^{N^2}) of all values R(e_a, e_b).
SubspaceBasis l_span(const CurvatureSpace& space);
SubspaceBasis l_span(const AffineCurvatureSpace& space);

bool is_berger(const MatrixLieAlgebra& g);
bool is_einstein_berger(const MatrixLieAlgebra& g);

// R^nabla(g): S in V* (x) R(g) with cyclic S_X(Y,Z) + S_Y(Z,X) + S_Z(X,Y) = 0.
// Coordinates: for each x the coefficients of S_{e_x} against space.tensors.
SubspaceBasis nabla_space(const CurvatureSpace& space);
bool is_symmetric_berger(const MatrixLieAlgebra& g);

// Prolongations of g in gl(n) (g needs no metric). The first prolongation is
// stored as coefficients s_{x,j} of S(e_x) = sum_j s_{x,j} b_j; the second as
// coefficients of T(e_x) against the first-prolongation basis.
struct Prolongation {
  std::size_t order = 0;
  SubspaceBasis space;
  std::size_t dim() const { return space.dim(); }
};

Prolongation prolongation(const MatrixLieAlgebra& g, int k);

// The A-blocks of an algebra of matrices diag(A, -A^t) with metric [[0,I],[I,0]];
// empty when g is not of that form.
std::optional<MatrixLieAlgebra> gl_part(const MatrixLieAlgebra& g);

struct BlockDiagnostics {
  bool vv_vanish = true;          // R(X, Y) = 0 for X, Y in V
  bool vstar_vanish = true;       // R(X, Y) = 0 for X, Y in V*
  bool in_prolongation = true;    // X -> pr_gl R(X, Y) lies in g^(1) for each Y in V*
  bool ricci_trace = true;        // Ric(X, Y) = tr pr_gl R(X, Y) for X in V, Y in V*
  std::vector<RatVector> prolongation_coordinates;  // per basis vector of V*
};

// Throws PreconditionError unless g is in the diagonal gl-embedding, and
// MembershipError when R(V, V) or R(V*, V*) does not vanish.
BlockDiagnostics nn_block_structure(const MatrixLieAlgebra& g, const RatVector& t);

struct CurvatureReport {
  std::string algebra;
  std::size_t dim_R = 0;
  std::size_t dim_R0 = 0;
  bool R1_nonempty = false;
  std::size_t dim_LR = 0;
  std::size_t dim_LR1 = 0;
  bool is_berger = false;
  bool is_einstein_berger = false;
  std::size_t dim_nabla = 0;
  bool is_symmetric_berger = false;
  std::optional<std::size_t> dim_prolongation_1;
  std::optional<std::size_t> dim_prolongation_2;
};

CurvatureReport analyze(const MatrixLieAlgebra& g);

}  // namespace bergerkit
