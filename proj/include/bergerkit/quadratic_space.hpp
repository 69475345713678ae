#pragma once

#include <utility>
#include <vector>

#include "bergerkit/rat_matrix.hpp"
#include "bergerkit/subspace.hpp"

namespace bergerkit {

// (p, q): p entries of square +1 followed by q entries of square -1.
struct Signature {
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t n() const { return p + q; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

// Ambient signature (m + r, m + s) with an m-dimensional isotropic subspace.
struct SplitSignature {
  std::size_t m = 1;
  std::size_t r = 0;
  std::size_t s = 0;
  std::size_t n() const { return 2 * m + r + s; }
  Signature ambient() const { return {m + r, m + s}; }
  // Signs of the orthonormal middle block, E_{r,s} = diag(+1 x r, -1 x s).
  std::vector<int> residual_signs() const;
};

// Counts of positive, negative and zero squares of a symmetric rational form.
struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

Inertia inertia(const RatMatrix& symmetric);

class QuadraticSpace {
 public:
  QuadraticSpace() = default;
  // Throws PreconditionError if gram is not symmetric and invertible.
  explicit QuadraticSpace(RatMatrix gram);

  std::size_t dim() const { return gram_.rows(); }
  const RatMatrix& gram() const { return gram_; }
  Signature signature() const { return signature_; }
  Rational inner(const RatVector& u, const RatVector& v) const;
  // Gram matrix of the given vectors.
  RatMatrix gram_of(const std::vector<RatVector>& vectors) const;
  bool is_nondegenerate(const SubspaceBasis& subspace) const;
  SubspaceBasis orthogonal_complement(const SubspaceBasis& subspace) const;

 private:
  RatMatrix gram_;
  Signature signature_;
};

QuadraticSpace standard_space(Signature sig);

// Columns p_1..p_m, e_1..e_k, q_1..q_m of an invertible matrix.
struct WittBasis {
  std::size_t m = 0;
  std::vector<int> e_signs;  // g(e_a, e_a)
  RatMatrix vectors;

  std::size_t k() const { return e_signs.size(); }
  RatVector p(std::size_t i) const { return vectors.col(i); }
  RatVector e(std::size_t a) const { return vectors.col(m + a); }
  RatVector q(std::size_t i) const { return vectors.col(m + k() + i); }
};

// Gram matrix of a Witt basis in its own coordinates: the p_i pair with q_i,
// the middle block is diag(e_signs).
RatMatrix witt_gram(std::size_t m, const std::vector<int>& e_signs);

std::pair<QuadraticSpace, WittBasis> standard_witt(const SplitSignature& split);
std::pair<QuadraticSpace, WittBasis> standard_witt(std::size_t m, const std::vector<int>& e_signs);

bool verify_witt(const WittBasis& basis, const QuadraticSpace& space);

// Change of Witt basis keeping p_1..p_m:
//   e'_a = e_a + sum_i D_ia p_i,  q'_i = q_i + X_i + sum_j (B + C)_ji p_j,
// with X_i = sum_a X(a, i) e_a, B = -1/2 X^t E X and D = -X^t E.
struct RebaseData {
  RatMatrix X;  // k x m
  RatMatrix C;  // m x m, skew
  RatMatrix B;  // m x m, symmetric
  RatMatrix D;  // m x k

  static RebaseData from(const RatMatrix& X, const RatMatrix& C, const std::vector<int>& e_signs);
};

// Throws PreconditionError when the data violates the B/D equalities or C is
// not skew, or when basis is not a Witt basis of space.
WittBasis witt_rebase(const WittBasis& basis, const QuadraticSpace& space, const RebaseData& data);

// Matrix of the endomorphism T (ambient coordinates) with respect to basis.
RatMatrix in_basis(const RatMatrix& endomorphism, const RatMatrix& basis);
// Inverse of in_basis.
RatMatrix from_basis(const RatMatrix& matrix, const RatMatrix& basis);

}  // namespace bergerkit
