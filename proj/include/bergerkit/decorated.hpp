#pragma once

#include <vector>

#include "bergerkit/lie_algebra.hpp"
#include "bergerkit/quadratic_space.hpp"

namespace bergerkit {

// Block coordinates of so(m+r, m+s)_{R^m} in a Witt basis p, e, q:
//   [ B  -X^t E   C   ]
//   [ 0    A      X   ]
//   [ 0    0    -B^t  ]
// with A in so(E), C skew, X of shape k x m (column i is the image of q_i in the e-span).
struct DecoratedElement {
  RatMatrix B;
  RatMatrix A;
  RatMatrix X;
  RatMatrix C;

  static DecoratedElement zero(std::size_t m, std::size_t k);
  friend bool operator==(const DecoratedElement&, const DecoratedElement&) = default;
};

// Signs of the middle block plus the isotropic rank.
struct DecoratedFrame {
  std::size_t m = 1;
  std::vector<int> e_signs;

  static DecoratedFrame from(const SplitSignature& split) { return {split.m, split.residual_signs()}; }
  std::size_t k() const { return e_signs.size(); }
  std::size_t n() const { return 2 * m + k(); }
  RatMatrix E() const;
  RatMatrix gram() const { return witt_gram(m, e_signs); }
};

// Throws DimensionError on wrong block shapes, PreconditionError if C is not
// skew or A is not in so(E).
RatMatrix assemble(const DecoratedElement& x, const DecoratedFrame& frame);

// Throws MembershipError when x is not in the decorated algebra.
DecoratedElement decorated_project(const RatMatrix& x, const DecoratedFrame& frame);

MatrixLieAlgebra decorated_algebra(const SplitSignature& split);
MatrixLieAlgebra decorated_algebra(const DecoratedFrame& frame);

// Parameters of the Witt rebase after which xi = (id, 0, X, C) (matrix in the
// current Witt frame) takes the form (id, 0, 0, 0). Throws PreconditionError
// if xi does not have B = id and A = 0.
RebaseData cleaning_rebase(const DecoratedElement& xi, const DecoratedFrame& frame);

// Matrix of T (given in old Witt coordinates) in the rebased Witt frame.
RatMatrix rebase_conjugate(const RatMatrix& t, const RebaseData& data, const DecoratedFrame& frame);

}  // namespace bergerkit
