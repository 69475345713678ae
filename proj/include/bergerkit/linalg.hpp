#pragma once

#include <optional>
#include <vector>

#include "bergerkit/rat_matrix.hpp"
#include "bergerkit/subspace.hpp"

namespace bergerkit {

struct RrefResult {
  RatMatrix reduced;                // same shape as the input; zero rows at the bottom
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row, increasing
  std::size_t rank() const { return pivots.size(); }
};

// Reduced row-echelon form. Dense inputs use fraction-free Gauss-Jordan
// (Bareiss), sparse inputs use sparse integer elimination with row-content
// normalization. Both produce the unique RREF.
RrefResult rref(const RatMatrix& m);
RrefResult rref_bareiss(const RatMatrix& m);
RrefResult rref_sparse(const RatMatrix& m);

std::size_t rank(const RatMatrix& m);

// {v : m v = 0}, in canonical form. dim = cols - rank.
SubspaceBasis nullspace(const RatMatrix& m);

struct AffineSolution {
  std::optional<RatVector> particular;  // empty iff b is outside the column space
  SubspaceBasis directions;             // nullspace of m
};

AffineSolution affine_solve(const RatMatrix& m, const RatVector& b);

}  // namespace bergerkit
