#pragma once

#include <optional>
#include <vector>

#include "bergerkit/rat_matrix.hpp"

namespace bergerkit {

// A linear subspace of Q^n, stored as the RREF of its generator rows. Two
// SubspaceBasis objects describe the same subspace iff their matrices are
// identical, so equality is an entrywise comparison.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  explicit SubspaceBasis(std::size_t ambient_dim);  // zero subspace

  static SubspaceBasis zero(std::size_t ambient_dim) { return SubspaceBasis(ambient_dim); }
  static SubspaceBasis full(std::size_t ambient_dim);
  static SubspaceBasis from_generators(std::size_t ambient_dim, const std::vector<RatVector>& gens);
  // Generators are the rows of m.
  static SubspaceBasis from_rows(const RatMatrix& m);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return pivots_.size(); }
  bool empty() const { return pivots_.empty(); }

  const RatMatrix& matrix() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  RatVector vector(std::size_t i) const { return rows_.row(i); }
  std::vector<RatVector> vectors() const;

  bool contains(const RatVector& v) const;
  // Coordinates against vectors(); empty when v is not in the subspace.
  std::optional<RatVector> coordinates(const RatVector& v) const;
  RatVector combine(const RatVector& coeffs) const;

  friend bool operator==(const SubspaceBasis& a, const SubspaceBasis& b) {
    return a.ambient_ == b.ambient_ && a.rows_ == b.rows_;
  }
  friend bool operator!=(const SubspaceBasis& a, const SubspaceBasis& b) { return !(a == b); }

 private:
  std::size_t ambient_ = 0;
  RatMatrix rows_;
  std::vector<std::size_t> pivots_;
};

SubspaceBasis span_union(const SubspaceBasis& a, const SubspaceBasis& b);
SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b);
// b is a subspace of a.
bool contains(const SubspaceBasis& a, const SubspaceBasis& b);
bool equal(const SubspaceBasis& a, const SubspaceBasis& b);
// {w : w . v = 0 for all v in a}.
SubspaceBasis annihilator(const SubspaceBasis& a);

}  // namespace bergerkit
