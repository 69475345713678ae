#include "bergerkit/subspace.hpp"

#include "bergerkit/errors.hpp"
#include "bergerkit/linalg.hpp"

namespace bergerkit {

SubspaceBasis::SubspaceBasis(std::size_t ambient_dim)
    : ambient_(ambient_dim), rows_(0, ambient_dim) {}

SubspaceBasis SubspaceBasis::full(std::size_t ambient_dim) {
  return from_rows(RatMatrix::identity(ambient_dim));
}

SubspaceBasis SubspaceBasis::from_generators(std::size_t ambient_dim,
                                             const std::vector<RatVector>& gens) {
  std::vector<RatMatrix::Triplet> trip;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].size() != ambient_dim) throw DimensionError("subspace generator has wrong length");
    for (std::size_t j = 0; j < ambient_dim; ++j)
      if (sgn(gens[i][j]) != 0) trip.push_back({i, j, gens[i][j]});
  }
  return from_rows(RatMatrix::from_triplets(gens.size(), ambient_dim, std::move(trip)));
}

SubspaceBasis SubspaceBasis::from_rows(const RatMatrix& m) {
  auto red = rref(m);
  SubspaceBasis s;
  s.ambient_ = m.cols();
  s.pivots_ = red.pivots;
  s.rows_ = red.reduced.block(0, 0, red.rank(), m.cols()).compacted();
  return s;
}

std::vector<RatVector> SubspaceBasis::vectors() const {
  std::vector<RatVector> out;
  out.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) out.push_back(rows_.row(i));
  return out;
}

std::optional<RatVector> SubspaceBasis::coordinates(const RatVector& v) const {
  if (v.size() != ambient_) throw DimensionError("coordinates: vector length mismatch");
  RatVector c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = v[pivots_[i]];
  if (combine(c) != v) return std::nullopt;
  return c;
}

bool SubspaceBasis::contains(const RatVector& v) const { return coordinates(v).has_value(); }

RatVector SubspaceBasis::combine(const RatVector& coeffs) const {
  if (coeffs.size() != dim()) throw DimensionError("combine: coefficient count mismatch");
  RatVector out(ambient_);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (sgn(coeffs[i]) == 0) continue;
    for (auto& e : rows_.row_entries(i)) out[e.col] += coeffs[i] * e.value;
  }
  return out;
}

namespace {

void require_same_ambient(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw DimensionError("subspace operation: ambient dimensions differ");
}

}  // namespace

SubspaceBasis span_union(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_ambient(a, b);
  auto gens = a.vectors();
  for (auto& v : b.vectors()) gens.push_back(std::move(v));
  return SubspaceBasis::from_generators(a.ambient_dim(), gens);
}

SubspaceBasis annihilator(const SubspaceBasis& a) {
  return nullspace(a.matrix());
}

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_ambient(a, b);
  auto eqs = annihilator(a).vectors();
  for (auto& v : annihilator(b).vectors()) eqs.push_back(std::move(v));
  if (eqs.empty()) return SubspaceBasis::full(a.ambient_dim());
  return nullspace(RatMatrix::from_rows(eqs, a.ambient_dim()).compacted());
}

bool contains(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_ambient(a, b);
  for (std::size_t i = 0; i < b.dim(); ++i)
    if (!a.contains(b.vector(i))) return false;
  return true;
}

bool equal(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_ambient(a, b);
  return a == b;
}

}  // namespace bergerkit
