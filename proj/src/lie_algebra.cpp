#include "bergerkit/lie_algebra.hpp"

#include "bergerkit/errors.hpp"
#include "bergerkit/linalg.hpp"

namespace bergerkit {

RatMatrix bracket(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw DimensionError("bracket: matrices must be square of equal size");
  return commutator(a, b);
}

bool is_skew(const RatMatrix& a, const RatMatrix& gram) {
  auto ga = gram * a;
  return (ga + ga.transpose()).is_zero();
}

SubspaceBasis matrix_span(std::size_t ambient_dim, const std::vector<RatMatrix>& mats) {
  std::vector<RatVector> gens;
  gens.reserve(mats.size());
  for (auto& m : mats) {
    if (m.rows() != ambient_dim || m.cols() != ambient_dim)
      throw DimensionError("matrix_span: matrix has wrong shape");
    gens.push_back(m.flatten());
  }
  return SubspaceBasis::from_generators(ambient_dim * ambient_dim, gens);
}

MatrixLieAlgebra::MatrixLieAlgebra(std::string name, std::size_t ambient_dim, std::vector<RatMatrix> basis,
                                   std::optional<QuadraticSpace> metric)
    : MatrixLieAlgebra(std::move(name), ambient_dim, std::move(basis), std::move(metric), Options{}) {}

MatrixLieAlgebra::MatrixLieAlgebra(std::string name, std::size_t ambient_dim, std::vector<RatMatrix> basis,
                                   std::optional<QuadraticSpace> metric, Options options)
    : name_(std::move(name)), n_(ambient_dim), basis_(std::move(basis)), metric_(std::move(metric)) {
  validate(options.check_closure);
}

MatrixLieAlgebra MatrixLieAlgebra::from_span(std::string name, std::size_t ambient_dim,
                                             const SubspaceBasis& span,
                                             std::optional<QuadraticSpace> metric) {
  if (span.ambient_dim() != ambient_dim * ambient_dim)
    throw DimensionError("from_span: span lives in the wrong space");
  std::vector<RatMatrix> basis;
  for (auto& v : span.vectors()) basis.push_back(RatMatrix::unflatten(v, ambient_dim, ambient_dim).compacted());
  return MatrixLieAlgebra(std::move(name), ambient_dim, std::move(basis), std::move(metric));
}

void MatrixLieAlgebra::validate(bool check_closure) {
  const std::size_t nn = n_ * n_, d = basis_.size();
  for (auto& b : basis_)
    if (b.rows() != n_ || b.cols() != n_) throw DimensionError(name_ + ": basis matrix has wrong shape");
  if (metric_ && metric_->dim() != n_) throw DimensionError(name_ + ": metric dimension differs from N");

  // rref([B | I]) = [S | M] with S the canonical span and M B = S.
  std::vector<RatMatrix::Triplet> trip;
  for (std::size_t i = 0; i < d; ++i) {
    auto flat = basis_[i].flatten();
    for (std::size_t e = 0; e < nn; ++e)
      if (sgn(flat[e]) != 0) trip.push_back({i, e, flat[e]});
    trip.push_back({i, nn + i, 1});
  }
  auto red = rref(RatMatrix::from_triplets(d, nn + d, std::move(trip)));
  std::size_t rank = 0;
  while (rank < red.pivots.size() && red.pivots[rank] < nn) ++rank;
  if (rank != d) throw PreconditionError(name_ + ": basis is linearly dependent");
  span_ = SubspaceBasis::from_rows(red.reduced.block(0, 0, d, nn));
  to_basis_ = red.reduced.block(0, nn, d, d).compacted();

  if (metric_) {
    for (std::size_t i = 0; i < d; ++i)
      if (!is_skew(basis_[i], metric_->gram()))
        throw MembershipError(name_ + ": basis element " + std::to_string(i) + " is not skew for the metric");
  }
  if (check_closure) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (!span_.contains(commutator(basis_[i], basis_[j]).flatten()))
          throw ClosureError(name_ + ": [b" + std::to_string(i) + ", b" + std::to_string(j) +
                             "] is outside the span");
  }
}

const QuadraticSpace& MatrixLieAlgebra::metric() const {
  if (!metric_) throw PreconditionError(name_ + ": algebra has no metric");
  return *metric_;
}

std::optional<RatVector> MatrixLieAlgebra::coordinates(const RatMatrix& x) const {
  if (x.rows() != n_ || x.cols() != n_) throw DimensionError("coordinates: matrix has wrong shape");
  auto c = span_.coordinates(x.flatten());
  if (!c) return std::nullopt;
  // coefficients = c * M
  RatVector out(dim());
  for (std::size_t r = 0; r < c->size(); ++r) {
    if (sgn((*c)[r]) == 0) continue;
    for (auto& e : to_basis_.row_entries(r)) out[e.col] += (*c)[r] * e.value;
  }
  return out;
}

bool MatrixLieAlgebra::contains(const RatMatrix& x) const {
  if (x.rows() != n_ || x.cols() != n_) throw DimensionError("contains: matrix has wrong shape");
  return span_.contains(x.flatten());
}

RatMatrix MatrixLieAlgebra::element(const RatVector& coeffs) const {
  if (coeffs.size() != dim()) throw DimensionError("element: coefficient count mismatch");
  RatMatrix out(n_, n_);
  for (std::size_t i = 0; i < dim(); ++i)
    if (sgn(coeffs[i]) != 0) out += basis_[i] * coeffs[i];
  return out;
}

MatrixLieAlgebra MatrixLieAlgebra::renamed(std::string name) const {
  MatrixLieAlgebra out = *this;
  out.name_ = std::move(name);
  return out;
}

MatrixLieAlgebra orthogonal_algebra(const QuadraticSpace& space, std::string name) {
  // a = G^{-1} K with K skew.
  const std::size_t n = space.dim();
  auto ginv = inverse(space.gram());
  std::vector<RatMatrix> basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RatMatrix k(n, n);
      k.set(i, j, 1);
      k.set(j, i, -1);
      basis.push_back((ginv * k).compacted());
    }
  return MatrixLieAlgebra(std::move(name), n, std::move(basis), space, {.check_closure = false});
}

SubspaceBasis centralizer(const MatrixLieAlgebra& g, const MatrixLieAlgebra& ambient) {
  if (g.ambient_dim() != ambient.ambient_dim()) throw DimensionError("centralizer: ambient mismatch");
  const std::size_t n = g.ambient_dim(), nn = n * n, d = ambient.dim();
  if (g.dim() == 0) return ambient.span();
  // Unknowns: coefficients of x against the ambient basis.
  std::vector<RatMatrix::Triplet> trip;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t b = 0; b < g.dim(); ++b) {
      auto c = commutator(ambient.basis(k), g.basis(b)).flatten();
      for (std::size_t e = 0; e < nn; ++e)
        if (sgn(c[e]) != 0) trip.push_back({b * nn + e, k, c[e]});
    }
  auto coeffs = nullspace(RatMatrix::from_triplets(g.dim() * nn, d, std::move(trip)));
  std::vector<RatVector> gens;
  for (auto& c : coeffs.vectors()) gens.push_back(ambient.element(c).flatten());
  return SubspaceBasis::from_generators(nn, gens);
}

SubspaceBasis generated_ideal(const MatrixLieAlgebra& g, const SubspaceBasis& seed) {
  const std::size_t n = g.ambient_dim();
  if (seed.ambient_dim() != n * n) throw DimensionError("generated_ideal: seed lives in the wrong space");
  if (!contains(g.span(), seed)) throw MembershipError("generated_ideal: seed is not inside g");
  SubspaceBasis current = seed;
  std::vector<RatVector> frontier = seed.vectors();
  while (!frontier.empty()) {
    std::vector<RatVector> gens = current.vectors();
    std::vector<RatVector> produced;
    for (auto& v : frontier) {
      auto x = RatMatrix::unflatten(v, n, n);
      for (auto& b : g.basis()) {
        auto w = commutator(b, x).flatten();
        if (!current.contains(w)) produced.push_back(std::move(w));
      }
    }
    if (produced.empty()) break;
    for (auto& w : produced) gens.push_back(w);
    auto next = SubspaceBasis::from_generators(n * n, gens);
    frontier = std::move(produced);
    current = std::move(next);
  }
  return current;
}

bool invariant_subspace_probe(const MatrixLieAlgebra& g, const SubspaceBasis& candidate) {
  if (candidate.ambient_dim() != g.ambient_dim()) throw DimensionError("invariant_subspace_probe: ambient mismatch");
  for (auto& b : g.basis())
    for (auto& v : candidate.vectors())
      if (!candidate.contains(b * v)) return false;
  return true;
}

}  // namespace bergerkit
