#include "bergerkit/quadratic_space.hpp"

#include "bergerkit/errors.hpp"
#include "bergerkit/linalg.hpp"

namespace bergerkit {

std::vector<int> SplitSignature::residual_signs() const {
  std::vector<int> e(r, 1);
  e.insert(e.end(), s, -1);
  return e;
}

namespace {

bool is_symmetric(const RatMatrix& a) {
  return a.rows() == a.cols() && a == a.transpose();
}

using Dense = std::vector<std::vector<Rational>>;

void swap_sym(Dense& a, std::size_t i, std::size_t j) {
  if (i == j) return;
  std::swap(a[i], a[j]);
  for (auto& row : a) std::swap(row[i], row[j]);
}

}  // namespace

Inertia inertia(const RatMatrix& symmetric) {
  if (!is_symmetric(symmetric)) throw PreconditionError("inertia: matrix is not symmetric");
  const std::size_t n = symmetric.rows();
  Dense a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = symmetric.at(i, j);

  Inertia out;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n && piv == n; ++i)
      if (sgn(a[i][i]) != 0) piv = i;
    if (piv == n) {
      // Zero diagonal: add row/column j to i where a[i][j] != 0.
      for (std::size_t i = k; i < n && piv == n; ++i)
        for (std::size_t j = i + 1; j < n && piv == n; ++j)
          if (sgn(a[i][j]) != 0) {
            for (std::size_t c = 0; c < n; ++c) a[i][c] += a[j][c];
            for (std::size_t r = 0; r < n; ++r) a[r][i] += a[r][j];
            piv = i;
          }
      if (piv == n) {
        out.zero += n - k;
        return out;
      }
    }
    swap_sym(a, k, piv);
    const Rational d = a[k][k];
    (sgn(d) > 0 ? out.positive : out.negative)++;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a[i][k]) == 0) continue;
      Rational f = a[i][k] / d;
      for (std::size_t c = k; c < n; ++c) a[i][c] -= f * a[k][c];
      for (std::size_t r = k; r < n; ++r) a[r][i] -= f * a[r][k];
    }
  }
  return out;
}

QuadraticSpace::QuadraticSpace(RatMatrix gram) : gram_(std::move(gram)) {
  if (!is_symmetric(gram_)) throw PreconditionError("QuadraticSpace: gram is not symmetric");
  auto in = inertia(gram_);
  if (in.zero != 0) throw PreconditionError("QuadraticSpace: gram is degenerate");
  signature_ = {in.positive, in.negative};
}

Rational QuadraticSpace::inner(const RatVector& u, const RatVector& v) const {
  if (u.size() != dim() || v.size() != dim()) throw DimensionError("inner: vector length mismatch");
  return dot(u, gram_ * v);
}

RatMatrix QuadraticSpace::gram_of(const std::vector<RatVector>& vectors) const {
  RatMatrix out(vectors.size(), vectors.size());
  std::vector<RatVector> gv;
  gv.reserve(vectors.size());
  for (auto& v : vectors) {
    if (v.size() != dim()) throw DimensionError("gram_of: vector length mismatch");
    gv.push_back(gram_ * v);
  }
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = 0; j < vectors.size(); ++j) out.set(i, j, dot(vectors[i], gv[j]));
  return out;
}

bool QuadraticSpace::is_nondegenerate(const SubspaceBasis& subspace) const {
  if (subspace.ambient_dim() != dim()) throw DimensionError("is_nondegenerate: ambient mismatch");
  return rank(gram_of(subspace.vectors())) == subspace.dim();
}

SubspaceBasis QuadraticSpace::orthogonal_complement(const SubspaceBasis& subspace) const {
  if (subspace.ambient_dim() != dim()) throw DimensionError("orthogonal_complement: ambient mismatch");
  if (subspace.empty()) return SubspaceBasis::full(dim());
  return nullspace(subspace.matrix() * gram_);
}

QuadraticSpace standard_space(Signature sig) {
  RatMatrix g(sig.n(), sig.n());
  for (std::size_t i = 0; i < sig.n(); ++i) g.set(i, i, i < sig.p ? 1 : -1);
  return QuadraticSpace(std::move(g));
}

RatMatrix witt_gram(std::size_t m, const std::vector<int>& e_signs) {
  const std::size_t k = e_signs.size(), n = 2 * m + k;
  RatMatrix g(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    g.set(i, m + k + i, 1);
    g.set(m + k + i, i, 1);
  }
  for (std::size_t a = 0; a < k; ++a) g.set(m + a, m + a, e_signs[a]);
  return g;
}

std::pair<QuadraticSpace, WittBasis> standard_witt(std::size_t m, const std::vector<int>& e_signs) {
  for (int e : e_signs)
    if (e != 1 && e != -1) throw PreconditionError("standard_witt: signs must be +1 or -1");
  QuadraticSpace space(witt_gram(m, e_signs));
  WittBasis basis{m, e_signs, RatMatrix::identity(space.dim())};
  return {std::move(space), std::move(basis)};
}

std::pair<QuadraticSpace, WittBasis> standard_witt(const SplitSignature& split) {
  return standard_witt(split.m, split.residual_signs());
}

bool verify_witt(const WittBasis& basis, const QuadraticSpace& space) {
  const std::size_t n = 2 * basis.m + basis.k();
  if (space.dim() != n || basis.vectors.rows() != n || basis.vectors.cols() != n) return false;
  const auto& w = basis.vectors;
  return w.transpose() * space.gram() * w == witt_gram(basis.m, basis.e_signs);
}

RebaseData RebaseData::from(const RatMatrix& X, const RatMatrix& C, const std::vector<int>& e_signs) {
  const std::size_t k = e_signs.size();
  if (X.rows() != k) throw DimensionError("RebaseData: X must have one row per e-vector");
  const std::size_t m = X.cols();
  if (C.rows() != m || C.cols() != m) throw DimensionError("RebaseData: C must be m x m");
  RatMatrix E(k, k);
  for (std::size_t a = 0; a < k; ++a) E.set(a, a, e_signs[a]);
  RebaseData d;
  d.X = X;
  d.C = C;
  d.D = -(X.transpose() * E);
  d.B = X.transpose() * E * X * Rational(-1, 2);
  return d;
}

WittBasis witt_rebase(const WittBasis& basis, const QuadraticSpace& space, const RebaseData& data) {
  if (!verify_witt(basis, space)) throw PreconditionError("witt_rebase: input is not a Witt basis");
  const std::size_t m = basis.m, k = basis.k();
  if (data.X.rows() != k || data.X.cols() != m || data.C.rows() != m || data.C.cols() != m ||
      data.B.rows() != m || data.B.cols() != m || data.D.rows() != m || data.D.cols() != k)
    throw DimensionError("witt_rebase: rebase data has wrong shape");
  if (data.C.transpose() != -data.C) throw PreconditionError("witt_rebase: C is not skew");
  auto expected = RebaseData::from(data.X, data.C, basis.e_signs);
  if (data.B != expected.B) throw PreconditionError("witt_rebase: B_ij != -1/2 g(X_i, X_j)");
  if (data.D != expected.D) throw PreconditionError("witt_rebase: D_ia != -g(X_i, e_a)");

  // New basis = old basis * T with T the coordinate change in the old Witt frame.
  const std::size_t n = 2 * m + k;
  RatMatrix T = RatMatrix::identity(n);
  RatMatrix A = data.B + data.C;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t i = 0; i < m; ++i) T.set(i, m + a, data.D.at(i, a));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t a = 0; a < k; ++a) T.set(m + a, m + k + i, data.X.at(a, i));
    for (std::size_t j = 0; j < m; ++j) T.set(j, m + k + i, A.at(j, i));
  }
  WittBasis out{m, basis.e_signs, (basis.vectors * T).compacted()};
  return out;
}

RatMatrix in_basis(const RatMatrix& endomorphism, const RatMatrix& basis) {
  return inverse(basis) * endomorphism * basis;
}

RatMatrix from_basis(const RatMatrix& matrix, const RatMatrix& basis) {
  return basis * matrix * inverse(basis);
}

}  // namespace bergerkit
