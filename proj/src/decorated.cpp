#include "bergerkit/decorated.hpp"

#include "bergerkit/errors.hpp"

namespace bergerkit {

DecoratedElement DecoratedElement::zero(std::size_t m, std::size_t k) {
  return {RatMatrix(m, m), RatMatrix(k, k), RatMatrix(k, m), RatMatrix(m, m)};
}

RatMatrix DecoratedFrame::E() const {
  RatMatrix e(k(), k());
  for (std::size_t a = 0; a < k(); ++a) e.set(a, a, e_signs[a]);
  return e;
}

RatMatrix assemble(const DecoratedElement& x, const DecoratedFrame& f) {
  const std::size_t m = f.m, k = f.k();
  if (x.B.rows() != m || x.B.cols() != m || x.A.rows() != k || x.A.cols() != k || x.X.rows() != k ||
      x.X.cols() != m || x.C.rows() != m || x.C.cols() != m)
    throw DimensionError("assemble: block shapes do not match the frame");
  if (x.C.transpose() != -x.C) throw PreconditionError("assemble: C is not skew");
  const auto E = f.E();
  if (!is_skew(x.A, E)) throw PreconditionError("assemble: A is not in so(r,s)");
  RatMatrix out(f.n(), f.n());
  out.set_block(0, 0, x.B);
  out.set_block(0, m, -(x.X.transpose() * E));
  out.set_block(0, m + k, x.C);
  out.set_block(m, m, x.A);
  out.set_block(m, m + k, x.X);
  out.set_block(m + k, m + k, -x.B.transpose());
  return out.compacted();
}

DecoratedElement decorated_project(const RatMatrix& x, const DecoratedFrame& f) {
  const std::size_t m = f.m, k = f.k(), n = f.n();
  if (x.rows() != n || x.cols() != n) throw DimensionError("decorated_project: matrix has wrong shape");
  DecoratedElement d{x.block(0, 0, m, m), x.block(m, m, k, k), x.block(m, m + k, k, m),
                     x.block(0, m + k, m, m)};
  bool ok = d.C.transpose() == -d.C && is_skew(d.A, f.E());
  if (ok) ok = assemble(d, f) == x;
  if (!ok) throw MembershipError("decorated_project: matrix is not in the decorated algebra");
  return d;
}

MatrixLieAlgebra decorated_algebra(const DecoratedFrame& f) {
  const std::size_t m = f.m, k = f.k();
  std::vector<RatMatrix> basis;
  auto push = [&](const DecoratedElement& e) { basis.push_back(assemble(e, f)); };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      auto e = DecoratedElement::zero(m, k);
      e.B.set(i, j, 1);
      push(e);
    }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      // E K with K skew.
      auto e = DecoratedElement::zero(m, k);
      e.A.set(a, b, f.e_signs[a]);
      e.A.set(b, a, -f.e_signs[b]);
      push(e);
    }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t i = 0; i < m; ++i) {
      auto e = DecoratedElement::zero(m, k);
      e.X.set(a, i, 1);
      push(e);
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      auto e = DecoratedElement::zero(m, k);
      e.C.set(i, j, 1);
      e.C.set(j, i, -1);
      push(e);
    }
  std::size_t r = 0;
  for (int e : f.e_signs) r += e > 0;
  std::string name = "so(" + std::to_string(m + r) + "," + std::to_string(m + k - r) + ")_R^" + std::to_string(m);
  return MatrixLieAlgebra(std::move(name), f.n(), std::move(basis), QuadraticSpace(f.gram()));
}

MatrixLieAlgebra decorated_algebra(const SplitSignature& split) {
  return decorated_algebra(DecoratedFrame::from(split));
}

RatMatrix rebase_conjugate(const RatMatrix& t, const RebaseData& data, const DecoratedFrame& f) {
  auto [space, basis] = standard_witt(f.m, f.e_signs);
  auto rebased = witt_rebase(basis, space, data);
  return in_basis(t, rebased.vectors);
}

RebaseData cleaning_rebase(const DecoratedElement& xi, const DecoratedFrame& f) {
  const std::size_t m = f.m;
  if (xi.B != RatMatrix::identity(m) || !xi.A.is_zero())
    throw PreconditionError("cleaning_rebase: element must have B = id and A = 0");
  const auto t = assemble(xi, f);
  // First remove X, then read off the remaining C-block, which the
  // C-parameter shifts by twice its value.
  auto step = RebaseData::from(-xi.X, RatMatrix(m, m), f.e_signs);
  auto residual = decorated_project(rebase_conjugate(t, step, f), f);
  auto data = RebaseData::from(-xi.X, residual.C * Rational(-1, 2), f.e_signs);
  auto clean = decorated_project(rebase_conjugate(t, data, f), f);
  if (!clean.X.is_zero() || !clean.C.is_zero())
    throw std::logic_error("cleaning_rebase: rebase did not clear the X and C blocks");
  return data;
}

}  // namespace bergerkit
