#include "bergerkit/curvature.hpp"

#include "bergerkit/errors.hpp"
#include "bergerkit/linalg.hpp"
#include "bergerkit/parallel.hpp"

namespace bergerkit {

CurvatureLayout::CurvatureLayout(const MatrixLieAlgebra& g) : n_(g.ambient_dim()), d_(g.dim()) {}

std::size_t CurvatureLayout::pair_index(std::size_t a, std::size_t b) const {
  // Pairs (0,1), (0,2), ..., (0,n-1), (1,2), ...
  return a * n_ - a * (a + 1) / 2 + (b - a - 1);
}

namespace {

struct Triple {
  std::size_t a, b, c;
};

std::vector<Triple> triples(std::size_t n) {
  std::vector<Triple> out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) out.push_back({a, b, c});
  return out;
}

// Rows produced per block by fill(block, out) are offset by block * rows_per_block.
RatMatrix assemble_blocks(std::size_t blocks, std::size_t rows_per_block, std::size_t cols,
                          const std::function<void(std::size_t, std::vector<RatMatrix::Triplet>&)>& fill) {
  std::vector<std::vector<RatMatrix::Triplet>> parts(blocks);
  parallel_for(blocks, [&](std::size_t i) { fill(i, parts[i]); });
  std::vector<RatMatrix::Triplet> all;
  for (auto& p : parts)
    for (auto& t : p) all.push_back(std::move(t));
  return RatMatrix::from_triplets(blocks * rows_per_block, cols, std::move(all));
}

void require_metric(const MatrixLieAlgebra& g, const char* op) {
  if (!g.has_metric()) throw PreconditionError(std::string(op) + ": algebra has no metric");
}

// Coefficient vectors R_j(e_a, e_b) for every basis tensor j and pair a < b.
std::vector<std::vector<RatVector>> pair_values(const CurvatureSpace& space) {
  auto layout = space.layout();
  std::vector<std::vector<RatVector>> out;
  for (auto& t : space.tensors.vectors()) {
    std::vector<RatVector> per;
    for (std::size_t a = 0; a < layout.n(); ++a)
      for (std::size_t b = a + 1; b < layout.n(); ++b) per.push_back(curvature_coefficients(layout, t, a, b));
    out.push_back(std::move(per));
  }
  return out;
}

SubspaceBasis images_span(const MatrixLieAlgebra& g, const std::vector<RatVector>& tensors) {
  auto layout = CurvatureLayout(g);
  std::vector<RatVector> coeffs;
  for (auto& t : tensors)
    for (std::size_t a = 0; a < layout.n(); ++a)
      for (std::size_t b = a + 1; b < layout.n(); ++b) {
        auto c = curvature_coefficients(layout, t, a, b);
        if (!is_zero(c)) coeffs.push_back(std::move(c));
      }
  const std::size_t nn = g.ambient_dim() * g.ambient_dim();
  if (coeffs.empty()) return SubspaceBasis::zero(nn);
  auto in_g = SubspaceBasis::from_generators(g.dim(), coeffs);
  std::vector<RatVector> flat;
  for (auto& c : in_g.vectors()) flat.push_back(g.element(c).flatten());
  return SubspaceBasis::from_generators(nn, flat);
}

// Columns: Ric (flattened) of each basis tensor.
RatMatrix ricci_matrix(const CurvatureSpace& space) {
  const std::size_t n = space.algebra.ambient_dim();
  std::vector<RatVector> cols;
  for (auto& t : space.tensors.vectors()) cols.push_back(ricci(space.algebra, t).flatten());
  return RatMatrix::from_columns(cols, n * n).compacted();
}

}  // namespace

RatVector curvature_coefficients(const CurvatureLayout& layout, const RatVector& t, std::size_t a, std::size_t b) {
  if (t.size() != layout.size()) throw DimensionError("curvature tensor has wrong coordinate count");
  const std::size_t d = layout.algebra_dim();
  RatVector out(d);
  if (a == b) return out;
  bool flip = a > b;
  if (flip) std::swap(a, b);
  const std::size_t base = layout.index(a, b, 0);
  for (std::size_t k = 0; k < d; ++k) out[k] = flip ? Rational(-t[base + k]) : t[base + k];
  return out;
}

RatMatrix curvature_value(const MatrixLieAlgebra& g, const RatVector& t, std::size_t a, std::size_t b) {
  return g.element(curvature_coefficients(CurvatureLayout(g), t, a, b));
}

CurvatureSpace curvature_space(const MatrixLieAlgebra& g) {
  require_metric(g, "curvature_space");
  CurvatureLayout layout(g);
  const std::size_t n = layout.n(), d = layout.algebra_dim();
  auto tri = triples(n);
  // Row block per triple: components i of R(a,b)c + R(b,c)a - R(a,c)b.
  auto m = assemble_blocks(tri.size(), n, layout.size(), [&](std::size_t ti, auto& out) {
    auto [a, b, c] = tri[ti];
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t row = ti * n + i;
      for (std::size_t k = 0; k < d; ++k) {
        const auto& bk = g.basis(k);
        Rational v1 = bk.at(i, c), v2 = bk.at(i, a), v3 = bk.at(i, b);
        if (sgn(v1) != 0) out.push_back({row, layout.index(a, b, k), v1});
        if (sgn(v2) != 0) out.push_back({row, layout.index(b, c, k), v2});
        if (sgn(v3) != 0) out.push_back({row, layout.index(a, c, k), -v3});
      }
    }
  });
  return {g, nullspace(m)};
}

RatMatrix ricci(const MatrixLieAlgebra& g, const RatVector& t) {
  const std::size_t n = g.ambient_dim();
  CurvatureLayout layout(g);
  RatMatrix ric(n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t a = 0; a < n; ++a) {
      if (a == x) continue;
      auto r = g.element(curvature_coefficients(layout, t, a, x));
      for (std::size_t y = 0; y < n; ++y) ric.add_to(x, y, r.at(a, y));
    }
  return ric;
}

RatVector constant_curvature_tensor(const MatrixLieAlgebra& g) {
  require_metric(g, "constant_curvature_tensor");
  const std::size_t n = g.ambient_dim();
  const auto& G = g.metric().gram();
  CurvatureLayout layout(g);
  RatVector t(layout.size());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      RatMatrix r(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        r.add_to(a, i, G.at(b, i));
        r.add_to(b, i, -G.at(a, i));
      }
      auto c = g.coordinates(r);
      if (!c) throw MembershipError("constant_curvature_tensor: value is not in the algebra");
      for (std::size_t k = 0; k < layout.algebra_dim(); ++k) t[layout.index(a, b, k)] = (*c)[k];
    }
  return t;
}

bool satisfies_bianchi(const MatrixLieAlgebra& g, const RatVector& t) {
  const std::size_t n = g.ambient_dim();
  for (auto [a, b, c] : triples(n)) {
    auto s = curvature_value(g, t, a, b).col(c);
    auto s2 = curvature_value(g, t, b, c).col(a);
    auto s3 = curvature_value(g, t, c, a).col(b);
    for (std::size_t i = 0; i < n; ++i)
      if (sgn(s[i] + s2[i] + s3[i]) != 0) return false;
  }
  return true;
}

AffineCurvatureSpace einstein_space(const CurvatureSpace& space) {
  const auto& g = space.algebra;
  auto basis = space.tensors.vectors();
  AffineCurvatureSpace out{g, std::nullopt, SubspaceBasis::zero(space.tensors.ambient_dim())};
  if (basis.empty()) {
    // Only R = 0 is available; Ric = g fails unless the space is zero-dimensional.
    if (g.ambient_dim() == 0) out.particular = RatVector{};
    return out;
  }
  auto m = ricci_matrix(space);
  auto sol = affine_solve(m, g.metric().gram().flatten());
  std::vector<RatVector> dirs;
  for (auto& c : sol.directions.vectors()) dirs.push_back(space.tensors.combine(c));
  out.directions = SubspaceBasis::from_generators(space.tensors.ambient_dim(), dirs);
  if (sol.particular) out.particular = space.tensors.combine(*sol.particular);
  return out;
}

AffineCurvatureSpace einstein_space(const MatrixLieAlgebra& g) { return einstein_space(curvature_space(g)); }

SubspaceBasis l_span(const CurvatureSpace& space) { return images_span(space.algebra, space.tensors.vectors()); }

SubspaceBasis l_span(const AffineCurvatureSpace& space) {
  const std::size_t nn = space.algebra.ambient_dim() * space.algebra.ambient_dim();
  if (space.empty()) return SubspaceBasis::zero(nn);
  auto tensors = space.directions.vectors();
  tensors.push_back(*space.particular);
  return images_span(space.algebra, tensors);
}

// The zero algebra is never counted as Berger.
bool is_berger(const MatrixLieAlgebra& g) {
  return g.dim() > 0 && l_span(curvature_space(g)) == g.span();
}

bool is_einstein_berger(const MatrixLieAlgebra& g) {
  return g.dim() > 0 && l_span(einstein_space(g)) == g.span();
}

SubspaceBasis nabla_space(const CurvatureSpace& space) {
  auto layout = space.layout();
  const std::size_t n = layout.n(), d = layout.algebra_dim(), dr = space.dim();
  if (dr == 0 || n == 0) return SubspaceBasis::zero(n * dr);
  auto values = pair_values(space);  // values[j][pair]
  auto value = [&](std::size_t j, std::size_t a, std::size_t b) -> RatVector {
    if (a < b) return values[j][layout.pair_index(a, b)];
    RatVector v = values[j][layout.pair_index(b, a)];
    for (auto& x : v) x = -x;
    return v;
  };
  auto tri = triples(n);
  if (tri.empty()) return SubspaceBasis::full(n * dr);
  auto m = assemble_blocks(tri.size(), d, n * dr, [&](std::size_t ti, auto& out) {
    auto [x, y, z] = tri[ti];
    for (std::size_t j = 0; j < dr; ++j) {
      auto vyz = value(j, y, z), vzx = value(j, z, x), vxy = value(j, x, y);
      for (std::size_t k = 0; k < d; ++k) {
        std::size_t row = ti * d + k;
        if (sgn(vyz[k]) != 0) out.push_back({row, x * dr + j, vyz[k]});
        if (sgn(vzx[k]) != 0) out.push_back({row, y * dr + j, vzx[k]});
        if (sgn(vxy[k]) != 0) out.push_back({row, z * dr + j, vxy[k]});
      }
    }
  });
  return nullspace(m);
}

bool is_symmetric_berger(const MatrixLieAlgebra& g) {
  auto space = curvature_space(g);
  return g.dim() > 0 && l_span(space) == g.span() && nabla_space(space).dim() == 0;
}

Prolongation prolongation(const MatrixLieAlgebra& g, int k) {
  if (k != 1 && k != 2) throw PreconditionError("prolongation: order must be 1 or 2");
  const std::size_t n = g.ambient_dim(), d = g.dim();
  if (d == 0) return {static_cast<std::size_t>(k), SubspaceBasis::zero(0)};
  // S(e_x) e_y = S(e_y) e_x.
  std::vector<RatMatrix::Triplet> trip;
  std::size_t row = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y, row += n)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < n; ++i) {
          const auto& b = g.basis(j);
          if (sgn(b.at(i, y)) != 0) trip.push_back({row + i, x * d + j, b.at(i, y)});
          if (sgn(b.at(i, x)) != 0) trip.push_back({row + i, y * d + j, -b.at(i, x)});
        }
  auto first = nullspace(RatMatrix::from_triplets(row, n * d, std::move(trip)));
  if (k == 1) return {1, first};
  const std::size_t d1 = first.dim();
  if (d1 == 0) return {2, SubspaceBasis::zero(0)};
  auto p = first.vectors();
  // T(e_x)(e_y) = T(e_y)(e_x) in g-coordinates.
  std::vector<RatMatrix::Triplet> trip2;
  row = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y, row += d)
      for (std::size_t l = 0; l < d1; ++l)
        for (std::size_t c = 0; c < d; ++c) {
          const auto& py = p[l][y * d + c];
          const auto& px = p[l][x * d + c];
          if (sgn(py) != 0) trip2.push_back({row + c, x * d1 + l, py});
          if (sgn(px) != 0) trip2.push_back({row + c, y * d1 + l, -px});
        }
  return {2, nullspace(RatMatrix::from_triplets(row, n * d1, std::move(trip2)))};
}

std::optional<MatrixLieAlgebra> gl_part(const MatrixLieAlgebra& g) {
  if (!g.has_metric() || g.ambient_dim() % 2 != 0) return std::nullopt;
  const std::size_t n = g.ambient_dim() / 2;
  RatMatrix gram(2 * n, 2 * n);
  gram.set_block(0, n, RatMatrix::identity(n));
  gram.set_block(n, 0, RatMatrix::identity(n));
  if (g.metric().gram() != gram) return std::nullopt;
  std::vector<RatMatrix> blocks;
  for (auto& b : g.basis()) {
    auto a = b.block(0, 0, n, n);
    if (!b.block(0, n, n, n).is_zero() || !b.block(n, 0, n, n).is_zero()) return std::nullopt;
    if (b.block(n, n, n, n) != -a.transpose()) return std::nullopt;
    blocks.push_back(a);
  }
  return MatrixLieAlgebra(g.name() + "|gl", n, std::move(blocks), std::nullopt, {.check_closure = false});
}

BlockDiagnostics nn_block_structure(const MatrixLieAlgebra& g, const RatVector& t) {
  auto gl = gl_part(g);
  if (!gl) throw PreconditionError("nn_block_structure: algebra is not in the diagonal gl(n) embedding");
  const std::size_t n = gl->ambient_dim(), d = g.dim();
  CurvatureLayout layout(g);
  BlockDiagnostics out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!is_zero(curvature_coefficients(layout, t, a, b))) out.vv_vanish = false;
      if (!is_zero(curvature_coefficients(layout, t, n + a, n + b))) out.vstar_vanish = false;
    }
  if (!out.vv_vanish || !out.vstar_vanish)
    throw MembershipError("nn_block_structure: R(V,V) or R(V*,V*) does not vanish");
  auto first = prolongation(*gl, 1);
  auto ric = ricci(g, t);
  for (std::size_t y = 0; y < n; ++y) {
    RatVector s(n * d);
    for (std::size_t x = 0; x < n; ++x) {
      auto c = curvature_coefficients(layout, t, x, n + y);
      for (std::size_t j = 0; j < d; ++j) s[x * d + j] = c[j];
      auto trace = gl->element(c).trace();
      if (ric.at(x, n + y) != trace) out.ricci_trace = false;
    }
    if (!first.space.contains(s)) out.in_prolongation = false;
    out.prolongation_coordinates.push_back(std::move(s));
  }
  return out;
}

CurvatureReport analyze(const MatrixLieAlgebra& g) {
  require_metric(g, "analyze");
  CurvatureReport r;
  r.algebra = g.name();
  auto space = curvature_space(g);
  r.dim_R = space.dim();
  auto r1 = einstein_space(space);
  r.dim_R0 = r1.directions.dim();
  r.R1_nonempty = !r1.empty();
  auto lr = l_span(space);
  auto lr1 = l_span(r1);
  r.dim_LR = lr.dim();
  r.dim_LR1 = lr1.dim();
  r.is_berger = g.dim() > 0 && lr == g.span();
  r.is_einstein_berger = g.dim() > 0 && lr1 == g.span();
  r.dim_nabla = nabla_space(space).dim();
  r.is_symmetric_berger = r.is_berger && r.dim_nabla == 0;
  if (auto gl = gl_part(g)) {
    r.dim_prolongation_1 = prolongation(*gl, 1).dim();
    r.dim_prolongation_2 = prolongation(*gl, 2).dim();
  }
  return r;
}

}  // namespace bergerkit
