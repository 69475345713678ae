#include "bergerkit/structure.hpp"

#include <functional>
#include <numeric>

#include "bergerkit/catalog.hpp"
#include "bergerkit/curvature.hpp"
#include "bergerkit/errors.hpp"
#include "bergerkit/linalg.hpp"
#include "bergerkit/parallel.hpp"

namespace bergerkit {

std::size_t StructuredAlgebraSpec::m() const { return std::accumulate(v_dims.begin(), v_dims.end(), std::size_t{0}); }

std::size_t StructuredAlgebraSpec::k() const {
  std::size_t k = 0;
  for (auto& a : h) k += a.ambient_dim();
  return k;
}

std::size_t StructuredAlgebraSpec::v_offset(std::size_t i) const {
  return std::accumulate(v_dims.begin(), v_dims.begin() + static_cast<long>(i), std::size_t{0});
}

std::size_t StructuredAlgebraSpec::l_offset(std::size_t a) const {
  std::size_t off = 0;
  for (std::size_t b = 0; b < a; ++b) off += h[b].ambient_dim();
  return off;
}

DecoratedFrame StructuredAlgebraSpec::frame() const {
  DecoratedFrame fr;
  fr.m = m();
  for (auto& a : h)
    for (std::size_t i = 0; i < a.ambient_dim(); ++i) fr.e_signs.push_back(sgn(a.metric().gram().at(i, i)));
  return fr;
}

SplitSignature StructuredAlgebraSpec::split() const {
  SplitSignature s{m(), 0, 0};
  for (int e : frame().e_signs) (e > 0 ? s.r : s.s) += 1;
  return s;
}

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }
std::string idx(std::size_t i, std::size_t j) { return idx(i) + "," + idx(j); }

const SubspaceBasis* lookup(const std::map<StructuredAlgebraSpec::Key, SubspaceBasis>& m, std::size_t i,
                            std::size_t j) {
  auto it = m.find({i, j});
  return it == m.end() ? nullptr : &it->second;
}

bool in_block(const SubspaceBasis* s, const RatMatrix& blk) {
  if (blk.is_zero()) return true;
  return s != nullptr && s->contains(blk.flatten());
}

struct Generator {
  std::string label;
  DecoratedElement element;
};

std::vector<Generator> generators(const StructuredAlgebraSpec& spec) {
  const std::size_t m = spec.m(), k = spec.k();
  std::vector<Generator> out;
  auto unit = [&] { return DecoratedElement::zero(m, k); };
  for (std::size_t i = 0; i < spec.f.size(); ++i)
    for (auto& b : spec.f[i].basis()) {
      auto e = unit();
      e.B.set_block(spec.v_offset(i), spec.v_offset(i), b);
      out.push_back({"f_" + idx(i), e});
    }
  for (auto& [key, sub] : spec.f_off) {
    auto [i, j] = key;
    for (auto& v : sub.vectors()) {
      auto e = unit();
      e.B.set_block(spec.v_offset(i), spec.v_offset(j), RatMatrix::unflatten(v, spec.v_dims[i], spec.v_dims[j]));
      out.push_back({"f_" + idx(i, j), e});
    }
  }
  for (std::size_t a = 0; a < spec.h.size(); ++a)
    for (auto& b : spec.h[a].basis()) {
      auto e = unit();
      e.A.set_block(spec.l_offset(a), spec.l_offset(a), b);
      out.push_back({"h_" + idx(a), e});
    }
  for (auto& [key, sub] : spec.n_blocks) {
    auto [i, a] = key;
    for (auto& v : sub.vectors()) {
      auto e = unit();
      e.X.set_block(spec.l_offset(a), spec.v_offset(i), RatMatrix::unflatten(v, spec.l_dim(a), spec.v_dims[i]));
      out.push_back({"N_" + idx(i, a), e});
    }
  }
  for (auto& [key, sub] : spec.c_blocks) {
    auto [i, j] = key;
    for (auto& v : sub.vectors()) {
      auto e = unit();
      auto blk = RatMatrix::unflatten(v, spec.v_dims[i], spec.v_dims[j]);
      e.C.set_block(spec.v_offset(i), spec.v_offset(j), blk);
      if (i != j) e.C.set_block(spec.v_offset(j), spec.v_offset(i), -blk.transpose());
      out.push_back({"C_" + idx(i, j), e});
    }
  }
  return out;
}

// Label of the first block of d lying outside the spec, if any.
std::optional<std::string> first_violation(const StructuredAlgebraSpec& spec, const DecoratedElement& d) {
  const std::size_t kv = spec.v_dims.size(), kl = spec.h.size();
  for (std::size_t i = 0; i < kv; ++i)
    for (std::size_t j = 0; j < kv; ++j) {
      auto blk = d.B.block(spec.v_offset(i), spec.v_offset(j), spec.v_dims[i], spec.v_dims[j]);
      if (i == j) {
        if (!spec.f[i].contains(blk)) return "f_" + idx(i);
      } else if (i < j) {
        if (!in_block(lookup(spec.f_off, i, j), blk)) return "f_" + idx(i, j);
      } else if (!blk.is_zero()) {
        return "the zero gl block (" + idx(i, j) + ")";
      }
    }
  for (std::size_t a = 0; a < kl; ++a)
    for (std::size_t b = 0; b < kl; ++b) {
      auto blk = d.A.block(spec.l_offset(a), spec.l_offset(b), spec.l_dim(a), spec.l_dim(b));
      if (a == b) {
        if (!spec.h[a].contains(blk)) return "h_" + idx(a);
      } else if (!blk.is_zero()) {
        return "the zero so block (" + idx(a, b) + ")";
      }
    }
  for (std::size_t i = 0; i < kv; ++i)
    for (std::size_t a = 0; a < kl; ++a) {
      auto blk = d.X.block(spec.l_offset(a), spec.v_offset(i), spec.l_dim(a), spec.v_dims[i]);
      if (!in_block(lookup(spec.n_blocks, i, a), blk)) return "N_" + idx(i, a);
    }
  for (std::size_t i = 0; i < kv; ++i)
    for (std::size_t j = i; j < kv; ++j) {
      auto blk = d.C.block(spec.v_offset(i), spec.v_offset(j), spec.v_dims[i], spec.v_dims[j]);
      if (!in_block(lookup(spec.c_blocks, i, j), blk)) return "C_" + idx(i, j);
    }
  return std::nullopt;
}

SubspaceBasis flat_span(std::size_t dim, const std::vector<RatMatrix>& mats) {
  std::vector<RatVector> v;
  for (auto& x : mats) v.push_back(x.flatten());
  return SubspaceBasis::from_generators(dim, v);
}

MatrixLieAlgebra gl_algebra(std::size_t n) {
  std::vector<RatMatrix> basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RatMatrix e(n, n);
      e.set(i, j, 1);
      basis.push_back(e);
    }
  return MatrixLieAlgebra("gl(" + std::to_string(n) + ",R)", n, basis);
}

MatrixLieAlgebra glc1() {
  return MatrixLieAlgebra("gl(1,C)", 2, {RatMatrix::identity(2), RatMatrix::from_rows({{0, -1}, {1, 0}})});
}

SubspaceBasis wedge2(std::size_t m) {
  std::vector<RatVector> gens;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      RatMatrix c(m, m);
      c.set(i, j, 1);
      c.set(j, i, -1);
      gens.push_back(c.flatten());
    }
  return SubspaceBasis::from_generators(m * m, gens);
}

struct Factor {
  std::string id;
  MatrixLieAlgebra algebra;  // on a negative definite block
  std::optional<RatMatrix> complex_structure;
};

std::vector<Factor> parse_factors(std::size_t n, const std::vector<std::string>& ids) {
  std::vector<Factor> out;
  std::size_t total = 0;
  for (auto& id : ids) {
    const auto& entry = catalog_entry(id);
    if (!(id.rfind("so:", 0) == 0 || id.rfind("u:", 0) == 0) || !entry.in_einstein_list || entry.experimental)
      throw PreconditionError("invalid holonomy factor '" + id + "': expected an so:n or u:n Einstein factor");
    auto g = catalog(id);
    if (g.metric().signature().q != 0) throw PreconditionError("invalid holonomy factor '" + id + "': not Riemannian");
    if (g.dim() == 0 || !is_irreducible(g.basis(), g.ambient_dim()))
      throw PreconditionError("invalid holonomy factor '" + id + "': not a non-zero irreducible holonomy algebra");
    MatrixLieAlgebra neg(id, g.ambient_dim(), g.basis(), QuadraticSpace(-g.metric().gram()));
    auto j = complex_structure(neg);
    out.push_back({id, std::move(neg), std::move(j)});
    total += g.ambient_dim();
  }
  if (total != n)
    throw PreconditionError("invalid holonomy factors: dimensions add up to " + std::to_string(total) + ", expected " +
                            std::to_string(n));
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

StructuredAlgebraSpec m2_base(const std::vector<Factor>& factors, std::string name) {
  StructuredAlgebraSpec s;
  s.name = std::move(name);
  for (auto& f : factors) s.h.push_back(f.algebra);
  return s;
}

// +1 and -1 eigenspaces of X -> J X J0^t on k x 2 matrices.
std::pair<SubspaceBasis, SubspaceBasis> complex_halves(const RatMatrix& j, std::size_t k) {
  const auto j0t = RatMatrix::from_rows({{0, -1}, {1, 0}}).transpose();
  std::vector<RatVector> cols;
  for (std::size_t e = 0; e < 2 * k; ++e) {
    RatMatrix x(k, 2);
    x.set(e / 2, e % 2, 1);
    cols.push_back((j * x * j0t).flatten());
  }
  auto phi = RatMatrix::from_columns(cols, 2 * k);
  auto id = RatMatrix::identity(2 * k);
  return {nullspace(phi - id), nullspace(phi + id)};
}

}  // namespace

void check_shapes(const StructuredAlgebraSpec& spec) {
  if (spec.v_dims.empty()) throw PreconditionError("spec: no V blocks");
  if (spec.f.size() != spec.v_dims.size()) throw DimensionError("spec: one f_i is needed per V block");
  for (std::size_t i = 0; i < spec.f.size(); ++i) {
    if (spec.v_dims[i] == 0) throw PreconditionError("spec: V_" + idx(i) + " is zero");
    if (spec.f[i].ambient_dim() != spec.v_dims[i]) throw DimensionError("spec: f_" + idx(i) + " acts on the wrong space");
  }
  for (std::size_t a = 0; a < spec.h.size(); ++a) {
    if (!spec.h[a].has_metric()) throw PreconditionError("spec: h_" + idx(a) + " has no metric");
    const auto& g = spec.h[a].metric().gram();
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j)
        if (i == j ? (g.at(i, i) != 1 && g.at(i, i) != -1) : sgn(g.at(i, j)) != 0)
          throw PreconditionError("spec: metric of L_" + idx(a) + " is not diagonal with entries +-1");
  }
  auto check_map = [&](const std::map<StructuredAlgebraSpec::Key, SubspaceBasis>& m, const char* what, bool upper,
                       auto rows, auto cols, std::size_t first_limit, std::size_t second_limit) {
    for (auto& [key, sub] : m) {
      auto [i, j] = key;
      if (i >= first_limit || j >= second_limit || (upper && i > j))
        throw PreconditionError(std::string("spec: bad index for ") + what);
      if (sub.ambient_dim() != rows(i, j) * cols(i, j))
        throw DimensionError(std::string("spec: ") + what + "_" + idx(i, j) + " lives in the wrong space");
    }
  };
  const auto kv = spec.v_dims.size(), kl = spec.h.size();
  check_map(spec.f_off, "f", true, [&](auto i, auto) { return spec.v_dims[i]; },
            [&](auto, auto j) { return spec.v_dims[j]; }, kv, kv);
  for (auto& [key, sub] : spec.f_off)
    if (key.first == key.second) throw PreconditionError("spec: f_off needs i < j");
  check_map(spec.n_blocks, "N", false, [&](auto, auto a) { return spec.l_dim(a); },
            [&](auto i, auto) { return spec.v_dims[i]; }, kv, kl);
  check_map(spec.c_blocks, "C", true, [&](auto i, auto) { return spec.v_dims[i]; },
            [&](auto, auto j) { return spec.v_dims[j]; }, kv, kv);
  for (auto& [key, sub] : spec.c_blocks)
    if (key.first == key.second)
      for (auto& v : sub.vectors()) {
        auto c = RatMatrix::unflatten(v, spec.v_dims[key.first], spec.v_dims[key.first]);
        if (c.transpose() != -c) throw PreconditionError("spec: C_" + idx(key.first, key.first) + " is not skew");
      }
}

std::vector<std::string> theorem_violations(const StructuredAlgebraSpec& spec) {
  check_shapes(spec);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < spec.f.size(); ++i)
    if (!is_irreducible(spec.f[i].basis(), spec.v_dims[i])) out.push_back("f_" + idx(i) + " is not irreducible");
  for (std::size_t a = 0; a < spec.h.size(); ++a)
    if (is_weakly_irreducible(spec.h[a]) == Verdict::no) out.push_back("h_" + idx(a) + " is not weakly irreducible");
  for (std::size_t i = 0; i < spec.v_dims.size() && !spec.h.empty(); ++i) {
    bool any = false;
    for (std::size_t a = 0; a < spec.h.size(); ++a) {
      auto s = lookup(spec.n_blocks, i, a);
      any = any || (s && s->dim() > 0);
    }
    if (!any) out.push_back("N_" + idx(i) + ",* is zero for every L block");
  }
  return out;
}

MatrixLieAlgebra assemble(const StructuredAlgebraSpec& spec) {
  check_shapes(spec);
  const auto frame = spec.frame();
  auto gens = generators(spec);
  std::vector<RatMatrix> basis;
  for (auto& g : gens) basis.push_back(assemble(g.element, frame));
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b) {
      auto br = bracket(basis[a], basis[b]);
      if (br.is_zero()) continue;
      if (auto bad = first_violation(spec, decorated_project(br, frame)))
        throw ClosureError("closure: [" + gens[a].label + ", " + gens[b].label + "] has a component outside " + *bad +
                           "; witness " + matrix_to_json(br).dump());
    }
  return MatrixLieAlgebra(spec.name, frame.n(), std::move(basis), QuadraticSpace(frame.gram()),
                          MatrixLieAlgebra::Options{false});
}

BlockProjection project_blocks(const MatrixLieAlgebra& g, const DecoratedFrame& frame) {
  const std::size_t m = frame.m, k = frame.k(), n = frame.n();
  std::vector<RatMatrix> gl, so, ndir, cdir;
  for (auto& b : g.basis()) {
    auto d = decorated_project(b, frame);
    gl.push_back(d.B);
    so.push_back(d.A);
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t i = 0; i < m; ++i) {
      auto e = DecoratedElement::zero(m, k);
      e.X.set(a, i, 1);
      ndir.push_back(assemble(e, frame));
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      auto e = DecoratedElement::zero(m, k);
      e.C.set(i, j, 1);
      e.C.set(j, i, -1);
      cdir.push_back(assemble(e, frame));
    }
  auto nspace = flat_span(n * n, ndir), cspace = flat_span(n * n, cdir);
  return {flat_span(m * m, gl), flat_span(k * k, so), intersect(g.span(), nspace), intersect(g.span(), cspace),
          intersect(g.span(), span_union(nspace, cspace))};
}

BlockProjection expected_blocks(const StructuredAlgebraSpec& spec) {
  const auto frame = spec.frame();
  const std::size_t m = frame.m, k = frame.k(), n = frame.n();
  std::vector<RatMatrix> gl, so, nm, cm;
  for (auto& g : generators(spec)) {
    if (!g.element.B.is_zero()) gl.push_back(g.element.B);
    if (!g.element.A.is_zero()) so.push_back(g.element.A);
    if (g.label[0] == 'N') nm.push_back(assemble(g.element, frame));
    if (g.label[0] == 'C') cm.push_back(assemble(g.element, frame));
  }
  auto ns = flat_span(n * n, nm), cs = flat_span(n * n, cm);
  return {flat_span(m * m, gl), flat_span(k * k, so), ns, cs, span_union(ns, cs)};
}

std::vector<Index2Instance> enumerate_index2(std::size_t n, const std::vector<std::string>& ids) {
  auto factors = parse_factors(n, ids);
  const std::size_t t = factors.size();
  const std::string hs = ids.empty() ? "0" : join(ids);
  std::vector<Index2Instance> out;
  if (n == 0) {
    StructuredAlgebraSpec s6;
    s6.name = "family6";
    s6.v_dims = {2};
    s6.f = {gl_algebra(2)};
    out.push_back({6, "gl(2,R) in so(2,2)", s6});
    StructuredAlgebraSpec s7;
    s7.name = "family7";
    s7.v_dims = {2};
    s7.f = {glc1()};
    out.push_back({7, "gl(1,C) in so(2,2)", s7});
    return out;
  }

  // 1) m = 1: a subset of the factors is absorbed into so(1, l+1).
  for (std::size_t mask = 0; mask < (std::size_t{1} << t); ++mask) {
    std::size_t l = 0;
    std::vector<std::string> kept;
    for (std::size_t a = 0; a < t; ++a) {
      if (mask >> a & 1)
        l += factors[a].algebra.ambient_dim();
      else
        kept.push_back(factors[a].id);
    }
    StructuredAlgebraSpec s;
    s.v_dims = {1};
    s.f = {gl_algebra(1)};
    s.h.push_back(catalog("so:1," + std::to_string(l + 1)));
    for (std::size_t a = 0; a < t; ++a)
      if (!(mask >> a & 1)) s.h.push_back(factors[a].algebra);
    for (std::size_t a = 0; a < s.h.size(); ++a) s.n_blocks[{0, a}] = SubspaceBasis::full(s.l_dim(a));
    std::string label = "so(1," + std::to_string(l + 1) + ")" + (kept.empty() ? "" : "+" + join(kept));
    if (t > 1 && mask != 0 && !kept.empty()) {
      std::vector<std::string> pos;
      for (std::size_t a = 0; a < t; ++a)
        if (mask >> a & 1) pos.push_back(std::to_string(a + 1));
      label += ";absorbed=" + join(pos);
    }
    s.name = "family1[" + label + "]";
    out.push_back({1, label, s});
  }

  // 2) gl(2,R), full N and C.
  {
    auto s = m2_base(factors, "family2[" + hs + "]");
    s.v_dims = {2};
    s.f = {gl_algebra(2)};
    for (std::size_t a = 0; a < t; ++a) s.n_blocks[{0, a}] = SubspaceBasis::full(2 * s.l_dim(a));
    s.c_blocks[{0, 0}] = wedge2(2);
    out.push_back({2, "gl(2,R), N full", s});
  }

  // 3) gl(1,C); N_a full, or L_a / conj(L_a) when h_a has a complex structure.
  {
    std::vector<std::vector<std::pair<std::string, SubspaceBasis>>> options(t);
    for (std::size_t a = 0; a < t; ++a) {
      const std::size_t k = factors[a].algebra.ambient_dim();
      options[a].push_back({"full", SubspaceBasis::full(2 * k)});
      if (factors[a].complex_structure) {
        auto [plus, minus] = complex_halves(*factors[a].complex_structure, k);
        options[a].push_back({"L", plus});
        options[a].push_back({"Lbar", minus});
      }
    }
    std::vector<std::size_t> choice(t, 0);
    while (true) {
      auto s = m2_base(factors, "");
      s.v_dims = {2};
      s.f = {glc1()};
      std::vector<std::string> parts;
      for (std::size_t a = 0; a < t; ++a) {
        s.n_blocks[{0, a}] = options[a][choice[a]].second;
        parts.push_back("N" + idx(a) + "=" + options[a][choice[a]].first);
      }
      s.c_blocks[{0, 0}] = wedge2(2);
      s.name = "family3[" + hs + ";" + join(parts) + "]";
      out.push_back({3, "gl(1,C), " + join(parts), s});
      std::size_t a = 0;
      while (a < t && ++choice[a] == options[a].size()) choice[a++] = 0;
      if (a == t) break;
    }
  }

  // 4) gl(1,R) + gl(1,R); per factor (L,0), (0,L) or (L,L); C = wedge^2.
  {
    std::vector<std::size_t> choice(t, 0);
    const char* names[] = {"(L,0)", "(0,L)", "(L,L)"};
    while (true) {
      auto s = m2_base(factors, "");
      s.v_dims = {1, 1};
      s.f = {gl_algebra(1), gl_algebra(1)};
      std::vector<std::string> parts;
      for (std::size_t a = 0; a < t; ++a) {
        auto full = SubspaceBasis::full(s.l_dim(a));
        if (choice[a] != 1) s.n_blocks[{0, a}] = full;
        if (choice[a] != 0) s.n_blocks[{1, a}] = full;
        parts.push_back(std::string("N") + idx(a) + "=" + names[choice[a]]);
      }
      s.c_blocks[{0, 1}] = SubspaceBasis::full(1);
      s.name = "family4[" + hs + ";" + join(parts) + "]";
      out.push_back({4, "gl(1,R)+gl(1,R), " + join(parts), s});
      std::size_t a = 0;
      while (a < t && ++choice[a] == 3) choice[a++] = 0;
      if (a == t) break;
    }
  }

  // 5) upper triangular f; N_1a = L_a, N_2a in {L_a, 0}; C = wedge^2.
  for (std::size_t mask = 0; mask < (std::size_t{1} << t); ++mask) {
    auto s = m2_base(factors, "");
    s.v_dims = {1, 1};
    s.f = {gl_algebra(1), gl_algebra(1)};
    s.f_off[{0, 1}] = SubspaceBasis::full(1);
    std::vector<std::string> parts;
    for (std::size_t a = 0; a < t; ++a) {
      auto full = SubspaceBasis::full(s.l_dim(a));
      s.n_blocks[{0, a}] = full;
      if (mask >> a & 1) s.n_blocks[{1, a}] = full;
      parts.push_back("N" + idx(a) + (mask >> a & 1 ? "=(L,L)" : "=(L,0)"));
    }
    s.c_blocks[{0, 1}] = SubspaceBasis::full(1);
    s.name = "family5[" + hs + ";" + join(parts) + "]";
    out.push_back({5, "upper triangular f, " + join(parts), s});
  }
  return out;
}

CandidateReport validate_einstein_candidate(const StructuredAlgebraSpec& spec) {
  CandidateReport r;
  r.name = spec.name;
  r.violations = theorem_violations(spec);
  std::optional<MatrixLieAlgebra> g;
  try {
    g = assemble(spec);
  } catch (const ClosureError& e) {
    r.closure_error = e.what();
    return r;
  }
  r.assembled = true;
  r.dim = g->dim();
  auto r1 = einstein_space(*g);
  r.R1_nonempty = !r1.empty();
  r.LR1_equals_g = l_span(r1) == g->span();
  auto weak = weak_irreducibility(*g);
  r.weakly_irreducible = weak.verdict;
  r.weak_reason = weak.reason;
  auto got = project_blocks(*g, spec.frame());
  auto want = expected_blocks(spec);
  r.projection_decomposes = got.so_part == want.so_part && got.gl_part == want.gl_part;
  return r;
}

namespace {

Json blocks_to_json(const std::map<StructuredAlgebraSpec::Key, SubspaceBasis>& m, const char* second,
                    const std::function<std::pair<std::size_t, std::size_t>(std::size_t, std::size_t)>& shape) {
  Json arr = Json::array();
  for (auto& [key, sub] : m) {
    auto [r, c] = shape(key.first, key.second);
    Json basis = Json::array();
    for (auto& v : sub.vectors()) basis.push_back(matrix_to_json(RatMatrix::unflatten(v, r, c)));
    arr.push_back({{"i", key.first}, {second, key.second}, {"basis", basis}});
  }
  return arr;
}

void blocks_from_json(const Json& j, const char* key, const char* second,
                      std::map<StructuredAlgebraSpec::Key, SubspaceBasis>& out,
                      const std::function<std::pair<std::size_t, std::size_t>(std::size_t, std::size_t)>& shape) {
  if (!j.contains(key)) return;
  for (auto& e : j.at(key)) {
    const std::size_t a = e.at("i").get<std::size_t>(), b = e.at(second).get<std::size_t>();
    auto [r, c] = shape(a, b);
    std::vector<RatVector> gens;
    for (auto& mj : e.at("basis")) {
      auto mat = matrix_from_json(mj);
      if (mat.rows() != r || mat.cols() != c) throw DimensionError(std::string("json: ") + key + " block has the wrong shape");
      gens.push_back(mat.flatten());
    }
    out[{a, b}] = SubspaceBasis::from_generators(r * c, gens);
  }
}

}  // namespace

Json spec_to_json(const StructuredAlgebraSpec& spec) {
  Json j{{"name", spec.name}, {"v_dims", spec.v_dims}};
  j["f"] = Json::array();
  for (auto& f : spec.f) j["f"].push_back(algebra_to_json(f));
  j["h"] = Json::array();
  for (auto& h : spec.h) j["h"].push_back(algebra_to_json(h));
  auto vv = [&](std::size_t i, std::size_t k) { return std::pair{spec.v_dims[i], spec.v_dims[k]}; };
  j["f_off"] = blocks_to_json(spec.f_off, "j", vv);
  j["n_blocks"] = blocks_to_json(spec.n_blocks, "alpha", [&](std::size_t i, std::size_t a) {
    return std::pair{spec.l_dim(a), spec.v_dims[i]};
  });
  j["c_blocks"] = blocks_to_json(spec.c_blocks, "j", vv);
  return j;
}

StructuredAlgebraSpec spec_from_json(const Json& j) {
  StructuredAlgebraSpec s;
  try {
    s.name = j.value("name", std::string("g"));
    s.v_dims = j.at("v_dims").get<std::vector<std::size_t>>();
    for (auto& f : j.at("f")) s.f.push_back(algebra_from_json(f));
    if (j.contains("h"))
      for (auto& h : j.at("h")) s.h.push_back(algebra_from_json(h));
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("json: bad spec: ") + e.what());
  }
  auto check_v = [&](std::size_t i) {
    if (i >= s.v_dims.size()) throw PreconditionError("json: V index out of range");
  };
  auto check_l = [&](std::size_t a) {
    if (a >= s.h.size()) throw PreconditionError("json: L index out of range");
  };
  auto vv = [&](std::size_t i, std::size_t k) {
    check_v(i);
    check_v(k);
    return std::pair{s.v_dims[i], s.v_dims[k]};
  };
  blocks_from_json(j, "f_off", "j", s.f_off, vv);
  blocks_from_json(j, "n_blocks", "alpha", s.n_blocks, [&](std::size_t i, std::size_t a) {
    check_v(i);
    check_l(a);
    return std::pair{s.l_dim(a), s.v_dims[i]};
  });
  blocks_from_json(j, "c_blocks", "j", s.c_blocks, vv);
  check_shapes(s);
  return s;
}

Json candidate_to_json(const CandidateReport& r) {
  Json j{{"name", r.name},
         {"assembled", r.assembled},
         {"dim", r.dim},
         {"violations", r.violations},
         {"R1_nonempty", r.R1_nonempty},
         {"LR1_equals_g", r.LR1_equals_g},
         {"weakly_irreducible", to_string(r.weakly_irreducible)},
         {"weak_reason", r.weak_reason},
         {"projection_decomposes", r.projection_decomposes},
         {"all_hold", r.all_hold()}};
  if (!r.closure_error.empty()) j["closure_error"] = r.closure_error;
  return j;
}

}  // namespace bergerkit
