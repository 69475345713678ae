#include "bergerkit/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <optional>

#include "bergerkit/errors.hpp"
#include "bergerkit/linalg.hpp"

namespace bergerkit {

namespace {

// Flattened subspaces of gl(N) cut out by linear conditions.

SubspaceBasis solve_gl(std::size_t n, const std::function<RatMatrix(const RatMatrix&)>& op) {
  // Nullspace of the linear map A |-> op(A), evaluated on unit matrices.
  const std::size_t nn = n * n;
  std::vector<RatMatrix::Triplet> trip;
  std::size_t out_len = 0;
  for (std::size_t u = 0; u < nn; ++u) {
    RatMatrix unit(n, n, RatMatrix::Storage::sparse);
    unit.set(u / n, u % n, 1);
    auto img = op(unit).flatten();
    out_len = img.size();
    for (std::size_t e = 0; e < img.size(); ++e)
      if (sgn(img[e]) != 0) trip.push_back({e, u, img[e]});
  }
  return nullspace(RatMatrix::from_triplets(out_len, nn, std::move(trip)));
}

SubspaceBasis preserving(const RatMatrix& form) {
  return solve_gl(form.rows(), [&](const RatMatrix& a) {
    auto fa = form * a;
    return RatMatrix(a.transpose() * form + fa);
  });
}

SubspaceBasis commuting(const std::vector<RatMatrix>& mats) {
  const std::size_t n = mats.front().rows();
  return solve_gl(n, [&](const RatMatrix& a) {
    RatMatrix out(n * mats.size(), n);
    for (std::size_t i = 0; i < mats.size(); ++i) out.set_block(i * n, 0, commutator(a, mats[i]));
    return out;
  });
}

// {A : tr(F A) = 0}.
SubspaceBasis trace_free_against(const RatMatrix& f) {
  return nullspace(RatMatrix::from_rows({f.transpose().flatten()}, f.rows() * f.rows()));
}

RatMatrix diag_gram(std::size_t p, std::size_t q) {
  return standard_space({p, q}).gram();
}

RatMatrix block_diag(const std::vector<RatMatrix>& blocks) {
  std::size_t n = 0;
  for (auto& b : blocks) n += b.rows();
  RatMatrix out(n, n);
  std::size_t o = 0;
  for (auto& b : blocks) {
    out.set_block(o, o, b);
    o += b.rows();
  }
  return out;
}

RatMatrix repeat_block(const RatMatrix& b, std::size_t times) {
  return block_diag(std::vector<RatMatrix>(times, b));
}

RatMatrix kron(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (sgn(a.at(i, j)) == 0) continue;
      out.set_block(i * b.rows(), j * b.cols(), b * a.at(i, j));
    }
  return out;
}

std::vector<RatMatrix> unflatten_all(const SubspaceBasis& s, std::size_t n) {
  std::vector<RatMatrix> out;
  for (auto& v : s.vectors()) out.push_back(RatMatrix::unflatten(v, n, n).compacted());
  return out;
}

MatrixLieAlgebra algebra_from(std::string name, const SubspaceBasis& span, const RatMatrix& gram) {
  const std::size_t n = gram.rows();
  return MatrixLieAlgebra::from_span(std::move(name), n, span, QuadraticSpace(gram));
}

RatMatrix complex_structure(std::size_t pairs) {
  return repeat_block(RatMatrix::from_rows({{0, -1}, {1, 0}}), pairs);
}

// Left multiplication by i and j on H = R^4 with basis 1, i, j, k.
RatMatrix quat_left_i() {
  return RatMatrix::from_rows({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}});
}
RatMatrix quat_left_j() {
  return RatMatrix::from_rows({{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}});
}

std::vector<RatMatrix> gl_basis(std::size_t n) {
  std::vector<RatMatrix> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RatMatrix e(n, n, RatMatrix::Storage::sparse);
      e.set(i, j, 1);
      out.push_back(e);
    }
  return out;
}

std::vector<RatMatrix> sl_basis(std::size_t n) {
  return unflatten_all(trace_free_against(RatMatrix::identity(n)), n);
}

std::vector<RatMatrix> sp_real_basis(std::size_t m) {
  return unflatten_all(preserving(symplectic_form(m)), 2 * m);
}

// Stabilizer in gl(n) of an alternating form given by its nonzero components
// on increasing index tuples.
SubspaceBasis form_stabilizer(std::size_t n, const std::map<std::vector<std::size_t>, int>& form) {
  const std::size_t deg = form.begin()->first.size();
  // Full antisymmetric component lookup.
  auto component = [&](std::vector<std::size_t> idx) -> int {
    int sign = 1;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        if (idx[a] == idx[b]) return 0;
        if (idx[a] > idx[b]) sign = -sign;
      }
    std::sort(idx.begin(), idx.end());
    auto it = form.find(idx);
    return it == form.end() ? 0 : sign * it->second;
  };
  // All increasing tuples of length deg.
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == deg) {
      tuples.push_back(cur);
      return;
    }
    for (std::size_t v = start; v < n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
  // (A.w)(e_t) = sum_slot sum_a A_{a, t_slot} w(..., e_a, ...)
  std::vector<RatMatrix::Triplet> trip;
  for (std::size_t row = 0; row < tuples.size(); ++row) {
    std::map<std::size_t, int> coeffs;
    for (std::size_t slot = 0; slot < deg; ++slot)
      for (std::size_t a = 0; a < n; ++a) {
        auto idx = tuples[row];
        std::size_t t = idx[slot];
        idx[slot] = a;
        int c = component(idx);
        if (c != 0) coeffs[a * n + t] += c;
      }
    for (auto& [u, c] : coeffs)
      if (c != 0) trip.push_back({row, u, c});
  }
  return nullspace(RatMatrix::from_triplets(tuples.size(), n * n, std::move(trip)));
}

std::map<std::vector<std::size_t>, int> g2_form() {
  // e123 + e145 + e167 + e246 - e257 - e347 - e356, indices shifted to 0.
  return {{{0, 1, 2}, 1}, {{0, 3, 4}, 1}, {{0, 5, 6}, 1}, {{1, 3, 5}, 1},
          {{1, 4, 6}, -1}, {{2, 3, 6}, -1}, {{2, 4, 5}, -1}};
}

std::map<std::vector<std::size_t>, int> cayley_form() {
  // e0 ^ phi + *phi on R^8, phi on coordinates 1..7.
  std::map<std::vector<std::size_t>, int> out;
  for (auto& [idx, c] : g2_form()) {
    std::vector<std::size_t> t{0};
    for (auto i : idx) t.push_back(i + 1);
    out[t] = c;
  }
  const std::vector<std::pair<std::vector<std::size_t>, int>> star{
      {{4, 5, 6, 7}, 1}, {{2, 3, 6, 7}, 1}, {{2, 3, 4, 5}, 1}, {{1, 3, 5, 7}, 1},
      {{1, 3, 4, 6}, -1}, {{1, 2, 5, 6}, -1}, {{1, 2, 4, 7}, -1}};
  for (auto& [idx, c] : star) out[idx] = c;
  return out;
}

// Parsing.

struct Id {
  std::string family;
  std::vector<std::string> fields;  // colon-separated after the family
  std::optional<std::pair<std::size_t, std::size_t>> at_so;  // "@so(a,b)"
};

std::size_t parse_count(const std::string& s, const std::string& id) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    throw PreconditionError("catalog: bad parameter '" + s + "' in " + id);
  return v;
}

std::vector<std::size_t> parse_counts(const std::string& s, const std::string& id) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    out.push_back(parse_count(s.substr(start, comma - start), id));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Id parse_id(const std::string& id) {
  Id out;
  std::string body = id;
  auto at = body.find('@');
  if (at != std::string::npos) {
    std::string suffix = body.substr(at + 1);
    body = body.substr(0, at);
    if (suffix.size() < 5 || suffix.rfind("so(", 0) != 0 || suffix.back() != ')')
      throw PreconditionError("catalog: bad ambient suffix in " + id);
    auto counts = parse_counts(suffix.substr(3, suffix.size() - 4), id);
    if (counts.size() != 2) throw PreconditionError("catalog: bad ambient suffix in " + id);
    out.at_so = std::make_pair(counts[0], counts[1]);
  }
  std::size_t start = 0;
  bool first = true;
  while (true) {
    auto colon = body.find(':', start);
    auto part = body.substr(start, colon - start);
    if (first) out.family = part;
    else out.fields.push_back(part);
    first = false;
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  return out;
}

// (r, s) from "n" or "r,s".
std::pair<std::size_t, std::size_t> signature_param(const Id& p, const std::string& id) {
  if (p.fields.size() != 1) throw PreconditionError("catalog: expected one parameter group in " + id);
  auto c = parse_counts(p.fields[0], id);
  if (c.size() == 1) return {c[0], 0};
  if (c.size() == 2) return {c[0], c[1]};
  throw PreconditionError("catalog: expected n or p,q in " + id);
}

std::string sig_name(const std::string& fam, std::size_t a, std::size_t b) {
  return fam + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError("catalog: " + what);
}

MatrixLieAlgebra build_so(std::size_t p, std::size_t q) {
  require(p + q >= 1, "so needs p + q >= 1");
  return orthogonal_algebra(standard_space({p, q}), q == 0 ? "so(" + std::to_string(p) + ")" : sig_name("so", p, q));
}

MatrixLieAlgebra build_so_c(std::size_t p) {
  require(p >= 1, "so_c needs p >= 1");
  auto so = orthogonal_algebra(standard_space({p, 0})).basis();
  auto gram = complexify_form(RatMatrix::identity(p));
  return MatrixLieAlgebra("so(" + std::to_string(p) + ",C)", 2 * p, complexify(so), QuadraticSpace(gram));
}

SubspaceBasis u_span(std::size_t r, std::size_t s) {
  auto gram = diag_gram(2 * r, 2 * s);
  auto so = orthogonal_algebra(QuadraticSpace(gram));
  return intersect(so.span(), commuting({complex_structure(r + s)}));
}

MatrixLieAlgebra build_u(std::size_t r, std::size_t s, bool special) {
  require(r + s >= 1, "u needs r + s >= 1");
  auto span = u_span(r, s);
  auto J = complex_structure(r + s);
  if (special) span = intersect(span, trace_free_against(J));
  std::string name = s == 0 ? std::string(special ? "su" : "u") + "(" + std::to_string(r) + ")"
                            : sig_name(special ? "su" : "u", r, s);
  return algebra_from(name, span, diag_gram(2 * r, 2 * s));
}

SubspaceBasis sp_quat_span(std::size_t r, std::size_t s) {
  auto gram = diag_gram(4 * r, 4 * s);
  auto so = orthogonal_algebra(QuadraticSpace(gram));
  const std::size_t k = r + s;
  return intersect(so.span(), commuting({repeat_block(quat_left_i(), k), repeat_block(quat_left_j(), k)}));
}

MatrixLieAlgebra build_sp_quat(std::size_t r, std::size_t s, bool with_sp1) {
  require(r + s >= 1, "sp needs r + s >= 1");
  const std::size_t k = r + s;
  auto span = sp_quat_span(r, s);
  if (with_sp1) {
    auto li = repeat_block(quat_left_i(), k), lj = repeat_block(quat_left_j(), k);
    span = span_union(span, matrix_span(4 * k, {li, lj, li * lj}));
  }
  std::string base = s == 0 ? "sp(" + std::to_string(r) + ")" : sig_name("sp", r, s);
  return algebra_from(with_sp1 ? base + "+sp(1)" : base, span, diag_gram(4 * r, 4 * s));
}

MatrixLieAlgebra build_sp_sl2(std::size_t r, bool complex) {
  require(r >= 1, "sp_sl2 needs r >= 1");
  const std::size_t n = 4 * r;
  auto gram = kron(symplectic_form(r), symplectic_form(1));
  std::vector<RatMatrix> basis;
  for (auto& a : sp_real_basis(r)) basis.push_back(kron(a, RatMatrix::identity(2)).compacted());
  for (auto& b : sp_real_basis(1)) basis.push_back(kron(RatMatrix::identity(2 * r), b).compacted());
  if (!complex)
    return MatrixLieAlgebra("sp(" + std::to_string(r) + ",R)+sl(2,R)", n, std::move(basis), QuadraticSpace(gram));
  return MatrixLieAlgebra("sp(" + std::to_string(r) + ",C)+sl(2,C)", 2 * n, complexify(basis),
                          QuadraticSpace(complexify_form(gram)));
}

// Subalgebras of gl(N, R) embedded in so(N, N).
MatrixLieAlgebra build_gl_family(const std::string& fam, std::size_t n, char field, const std::string& id) {
  std::vector<RatMatrix> basis;
  std::string name;
  std::size_t big = 0;
  if (field == 'R') {
    big = n;
    if (fam == "gl") basis = gl_basis(n);
    else if (fam == "sl") basis = sl_basis(n);
    else if (fam == "sp") {
      require(n % 2 == 0 && n >= 2, "sp:2m:R needs an even size");
      basis = sp_real_basis(n / 2);
    } else throw PreconditionError("catalog: unknown family in " + id);
    name = fam + "(" + std::to_string(n) + ",R)";
  } else {
    std::size_t cn = n;
    if (fam == "gl") basis = complexify(gl_basis(cn));
    else if (fam == "sl") basis = complexify(sl_basis(cn));
    else if (fam == "sp") {
      require(cn % 2 == 0 && cn >= 2, "sp:2k:C needs an even size");
      basis = complexify(sp_real_basis(cn / 2));
    } else throw PreconditionError("catalog: unknown family in " + id);
    big = 2 * cn;
    name = fam + "(" + std::to_string(cn) + ",C)";
  }
  require(n >= 1, "size must be positive");
  auto inner = MatrixLieAlgebra(name, big, std::move(basis), std::nullopt, {.check_closure = false});
  return embed_gl(inner, name + "@so(" + std::to_string(big) + "," + std::to_string(big) + ")");
}

MatrixLieAlgebra build_stabilizer(const std::string& name, std::size_t n,
                                  const std::map<std::vector<std::size_t>, int>& form) {
  auto stab = form_stabilizer(n, form);
  auto so = orthogonal_algebra(standard_space({n, 0}));
  return algebra_from(name, intersect(stab, so.span()), diag_gram(n, 0));
}

}  // namespace

RatMatrix symplectic_form(std::size_t m) {
  RatMatrix w(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    w.set(i, m + i, 1);
    w.set(m + i, i, -1);
  }
  return w;
}

std::vector<RatMatrix> complexify(const std::vector<RatMatrix>& real_basis) {
  std::vector<RatMatrix> out;
  for (auto& m : real_basis) {
    const std::size_t n = m.rows();
    RatMatrix re(2 * n, 2 * n), im(2 * n, 2 * n);
    re.set_block(0, 0, m);
    re.set_block(n, n, m);
    im.set_block(0, n, -m);
    im.set_block(n, 0, m);
    out.push_back(re.compacted());
    out.push_back(im.compacted());
  }
  return out;
}

RatMatrix complexify_form(const RatMatrix& s) {
  const std::size_t n = s.rows();
  RatMatrix out(2 * n, 2 * n);
  out.set_block(0, 0, s);
  out.set_block(n, n, -s);
  return out;
}

MatrixLieAlgebra zero_algebra(const QuadraticSpace& space, std::string name) {
  return MatrixLieAlgebra(std::move(name), space.dim(), {}, space);
}

MatrixLieAlgebra embed_gl(const MatrixLieAlgebra& g, std::string name) {
  const std::size_t n = g.ambient_dim();
  RatMatrix gram(2 * n, 2 * n);
  gram.set_block(0, n, RatMatrix::identity(n));
  gram.set_block(n, 0, RatMatrix::identity(n));
  std::vector<RatMatrix> basis;
  for (auto& a : g.basis()) {
    RatMatrix e(2 * n, 2 * n);
    e.set_block(0, 0, a);
    e.set_block(n, n, -a.transpose());
    basis.push_back(e.compacted());
  }
  return MatrixLieAlgebra(std::move(name), 2 * n, std::move(basis), QuadraticSpace(gram));
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries{
      {"so:n | so:p,q", "so(p,q)", "so(p,q)", "p+q >= 1", "n(n-1)/2", true, true, false, false},
      {"so_c:p", "so(p,C)", "so(p,p)", "p >= 1", "p(p-1)", true, true, false, false},
      {"u:n | u:r,s", "u(r,s)", "so(2r,2s)", "r+s >= 1", "(r+s)^2", true, true, false, false},
      {"su:n | su:r,s", "su(r,s)", "so(2r,2s)", "r+s >= 1", "(r+s)^2 - 1", true, false, false, false},
      {"sp:n | sp:r,s", "sp(r,s)", "so(4r,4s)", "r+s >= 1", "(r+s)(2(r+s)+1)", true, false, false, false},
      {"sp_sp1:n | sp_sp1:r,s", "sp(r,s)+sp(1)", "so(4r,4s)", "r+s >= 1", "(r+s)(2(r+s)+1) + 3", true, true,
       false, false},
      {"sp_sl2:r", "sp(r,R)+sl(2,R)", "so(2r,2r)", "r >= 1", "r(2r+1) + 3", true, true, false, false},
      {"sp_sl2_c:r", "sp(r,C)+sl(2,C)", "so(4r,4r)", "r >= 1", "2r(2r+1) + 6", true, true, false, false},
      {"gl:n:R@so(n,n)", "gl(n,R)", "so(n,n)", "n >= 1", "n^2", true, true, false, false},
      {"sl:n:R@so(n,n)", "sl(n,R)", "so(n,n)", "n >= 1", "n^2 - 1", true, false, false, false},
      {"sp:2m:R@so(2m,2m)", "sp(2m,R)", "so(2m,2m)", "m >= 1", "m(2m+1)", true, false, false, false},
      {"gl:m:C@so(2m,2m)", "gl(m,C)", "so(2m,2m)", "m >= 1", "2m^2", true, true, false, false},
      {"sl:m:C@so(2m,2m)", "sl(m,C)", "so(2m,2m)", "m >= 1", "2m^2 - 2", true, false, false, false},
      {"sp:2k:C@so(4k,4k)", "sp(2k,C)", "so(4k,4k)", "k >= 1", "2k(2k+1)", true, false, false, false},
      {"g2", "G2", "so(7)", "none", "14", true, false, false, true},
      {"spin7", "spin(7)", "so(8)", "none", "21", true, false, false, true},
  };
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  auto p = parse_id(id);
  std::string key = p.family;
  if (p.fields.size() == 2) key += ":" + std::string(p.fields[1] == "C" ? "C" : "R");
  static const std::map<std::string, std::size_t> index{
      {"so", 0}, {"so_c", 1}, {"u", 2}, {"su", 3}, {"sp", 4}, {"sp_sp1", 5}, {"sp_sl2", 6}, {"sp_sl2_c", 7},
      {"gl:R", 8}, {"sl:R", 9}, {"sp:R", 10}, {"gl:C", 11}, {"sl:C", 12}, {"sp:C", 13}, {"g2", 14}, {"spin7", 15}};
  auto it = index.find(key);
  if (it == index.end()) throw PreconditionError("catalog: unknown id " + id);
  return catalog_entries()[it->second];
}

MatrixLieAlgebra catalog(const std::string& id) {
  auto p = parse_id(id);
  const auto& f = p.family;
  if (p.fields.size() == 2) {
    const auto& field = p.fields[1];
    require(field == "R" || field == "C", "field must be R or C in " + id);
    auto n = parse_count(p.fields[0], id);
    auto alg = build_gl_family(f, n, field[0], id);
    if (p.at_so) {
      std::size_t half = alg.ambient_dim() / 2;
      require(p.at_so->first == half && p.at_so->second == half, "ambient suffix does not match in " + id);
    }
    return alg;
  }
  require(!p.at_so, "ambient suffix only applies to gl-type families: " + id);
  if (f == "g2" || f == "spin7") {
    require(p.fields.empty(), f + " takes no parameters");
    return f == "g2" ? build_stabilizer("g2", 7, g2_form()) : build_stabilizer("spin(7)", 8, cayley_form());
  }
  if (f == "sp_sl2" || f == "sp_sl2_c") {
    require(p.fields.size() == 1, "expected one parameter in " + id);
    return build_sp_sl2(parse_count(p.fields[0], id), f == "sp_sl2_c");
  }
  auto [a, b] = signature_param(p, id);
  if (f == "so") return build_so(a, b);
  if (f == "so_c") {
    require(b == 0, "so_c takes a single parameter");
    return build_so_c(a);
  }
  if (f == "u") return build_u(a, b, false);
  if (f == "su") return build_u(a, b, true);
  if (f == "sp") return build_sp_quat(a, b, false);
  if (f == "sp_sp1") return build_sp_quat(a, b, true);
  throw PreconditionError("catalog: unknown family in " + id);
}

}  // namespace bergerkit
