#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "bergerkit/catalog.hpp"
#include "bergerkit/errors.hpp"
#include "bergerkit/modules.hpp"
#include "bergerkit/structure.hpp"

using namespace bergerkit;

namespace {

RatMatrix diag(std::initializer_list<long> d) {
  RatMatrix m(d.size(), d.size());
  std::size_t i = 0;
  for (long x : d) m.set(i, i, x), ++i;
  return m;
}

RatMatrix block_diag(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

MatrixLieAlgebra gl1() { return MatrixLieAlgebra("gl(1)", 1, {RatMatrix::identity(1)}); }

MatrixLieAlgebra so_block(std::size_t n) { return catalog("so:" + std::to_string(n)); }

// Lorentzian algebra gl(1) + so(n) |x R^n inside so(n+1, 1).
StructuredAlgebraSpec lorentz_spec(std::size_t n) {
  StructuredAlgebraSpec s;
  s.name = "lorentz";
  s.v_dims = {1};
  s.f = {gl1()};
  s.h = {so_block(n)};
  s.n_blocks[{0, 0}] = SubspaceBasis::full(n);
  return s;
}

nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(std::string(BERGERKIT_FIXTURES_DIR) + "/" + name);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("polynomial helpers") {
  auto m = minimal_polynomial(diag({1, 1, 2}));
  CHECK(m == Poly{2, -3, 1});
  auto j = RatMatrix::from_rows({{0, -1}, {1, 0}});
  CHECK(minimal_polynomial(j) == Poly{1, 0, 1});
  RatMatrix nil(3, 3);
  nil.set(0, 1, 1);
  nil.set(1, 2, 1);
  CHECK(minimal_polynomial(nil) == Poly{0, 0, 0, 1});
  CHECK(squarefree_part(Poly{0, 0, 0, 1}) == Poly{0, 1});
  CHECK(squarefree_part(Poly{1, -2, 1}) == Poly{-1, 1});
  CHECK(evaluate(m, diag({1, 1, 2})).is_zero());
  CHECK(rational_roots(Poly{-2, 0, 1}).empty());
  CHECK(rational_roots(Poly{make_rational(-3, 2), make_rational(5, 2), 1}) ==
        std::vector<Rational>{-3, make_rational(1, 2)});
}

TEST_CASE("irreducibility") {
  CHECK(is_irreducible(so_block(3).basis(), 3));
  CHECK(is_irreducible(so_block(2).basis(), 2));
  CHECK(is_irreducible(so_block(4).basis(), 4));
  CHECK(is_irreducible(catalog("su:2").basis(), 4));  // commutant is H
  CHECK(is_irreducible(catalog("u:2").basis(), 4));
  CHECK_FALSE(is_irreducible({diag({1, 0}), diag({0, 1})}, 2));
  CHECK_FALSE(is_irreducible({RatMatrix::from_rows({{1, 0}, {0, 0}}), RatMatrix::from_rows({{0, 1}, {0, 0}})}, 2));
  CHECK_FALSE(is_irreducible({}, 2));
  CHECK(is_irreducible({}, 1));
  auto so2 = so_block(2).basis(0);
  CHECK_FALSE(is_irreducible({block_diag(so2, so2)}, 4));
}

TEST_CASE("division algebra detection") {
  CHECK(is_division_algebra(commutant(catalog("su:2").basis(), 4), 4));
  CHECK(is_division_algebra(commutant(so_block(2).basis(), 2), 2));
  // M2(R) acting on R^4 = R^2 + R^2
  CHECK_FALSE(is_division_algebra(commutant({block_diag(diag({1, 2}), diag({1, 2}))}, 4), 4));
}

TEST_CASE("weak irreducibility: examples") {
  for (std::string id : {"so:3", "so:2,1", "so:2,2", "gl:2:R", "u:1,1"}) {
    CAPTURE(id);
    CHECK(is_weakly_irreducible(catalog(id)) == Verdict::yes);
  }
  // gl(1) + gl(1) diagonal inside so(2,2)_{R^2}.
  auto frame = DecoratedFrame{2, {}};
  auto e1 = DecoratedElement::zero(2, 0), e2 = DecoratedElement::zero(2, 0);
  e1.B = diag({1, 0});
  e2.B = diag({0, 1});
  MatrixLieAlgebra g("gl1+gl1", 4, {assemble(e1, frame), assemble(e2, frame)}, QuadraticSpace(frame.gram()));
  auto r = weak_irreducibility(g);
  CHECK(r.verdict == Verdict::no);
  REQUIRE(r.witness);
  CHECK(r.witness->dim() == 2);
  CHECK(invariant_subspace_probe(g, *r.witness));
  CHECK(g.metric().is_nondegenerate(*r.witness));
  // zero algebra on a plane splits into lines
  CHECK(is_weakly_irreducible(zero_algebra(standard_space({2, 0}))) == Verdict::no);
  CHECK(is_weakly_irreducible(zero_algebra(standard_space({1, 0}))) == Verdict::yes);
  CHECK_THROWS_AS(weak_irreducibility(MatrixLieAlgebra("x", 2, {diag({1, 0})})), PreconditionError);
}

TEST_CASE("weak irreducibility: isotropic invariant subspaces alone do not split") {
  // The Lorentzian algebra preserves the null line R p but no non-degenerate subspace.
  for (std::size_t n = 1; n <= 3; ++n) {
    auto g = assemble(lorentz_spec(n));
    CHECK(is_weakly_irreducible(g) == Verdict::yes);
  }
}

TEST_CASE("complex structures") {
  auto j = complex_structure(so_block(2));
  REQUIRE(j);
  CHECK(*j * *j == RatMatrix::identity(2) * Rational(-1));
  CHECK_FALSE(complex_structure(so_block(3)));
  CHECK_FALSE(complex_structure(so_block(4)));
  auto ju = complex_structure(catalog("u:2"));
  REQUIRE(ju);
  CHECK(is_skew(*ju, catalog("u:2").metric().gram()));
}

TEST_CASE("Wu decomposition") {
  auto so2 = so_block(2), so3 = so_block(3);
  std::vector<RatMatrix> basis;
  for (auto& b : so2.basis()) basis.push_back(block_diag(b, RatMatrix(3, 3)));
  for (auto& b : so3.basis()) basis.push_back(block_diag(RatMatrix(2, 2), b));
  MatrixLieAlgebra sum("so2+so3", 5, basis, standard_space({5, 0}));
  auto wu = wu_decompose(sum);
  CHECK(wu.flat.dim() == 0);
  CHECK(wu.factors.size() == 2);
  CHECK(wu.exhaustive);
  CHECK(wu.direct_sum);

  auto single = wu_decompose(so3);
  CHECK(single.factors.size() == 1);
  CHECK(single.flat.dim() == 0);

  std::vector<RatMatrix> partial;
  for (auto& b : so3.basis()) partial.push_back(block_diag(b, RatMatrix(2, 2)));
  MatrixLieAlgebra so3_in_5("so3<so5", 5, partial, standard_space({5, 0}));
  auto wu3 = wu_decompose(so3_in_5);
  CHECK(wu3.flat.dim() == 2);
  REQUIRE(wu3.factors.size() == 1);
  CHECK(wu3.factors[0].subspace.dim() == 3);
  // idempotent: the factor does not split further
  CHECK(wu_decompose(wu3.factors[0].algebra).factors.size() == 1);

  auto sub = wu3.factors[0];
  std::size_t total = wu3.flat.dim();
  for (auto& f : wu3.factors) total += f.subspace.dim();
  CHECK(total == 5);
}

TEST_CASE("assemble: Lorentzian example and degenerate control") {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto g = assemble(lorentz_spec(n));
    CHECK(g.dim() == 1 + n * (n - 1) / 2 + n);
  }
  auto degenerate = lorentz_spec(2);
  degenerate.n_blocks.clear();
  auto g = assemble(degenerate);
  CHECK(g.dim() == 2);
  CHECK(is_weakly_irreducible(g) == Verdict::no);
  auto v = theorem_violations(degenerate);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("N_1") != std::string::npos);
}

TEST_CASE("assemble: closure failures name the inclusion") {
  auto inst = enumerate_index2(2, {"so:2"});
  for (auto& i : inst) {
    if (i.family != 4 || i.label.find("(L,L)") == std::string::npos) continue;
    auto s = i.spec;
    s.c_blocks.clear();
    try {
      assemble(s);
      FAIL("expected a closure error");
    } catch (const ClosureError& e) {
      std::string msg = e.what();
      CHECK(msg.find("N_1,1") != std::string::npos);
      CHECK(msg.find("N_2,1") != std::string::npos);
      CHECK(msg.find("outside C_1,2") != std::string::npos);
      CHECK(msg.find("witness") != std::string::npos);
    }
  }
  for (auto& i : inst) {
    if (i.family != 5 || i.label.find("(L,L)") == std::string::npos) continue;
    auto s = i.spec;
    s.n_blocks.erase({0, 0});
    CHECK_THROWS_WITH_AS(assemble(s), doctest::Contains("outside N_1,1"), ClosureError);
  }
  auto bad = lorentz_spec(2);
  bad.n_blocks[{0, 0}] = SubspaceBasis::full(3);
  CHECK_THROWS_AS(assemble(bad), DimensionError);
}

TEST_CASE("enumerate: n = 0 gives families 6 and 7") {
  auto inst = enumerate_index2(0, {});
  REQUIRE(inst.size() == 2);
  CHECK(inst[0].family == 6);
  CHECK(inst[1].family == 7);
  for (auto& i : inst) {
    auto g = assemble(i.spec);
    CHECK(g.ambient_dim() == 4);
    CHECK(is_weakly_irreducible(g) == Verdict::yes);
  }
}

TEST_CASE("enumerate: counts match the fixture") {
  for (auto& c : load_fixture("expected/index2_counts.json")) {
    auto factors = c.at("factors").get<std::vector<std::string>>();
    CAPTURE(c.dump());
    auto inst = enumerate_index2(c.at("n").get<std::size_t>(), factors);
    std::map<std::string, int> got;
    for (auto& i : inst) got[std::to_string(i.family)]++;
    CHECK(got == c.at("counts").get<std::map<std::string, int>>());
  }
}

TEST_CASE("enumerate: invalid factor lists") {
  CHECK_THROWS_AS(enumerate_index2(1, {"so:1"}), PreconditionError);
  CHECK_THROWS_AS(enumerate_index2(3, {"so:2"}), PreconditionError);
  CHECK_THROWS_AS(enumerate_index2(4, {"su:2"}), PreconditionError);
  CHECK_THROWS_AS(enumerate_index2(4, {"sp_sp1:1"}), PreconditionError);
  CHECK_THROWS_AS(enumerate_index2(2, {"so:1,1"}), PreconditionError);
  CHECK_THROWS_AS(enumerate_index2(2, {"nope:2"}), PreconditionError);
}

TEST_CASE("enumerate n = 2, h = so(2): closure, block structure and weak irreducibility") {
  auto inst = enumerate_index2(2, {"so:2"});
  for (auto& i : inst) {
    CAPTURE(i.spec.name);
    auto g = assemble(i.spec);
    auto v = theorem_violations(i.spec);
    // one-sided family 4/5 patterns leave one V block without an N block
    bool one_sided = (i.family == 4 || i.family == 5) && i.label.find("(L,L)") == std::string::npos;
    if (one_sided) {
      REQUIRE(v.size() == 1);
      CHECK(v[0].find("is zero for every L block") != std::string::npos);
    } else {
      CHECK(v.empty());
    }
    auto got = project_blocks(g, i.spec.frame());
    auto want = expected_blocks(i.spec);
    CHECK(got.gl_part == want.gl_part);
    CHECK(got.so_part == want.so_part);
    CHECK(got.n_part == want.n_part);
    CHECK(got.c_part == want.c_part);
    CHECK(got.nc_part == span_union(got.n_part, got.c_part));
    // f0 + h inside g, and id on each V block
    const auto frame = i.spec.frame();
    for (std::size_t v = 0; v < i.spec.v_dims.size(); ++v) {
      auto e = DecoratedElement::zero(frame.m, frame.k());
      e.B.set_block(i.spec.v_offset(v), i.spec.v_offset(v), RatMatrix::identity(i.spec.v_dims[v]));
      CHECK(g.contains(assemble(e, frame)));
    }
    for (std::size_t a = 0; a < i.spec.h.size(); ++a)
      for (auto& b : i.spec.h[a].basis()) {
        auto e = DecoratedElement::zero(frame.m, frame.k());
        e.A.set_block(i.spec.l_offset(a), i.spec.l_offset(a), b);
        CHECK(g.contains(assemble(e, frame)));
      }
    CHECK(is_weakly_irreducible(g) == Verdict::yes);
  }
}

TEST_CASE("family 4 without C is weakly reducible exactly when each factor has a zero slot") {
  for (auto factors : {std::vector<std::string>{"so:2"}, std::vector<std::string>{"so:2", "so:2"}}) {
    std::size_t n = 2 * factors.size();
    for (auto& i : enumerate_index2(n, factors)) {
      if (i.family != 4) continue;
      CAPTURE(i.spec.name);
      auto s = i.spec;
      s.c_blocks.clear();
      bool every_zero_slot = i.label.find("(L,L)") == std::string::npos;
      if (!every_zero_slot) {
        CHECK_THROWS_AS(assemble(s), ClosureError);
        continue;
      }
      CHECK(is_weakly_irreducible(assemble(s)) == Verdict::no);
    }
  }
}

TEST_CASE("family 3 half-spaces are the complex lines") {
  std::size_t halves = 0;
  for (auto& i : enumerate_index2(2, {"so:2"})) {
    if (i.family != 3) continue;
    auto& nb = i.spec.n_blocks.at({0, 0});
    if (nb.dim() == 2) ++halves;
    CHECK((nb.dim() == 2 || nb.dim() == 4));
  }
  CHECK(halves == 2);
  for (auto& i : enumerate_index2(3, {"so:3"}))
    if (i.family == 3) CHECK(i.spec.n_blocks.at({0, 0}).dim() == 6);
}

TEST_CASE("validate_einstein_candidate") {
  auto ok = validate_einstein_candidate(lorentz_spec(2));
  CHECK(ok.assembled);
  CHECK(ok.R1_nonempty);
  CHECK(ok.LR1_equals_g);
  CHECK(ok.weakly_irreducible == Verdict::yes);
  CHECK(ok.projection_decomposes);
  CHECK(ok.all_hold());

  auto degenerate = lorentz_spec(2);
  degenerate.n_blocks.clear();
  auto bad = validate_einstein_candidate(degenerate);
  CHECK(bad.weakly_irreducible == Verdict::no);
  CHECK_FALSE(bad.all_hold());

  auto s = lorentz_spec(2);
  s.h = {zero_algebra(standard_space({2, 0}))};
  auto broken = validate_einstein_candidate(s);
  CHECK_FALSE(broken.violations.empty());
}

TEST_CASE("spec JSON round trip") {
  for (auto& i : enumerate_index2(2, {"so:2"})) {
    auto j = spec_to_json(i.spec);
    auto back = spec_from_json(nlohmann::json::parse(j.dump()));
    CHECK(assemble(back).span() == assemble(i.spec).span());
    CHECK(spec_to_json(back) == j);
  }
  CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"v_dims", {1}}}), PreconditionError);
}
