#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bergerkit/errors.hpp"
#include "bergerkit/linalg.hpp"
#include "support/naive_linalg.hpp"

using namespace bergerkit;

namespace {

RatMatrix to_rat(const naive::Mat& a, std::size_t cols) {
  std::vector<RatMatrix::Triplet> t;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (a[i][j] != 0) t.push_back({i, j, a[i][j]});
  return RatMatrix::from_triplets(a.size(), cols, std::move(t));
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(to_string(parse_rational("-10/4")) == "-5/2");
  CHECK(to_string(parse_rational("7")) == "7");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
}

TEST_CASE("storage is chosen by fill ratio and is invisible to queries") {
  std::vector<RatMatrix::Triplet> t{{0, 0, 1}, {3, 7, Rational(-2, 3)}};
  auto sparse = RatMatrix::from_triplets(4, 8, t);
  CHECK(sparse.is_sparse());
  auto dense = RatMatrix::from_rows({{1, 2}, {3, 0}});
  CHECK_FALSE(dense.is_sparse());
  CHECK(sparse == sparse.with_storage(RatMatrix::Storage::dense));
  CHECK(sparse.at(3, 7) == Rational(-2, 3));
  CHECK(sparse.at(2, 2) == 0);
  CHECK(sparse.transpose().at(7, 3) == Rational(-2, 3));
}

TEST_CASE("rref examples") {
  auto id = RatMatrix::identity(3);
  auto r = rref(id);
  CHECK(r.reduced == id);
  CHECK(r.pivots == std::vector<std::size_t>{0, 1, 2});

  auto z = rref(RatMatrix(2, 3));
  CHECK(z.reduced.is_zero());
  CHECK(z.pivots.empty());

  auto m = RatMatrix::from_rows({{1, 2}, {2, 4}});
  auto rm = rref(m);
  CHECK(rm.reduced == RatMatrix::from_rows({{1, 2}, {0, 0}}));
  CHECK(rm.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("nullspace examples") {
  CHECK(nullspace(RatMatrix::identity(4)).dim() == 0);
  CHECK(nullspace(RatMatrix(2, 3)).dim() == 3);
  auto ns = nullspace(RatMatrix::from_rows({{1, 1, 0}}));
  CHECK(ns.dim() == 2);
  CHECK(ns.contains({1, -1, 0}));
  CHECK(ns.contains({0, 0, 1}));
  CHECK_FALSE(ns.contains({1, 0, 0}));
}

TEST_CASE("affine_solve examples") {
  auto s1 = affine_solve(RatMatrix::identity(3), {1, Rational(2, 3), -5});
  REQUIRE(s1.particular);
  CHECK(*s1.particular == RatVector{1, Rational(2, 3), -5});
  CHECK(s1.directions.dim() == 0);

  auto s2 = affine_solve(RatMatrix::from_rows({{1, 1}}), {2});
  REQUIRE(s2.particular);
  CHECK(*s2.particular == RatVector{2, 0});
  CHECK(s2.directions.dim() == 1);

  auto s3 = affine_solve(RatMatrix::from_rows({{0}}), {1});
  CHECK_FALSE(s3.particular);

  CHECK_THROWS_AS(affine_solve(RatMatrix::identity(2), {1}), DimensionError);
}

TEST_CASE("subspace operations") {
  auto x = SubspaceBasis::from_generators(3, {{1, 0, 0}});
  auto y = SubspaceBasis::from_generators(3, {{0, 5, 0}});
  auto xy = SubspaceBasis::from_generators(3, {{1, 1, 0}, {1, -1, 0}});
  CHECK(intersect(xy, xy) == xy);
  CHECK(span_union(x, y) == xy);
  CHECK(intersect(x, y).dim() == 0);
  CHECK(contains(xy, x));
  CHECK_FALSE(contains(x, xy));
  CHECK(equal(intersect(xy, SubspaceBasis::from_generators(3, {{1, 1, 1}, {0, 0, 1}})),
              SubspaceBasis::from_generators(3, {{1, 1, 0}})));
  CHECK_THROWS_AS(intersect(x, SubspaceBasis::full(2)), DimensionError);

  // so(3) inside gl(3), flattened row-major; one rotation generator is a member.
  std::vector<RatVector> so3{{0, 1, 0, -1, 0, 0, 0, 0, 0},
                             {0, 0, 1, 0, 0, 0, -1, 0, 0},
                             {0, 0, 0, 0, 0, 1, 0, -1, 0}};
  auto so3_space = SubspaceBasis::from_generators(9, so3);
  auto rot = SubspaceBasis::from_generators(9, {{0, 0, 3, 0, 0, 0, -3, 0, 0}});
  CHECK(contains(so3_space, rot));
  CHECK_FALSE(so3_space.contains({1, 0, 0, 0, 0, 0, 0, 0, 0}));
}

TEST_CASE("property: engines agree with the naive oracle; rank-nullity; canonical rref") {
  std::mt19937_64 rng(20261018);
  std::uniform_int_distribution<int> dim(1, 9);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = dim(rng), c = dim(rng);
    double density = (trial % 3 == 0) ? 0.15 : 0.6;
    auto a = naive::random_matrix(rng, r, c, density);
    auto m = to_rat(a, c);

    auto dense = rref_bareiss(m.with_storage(RatMatrix::Storage::dense));
    auto sparse = rref_sparse(m.with_storage(RatMatrix::Storage::sparse));
    CHECK(dense.reduced == sparse.reduced);
    CHECK(dense.pivots == sparse.pivots);

    naive::Mat b = a;
    std::vector<std::size_t> piv;
    naive::rref_in_place(b, c, &piv);
    CHECK(to_rat(b, c) == dense.reduced);
    CHECK(piv == dense.pivots);

    // Idempotence.
    CHECK(rref(dense.reduced).reduced == dense.reduced);
    // Row operations do not change the canonical form.
    auto shuffled = a;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    if (shuffled.size() > 1)
      for (std::size_t j = 0; j < c; ++j) shuffled[0][j] += 3 * shuffled[1][j];
    CHECK(rref(to_rat(shuffled, c)).reduced == dense.reduced);

    auto ns = nullspace(m);
    CHECK(dense.rank() + ns.dim() == c);
    for (auto& v : ns.vectors()) CHECK(is_zero(m * v));

    // Affine consistency for a right-hand side inside the column space.
    RatVector x0(c);
    for (std::size_t j = 0; j < c; ++j) x0[j] = make_rational(long(j % 3) - 1, long(j % 2) + 1);
    auto rhs = m * x0;
    auto sol = affine_solve(m, rhs);
    REQUIRE(sol.particular);
    CHECK(m * *sol.particular == rhs);
    for (auto& d : sol.directions.vectors()) {
      RatVector y = *sol.particular;
      for (std::size_t j = 0; j < c; ++j) y[j] += Rational(7, 3) * d[j];
      CHECK(m * y == rhs);
    }
  }
}

TEST_CASE("inverse") {
  auto m = RatMatrix::from_rows({{2, 1}, {1, 1}});
  CHECK(inverse(m) * m == RatMatrix::identity(2));
  CHECK_THROWS_AS(inverse(RatMatrix::from_rows({{1, 2}, {2, 4}})), PreconditionError);
}
